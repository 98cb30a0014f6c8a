//! Binary cubic forms ↔ triples (O, I, δ) with I³ ⊆ δO and N(I)³ = N(δ).

pub mod element;
pub mod ideal;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use element::{Mult, QuadElement};
pub use ideal::{endomorphism_ring, QuadIdeal};

use crate::error::{Error, Result};
use crate::forms::CubicForm;
use crate::quad::{ring_from_disc, QuadRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub ideal: QuadIdeal,
    pub delta: QuadElement,
}

impl Triple {
    pub fn ring(&self) -> QuadRing {
        self.ideal.ring
    }

    /// (κI, κ³δ), an equivalent triple.
    pub fn rescale(&self, kappa: &QuadElement) -> Triple {
        let m = self.ideal.mult();
        Triple { ideal: self.ideal.scale(kappa), delta: self.delta.mul(&kappa.pow(3, &m), &m) }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidTriple(msg.into())
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.try_into().map_err(|_| Error::Overflow("form coefficient"))
}

/// The form attached to (O, O, 1): (0, 1, ε, n + ε).
pub fn identity_form(d: i64) -> Result<CubicForm> {
    let r = ring_from_disc(d)?;
    let eps = r.eps as i64;
    Ok(CubicForm::new(0, 1, eps, r.n() + eps))
}

/// The identity triple (O, O, 1).
pub fn identity_triple(d: i64) -> Result<Triple> {
    let r = ring_from_disc(d)?;
    Ok(Triple { ideal: QuadIdeal::unit(r), delta: QuadElement::one() })
}

fn cube_basis(i: &QuadIdeal) -> [QuadElement; 4] {
    let m = i.mult();
    let (a, b) = (&i.alpha, &i.beta);
    let a2 = a.mul(a, &m);
    let b2 = b.mul(b, &m);
    [a2.mul(a, &m), a2.mul(b, &m), a.mul(&b2, &m), b2.mul(b, &m)]
}

/// Reads (a, b, c, d) off αβ-products divided by δ.
pub fn triple_to_form(t: &Triple) -> Result<CubicForm> {
    let i = &t.ideal;
    let m = i.mult();
    if !i.is_positively_oriented() {
        return Err(invalid("basis is not positively oriented"));
    }
    if !i.is_ideal() {
        return Err(invalid("lattice is not closed under multiplication by τ"));
    }
    let dinv = t.delta.inverse(&m).ok_or_else(|| invalid("δ is not invertible"))?;
    let n_i = i.norm();
    if &n_i * &n_i * &n_i != t.delta.norm(&m) {
        return Err(invalid("N(I)³ ≠ N(δ)"));
    }
    let mut coeffs = [0i64; 4];
    for (k, w) in cube_basis(i).iter().enumerate() {
        let q = w.mul(&dinv, &m);
        if !q.is_integral() {
            return Err(invalid("I³ is not contained in δO"));
        }
        coeffs[k] = to_i64(&q.v)?;
    }
    Ok(CubicForm::new(coeffs[0], coeffs[1], coeffs[2], coeffs[3]))
}

fn rat(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Scales (α, β) jointly to primitive integer coordinates, first nonzero
/// coordinate of α positive.
fn normalize_basis(alpha: &QuadElement, beta: &QuadElement) -> (QuadElement, QuadElement) {
    let den = alpha.w.lcm(&beta.w);
    let coords = [
        &alpha.u * (&den / &alpha.w),
        &alpha.v * (&den / &alpha.w),
        &beta.u * (&den / &beta.w),
        &beta.v * (&den / &beta.w),
    ];
    let mut g = BigInt::zero();
    for c in &coords {
        g = g.gcd(c);
    }
    let lead_negative = if !coords[0].is_zero() { coords[0].is_negative() } else { coords[1].is_negative() };
    if lead_negative {
        g = -g;
    }
    let [au, av, bu, bv] = coords.map(|c| c / &g);
    (QuadElement::new(au, av, BigInt::one()), QuadElement::new(bu, bv, BigInt::one()))
}

/// Builds the triple of a nondegenerate integer-matrix form.
pub fn form_to_triple(f: &CubicForm) -> Result<Triple> {
    let disc = f.reduced_disc()?;
    if disc == 0 {
        return Err(Error::Degenerate);
    }
    let d = i64::try_from(disc).map_err(|_| Error::Overflow("discriminant"))?;
    let ring = ring_from_disc(d)?;
    let m = Mult::from(&ring);
    let eps = ring.eps as i128;
    let h = f.hessian()?;
    let (qa, qb, qc) = (h.a, h.b, h.c);
    let lam1 = (qb + eps) / 2;
    let lam2 = (eps - qb) / 2;
    let tau = QuadElement::tau();
    let int = |x: i128| QuadElement::new(BigInt::from(x), BigInt::zero(), BigInt::one());
    // eigen-relations of the τ-action fix the basis up to a common scalar
    let (alpha, beta) = if qa != 0 {
        (int(qa), tau.sub(&int(lam1)))
    } else if qc != 0 {
        (int(lam2).sub(&tau), int(qc))
    } else {
        let s = if qb > 0 { 1 } else { -1 };
        (tau.sub(&int(lam2)), tau.sub(&int(lam1)).scale(&rat(s)))
    };

    // cross-check against α : β = (e₁ + bτ) : (e₂ + cτ) where both sides are invertible
    let (a, b, c, dd) = (f.a as i128, f.b as i128, f.c as i128, f.d as i128);
    let e1 = (b * b * c - 2 * a * c * c + a * b * dd - eps * b) / 2;
    let e2 = -(b * c * c - 2 * b * b * dd + a * c * dd + eps * c) / 2;
    let p1 = QuadElement::new(BigInt::from(e1), BigInt::from(b), BigInt::one());
    let p2 = QuadElement::new(BigInt::from(e2), BigInt::from(c), BigInt::one());
    if !p1.norm(&m).is_zero() && !p2.norm(&m).is_zero() && p1.mul(&beta, &m) != p2.mul(&alpha, &m) {
        return Err(Error::Internal(format!("basis of {f} is not proportional to the e-pair")));
    }

    let mut ideal = QuadIdeal::new(ring, alpha, beta)?;
    if !ideal.is_positively_oriented() {
        if d < 0 {
            return Err(Error::Internal(format!("negative orientation for definite {f}")));
        }
        // 2τ − ε has norm −D < 0
        ideal = ideal.scale(&QuadElement::new(BigInt::from(-eps), BigInt::from(2), BigInt::one()));
    }
    let (alpha, beta) = normalize_basis(&ideal.alpha, &ideal.beta);
    let ideal = QuadIdeal::new(ring, alpha, beta)?;

    // δ⁻¹ = x + yτ from π(δ⁻¹ w_k) = (a, b, c, d)_k
    let ws = cube_basis(&ideal);
    let target = [a, b, c, dd].map(rat);
    let rows: Vec<(BigRational, BigRational)> = ws
        .iter()
        .map(|w| {
            let (u, v) = w.coords();
            let ev = &v * rat(eps);
            (v, u + ev)
        })
        .collect();
    let mut solved = None;
    'outer: for i in 0..4 {
        for j in (i + 1)..4 {
            let det = &rows[i].0 * &rows[j].1 - &rows[i].1 * &rows[j].0;
            if !det.is_zero() {
                let x = (&target[i] * &rows[j].1 - &rows[i].1 * &target[j]) / &det;
                let y = (&rows[i].0 * &target[j] - &target[i] * &rows[j].0) / &det;
                solved = Some((x, y));
                break 'outer;
            }
        }
    }
    let (x, y) = solved.ok_or_else(|| Error::Internal(format!("singular δ system for {f}")))?;
    for k in 0..4 {
        if &rows[k].0 * &x + &rows[k].1 * &y != target[k] {
            return Err(Error::Internal(format!("inconsistent δ system for {f}")));
        }
    }
    let dinv = QuadElement::from_rationals(&x, &y);
    let delta = dinv.inverse(&m).ok_or_else(|| Error::Internal(format!("δ not invertible for {f}")))?;
    let t = Triple { ideal, delta };
    let back = triple_to_form(&t)?;
    if back != *f {
        return Err(Error::Internal(format!("roundtrip of {f} gave {back}")));
    }
    Ok(t)
}

/// δ is a cube iff the form has a rational zero.
pub fn is_reducible_triple(t: &Triple) -> Result<bool> {
    Ok(triple_to_form(t)?.is_reducible())
}

/// |U₃(End(I))| for the ideal attached to f.
pub fn stabilizer_order_sl2(f: &CubicForm) -> Result<u64> {
    let t = form_to_triple(f)?;
    let e = endomorphism_ring(&t.ideal)?;
    Ok(if e.d == -3 { 3 } else { 1 })
}

/// Product of two triples, (I₁I₂, δ₁δ₂), as a form. Meaningful on
/// projective classes; the result is not canonicalized.
pub fn compose_raw(f: &CubicForm, g: &CubicForm) -> Result<CubicForm> {
    let t1 = form_to_triple(f)?;
    let t2 = form_to_triple(g)?;
    if t1.ring() != t2.ring() {
        return Err(Error::InvalidTriple("forms have different discriminants".into()));
    }
    let m = t1.ideal.mult();
    let ideal = t1.ideal.mul(&t2.ideal)?;
    let delta = t1.delta.mul(&t2.delta, &m);
    triple_to_form(&Triple { ideal, delta })
}

/// Composition of projective classes, returned as canonical representative.
pub fn compose(f: &CubicForm, g: &CubicForm) -> Result<CubicForm> {
    if !f.is_projective()? || !g.is_projective()? {
        return Err(Error::InvalidTriple("composition needs projective forms".into()));
    }
    crate::enumeration::canonical(&compose_raw(f, g)?)
}
