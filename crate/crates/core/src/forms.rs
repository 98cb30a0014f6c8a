//! Binary cubic forms, the twisted GL2(Z) action and the Hessian covariant.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd128, isqrt};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    /// ax³ + 3bx²y + 3cxy² + dy³
    IntegerMatrix,
    /// ax³ + bx²y + cxy² + dy³
    Classical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubicForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub flavor: Flavor,
}

impl PartialOrd for CubicForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on (a, b, c, d), flavor last.
impl Ord for CubicForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs().cmp(&other.coeffs()).then(self.flavor.cmp(&other.flavor))
    }
}

impl fmt::Display for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

fn ck(v: Option<i128>, what: &'static str) -> Result<i128> {
    v.ok_or(Error::Overflow(what))
}

/// Checked sum of products, each product given as a list of factors.
fn poly_sum(terms: &[(i128, &[i128])], what: &'static str) -> Result<i128> {
    let mut acc: i128 = 0;
    for &(coef, factors) in terms {
        let mut t = coef;
        for &x in factors {
            t = ck(t.checked_mul(x), what)?;
        }
        acc = ck(acc.checked_add(t), what)?;
    }
    Ok(acc)
}

impl CubicForm {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        CubicForm { a, b, c, d, flavor: Flavor::IntegerMatrix }
    }

    pub const fn classical(a: i64, b: i64, c: i64, d: i64) -> Self {
        CubicForm { a, b, c, d, flavor: Flavor::Classical }
    }

    pub fn coeffs(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    fn require_im(&self) -> Result<()> {
        match self.flavor {
            Flavor::IntegerMatrix => Ok(()),
            Flavor::Classical => Err(Error::Flavor("integer-matrix")),
        }
    }

    /// Coefficients of the expanded polynomial k0x³ + k1x²y + k2xy² + k3y³.
    pub fn expanded(&self) -> [i128; 4] {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        match self.flavor {
            Flavor::IntegerMatrix => [a, 3 * b, 3 * c, d],
            Flavor::Classical => [a, b, c, d],
        }
    }

    pub fn to_classical(&self) -> CubicForm {
        let [a, b, c, d] = self.expanded();
        CubicForm::classical(a as i64, b as i64, c as i64, d as i64)
    }

    pub fn neg(&self) -> CubicForm {
        CubicForm { a: -self.a, b: -self.b, c: -self.c, d: -self.d, flavor: self.flavor }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0 && self.c == 0 && self.d == 0
    }

    pub fn eval(&self, x: i128, y: i128) -> Result<i128> {
        let [k0, k1, k2, k3] = self.expanded();
        poly_sum(&[(k0, &[x, x, x]), (k1, &[x, x, y]), (k2, &[x, y, y]), (k3, &[y, y, y])], "form evaluation")
    }

    /// Classical discriminant of the expanded polynomial.
    pub fn classical_disc(&self) -> Result<i128> {
        let [a, b, c, d] = self.expanded();
        poly_sum(
            &[(1, &[b, b, c, c]), (-4, &[a, c, c, c]), (-4, &[b, b, b, d]), (-27, &[a, a, d, d]), (18, &[a, b, c, d])],
            "classical discriminant",
        )
    }

    /// −3b²c² + 4ac³ + 4b³d + a²d² − 6abcd, the discriminant of the
    /// associated quadratic ring.
    pub fn reduced_disc(&self) -> Result<i128> {
        self.require_im()?;
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        poly_sum(
            &[(-3, &[b, b, c, c]), (4, &[a, c, c, c]), (4, &[b, b, b, d]), (1, &[a, a, d, d]), (-6, &[a, b, c, d])],
            "reduced discriminant",
        )
    }

    pub fn hessian(&self) -> Result<QuadCovariant> {
        self.require_im()?;
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        Ok(QuadCovariant {
            a: poly_sum(&[(1, &[b, b]), (-1, &[a, c])], "hessian")?,
            b: poly_sum(&[(1, &[a, d]), (-1, &[b, c])], "hessian")?,
            c: poly_sum(&[(1, &[c, c]), (-1, &[b, d])], "hessian")?,
        })
    }

    /// The twisted action f ↦ f((x,y)γ)/det γ.
    pub fn act(&self, g: &Unimodular) -> Result<CubicForm> {
        let k = self.expanded();
        // (x,y)γ = (px + ry, qx + sy)
        let l1 = [g.p as i128, g.r as i128];
        let l2 = [g.q as i128, g.s as i128];
        let mut out = [0i128; 4];
        for (i, &ki) in k.iter().enumerate() {
            if ki == 0 {
                continue;
            }
            // l1^(3-i) * l2^i
            let mut poly = vec![ki];
            for j in 0..3 {
                let lin = if j < 3 - i { l1 } else { l2 };
                let mut next = vec![0i128; poly.len() + 1];
                for (e, &pc) in poly.iter().enumerate() {
                    next[e] = ck(next[e].checked_add(ck(pc.checked_mul(lin[0]), "action")?), "action")?;
                    next[e + 1] = ck(next[e + 1].checked_add(ck(pc.checked_mul(lin[1]), "action")?), "action")?;
                }
                poly = next;
            }
            for e in 0..4 {
                out[e] = ck(out[e].checked_add(poly[e]), "action")?;
            }
        }
        let det = g.det() as i128;
        for v in out.iter_mut() {
            *v *= det;
        }
        if self.flavor == Flavor::IntegerMatrix {
            debug_assert!(out[1] % 3 == 0 && out[2] % 3 == 0);
            out[1] /= 3;
            out[2] /= 3;
        }
        let conv = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("action"));
        Ok(CubicForm { a: conv(out[0])?, b: conv(out[1])?, c: conv(out[2])?, d: conv(out[3])?, flavor: self.flavor })
    }

    /// Primitive Hessian covariant. Rejects degenerate input.
    pub fn is_projective(&self) -> Result<bool> {
        if self.reduced_disc()? == 0 {
            return Err(Error::Degenerate);
        }
        Ok(self.hessian()?.content() == 1)
    }

    /// All distinct rational projective roots, normalized with y ≥ 0 and
    /// x > 0 when y = 0, ordered with (1:0) first and then by x/y.
    pub fn rational_roots(&self) -> Vec<(i64, i64)> {
        let [k0, k1, k2, k3] = self.expanded();
        let mut roots: Vec<(i128, i128)> = Vec::new();
        if k0 == 0 && k1 == 0 && k2 == 0 && k3 == 0 {
            return vec![(1, 0)];
        }
        if k0 == 0 {
            roots.push((1, 0));
        }
        let lead = if k0 != 0 {
            k0
        } else if k1 != 0 {
            k1
        } else if k2 != 0 {
            k2
        } else {
            k3
        };
        // denominators of finite roots divide the leading coefficient of
        // the dehomogenized polynomial
        let vs = divisors(lead.unsigned_abs() as u64).expect("leading coefficient is below the factorization limit");
        for v in vs {
            let v = v as i128;
            for u in integer_roots([k0, k1 * v, k2 * v * v, k3 * v * v * v]) {
                if gcd128(u, v) == 1 && !roots.contains(&(u, v)) {
                    roots.push((u, v));
                }
            }
        }
        let (inf, mut finite): (Vec<_>, Vec<_>) = roots.into_iter().partition(|r| r.1 == 0);
        finite.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
        inf.into_iter().chain(finite).map(|(u, v)| (u as i64, v as i64)).collect()
    }

    pub fn rational_root(&self) -> Option<(i64, i64)> {
        self.rational_roots().into_iter().next()
    }

    pub fn is_reducible(&self) -> bool {
        self.rational_root().is_some()
    }
}

/// Integer roots of c0u³ + c1u² + c2u + c3 (any of the coefficients may
/// vanish, but not all).
fn integer_roots(c: [i128; 4]) -> Vec<i128> {
    let deg_shift = c.iter().take_while(|&&x| x == 0).count();
    if deg_shift == 4 {
        return Vec::new();
    }
    let sign_at = |u: i128| -> Ordering { eval_cubic_sign(c, u) };
    // Cauchy bound on real roots
    let lead = c[deg_shift].unsigned_abs();
    let mut bound: u128 = 1;
    for &x in &c[deg_shift + 1..] {
        bound = bound.max(x.unsigned_abs() / lead + 1);
    }
    let bound = bound.min(i128::MAX as u128 / 4) as i128 + 1;
    // critical points split the line into monotone pieces
    let mut cuts: Vec<i128> = Vec::new();
    if deg_shift == 0 {
        // 3c0u² + 2c1u + c2
        let (qa, qb, qc) = (3 * c[0], 2 * c[1], c[2]);
        if let Some(disc) = qb.checked_mul(qb).and_then(|x| x.checked_sub(4 * qa * qc)) {
            if disc >= 0 {
                let s = isqrt(disc as u128) as i128;
                for num in [-qb - s, -qb + s] {
                    cuts.push(num.div_euclid(2 * qa));
                }
            }
        } else {
            let disc = (qb as f64).powi(2) - 4.0 * qa as f64 * qc as f64;
            if disc >= 0.0 {
                for num in [-(qb as f64) - disc.sqrt(), -(qb as f64) + disc.sqrt()] {
                    cuts.push((num / (2.0 * qa as f64)).floor() as i128);
                }
            }
        }
    } else if deg_shift == 1 {
        cuts.push((-c[2]).div_euclid(2 * c[1]));
    }
    let mut roots = Vec::new();
    let mut probe: Vec<i128> = Vec::new();
    let mut segments: Vec<(i128, i128)> = Vec::new();
    let mut lo = -bound;
    cuts.sort_unstable();
    for &cut in &cuts {
        let l = (cut - 3).max(-bound);
        let h = (cut + 3).min(bound);
        if l > lo {
            segments.push((lo, l - 1));
        }
        for u in l..=h {
            probe.push(u);
        }
        lo = lo.max(h + 1);
    }
    if lo <= bound {
        segments.push((lo, bound));
    }
    for u in probe {
        if sign_at(u) == Ordering::Equal && !roots.contains(&u) {
            roots.push(u);
        }
    }
    for (l, h) in segments {
        let (sl, sh) = (sign_at(l), sign_at(h));
        if sl == Ordering::Equal {
            if !roots.contains(&l) {
                roots.push(l);
            }
            continue;
        }
        if sh == Ordering::Equal {
            if !roots.contains(&h) {
                roots.push(h);
            }
            continue;
        }
        if sl == sh {
            continue;
        }
        let (mut a, mut b) = (l, h);
        while b - a > 1 {
            let m = a + (b - a) / 2;
            let sm = sign_at(m);
            if sm == Ordering::Equal {
                a = m;
                b = m;
                break;
            }
            if sm == sl {
                a = m;
            } else {
                b = m;
            }
        }
        for u in [a, b] {
            if sign_at(u) == Ordering::Equal && !roots.contains(&u) {
                roots.push(u);
            }
        }
    }
    roots
}

fn eval_cubic_sign(c: [i128; 4], u: i128) -> Ordering {
    let fast = (|| {
        let mut acc = c[0];
        for &k in &c[1..] {
            acc = acc.checked_mul(u)?.checked_add(k)?;
        }
        Some(acc)
    })();
    match fast {
        Some(v) => v.cmp(&0),
        None => {
            let u = BigInt::from(u);
            let mut acc = BigInt::from(c[0]);
            for &k in &c[1..] {
                acc = acc * &u + BigInt::from(k);
            }
            match acc.sign() {
                num_bigint::Sign::Minus => Ordering::Less,
                num_bigint::Sign::NoSign => Ordering::Equal,
                num_bigint::Sign::Plus => Ordering::Greater,
            }
        }
    }
}

/// 2×2 integer matrix (p q; r s) of determinant ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Unimodular {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
}

impl Unimodular {
    pub fn new(p: i64, q: i64, r: i64, s: i64) -> Result<Self> {
        let det = p as i128 * s as i128 - q as i128 * r as i128;
        if det.abs() != 1 {
            return Err(Error::NotUnimodular);
        }
        Ok(Unimodular { p, q, r, s })
    }

    pub const IDENTITY: Unimodular = Unimodular { p: 1, q: 0, r: 0, s: 1 };
    pub const NEG_IDENTITY: Unimodular = Unimodular { p: -1, q: 0, r: 0, s: -1 };
    /// (0 −1; 1 0)
    pub const S: Unimodular = Unimodular { p: 0, q: -1, r: 1, s: 0 };
    /// (1 0; 0 −1)
    pub const J: Unimodular = Unimodular { p: 1, q: 0, r: 0, s: -1 };
    /// (0 1; 1 0)
    pub const SWAP: Unimodular = Unimodular { p: 0, q: 1, r: 1, s: 0 };

    /// (1 k; 0 1)
    pub const fn t(k: i64) -> Unimodular {
        Unimodular { p: 1, q: k, r: 0, s: 1 }
    }

    pub fn det(&self) -> i64 {
        self.p * self.s - self.q * self.r
    }

    pub fn mul(&self, o: &Unimodular) -> Unimodular {
        Unimodular {
            p: self.p * o.p + self.q * o.r,
            q: self.p * o.q + self.q * o.s,
            r: self.r * o.p + self.s * o.r,
            s: self.r * o.q + self.s * o.s,
        }
    }

    pub fn inverse(&self) -> Unimodular {
        let det = self.det();
        Unimodular { p: self.s * det, q: -self.q * det, r: -self.r * det, s: self.p * det }
    }

    /// JγJ with J = diag(1, −1).
    pub fn conj_j(&self) -> Unimodular {
        Unimodular { p: self.p, q: -self.q, r: -self.r, s: self.s }
    }
}

/// Ax² + Bxy + Cy².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadCovariant {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl QuadCovariant {
    pub fn disc(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn content(&self) -> i128 {
        gcd128(gcd128(self.a, self.b), self.c)
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Q((x,y)m) for a linear substitution m.
    pub fn substitute(&self, m: &Unimodular) -> QuadCovariant {
        let (p, q, r, s) = (m.p as i128, m.q as i128, m.r as i128, m.s as i128);
        let (a, b, c) = (self.a, self.b, self.c);
        QuadCovariant {
            a: a * p * p + b * p * q + c * q * q,
            b: 2 * a * p * r + b * (p * s + q * r) + 2 * c * q * s,
            c: a * r * r + b * r * s + c * s * s,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix() -> impl Strategy<Value = Unimodular> {
        prop::collection::vec(0u8..4, 1..6).prop_map(|word| {
            let mut g = Unimodular::IDENTITY;
            for w in word {
                let step = match w {
                    0 => Unimodular::t(1),
                    1 => Unimodular::t(-1),
                    2 => Unimodular::S,
                    _ => Unimodular::J,
                };
                g = g.mul(&step);
            }
            g
        })
    }

    fn small_form() -> impl Strategy<Value = CubicForm> {
        (-6i64..7, -6i64..7, -6i64..7, -6i64..7).prop_map(|(a, b, c, d)| CubicForm::new(a, b, c, d))
    }

    #[test]
    fn examples() {
        assert_eq!(CubicForm::new(1, 0, 0, 1).reduced_disc().unwrap(), 1);
        assert_eq!(CubicForm::new(0, 1, -1, 0).reduced_disc().unwrap(), -3);
        let f = CubicForm::new(0, 2, -1, -1);
        assert_eq!(f.reduced_disc().unwrap(), -44);
        assert_eq!(f.classical_disc().unwrap(), 44 * 27);
        assert_eq!(f.hessian().unwrap(), QuadCovariant { a: 4, b: 2, c: 3 });
        assert_eq!(CubicForm::new(1, 0, 0, 1).hessian().unwrap(), QuadCovariant { a: 0, b: 1, c: 0 });
        assert!(f.is_projective().unwrap());
        assert!(CubicForm::new(0, 1, -1, 0).is_projective().unwrap());
        assert!(!CubicForm::new(0, 2, 2, 0).is_projective().unwrap());
        assert!(CubicForm::new(0, 0, 0, 1).is_projective().is_err());
        assert_eq!(f.rational_root(), Some((1, 0)));
        assert_eq!(CubicForm::new(1, 0, 0, 1).rational_root(), Some((-1, 1)));
        assert_eq!(CubicForm::new(0, 1, -1, 0).rational_roots(), vec![(1, 0), (0, 1), (1, 1)]);
        assert_eq!(f.act(&Unimodular::NEG_IDENTITY).unwrap(), f.neg());
        assert!(CubicForm::classical(1, 0, -1, -1).rational_root().is_none());
        assert!(CubicForm::new(1, 0, -1, 0).classical_disc().is_ok());
    }

    #[test]
    fn rational_roots_found_for_products() {
        // (ux - vy)(quadratic) always has root (v:u)
        for u in -4i64..5 {
            for v in 1i64..5 {
                for (p, q, r) in [(1i64, 1, 1), (2, -3, 5), (7, 0, -2), (1, 0, 1)] {
                    // classical coefficients of (u x - v y)(p x² + q xy + r y²)
                    let f = CubicForm::classical(u * p, u * q - v * p, u * r - v * q, -v * r);
                    let roots = f.rational_roots();
                    let g = crate::arith::gcd(u, v);
                    assert!(
                        roots.contains(&(v / g, u / g)) || roots.contains(&(-v / g, -u / g)) || u == 0,
                        "{f} {roots:?}"
                    );
                    for (x, y) in roots {
                        assert_eq!(f.eval(x as i128, y as i128).unwrap(), 0);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn disc_invariant(f in small_form(), g in small_matrix()) {
            prop_assert_eq!(f.act(&g).unwrap().reduced_disc().unwrap(), f.reduced_disc().unwrap());
        }

        #[test]
        fn action_law(f in small_form(), g1 in small_matrix(), g2 in small_matrix()) {
            let lhs = f.act(&g2).unwrap().act(&g1).unwrap();
            prop_assert_eq!(lhs, f.act(&g1.mul(&g2)).unwrap());
        }

        #[test]
        fn projective_and_roots_invariant(f in small_form(), g in small_matrix()) {
            prop_assume!(f.reduced_disc().unwrap() != 0);
            let h = f.act(&g).unwrap();
            prop_assert_eq!(h.is_projective().unwrap(), f.is_projective().unwrap());
            prop_assert_eq!(h.rational_roots().len(), f.rational_roots().len());
        }

        #[test]
        fn hessian_covariance(f in small_form(), g in small_matrix()) {
            prop_assume!(g.det() == 1);
            let lhs = f.act(&g).unwrap().hessian().unwrap();
            prop_assert_eq!(lhs, f.hessian().unwrap().substitute(&g.conj_j()));
        }

        #[test]
        fn classical_flavor_roundtrip(f in small_form(), g in small_matrix()) {
            prop_assert_eq!(f.act(&g).unwrap().to_classical(), f.to_classical().act(&g).unwrap());
        }
    }
}
