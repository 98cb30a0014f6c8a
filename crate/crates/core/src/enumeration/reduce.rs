//! Canonical SL₂(Z) representatives in Davenport's fundamental domains.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};

use crate::error::{Error, Result};
use crate::forms::{CubicForm, Flavor, QuadCovariant, Unimodular};

const MAX_STEPS: usize = 10_000;

/// det-1 matrices with entries in {−1, 0, 1}; they contain the automorphism
/// groups of every reduced definite quadratic form.
pub fn small_matrices() -> &'static [Unimodular] {
    static M: OnceLock<Vec<Unimodular>> = OnceLock::new();
    M.get_or_init(|| {
        let mut v = Vec::new();
        for p in -1..=1 {
            for q in -1..=1 {
                for r in -1..=1 {
                    for s in -1..=1 {
                        if p * s - q * r == 1 {
                            v.push(Unimodular { p, q, r, s });
                        }
                    }
                }
            }
        }
        v
    })
}

fn require_im(f: &CubicForm) -> Result<()> {
    match f.flavor {
        Flavor::IntegerMatrix => Ok(()),
        Flavor::Classical => Err(Error::Flavor("integer-matrix")),
    }
}

/// −A < B ≤ A < C or 0 ≤ B ≤ A = C.
pub fn is_reduced_definite(q: &QuadCovariant) -> bool {
    let (a, b, c) = (q.a, q.b, q.c);
    -a < b && b <= a && (a < c || (a == c && b >= 0))
}

/// Canonical representative of a form of negative discriminant: reduce the
/// Hessian, then take the least quadruple over its automorphisms.
pub fn reduce_neg(f: &CubicForm) -> Result<CubicForm> {
    require_im(f)?;
    let disc = f.reduced_disc()?;
    if disc == 0 {
        return Err(Error::Degenerate);
    }
    if disc > 0 {
        return Err(Error::WrongSign(disc));
    }
    let mut g = *f;
    for _ in 0..MAX_STEPS {
        let h = g.hessian()?;
        let (a, b, c) = (h.a, h.b, h.c);
        if !(-a < b && b <= a) {
            // B ↦ B + 2kA under (x, y) ↦ (x + ky, y)
            let k = (a - b).div_euclid(2 * a);
            let m = Unimodular { p: 1, q: 0, r: i64::try_from(k).map_err(|_| Error::Overflow("reduce"))?, s: 1 };
            g = g.act(&m.conj_j())?;
        } else if a > c || (a == c && b < 0) {
            g = g.act(&Unimodular::S.conj_j())?;
        } else {
            return Ok(least_neg(&g, &h));
        }
    }
    Err(Error::Internal("Hessian reduction did not terminate".into()))
}

fn least_neg(g: &CubicForm, h: &QuadCovariant) -> CubicForm {
    let special = (h.b == 0 && h.a == h.c) || (h.a == h.b && h.b == h.c);
    if !special {
        return (*g).min(g.neg());
    }
    small_matrices()
        .iter()
        .filter(|m| h.substitute(m) == *h)
        .filter_map(|m| g.act(&m.conj_j()).ok())
        .min()
        .unwrap_or(*g)
}

fn big(x: i128) -> BigInt {
    BigInt::from(x)
}

fn eval_rat(k: &[i128], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for &c in k.iter().rev() {
        acc = acc * x + BigRational::from_integer(big(c));
    }
    acc
}

fn eval_f64(k: &[i128], x: f64) -> f64 {
    k.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
}

fn abs_sum(k: &[i128], x: f64) -> f64 {
    let ax = x.abs();
    k.iter().rev().fold(0.0, |acc, &c| acc * ax + (c as f64).abs())
}

/// The real root α of f(1, t) = a + 3bt + 3ct² + dt³ (d ≠ 0, one real
/// root), with exact sign decisions for elements of Z[α] of degree ≤ 2.
pub struct RealRoot {
    k: [i128; 4],
    approx: f64,
    radius: f64,
    form: CubicForm,
    /// α = num/den with den > 0 when f is reducible; found on demand.
    rational: OnceLock<Option<(i128, i128)>>,
}

impl RealRoot {
    pub fn new(f: &CubicForm) -> RealRoot {
        let (a, b, c, d) = (f.a as i128, f.b as i128, f.c as i128, f.d as i128);
        debug_assert!(d != 0);
        let k = [a, 3 * b, 3 * c, d];
        let lead = d as f64;
        let bound = 1.0 + k[..3].iter().map(|&x| (x as f64 / lead).abs()).fold(0.0, f64::max);
        let (mut lo, mut hi) = (-bound, bound);
        let up = d > 0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (eval_f64(&k, mid) > 0.0) == up {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        // Newton polish
        for _ in 0..3 {
            let fp = k[1] as f64 + x * (2.0 * k[2] as f64 + 3.0 * k[3] as f64 * x);
            if fp == 0.0 {
                break;
            }
            let nx = x - eval_f64(&k, x) / fp;
            if !nx.is_finite() {
                break;
            }
            x = nx;
        }
        let fp = (k[1] as f64 + x * (2.0 * k[2] as f64 + 3.0 * k[3] as f64 * x)).abs();
        let err = (eval_f64(&k, x).abs() + 8.0 * f64::EPSILON * abs_sum(&k, x)) / fp;
        let radius = if err.is_finite() { 4.0 * err + 4.0 * f64::EPSILON * x.abs() } else { f64::INFINITY };
        RealRoot { k, approx: x, radius, form: *f, rational: OnceLock::new() }
    }

    fn rational(&self) -> Option<(i128, i128)> {
        *self.rational.get_or_init(|| {
            self.form.rational_roots().into_iter().find(|&(u, _)| u != 0).map(|(u, v)| {
                if u > 0 {
                    (v as i128, u as i128)
                } else {
                    (-(v as i128), -(u as i128))
                }
            })
        })
    }

    pub fn approx(&self) -> f64 {
        self.approx
    }

    /// sign(g₀ + g₁α + g₂α²).
    pub fn sign(&self, g: [i128; 3]) -> Ordering {
        if g == [0, 0, 0] {
            return Ordering::Equal;
        }
        let x = self.approx;
        let r = self.radius;
        if r < 1e-6 * (1.0 + x.abs()) {
            let v = eval_f64(&g, x);
            let slope = (g[1] as f64).abs() + 2.0 * (g[2] as f64).abs() * (x.abs() + r);
            let tol = 2.0 * slope * r + 16.0 * f64::EPSILON * abs_sum(&g, x);
            if v.abs() > tol {
                return v.partial_cmp(&0.0).unwrap_or(Ordering::Equal);
            }
        }
        if let Some((n, d)) = self.rational() {
            let v = big(g[0]) * big(d) * big(d) + big(g[1]) * big(n) * big(d) + big(g[2]) * big(n) * big(n);
            return v.sign_cmp();
        }
        self.sign_exact(g)
    }

    fn f_sign(&self, x: &BigRational) -> Ordering {
        eval_rat(&self.k, x).sign_cmp()
    }

    fn isolating_interval(&self) -> (BigRational, BigRational) {
        let lead = self.k[3] as f64;
        let bound = 2.0 + self.k[..3].iter().map(|&x| (x as f64 / lead).abs()).fold(0.0, f64::max);
        let mut w = if self.radius.is_finite() { self.radius.max(1e-12 * (1.0 + self.approx.abs())) } else { bound };
        loop {
            let lo = BigRational::from_f64(self.approx - w).expect("finite");
            let hi = BigRational::from_f64(self.approx + w).expect("finite");
            let (sl, sh) = (self.f_sign(&lo), self.f_sign(&hi));
            if sl != sh || sl == Ordering::Equal {
                return (lo, hi);
            }
            w *= 16.0;
        }
    }

    fn sign_exact(&self, g: [i128; 3]) -> Ordering {
        let (mut lo, mut hi) = self.isolating_interval();
        let s_lo = self.f_sign(&lo);
        if s_lo == Ordering::Equal {
            // cannot happen for irreducible f
            return eval_rat(&g, &lo).sign_cmp();
        }
        let vertex = (g[2] != 0).then(|| BigRational::new(big(-g[1]), big(2 * g[2])));
        let two = BigRational::from_integer(big(2));
        loop {
            let mut signs = vec![eval_rat(&g, &lo).sign_cmp(), eval_rat(&g, &hi).sign_cmp()];
            if let Some(v) = &vertex {
                if &lo < v && v < &hi {
                    signs.push(eval_rat(&g, v).sign_cmp());
                }
            }
            if signs[0] != Ordering::Equal && signs.iter().all(|s| *s == signs[0]) {
                return signs[0];
            }
            let mid = (&lo + &hi) / &two;
            let sm = self.f_sign(&mid);
            if sm == Ordering::Equal {
                return eval_rat(&g, &mid).sign_cmp();
            }
            if sm == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigRational {
    fn sign_cmp(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

/// P, Q, R of the quadratic factor as polynomials in α, scaled to be
/// positive definite. With d = 0 the linear factor is x and the factor is
/// ±(a, 3b, 3c), constant in α.
fn factor_polys(f: &CubicForm) -> ([i128; 3], [i128; 3], [i128; 3]) {
    let (a, b, c, d) = (f.a as i128, f.b as i128, f.c as i128, f.d as i128);
    if d == 0 {
        let s = a.signum();
        return ([s * a, 0, 0], [3 * s * b, 0, 0], [3 * s * c, 0, 0]);
    }
    let s = d.signum();
    ([3 * s * b, 3 * s * c, s * d], [3 * s * c, s * d, 0], [s * d, 0, 0])
}

fn sub(x: [i128; 3], y: [i128; 3]) -> [i128; 3] {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2]]
}

fn add(x: [i128; 3], y: [i128; 3]) -> [i128; 3] {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2]]
}

fn is_const(g: &[i128; 3]) -> bool {
    g[1] == 0 && g[2] == 0
}

/// sign(g(α)); constants need no root.
fn sign_at(root: Option<&RealRoot>, g: [i128; 3]) -> Ordering {
    match root {
        _ if is_const(&g) => g[0].cmp(&0),
        Some(r) => r.sign(g),
        None => unreachable!("non-constant factor without a root"),
    }
}

fn root_of(f: &CubicForm) -> Option<RealRoot> {
    (f.d != 0).then(|| RealRoot::new(f))
}

/// Exact test of −P < Q ≤ P < R or 0 ≤ Q ≤ P = R for the definite
/// quadratic factor. Invariant under f ↦ −f.
pub fn in_pos_domain(f: &CubicForm) -> bool {
    in_pos_domain_with(f, root_of(f).as_ref())
}

pub(crate) fn in_pos_domain_with(f: &CubicForm, root: Option<&RealRoot>) -> bool {
    let (p, q, r) = factor_polys(f);
    if sign_at(root, add(p, q)) != Ordering::Greater || sign_at(root, sub(p, q)) == Ordering::Less {
        return false;
    }
    match sign_at(root, sub(r, p)) {
        Ordering::Greater => true,
        Ordering::Equal => sign_at(root, q) != Ordering::Less,
        Ordering::Less => false,
    }
}

/// Canonical representative of a form of positive discriminant, via
/// reduction of its definite quadratic factor.
pub fn reduce_pos(f: &CubicForm) -> Result<CubicForm> {
    require_im(f)?;
    let disc = f.reduced_disc()?;
    if disc == 0 {
        return Err(Error::Degenerate);
    }
    if disc < 0 {
        return Err(Error::WrongSign(disc));
    }
    let mut g = *f;
    for _ in 0..MAX_STEPS {
        let root = root_of(&g);
        let (p, q, r) = factor_polys(&g);
        let lower_ok = sign_at(root.as_ref(), add(p, q)) == Ordering::Greater;
        let upper_ok = sign_at(root.as_ref(), sub(p, q)) != Ordering::Less;
        if !(lower_ok && upper_ok) {
            // Q/P ↦ Q/P + 2k under (x, y) ↦ (x + ky, y)
            let mut k = match &root {
                None => {
                    let k = (p[0] - q[0]).div_euclid(2 * p[0]);
                    i64::try_from(k).map_err(|_| Error::Overflow("reduce"))?
                }
                Some(root) => {
                    let x = root.approx();
                    let (pf, qf) = (eval_f64(&p, x), eval_f64(&q, x));
                    let k = ((pf - qf) / (2.0 * pf)).floor();
                    if k.is_finite() && k.abs() <= 1e15 {
                        k as i64
                    } else {
                        0
                    }
                }
            };
            if !lower_ok {
                k = k.max(1);
            } else {
                k = k.min(-1);
            }
            g = g.act(&Unimodular { p: 1, q: 0, r: k, s: 1 })?;
            continue;
        }
        if sign_at(root.as_ref(), sub(r, p)) == Ordering::Less {
            g = g.act(&Unimodular::S)?;
            continue;
        }
        return Ok(least_pos(&g));
    }
    Err(Error::Internal("quadratic factor reduction did not terminate".into()))
}

/// Least domain member among the images of a reduced g under small
/// matrices; these contain ±1 and the automorphisms of the factor.
fn least_pos(g: &CubicForm) -> CubicForm {
    small_matrices().iter().filter_map(|m| g.act(m).ok()).filter(in_pos_domain).min().unwrap_or(*g)
}

/// Canonical representative, dispatching on the discriminant sign.
pub fn canonical(f: &CubicForm) -> Result<CubicForm> {
    require_im(f)?;
    match f.reduced_disc()?.cmp(&0) {
        Ordering::Less => reduce_neg(f),
        Ordering::Greater => reduce_pos(f),
        Ordering::Equal => Err(Error::Degenerate),
    }
}

/// Whether f is its own canonical representative.
pub fn is_canonical(f: &CubicForm) -> Result<bool> {
    Ok(canonical(f)? == *f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_matrix_count() {
        // SL₂(F₃)-like count of det-1 matrices with entries in {−1,0,1}
        assert_eq!(small_matrices().len(), 20);
    }

    #[test]
    fn simple_reductions() {
        let f = CubicForm::new(0, 1, -1, 0);
        let c = reduce_neg(&f).unwrap();
        assert_eq!(c.reduced_disc().unwrap(), -3);
        assert_eq!(reduce_neg(&c).unwrap(), c);
        let g = f.act(&Unimodular::new(2, 1, 1, 1).unwrap()).unwrap();
        assert_eq!(reduce_neg(&g).unwrap(), c);
        assert!(reduce_neg(&CubicForm::new(1, 0, 0, 1)).is_err());
        assert!(reduce_pos(&CubicForm::new(0, 1, -1, 0)).is_err());
        let id40 = CubicForm::new(0, 1, 0, 10);
        let r = reduce_pos(&id40).unwrap();
        assert_eq!(r, CubicForm::new(0, -1, 0, -10));
        // linear factor x: (1, 0, 1, 0) = x(x² + 3y²) is already reduced
        let f = CubicForm::new(1, 0, 1, 0);
        assert_eq!(reduce_pos(&f).unwrap(), f.neg());
        assert!(in_pos_domain(&f) && in_pos_domain(&f.neg()));
    }

    #[test]
    fn sign_decisions() {
        // x³ − 2: α = 2^{1/3}; α² − 2^{2/3} cannot be tested, use α³ = 2
        let f = CubicForm::new(-2, 0, 0, 1);
        let root = RealRoot::new(&f);
        assert_eq!(root.sign([-1, 1, 0]), Ordering::Greater);
        assert_eq!(root.sign([-2, 0, 1]), Ordering::Less);
        assert_eq!(root.sign_exact([-1, 1, 0]), Ordering::Greater);
        assert_eq!(root.sign_exact([-2, 0, 1]), Ordering::Less);
        assert_eq!(root.sign_exact([-159, 0, 100]), Ordering::Less); // 2^{2/3} ≈ 1.5874
        assert_eq!(root.sign_exact([-158, 0, 100]), Ordering::Greater);
        // rational root α = −1 of 1 + t³
        let f = CubicForm::new(1, 0, 0, 1);
        let root = RealRoot::new(&f);
        assert_eq!(root.sign([1, 1, 0]), Ordering::Equal);
        assert_eq!(root.sign([0, 0, 1]), Ordering::Greater);
    }
}
