//! Streaming enumeration of canonical representatives with 0 < ±disc < X.

use std::cmp::Ordering;

use super::reduce::{in_pos_domain_with, reduce_neg, reduce_pos, RealRoot};
use super::Sign;
use crate::arith::{ceil_div, floor_div, gcd128};
use crate::error::{Error, Result};
use crate::forms::CubicForm;

/// Which part of the outer loop over b a worker handles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Partition {
    pub index: u32,
    pub count: u32,
}

impl Partition {
    pub const WHOLE: Partition = Partition { index: 0, count: 1 };

    fn owns(&self, b: i64) -> bool {
        b.rem_euclid(self.count as i64) == self.index as i64
    }
}

/// Forms examined and representatives emitted so far.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Progress {
    pub visited: u64,
    pub found: u64,
}

/// A canonical representative handed to the visitor.
#[derive(Clone, Copy, Debug)]
pub struct ClassRep {
    pub form: CubicForm,
    pub disc: i64,
}

impl ClassRep {
    /// Content of the Hessian covariant.
    pub fn content(&self) -> i128 {
        let (a, b, c, d) = (self.form.a as i128, self.form.b as i128, self.form.c as i128, self.form.d as i128);
        gcd128(gcd128(b * b - a * c, a * d - b * c), c * c - b * d)
    }

    pub fn is_projective(&self) -> bool {
        self.content() == 1
    }

    pub fn is_reducible(&self) -> bool {
        is_reducible_fast(&self.form)
    }
}

const ROOT_PRIMES: [i128; 14] = [2, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

fn has_root_mod(f: &CubicForm, p: i128) -> bool {
    let (a, b, c, d) = (
        (f.a as i128).rem_euclid(p),
        (3 * f.b as i128).rem_euclid(p),
        (3 * f.c as i128).rem_euclid(p),
        (f.d as i128).rem_euclid(p),
    );
    if a == 0 {
        return true;
    }
    (0..p).any(|t| ((a * t + b) * t + c) * t % p == (p - d) % p)
}

/// Exact reducibility over Q, with a local no-root shortcut.
pub fn is_reducible_fast(f: &CubicForm) -> bool {
    if f.a == 0 || f.d == 0 {
        return true;
    }
    if ROOT_PRIMES.iter().any(|&p| !has_root_mod(f, p)) {
        return false;
    }
    f.is_reducible()
}

/// Largest m ≥ 0 with k·m^e < n, or −1 if there is none.
fn max_strict(n: i128, k: i128, e: u32) -> i64 {
    let ok = |m: i64| k * (m as i128).pow(e) < n;
    if !ok(0) {
        return -1;
    }
    let mut hi: i64 = 1;
    while ok(hi) {
        hi *= 2;
    }
    let mut lo = 0;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Coefficient-region bounds at X.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Region {
    pub x: i128,
    pub sign: Sign,
}

impl Region {
    pub fn new(x: u64, sign: Sign) -> Self {
        Region { x: x as i128, sign }
    }

    pub fn a_max(&self) -> i64 {
        match self.sign {
            Sign::Neg => max_strict(4 * self.x, 3, 4),
            Sign::Pos => max_strict(36 * self.x, 1, 4),
        }
    }

    pub fn b_max(&self) -> i64 {
        match self.sign {
            Sign::Neg => max_strict(4 * self.x, 3, 4),
            Sign::Pos => max_strict(32 * self.x, 9, 4),
        }
    }

    /// |c| bound for given (a, b), not both zero.
    pub fn c_max(&self, a: i64, b: i64) -> i64 {
        let (a, b) = (a.unsigned_abs() as i128, b.unsigned_abs() as i128);
        let mut m = i64::MAX;
        match self.sign {
            Sign::Neg => {
                if b != 0 {
                    m = m.min(max_strict(4 * self.x, 3 * b * b, 2));
                }
                if a != 0 {
                    m = m.min(max_strict(4 * self.x, 3 * a, 3));
                }
            }
            Sign::Pos => {
                if b != 0 {
                    m = m.min(max_strict(32 * self.x, 9 * b * b, 2));
                }
                if a != 0 {
                    m = m.min(max_strict(20 * self.x, 3 * a, 3));
                }
            }
        }
        m
    }

    /// |d| bound for given (a, b), not both zero.
    pub fn d_max(&self, a: i64, b: i64) -> i64 {
        let (a, b) = (a.unsigned_abs() as i128, b.unsigned_abs() as i128);
        let mut m = i64::MAX;
        match self.sign {
            Sign::Neg => {
                if a != 0 {
                    m = m.min(max_strict(4 * self.x, 3 * a * a, 2));
                }
                if b != 0 {
                    m = m.min(max_strict(4 * self.x, 3 * b * b * b, 1));
                }
            }
            Sign::Pos => {
                if a != 0 {
                    m = m.min(max_strict(18 * self.x, a * a, 2));
                }
                if b != 0 {
                    m = m.min(max_strict(20 * self.x, 3 * b * b * b, 1));
                }
            }
        }
        m
    }
}

fn disc_of(a: i128, b: i128, c: i128, d: i128) -> i128 {
    -3 * b * b * c * c + 4 * a * c * c * c + 4 * b * b * b * d + a * a * d * d - 6 * a * b * c * d
}

/// First nonzero coefficient negative, i.e. f < −f.
fn lex_below_negation(f: &CubicForm) -> bool {
    for v in [f.a, f.b, f.c, f.d] {
        if v != 0 {
            return v < 0;
        }
    }
    false
}

/// Walk every canonical representative with 0 < ±disc < X whose b lies in
/// the partition.
pub fn for_each_class(x: u64, sign: Sign, part: Partition, visit: &mut dyn FnMut(&ClassRep)) -> Result<Progress> {
    for_each_class_reporting(x, sign, part, visit, &mut |_| {})
}

/// As [`for_each_class`], calling `report` after each value of b.
pub fn for_each_class_reporting(
    x: u64,
    sign: Sign,
    part: Partition,
    visit: &mut dyn FnMut(&ClassRep),
    report: &mut dyn FnMut(Progress),
) -> Result<Progress> {
    if part.count == 0 || part.index >= part.count {
        return Err(Error::BoundExceeded("invalid partition".into()));
    }
    if x > (1u64 << 40) {
        return Err(Error::Overflow("region bound"));
    }
    let region = Region::new(x, sign);
    let mut progress = Progress::default();
    let bm = region.b_max();
    for b in -bm..=bm {
        if !part.owns(b) {
            continue;
        }
        match sign {
            Sign::Neg => neg_slice(&region, b, &mut progress, visit)?,
            Sign::Pos => {
                pos_slice(&region, b, &mut progress, visit)?;
                pos_slice_d0(&region, b, &mut progress, visit)?;
            }
        }
        report(progress);
    }
    Ok(progress)
}

fn neg_slice(region: &Region, b: i64, progress: &mut Progress, visit: &mut dyn FnMut(&ClassRep)) -> Result<()> {
    let x = region.x;
    let am = region.a_max();
    for a in -am..=am {
        if a == 0 && b == 0 {
            continue;
        }
        let cm = region.c_max(a, b);
        let dm = region.d_max(a, b) as i128;
        let (ai, bi) = (a as i128, b as i128);
        for c in -cm..=cm {
            let ci = c as i128;
            let big_a = bi * bi - ai * ci;
            if big_a <= 0 {
                continue;
            }
            let (mut lo, mut hi) = (-dm, dm);
            let cmax;
            if a == 0 {
                let big_b = -bi * ci;
                if !(-big_a < big_b && big_b <= big_a) {
                    continue;
                }
                cmax = floor_div(x - 1 + big_b * big_b, 4 * big_a);
            } else {
                // −A < ad − bc ≤ A
                let (l, h) = (bi * ci - big_a, bi * ci + big_a);
                if a > 0 {
                    lo = lo.max(floor_div(l, ai) + 1);
                    hi = hi.min(floor_div(h, ai));
                } else {
                    lo = lo.max(ceil_div(h, ai));
                    hi = hi.min(ceil_div(l, ai) - 1);
                }
                cmax = floor_div(x - 1 + big_a * big_a, 4 * big_a);
            }
            // A ≤ c² − bd ≤ cmax
            let cc = ci * ci;
            if b == 0 {
                if cc < big_a || cc > cmax {
                    continue;
                }
            } else if b > 0 {
                lo = lo.max(ceil_div(cc - cmax, bi));
                hi = hi.min(floor_div(cc - big_a, bi));
            } else {
                lo = lo.max(ceil_div(cc - big_a, bi));
                hi = hi.min(floor_div(cc - cmax, bi));
            }
            let mut d = lo;
            while d <= hi {
                progress.visited += 1;
                let big_b = ai * d - bi * ci;
                let big_c = cc - bi * d;
                let disc = big_b * big_b - 4 * big_a * big_c;
                let ok = -big_a < big_b
                    && big_b <= big_a
                    && (big_a < big_c || (big_a == big_c && big_b >= 0))
                    && disc < 0
                    && disc > -x;
                if ok {
                    let f = CubicForm::new(a, b, c, d as i64);
                    let special = (big_b == 0 && big_a == big_c) || (big_a == big_b && big_b == big_c);
                    let canonical = if special { reduce_neg(&f)? == f } else { lex_below_negation(&f) };
                    if canonical {
                        progress.found += 1;
                        visit(&ClassRep { form: f, disc: disc as i64 });
                    }
                }
                d += 1;
            }
        }
    }
    Ok(())
}

/// Integers d with 0 < q(d) < x for q(d) = a²d² + βd + γ, as at most two
/// ranges, each slightly widened; membership is rechecked by the caller.
fn quad_band(a2: i128, beta: i128, gamma: i128, x: i128) -> [(i128, i128); 2] {
    let (a2f, bf, gf) = (a2 as f64, beta as f64, gamma as f64);
    let center = -bf / (2.0 * a2f);
    let roots = |level: f64| -> Option<f64> {
        // q(d) = level ⇔ d = center ± sqrt(Δ)/(2a²)
        let delta = bf * bf - 4.0 * a2f * (gf - level);
        (delta >= 0.0).then(|| delta.sqrt() / (2.0 * a2f))
    };
    let outer = match roots(x as f64) {
        Some(r) => r,
        None => return [(1, 0), (1, 0)],
    };
    let widen = |v: f64| v.abs() * 1e-9 + 2.0;
    let lo = (center - outer - widen(center - outer)).floor() as i128;
    let hi = (center + outer + widen(center + outer)).ceil() as i128;
    match roots(0.0) {
        Some(inner) if inner > 4.0 => {
            let il = (center - inner + widen(center - inner)).ceil() as i128;
            let ih = (center + inner - widen(center + inner)).floor() as i128;
            [(lo, il), (ih, hi)]
        }
        _ => [(lo, hi), (1, 0)],
    }
}

/// f(1, t)·d³ at t = n/d with d > 0.
fn scaled_eval(a: i128, b: i128, c: i128, d: i128, n: i128) -> i128 {
    a * d * d * d + 3 * b * n * d * d + 3 * c * n * n * d + d * n * n * n
}

fn pos_slice(region: &Region, b: i64, progress: &mut Progress, visit: &mut dyn FnMut(&ClassRep)) -> Result<()> {
    let x = region.x;
    let bi = b as i128;
    if b > 0 {
        // a = 0: α = 0, (P, Q, R) = (3b, 3c, d)
        for c in (1 - b)..=b {
            let ci = c as i128;
            let dmax = floor_div(x - 1 + 3 * bi * bi * ci * ci, 4 * bi * bi * bi);
            let mut d = 3 * bi;
            while d <= dmax {
                progress.visited += 1;
                let disc = 4 * bi * bi * bi * d - 3 * bi * bi * ci * ci;
                let f = CubicForm::new(0, b, c, d as i64);
                let canonical = d > 3 * bi || (c >= 0 && represents(&f)?);
                if canonical && disc > 0 && disc < x {
                    progress.found += 1;
                    visit(&ClassRep { form: f, disc: disc as i64 });
                }
                d += 1;
            }
        }
    }
    let am = region.a_max();
    for a in -am..=am {
        if a == 0 {
            continue;
        }
        let ai = a as i128;
        let cm = region.c_max(a, b);
        let dm = region.d_max(a, b) as i128;
        for c in -cm..=cm {
            let ci = c as i128;
            let beta = 4 * bi * bi * bi - 6 * ai * bi * ci;
            let gamma = 4 * ai * ci * ci * ci - 3 * bi * bi * ci * ci;
            let (wlo, whi) = w_window(a, b, c);
            for (lo, hi) in quad_band(ai * ai, beta, gamma, x) {
                let lo = lo.max(1).max(wlo);
                let hi = hi.min(dm).min(whi);
                let mut d = lo;
                while d <= hi {
                    progress.visited += 1;
                    // α ∈ [(−d − 3c)/d, (d − 3c)/d] ⇔ |Q| ≤ R
                    if scaled_eval(ai, bi, ci, d, -d - 3 * ci) <= 0 && scaled_eval(ai, bi, ci, d, d - 3 * ci) >= 0 {
                        let disc = disc_of(ai, bi, ci, d);
                        if disc > 0 && disc < x {
                            let f = CubicForm::new(a, b, c, d as i64);
                            if pos_canonical(&f)? {
                                progress.found += 1;
                                visit(&ClassRep { form: f, disc: disc as i64 });
                            }
                        }
                    }
                    d += 1;
                }
            }
        }
    }
    Ok(())
}

/// With w = 1/α, f = (x − wy)(ax² + (aw + 3b)xy + ...) and −P < Q ≤ P
/// forces |aw + 3b| ≤ |a|, so d = −(aw³ + 3bw² + 3cw) ranges over the
/// image of a w-interval of length 2. Returns that image, widened.
fn w_window(a: i64, b: i64, c: i64) -> (i128, i128) {
    let (af, bf, cf) = (a as f64, b as f64, c as f64);
    let g = |w: f64| -(af * w * w * w + 3.0 * bf * w * w + 3.0 * cf * w);
    let (u, v) = ((-af.abs() - 3.0 * bf) / af, (af.abs() - 3.0 * bf) / af);
    let (w0, w1) = if u <= v { (u, v) } else { (v, u) };
    let mut vals = vec![g(w0), g(w1)];
    // g'(w) = 0 ⇔ aw² + 2bw + c = 0
    let disc = bf * bf - af * cf;
    if disc >= 0.0 {
        let r = disc.sqrt();
        for w in [(-bf + r) / af, (-bf - r) / af] {
            if w0 < w && w < w1 {
                vals.push(g(w));
            }
        }
    }
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = 1.0
        + 1e-9
            * (lo.abs() + hi.abs() + 3.0 * (af.abs() + bf.abs() + cf.abs()) * (1.0 + w0.abs().max(w1.abs())).powi(3));
    ((lo - slack).floor() as i128, (hi + slack).ceil() as i128)
}

/// Whether f or −f is the canonical representative of its class.
fn represents(f: &CubicForm) -> Result<bool> {
    let c = reduce_pos(f)?;
    Ok(c == *f || c == f.neg())
}

/// Domain membership plus the P = R tie-break, for d > 0.
fn pos_canonical(f: &CubicForm) -> Result<bool> {
    let root = RealRoot::new(f);
    if !in_pos_domain_with(f, Some(&root)) {
        return Ok(false);
    }
    let p = [3 * f.b as i128, 3 * f.c as i128, f.d as i128];
    if root.sign([f.d as i128 - p[0], -p[1], -p[2]]) == Ordering::Equal {
        return represents(f);
    }
    Ok(true)
}

/// d = 0: f = x(ax² + 3bxy + 3cy²) with a > 0 and the factor (a, 3b, 3c)
/// reduced, so 3|b| ≤ a ≤ 3c and disc = c²(4ac − 3b²).
fn pos_slice_d0(region: &Region, b: i64, progress: &mut Progress, visit: &mut dyn FnMut(&ClassRep)) -> Result<()> {
    let x = region.x;
    let bi = b as i128;
    let mut a = (3 * bi.abs()).max(1);
    // disc ≥ a⁴/9
    while a.pow(4) < 9 * x {
        if 3 * bi == -a {
            a += 1;
            continue;
        }
        let mut c = ceil_div(a, 3);
        loop {
            let disc = c * c * (4 * a * c - 3 * bi * bi);
            if disc >= x {
                break;
            }
            progress.visited += 1;
            let f = CubicForm::new(a as i64, b, c as i64, 0);
            let tie = a == 3 * c;
            if (!tie || b >= 0) && (!tie || represents(&f)?) {
                progress.found += 1;
                visit(&ClassRep { form: f, disc: disc as i64 });
            }
            c += 1;
        }
        a += 1;
    }
    Ok(())
}

#[cfg(test)]
fn band_contains_all(a2: i128, beta: i128, gamma: i128, x: i128, span: i128) -> bool {
    let bands = quad_band(a2, beta, gamma, x);
    let center = -beta / (2 * a2);
    let reach = crate::arith::isqrt(((x.abs() + beta.abs() + gamma.abs()) as u128) * 4) as i128 + span;
    (center - reach..=center + reach).all(|d| {
        let q = a2 * d * d + beta * d + gamma;
        !(q > 0 && q < x) || bands.iter().any(|&(l, h)| l <= d && d <= h)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_helpers() {
        assert_eq!(max_strict(100, 1, 2), 9);
        assert_eq!(max_strict(101, 1, 2), 10);
        assert_eq!(max_strict(1, 1, 2), 0);
        assert_eq!(max_strict(0, 1, 2), -1);
        let r = Region::new(1_000_000, Sign::Neg);
        assert_eq!(r.a_max(), 33);
        let r = Region::new(1_000_000, Sign::Pos);
        assert_eq!(r.a_max(), 77);
    }

    #[test]
    fn band_solver() {
        for (a2, beta, gamma) in [(1, 0, -50), (4, 17, 3), (9, -400, 2000), (1, 6, 9), (25, 1000, -7)] {
            for x in [1, 10, 1000, 100000] {
                assert!(band_contains_all(a2, beta, gamma, x, 50), "{a2} {beta} {gamma} {x}");
            }
        }
    }

    #[test]
    fn fast_reducibility_agrees() {
        for a in -4..=4 {
            for b in -3..=3 {
                for c in -3..=3 {
                    for d in -4..=4 {
                        let f = CubicForm::new(a, b, c, d);
                        if f.reduced_disc().unwrap() == 0 {
                            continue;
                        }
                        assert_eq!(is_reducible_fast(&f), f.is_reducible(), "{f}");
                    }
                }
            }
        }
    }
}
