//! Fundamental-domain reduction and class counting for integer-matrix
//! binary cubic forms.

pub mod census;
pub mod reduce;
pub mod reducible;
pub mod stream;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{is_square, isqrt};
use crate::error::{Error, Result};
use crate::forms::CubicForm;
use crate::local_mass::FamilySpec;
use crate::quad::is_maximal_disc;

pub use census::cubic_census_squarefree;
pub use reduce::{canonical, in_pos_domain, is_canonical, reduce_neg, reduce_pos, small_matrices};
pub use reducible::{
    count_proj_reducible, count_reducible_a0, proj_reducible_exact, proj_reducible_exact_total, A0Count,
};
pub use stream::{for_each_class, for_each_class_reporting, is_reducible_fast, ClassRep, Partition, Progress};

/// Default limit on |D| for per-discriminant exhaustive operations.
pub const PER_DISC_BOUND: u64 = 3000;
/// Default limit on X for streaming counts.
pub const STREAM_BOUND: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn of(d: i64) -> Option<Sign> {
        match d.signum() {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }

    /// ±1.
    pub fn unit(&self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "pos",
            Sign::Neg => "neg",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s {
            "pos" | "+" | "real" => Ok(Sign::Pos),
            "neg" | "-" | "imag" => Ok(Sign::Neg),
            _ => Err(Error::InvalidTriple(format!("unknown sign {s:?}"))),
        }
    }
}

/// Class counts at one discriminant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct CountRecord {
    pub D: i64,
    pub n_total: u64,
    pub n_proj: u64,
    pub n_proj_red: u64,
    pub n_irred: u64,
}

impl CountRecord {
    pub fn new(d: i64) -> Self {
        CountRecord { D: d, ..Default::default() }
    }

    pub fn n_irred_proj(&self) -> u64 {
        self.n_proj - self.n_proj_red
    }

    fn add(&mut self, projective: bool, reducible: bool) {
        self.n_total += 1;
        if projective {
            self.n_proj += 1;
            if reducible {
                self.n_proj_red += 1;
            }
        }
        if !reducible {
            self.n_irred += 1;
        }
    }
}

/// Conjunctive class filter.
#[derive(Clone, Debug, Default)]
pub struct ClassFilter {
    pub irreducible_only: bool,
    pub projective_only: bool,
    pub reducible_only: bool,
    pub maximal_disc_only: bool,
    pub family: Option<FamilySpec>,
}

impl ClassFilter {
    pub fn all() -> Self {
        ClassFilter::default()
    }

    pub fn irreducible() -> Self {
        ClassFilter { irreducible_only: true, ..Default::default() }
    }

    pub fn matches(&self, rep: &ClassRep) -> bool {
        if (self.projective_only) && !rep.is_projective() {
            return false;
        }
        if self.maximal_disc_only && !is_maximal_disc(rep.disc) {
            return false;
        }
        if let Some(fam) = &self.family {
            if !fam.contains(rep.disc).unwrap_or(false) {
                return false;
            }
        }
        if self.irreducible_only || self.reducible_only {
            let red = rep.is_reducible();
            if (self.irreducible_only && red) || (self.reducible_only && !red) {
                return false;
            }
        }
        true
    }
}

fn check_stream_bound(x: u64, limit: u64) -> Result<()> {
    if x > limit {
        return Err(Error::BoundExceeded(format!("X = {x} exceeds the configured limit {limit}")));
    }
    Ok(())
}

/// Run `work` on `threads` partitions and collect the per-partition results
/// in partition order.
pub(crate) fn run_partitioned<T: Send>(threads: u32, work: impl Fn(Partition) -> Result<T> + Sync) -> Result<Vec<T>> {
    let threads = threads.max(1);
    if threads == 1 {
        return Ok(vec![work(Partition::WHOLE)?]);
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|index| {
                let work = &work;
                s.spawn(move || work(Partition { index, count: threads }))
            })
            .collect();
        handles.into_iter().map(|h| h.join().map_err(|_| Error::Internal("worker panicked".into()))?).collect()
    })
}

/// Number of canonical representatives with 0 < ±disc < X passing the
/// filter. Square discriminants are included unless the filter excludes
/// them.
pub fn count_classes(x: u64, sign: Sign, filter: &ClassFilter) -> Result<u64> {
    count_classes_with(x, sign, filter, 1, STREAM_BOUND)
}

pub fn count_classes_with(x: u64, sign: Sign, filter: &ClassFilter, threads: u32, limit: u64) -> Result<u64> {
    check_stream_bound(x, limit)?;
    let parts = run_partitioned(threads, |part| {
        let mut n = 0u64;
        for_each_class(x, sign, part, &mut |rep| {
            if filter.matches(rep) {
                n += 1;
            }
        })?;
        Ok(n)
    })?;
    Ok(parts.into_iter().sum())
}

/// Class totals over 0 < ±disc < X, square discriminants kept apart.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub x: u64,
    pub sign: Option<Sign>,
    pub total: u64,
    pub irreducible: u64,
    pub irreducible_projective: u64,
    pub irreducible_maximal: u64,
    pub reducible: u64,
    pub reducible_projective: u64,
    /// Classes with a perfect-square discriminant.
    pub square_disc: u64,
    /// The irreducible ones among them (pure cubic rings).
    pub square_disc_irreducible: u64,
    pub visited: u64,
}

impl Tally {
    fn merge(&mut self, o: &Tally) {
        self.total += o.total;
        self.irreducible += o.irreducible;
        self.irreducible_projective += o.irreducible_projective;
        self.irreducible_maximal += o.irreducible_maximal;
        self.reducible += o.reducible;
        self.reducible_projective += o.reducible_projective;
        self.square_disc += o.square_disc;
        self.square_disc_irreducible += o.square_disc_irreducible;
        self.visited += o.visited;
    }
}

/// One streaming pass collecting every category of [`Tally`], plus
/// per-discriminant records for |D| ≤ `per_d` (indexed by |D|).
pub fn tally_classes(
    x: u64,
    sign: Sign,
    per_d: u64,
    threads: u32,
    limit: u64,
    report: &(dyn Fn(Progress) + Sync),
) -> Result<(Tally, Vec<CountRecord>)> {
    check_stream_bound(x, limit)?;
    let per_d = per_d.min(x);
    let parts = run_partitioned(threads, |part| {
        let mut t = Tally::default();
        let mut recs: Vec<CountRecord> = (0..=per_d as i64).map(|m| CountRecord::new(m * sign.unit())).collect();
        let mut failure: Option<Error> = None;
        let prog = for_each_class_reporting(
            x,
            sign,
            part,
            &mut |rep| {
                let red = rep.is_reducible();
                let proj = rep.is_projective();
                let m = rep.disc.unsigned_abs();
                if m <= per_d {
                    recs[m as usize].add(proj, red);
                }
                if is_square(rep.disc as i128) {
                    if !red {
                        if rep.disc == 1 && failure.is_none() {
                            failure = Some(Error::Internal(format!("irreducible form {} of disc 1", rep.form)));
                        }
                        t.square_disc_irreducible += 1;
                    }
                    t.square_disc += 1;
                    return;
                }
                t.total += 1;
                if red {
                    t.reducible += 1;
                    if proj {
                        t.reducible_projective += 1;
                    }
                } else {
                    t.irreducible += 1;
                    if proj {
                        t.irreducible_projective += 1;
                    }
                    if is_maximal_disc(rep.disc) {
                        t.irreducible_maximal += 1;
                    }
                }
            },
            &mut |p| report(p),
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        t.visited = prog.visited;
        Ok((t, recs))
    })?;
    let mut total = Tally { x, sign: Some(sign), ..Default::default() };
    let mut recs: Vec<CountRecord> = (0..=per_d as i64).map(|m| CountRecord::new(m * sign.unit())).collect();
    for (t, r) in parts {
        total.merge(&t);
        for (acc, v) in recs.iter_mut().zip(r) {
            acc.n_total += v.n_total;
            acc.n_proj += v.n_proj;
            acc.n_proj_red += v.n_proj_red;
            acc.n_irred += v.n_irred;
        }
    }
    Ok((total, recs))
}

/// Largest m ≥ 0 with k·m^e < n, or −1.
fn bound_root(n: i128, k: i128, e: u32) -> i64 {
    let mut m = (n as f64 / k as f64).powf(1.0 / e as f64) as i64 + 2;
    while m >= 0 && k * (m as i128).pow(e) >= n {
        m -= 1;
    }
    m
}

/// Every class of discriminant `d`, from the coefficient region of the
/// Davenport bounds at X = |D| + 1.
pub fn classes_with_disc(d: i64) -> Result<(Vec<CubicForm>, CountRecord)> {
    classes_with_disc_bounded(d, PER_DISC_BOUND)
}

pub fn classes_with_disc_bounded(d: i64, bound: u64) -> Result<(Vec<CubicForm>, CountRecord)> {
    if d == 0 {
        return Err(Error::Degenerate);
    }
    if d.unsigned_abs() > bound {
        return Err(Error::BoundExceeded(format!("|D| = {} exceeds {bound}", d.unsigned_abs())));
    }
    let x = d.unsigned_abs() as i128 + 1;
    let neg = d < 0;
    let (ka, kb) = if neg { ((4 * x, 3), (4 * x, 3)) } else { ((36 * x, 1), (32 * x, 9)) };
    let am = bound_root(ka.0, ka.1, 4);
    let bm = bound_root(kb.0, kb.1, 4);
    let mut found = BTreeSet::new();
    let target = d as i128;
    for a in -am..=am {
        for b in -bm..=bm {
            if a == 0 && b == 0 {
                continue;
            }
            let (ai, bi) = (a as i128, b as i128);
            let mut cm = i64::MAX;
            if b != 0 {
                cm = cm.min(if neg { bound_root(4 * x, 3 * bi * bi, 2) } else { bound_root(32 * x, 9 * bi * bi, 2) });
            }
            if a != 0 {
                cm = cm.min(if neg { bound_root(4 * x, 3 * ai.abs(), 3) } else { bound_root(20 * x, 3 * ai.abs(), 3) });
            }
            for c in -cm..=cm {
                let ci = c as i128;
                // a²d² + (4b³ − 6abc)d + 4ac³ − 3b²c² − D = 0
                let beta = 4 * bi * bi * bi - 6 * ai * bi * ci;
                let gamma = 4 * ai * ci * ci * ci - 3 * bi * bi * ci * ci - target;
                let mut sols = Vec::with_capacity(2);
                if a == 0 {
                    if beta != 0 && gamma % beta == 0 {
                        sols.push(-gamma / beta);
                    }
                } else {
                    let a2 = ai * ai;
                    let delta = beta * beta - 4 * a2 * gamma;
                    if delta >= 0 && is_square(delta) {
                        let s = isqrt(delta as u128) as i128;
                        for num in [-beta + s, -beta - s] {
                            if num % (2 * a2) == 0 {
                                sols.push(num / (2 * a2));
                            }
                        }
                    }
                }
                for dd in sols {
                    let Ok(dd) = i64::try_from(dd) else { continue };
                    let f = CubicForm::new(a, b, c, dd);
                    debug_assert_eq!(f.reduced_disc()?, target);
                    found.insert(canonical(&f)?);
                }
            }
        }
    }
    let mut rec = CountRecord::new(d);
    for f in &found {
        let red = f.is_reducible();
        if d == 1 && !red {
            // over Z × Z every admissible δ is a cube
            return Err(Error::Internal(format!("irreducible form {f} of disc 1")));
        }
        rec.add(f.is_projective()?, red);
    }
    Ok((found.into_iter().collect(), rec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_parsing() {
        assert_eq!("neg".parse::<Sign>().unwrap(), Sign::Neg);
        assert_eq!(Sign::Pos.to_string(), "pos");
        assert_eq!(Sign::of(-4), Some(Sign::Neg));
    }

    #[test]
    fn small_discriminants() {
        let (_, r) = classes_with_disc(-3).unwrap();
        assert_eq!((r.n_proj, r.n_proj_red), (3, 1));
        let (forms, r) = classes_with_disc(-44).unwrap();
        assert_eq!((r.n_proj, r.n_proj_red, r.n_irred_proj()), (3, 3, 0));
        assert!(forms.contains(&canonical(&CubicForm::new(0, 2, -1, -1)).unwrap()));
        let (_, r) = classes_with_disc(-23).unwrap();
        assert_eq!((r.n_proj, r.n_proj_red, r.n_irred_proj()), (3, 1, 2));
        let (_, r) = classes_with_disc(229).unwrap();
        assert_eq!(r.n_proj, 9);
        assert!(classes_with_disc(-3001).is_err());
    }
}
