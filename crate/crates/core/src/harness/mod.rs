//! Family statistics over discriminant ranges, identity suites and reports.

pub mod cache;
pub mod report;

use std::fmt;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::enumeration::{classes_with_disc, cubic_census_squarefree, tally_classes, CountRecord, Sign};
use crate::error::{Error, Result};
use crate::local_mass::{mass, order_count_constant, FamilySpec};
use crate::quad::cl3::cl3_table;
use crate::quad::{check_disc, check_order_disc, cl3_count, ideal3_count, sigma_factor, u3_correction};

pub use cache::{Cache, CacheRecord, SCHEMA_VERSION};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Largest |D| for which class-list columns are filled during a scan.
pub const IDENTITY_BOUND: u64 = 3000;
/// Primes used for the truncated mass products.
pub const MASS_CUTOFF: u64 = 10_000;

/// O ⊗ Z_p ∈ Σ_p for all p, for a valid non-square D.
pub fn family_contains(spec: &FamilySpec, d: i64) -> Result<bool> {
    check_order_disc(d)?;
    spec.contains(d)
}

/// An exact fraction, written "num/den".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frac(pub Ratio<i64>);

impl Frac {
    pub fn new(n: i64, d: i64) -> Frac {
        Frac(if d == 0 { Ratio::from_integer(0) } else { Ratio::new(n, d) })
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl std::str::FromStr for Frac {
    type Err = Error;
    fn from_str(s: &str) -> Result<Frac> {
        let bad = || Error::Cache(format!("bad fraction {s:?}"));
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(Frac(Ratio::new(n, d)))
    }
}

impl Serialize for Frac {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Frac {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Frac, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Averages of |Cl₃|, |I₃| and their difference over a family.
///
/// The difference is |Cl₃| − |I₃| for D < 0 and |Cl₃| − |I₃|/3 for D > 0;
/// the `hred` variant replaces |I₃| by |I₃|/u₃ = #reducible projective
/// classes, which differs only for non-maximal orders of Q(√−3).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct StatsRow {
    pub X: u64,
    pub sign: Sign,
    pub family: String,
    pub n_orders: u64,
    pub sum_cl3: u64,
    pub sum_i3: u64,
    pub sum_diff: Frac,
    pub sum_diff_hred: Frac,
    pub avg_cl3: Frac,
    pub avg_i3: Frac,
    pub avg_diff: Frac,
    pub avg_diff_hred: Frac,
    pub avg_cl3_decimal: f64,
    pub avg_i3_decimal: f64,
    pub avg_diff_decimal: f64,
    pub predicted_cl3: f64,
    pub predicted_i3: f64,
    pub predicted_diff: f64,
    pub mass_lo: f64,
    pub mass_hi: f64,
    pub relative_error_cl3: f64,
    pub relative_error_i3: f64,
    pub relative_error_diff: f64,
    pub version: String,
}

/// Predicted (|Cl₃|, |I₃|, difference) averages for a mass value.
pub fn predictions(sign: Sign, m: f64) -> (f64, f64, f64) {
    match sign {
        Sign::Neg => (1.0 + m, m, 1.0),
        Sign::Pos => (1.0 + m / 3.0, m, 1.0),
    }
}

fn rel(x: f64, target: f64) -> f64 {
    (x - target).abs() / target.abs()
}

/// Options for [`scan`].
#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub threads: u32,
    /// Class-list columns are filled for |D| ≤ this bound.
    pub identity_bound: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { threads: 1, identity_bound: IDENTITY_BOUND }
    }
}

/// Oracle values for every family discriminant with 0 < ±D < X, read from
/// the cache where present and computed (and cached) otherwise.
pub fn scan_records(
    x: u64,
    sign: Sign,
    spec: &FamilySpec,
    cache: Option<&mut Cache>,
    opts: &ScanOptions,
) -> Result<Vec<CacheRecord>> {
    spec.validate()?;
    let mut ds = Vec::new();
    for m in 1..x as i64 {
        let d = m * sign.unit();
        if check_order_disc(d).is_ok() && spec.contains(d)? {
            ds.push(d);
        }
    }
    let cached = |d: i64, c: &Option<&mut Cache>| c.as_ref().and_then(|c| c.get(d).cloned());
    let needs_identity = |d: i64| d.unsigned_abs() <= opts.identity_bound;
    let missing: Vec<i64> = ds
        .iter()
        .copied()
        .filter(|&d| match cached(d, &cache) {
            None => true,
            Some(r) => needs_identity(d) && r.n_proj.is_none(),
        })
        .collect();
    let mut fresh = std::collections::BTreeMap::new();
    if !missing.is_empty() {
        let top = missing.iter().map(|d| d.unsigned_abs()).max().unwrap_or(0) + 1;
        let table = cl3_table(top, sign == Sign::Neg);
        let id_top = missing.iter().map(|d| d.unsigned_abs()).filter(|&m| m <= opts.identity_bound).max();
        let classes: Vec<CountRecord> = match id_top {
            Some(t) => tally_classes(t + 1, sign, t, opts.threads, u64::MAX, &|_| {})?.1,
            None => Vec::new(),
        };
        let chunks = crate::enumeration::run_partitioned(opts.threads, |part| {
            let mut out = Vec::new();
            for (i, &d) in missing.iter().enumerate() {
                if i as u64 % part.count as u64 != part.index as u64 {
                    continue;
                }
                let (_, cl3) = table.get(d).ok_or_else(|| Error::Internal(format!("no class data for {d}")))?;
                let mut r = CacheRecord::new(d, cl3 as u64, ideal3_count(d)?);
                if let Some(c) = classes.get(d.unsigned_abs() as usize).filter(|_| needs_identity(d)) {
                    r.n_proj = Some(c.n_proj);
                    r.n_proj_red = Some(c.n_proj_red);
                    r.n_irred_total = Some(c.n_irred);
                }
                out.push(r);
            }
            Ok(out)
        })?;
        for r in chunks.into_iter().flatten() {
            fresh.insert(r.D, r);
        }
    }
    let mut cache = cache;
    let mut out = Vec::with_capacity(ds.len());
    for d in ds {
        let r = match fresh.remove(&d) {
            Some(r) => {
                if let Some(c) = cache.as_deref_mut() {
                    c.insert(r.clone())?;
                }
                r
            }
            None => cached(d, &cache).expect("cached record"),
        };
        out.push(r);
    }
    if let Some(c) = cache {
        c.flush()?;
    }
    Ok(out)
}

/// Summary statistics of a scan.
pub fn stats_row(x: u64, sign: Sign, spec: &FamilySpec, records: &[CacheRecord]) -> Result<StatsRow> {
    let n = records.len() as i64;
    let mut sum_cl3 = 0u64;
    let mut sum_i3 = 0u64;
    // three times the differences, to stay integral
    let mut diff3 = 0i64;
    let mut hred3 = 0i64;
    for r in records {
        sum_cl3 += r.cl3;
        sum_i3 += r.i3;
        let u3 = u3_correction(r.D)? as i64;
        let (cl3, i3) = (r.cl3 as i64, r.i3 as i64);
        match sign {
            Sign::Neg => {
                diff3 += 3 * (cl3 - i3);
                hred3 += 3 * cl3 - 3 * i3 / u3;
            }
            Sign::Pos => {
                diff3 += 3 * cl3 - i3;
                hred3 += 3 * cl3 - i3 / u3;
            }
        }
    }
    let m = mass(spec, MASS_CUTOFF)?;
    let (pc, pi, pd) = predictions(sign, m.midpoint());
    let avg_cl3 = Frac::new(sum_cl3 as i64, n);
    let avg_i3 = Frac::new(sum_i3 as i64, n);
    let avg_diff = Frac::new(diff3, 3 * n);
    Ok(StatsRow {
        X: x,
        sign,
        family: spec.hash(),
        n_orders: n as u64,
        sum_cl3,
        sum_i3,
        sum_diff: Frac::new(diff3, 3),
        sum_diff_hred: Frac::new(hred3, 3),
        avg_cl3,
        avg_i3,
        avg_diff,
        avg_diff_hred: Frac::new(hred3, 3 * n),
        avg_cl3_decimal: avg_cl3.to_f64(),
        avg_i3_decimal: avg_i3.to_f64(),
        avg_diff_decimal: avg_diff.to_f64(),
        predicted_cl3: pc,
        predicted_i3: pi,
        predicted_diff: pd,
        mass_lo: m.lo,
        mass_hi: m.hi,
        relative_error_cl3: rel(avg_cl3.to_f64(), pc),
        relative_error_i3: rel(avg_i3.to_f64(), pi),
        relative_error_diff: rel(avg_diff.to_f64(), pd),
        version: VERSION.to_string(),
    })
}

/// Scan plus summary.
pub fn scan(x: u64, sign: Sign, spec: &FamilySpec, cache: Option<&mut Cache>, opts: &ScanOptions) -> Result<StatsRow> {
    let records = scan_records(x, sign, spec, cache, opts)?;
    stats_row(x, sign, spec, &records)
}

/// Whether the sequence decreases except for at most `allowed` steps.
pub fn non_increasing_with_violations(errs: &[f64], allowed: usize) -> bool {
    errs.windows(2).filter(|w| w[1] > w[0]).count() <= allowed
}

/// Outcome of [`verify_identities`].
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct VerifyReport {
    pub bound: u64,
    pub discriminants: u64,
    pub census_checked: u64,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn is_squarefree(n: u64) -> Result<bool> {
    Ok(crate::arith::factor(n)?.iter().all(|&(_, e)| e == 1))
}

/// The per-discriminant identities n_proj = σ·|Cl₃| and
/// n_proj_red·u₃ = |I₃| for every valid non-square D with |D| ≤ bound,
/// plus the cubic field census at squarefree D.
pub fn verify_identities(bound: u64) -> Result<VerifyReport> {
    verify_identities_with(bound, true)
}

pub fn verify_identities_with(bound: u64, census: bool) -> Result<VerifyReport> {
    let mut rep = VerifyReport { bound, ..Default::default() };
    for m in 1..=bound as i64 {
        for d in [-m, m] {
            if check_order_disc(d).is_err() {
                continue;
            }
            rep.discriminants += 1;
            let (_, rec) = classes_with_disc(d)?;
            let cl3 = cl3_count(d)?;
            let i3 = ideal3_count(d)?;
            let sigma = sigma_factor(d)?;
            let u3 = u3_correction(d)?;
            if rec.n_proj != sigma * cl3 {
                rep.failures.push(format!("D = {d}: n_proj = {} but σ·|Cl₃| = {sigma}·{cl3}", rec.n_proj));
            }
            if rec.n_proj_red * u3 != i3 {
                rep.failures.push(format!("D = {d}: n_proj_red·u₃ = {}·{u3} but |I₃| = {i3}", rec.n_proj_red));
            }
            if census && is_squarefree(m as u64)? {
                rep.census_checked += 1;
                let fields = cubic_census_squarefree(d)?;
                if 2 * fields + 1 != cl3 {
                    rep.failures.push(format!("D = {d}: {fields} cubic fields but |Cl₃| = {cl3}"));
                }
            }
        }
    }
    Ok(rep)
}

/// Re-derives the record invariants for every cached row that carries
/// class-list columns.
pub fn verify_cache(cache: &Cache) -> Result<VerifyReport> {
    let mut rep = VerifyReport::default();
    for r in cache.records() {
        rep.bound = rep.bound.max(r.D.unsigned_abs());
        if r.cl3 != cl3_count(r.D)? || r.i3 != ideal3_count(r.D)? {
            rep.failures.push(format!("D = {}: cached oracle values are stale", r.D));
        }
        let (Some(n_proj), Some(n_proj_red)) = (r.n_proj, r.n_proj_red) else { continue };
        rep.discriminants += 1;
        if n_proj != sigma_factor(r.D)? * r.cl3 {
            rep.failures.push(format!("D = {}: cached n_proj = {n_proj}, |Cl₃| = {}", r.D, r.cl3));
        }
        if n_proj_red * u3_correction(r.D)? != r.i3 {
            rep.failures.push(format!("D = {}: cached n_proj_red = {n_proj_red}, |I₃| = {}", r.D, r.i3));
        }
    }
    Ok(rep)
}

/// Count of family discriminants against the predicted density.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct OrderCountRow {
    pub X: u64,
    pub sign: Sign,
    pub family: String,
    pub count: u64,
    pub ratio: f64,
    pub predicted_lo: f64,
    pub predicted_hi: f64,
    pub relative_error: f64,
}

pub fn order_count_check(x: u64, sign: Sign, spec: &FamilySpec) -> Result<OrderCountRow> {
    spec.validate()?;
    let mut count = 0u64;
    for m in 1..x as i64 {
        let d = m * sign.unit();
        if check_disc(d).is_ok() && check_order_disc(d).is_ok() && spec.contains(d)? {
            count += 1;
        }
    }
    let c = order_count_constant(spec, MASS_CUTOFF)?;
    let ratio = count as f64 / x as f64;
    let err = if c.contains(ratio) { 0.0 } else { rel(ratio, c.midpoint()) };
    Ok(OrderCountRow {
        X: x,
        sign,
        family: spec.hash(),
        count,
        ratio,
        predicted_lo: c.lo,
        predicted_hi: c.hi,
        relative_error: err,
    })
}
