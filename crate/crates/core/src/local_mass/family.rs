//! Quadratic rings over Z_p and acceptable families of local conditions.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::arith::{is_prime, kronecker, valuation};
use crate::error::{Error, Result};
use crate::quad::{check_order_disc, ring_from_disc};

/// An étale quadratic algebra over Q_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algebra {
    Split,
    Inert,
    /// Index into the ramified quadratic extensions: 0..2 for odd p, 0..6 for p = 2.
    Ramified(u8),
}

impl Algebra {
    /// Exponent of p in the discriminant of the maximal order.
    pub fn disc_exp(&self, p: u64) -> u32 {
        match self {
            Algebra::Split | Algebra::Inert => 0,
            Algebra::Ramified(k) => {
                if p != 2 {
                    1
                } else if *k < 2 {
                    2
                } else {
                    3
                }
            }
        }
    }

    /// All algebras at p.
    pub fn all(p: u64) -> Vec<Algebra> {
        let mut v = vec![Algebra::Split, Algebra::Inert];
        v.extend((0..ramified_count(p)).map(Algebra::Ramified));
        v
    }

    pub fn label(&self) -> String {
        match self {
            Algebra::Split => "split".into(),
            Algebra::Inert => "inert".into(),
            Algebra::Ramified(k) => format!("ramified{k}"),
        }
    }

    pub fn parse(s: &str) -> Result<Algebra> {
        match s {
            "split" => Ok(Algebra::Split),
            "inert" => Ok(Algebra::Inert),
            _ => s
                .strip_prefix("ramified")
                .and_then(|k| k.parse().ok())
                .map(Algebra::Ramified)
                .ok_or_else(|| Error::Family(format!("unknown algebra label {s:?}"))),
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn ramified_count(p: u64) -> u8 {
    if p == 2 {
        6
    } else {
        2
    }
}

/// A quadratic ring over Z_p: the order of conductor p^j in `algebra`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalRingSpec {
    pub p: u64,
    pub algebra: Algebra,
    pub j: u32,
}

impl LocalRingSpec {
    /// v_p(Disc) = 2j + d₀.
    pub fn disc_exp(&self) -> u32 {
        2 * self.j + self.algebra.disc_exp(self.p)
    }
}

/// The completion at p of the order of discriminant `d`.
pub fn local_ring(d: i64, p: u64) -> Result<LocalRingSpec> {
    let r = ring_from_disc(d)?;
    let j = valuation(r.f, p);
    let algebra = match kronecker(r.d0, p) {
        1 => Algebra::Split,
        -1 => Algebra::Inert,
        _ if p != 2 => {
            let u = r.d0 / p as i64;
            Algebra::Ramified(if kronecker(u, p) == 1 { 0 } else { 1 })
        }
        _ => {
            let m = r.d0 / 4;
            if m.rem_euclid(2) == 1 {
                // Q2(√3) or Q2(√7)
                Algebra::Ramified(if m.rem_euclid(8) == 3 { 0 } else { 1 })
            } else {
                // Q2(√2), Q2(√6), Q2(√10), Q2(√14)
                let m = (m / 2).rem_euclid(8) as u8;
                Algebra::Ramified(2 + (m - 1) / 2)
            }
        }
    };
    Ok(LocalRingSpec { p, algebra, j })
}

/// A local condition Σ_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    All,
    Maximal,
    Rings(Vec<(Algebra, u32)>),
    ConductorExponents(Vec<u32>),
}

impl Condition {
    pub fn contains(&self, r: &LocalRingSpec) -> bool {
        match self {
            Condition::All => true,
            Condition::Maximal => r.j == 0,
            Condition::Rings(v) => v.contains(&(r.algebra, r.j)),
            Condition::ConductorExponents(v) => v.contains(&r.j),
        }
    }

    /// Contains every maximal ring at p.
    pub fn contains_maximal(&self, p: u64) -> bool {
        Algebra::all(p).into_iter().all(|algebra| self.contains(&LocalRingSpec { p, algebra, j: 0 }))
    }

    /// The finite list of member rings, or None for `All`.
    pub fn finite_rings(&self, p: u64) -> Option<Vec<LocalRingSpec>> {
        let ring = |algebra, j| LocalRingSpec { p, algebra, j };
        match self {
            Condition::All => None,
            Condition::Maximal => Some(Algebra::all(p).into_iter().map(|a| ring(a, 0)).collect()),
            Condition::Rings(v) => Some(v.iter().map(|&(a, j)| ring(a, j)).collect()),
            Condition::ConductorExponents(js) => {
                Some(Algebra::all(p).into_iter().flat_map(|a| js.iter().map(move |&j| ring(a, j))).collect())
            }
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Condition::All => json!("all"),
            Condition::Maximal => json!("maximal"),
            Condition::Rings(v) => {
                json!({ "rings": v.iter().map(|(a, j)| json!([a.label(), j])).collect::<Vec<_>>() })
            }
            Condition::ConductorExponents(v) => json!({ "conductor_exponents": v }),
        }
    }

    fn from_json(v: &Value, p: u64) -> Result<Condition> {
        let bad = || Error::Family(format!("bad condition {v}"));
        if let Some(s) = v.as_str() {
            return match s {
                "all" => Ok(Condition::All),
                "maximal" => Ok(Condition::Maximal),
                _ => Err(bad()),
            };
        }
        let obj = v.as_object().ok_or_else(bad)?;
        if let Some(rings) = obj.get("rings") {
            let mut out = Vec::new();
            for r in rings.as_array().ok_or_else(bad)? {
                let pair = r.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                let alg = Algebra::parse(pair[0].as_str().ok_or_else(bad)?)?;
                if let Algebra::Ramified(k) = alg {
                    if k >= ramified_count(p) {
                        return Err(Error::Family(format!("no algebra {alg} at p = {p}")));
                    }
                }
                let j = pair[1].as_u64().ok_or_else(bad)? as u32;
                out.push((alg, j));
            }
            if out.is_empty() {
                return Err(Error::Family(format!("empty condition at p = {p}")));
            }
            out.sort();
            out.dedup();
            return Ok(Condition::Rings(out));
        }
        if let Some(js) = obj.get("conductor_exponents") {
            let mut out: Vec<u32> = js
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|j| j.as_u64().map(|j| j as u32).ok_or_else(bad))
                .collect::<Result<_>>()?;
            if out.is_empty() {
                return Err(Error::Family(format!("empty condition at p = {p}")));
            }
            out.sort();
            out.dedup();
            return Ok(Condition::ConductorExponents(out));
        }
        Err(bad())
    }
}

/// An acceptable family (Σ_p): finitely many explicit primes plus a default
/// of `All` or `Maximal` for the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub primes: BTreeMap<u64, Condition>,
    pub default: Condition,
}

impl FamilySpec {
    pub fn all() -> Self {
        FamilySpec { primes: BTreeMap::new(), default: Condition::All }
    }

    pub fn maximal() -> Self {
        FamilySpec { primes: BTreeMap::new(), default: Condition::Maximal }
    }

    pub fn with(mut self, p: u64, cond: Condition) -> Self {
        self.primes.insert(p, cond);
        self
    }

    pub fn condition(&self, p: u64) -> &Condition {
        self.primes.get(&p).unwrap_or(&self.default)
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.default, Condition::All | Condition::Maximal) {
            return Err(Error::Family("default must be \"all\" or \"maximal\"".into()));
        }
        for &p in self.primes.keys() {
            if !is_prime(p) {
                return Err(Error::Family(format!("{p} is not prime")));
            }
        }
        Ok(())
    }

    /// O ⊗ Z_p ∈ Σ_p for every p.
    pub fn contains(&self, d: i64) -> Result<bool> {
        check_order_disc(d)?;
        for (&p, cond) in &self.primes {
            if !cond.contains(&local_ring(d, p)?) {
                return Ok(false);
            }
        }
        if self.default == Condition::Maximal {
            let r = ring_from_disc(d)?;
            let f = r.f;
            if f > 1 {
                let listed: Vec<u64> = self.primes.keys().copied().collect();
                for (p, _) in crate::arith::factor(f)? {
                    if !listed.contains(&p) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (p, c) in &self.primes {
            m.insert(p.to_string(), c.to_json());
        }
        m.insert("default".into(), self.default.to_json());
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<FamilySpec> {
        let obj = v.as_object().ok_or_else(|| Error::Family("family must be a JSON object".into()))?;
        let mut spec = FamilySpec::maximal();
        for (k, val) in obj {
            if k == "default" {
                spec.default = Condition::from_json(val, 0)?;
                continue;
            }
            let p: u64 = k.parse().map_err(|_| Error::Family(format!("bad prime key {k:?}")))?;
            spec.primes.insert(p, Condition::from_json(val, p)?);
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn parse(s: &str) -> Result<FamilySpec> {
        FamilySpec::from_json(&serde_json::from_str(s)?)
    }

    /// Short stable identifier: the first 16 hex digits of SHA-256 of the
    /// canonical JSON.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().to_string().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::is_maximal_disc;

    #[test]
    fn local_rings() {
        let r = local_ring(-44, 2).unwrap();
        assert_eq!((r.algebra, r.j), (Algebra::Inert, 1));
        let r = local_ring(-44, 11).unwrap();
        assert_eq!((r.algebra, r.j), (Algebra::Ramified(1), 0));
        assert_eq!(local_ring(-4, 2).unwrap().algebra, Algebra::Ramified(1));
        assert_eq!(local_ring(12, 2).unwrap().algebra, Algebra::Ramified(0));
        assert_eq!(local_ring(8, 2).unwrap().algebra, Algebra::Ramified(2));
        assert_eq!(local_ring(-8, 2).unwrap().algebra, Algebra::Ramified(5));
        assert_eq!(local_ring(-23, 2).unwrap().algebra, Algebra::Split);
        assert_eq!(local_ring(-99, 3).unwrap().j, 1);
        // every discriminant exponent matches
        for d in (-2000i64..2000).filter(|&d| check_order_disc(d).is_ok()) {
            for p in [2u64, 3, 5, 7] {
                let r = local_ring(d, p).unwrap();
                assert_eq!(r.disc_exp(), valuation(d.unsigned_abs(), p), "D = {d}, p = {p}");
            }
        }
    }

    #[test]
    fn membership() {
        let max = FamilySpec::maximal();
        assert!(!max.contains(-44).unwrap());
        assert!(FamilySpec::all().contains(-44).unwrap());
        let two = FamilySpec::maximal().with(2, Condition::All);
        assert!(two.contains(-44).unwrap());
        assert!(!two.contains(-99).unwrap());
        for d in (-3000i64..3000).filter(|&d| check_order_disc(d).is_ok()) {
            assert_eq!(max.contains(d).unwrap(), is_maximal_disc(d), "{d}");
        }
    }

    #[test]
    fn json_roundtrip() {
        let f = FamilySpec::maximal()
            .with(2, Condition::All)
            .with(3, Condition::Rings(vec![(Algebra::Split, 1), (Algebra::Ramified(1), 0)]))
            .with(5, Condition::ConductorExponents(vec![0, 2]));
        let back = FamilySpec::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.hash(), f.hash());
        let parsed = FamilySpec::parse(r#"{"2": "all", "default": "maximal"}"#).unwrap();
        assert_eq!(parsed, FamilySpec::maximal().with(2, Condition::All));
        assert!(FamilySpec::parse(r#"{"4": "all"}"#).is_err());
        assert!(FamilySpec::parse(r#"{"default": {"rings": [["split", 0]]}}"#).is_err());
        assert!(FamilySpec::parse(r#"{"3": {"rings": [["ramified2", 0]]}}"#).is_err());
    }
}
