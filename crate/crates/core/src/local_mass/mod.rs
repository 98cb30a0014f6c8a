//! Local densities, étale cubic tables and the cubic mass M_Σ.

pub mod family;
pub mod table;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{is_prime, primes_up_to};
use crate::error::{Error, Result};

pub use family::{local_ring, Algebra, Condition, FamilySpec, LocalRingSpec};
pub use table::{local_cubic_table, stable_j, C_eq_of_R, C_of_R, LocalCubicAlgebra};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn p_pow_inv(p: u64, e: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(p).pow(e))
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::Family(format!("{p} is not prime")))
    }
}

/// Density of projective forms at p: 1 − 1/p².
pub fn mu_projective(p: u64) -> Result<BigRational> {
    check_prime(p)?;
    let p = p as i64;
    Ok(rat(p * p - 1, p * p))
}

/// Density of forms whose ring is maximal at p: (p² − 1)²/p⁴.
pub fn mu_maximal(p: u64) -> Result<BigRational> {
    check_prime(p)?;
    let q = (p * p) as i64;
    Ok(rat((q - 1) * (q - 1), q * q))
}

/// |U⁺(R)/U⁺(R)³| / |U₃⁺(R)| for R over Z_p.
pub fn lemma26_factor(p: u64) -> u64 {
    if p == 3 {
        3
    } else {
        1
    }
}

/// (Σ C(R)/Disc_p(R), Σ 1/(2·Disc_p(R))) over R ∈ Σ_p.
fn mass_sums(p: u64, cond: &Condition) -> Result<(BigRational, BigRational)> {
    let half = rat(1, 2);
    let mut num = BigRational::zero();
    let mut den = BigRational::zero();
    match cond.finite_rings(p) {
        Some(rings) => {
            if rings.is_empty() {
                return Err(Error::Family(format!("empty condition at p = {p}")));
            }
            for r in rings {
                let w = p_pow_inv(p, r.disc_exp());
                num += C_of_R(&r) * &w;
                den += &half * w;
            }
        }
        None => {
            // Σ_{j ≥ J} p^{-2j} = p^{-2J} · p²/(p² − 1)
            let geo = rat((p * p) as i64, (p * p - 1) as i64);
            for algebra in Algebra::all(p) {
                let d0 = algebra.disc_exp(p);
                let stable = stable_j(p, algebra);
                for j in 0..stable {
                    let r = LocalRingSpec { p, algebra, j };
                    num += C_of_R(&r) * p_pow_inv(p, r.disc_exp());
                }
                let r = LocalRingSpec { p, algebra, j: stable };
                num += C_of_R(&r) * p_pow_inv(p, r.disc_exp()) * &geo;
                den += &half * p_pow_inv(p, d0) * &geo;
            }
        }
    }
    Ok((num, den))
}

/// The p-factor of M_Σ.
pub fn mass_factor(p: u64, cond: &Condition) -> Result<BigRational> {
    check_prime(p)?;
    let (num, den) = mass_sums(p, cond)?;
    Ok(num / den)
}

/// (p³ − 1)/(p(p² − 1)), the factor of the all-orders family.
pub fn all_orders_factor(p: u64) -> BigRational {
    let p = p as i64;
    rat(p * p * p - 1, p * (p * p - 1))
}

/// An exact finite product with a certified enclosure of the full product.
#[derive(Clone, Debug)]
pub struct Bracket {
    /// Product over p ≤ `cutoff`.
    pub partial: BigRational,
    pub cutoff: u64,
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn midpoint(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn cutoff_for(spec: &FamilySpec, cutoff: u64) -> u64 {
    spec.primes.keys().copied().max().unwrap_or(0).max(cutoff).max(2)
}

/// M_Σ = Π_p mass_factor(p, Σ_p). Primes above the cutoff contribute 1
/// under a maximal default; under an "all" default their product lies in
/// [1, exp((1/N + 1/(N+1))/2)].
pub fn mass(spec: &FamilySpec, cutoff: u64) -> Result<Bracket> {
    spec.validate()?;
    let n = cutoff_for(spec, cutoff);
    let mut partial = BigRational::one();
    for p in primes_up_to(n) {
        partial *= mass_factor(p, spec.condition(p))?;
    }
    let v = to_f64(&partial);
    let (lo, hi) = match spec.default {
        Condition::Maximal => (v, v),
        _ => {
            let nf = n as f64;
            let tail = (0.5 * (1.0 / nf + 1.0 / (nf + 1.0))).exp();
            (v * (1.0 - 1e-15), v * tail * (1.0 + 1e-15))
        }
    };
    Ok(Bracket { partial, cutoff: n, lo, hi })
}

/// (p − 1)/p · Σ_{R ∈ Σ_p} 1/(2·Disc_p(R)): the p-factor in the count of
/// Σ-orders of bounded discriminant.
pub fn order_count_factor(p: u64, cond: &Condition) -> Result<BigRational> {
    check_prime(p)?;
    let (_, den) = mass_sums(p, cond)?;
    Ok(rat(p as i64 - 1, p as i64) * den)
}

/// The constant c with #{Σ-orders, 0 < ±Disc < X} ~ c·X: one half times
/// the product of the order-count factors.
pub fn order_count_constant(spec: &FamilySpec, cutoff: u64) -> Result<Bracket> {
    spec.validate()?;
    let n = cutoff_for(spec, cutoff);
    let mut partial = rat(1, 2);
    for p in primes_up_to(n) {
        partial *= order_count_factor(p, spec.condition(p))?;
    }
    let v = to_f64(&partial);
    let (lo, hi) = match spec.default {
        Condition::All => (v, v),
        // Π_{p>N} (1 − p⁻²) ≥ 1 − Σ_{k>N} k⁻² > 1 − 1/N
        _ => (v * (1.0 - 1.0 / n as f64) * (1.0 - 1e-15), v * (1.0 + 1e-15)),
    };
    Ok(Bracket { partial, cutoff: n, lo, hi })
}

/// ζ(2)/ζ(3).
pub const ZETA2_OVER_ZETA3: f64 = 1.368_432_777_620_205_9;
/// ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn densities() {
        assert_eq!(mu_projective(2).unwrap(), rat(3, 4));
        assert_eq!(mu_projective(3).unwrap(), rat(8, 9));
        assert_eq!(mu_maximal(2).unwrap(), rat(9, 16));
        assert_eq!(mu_maximal(3).unwrap(), rat(64, 81));
        assert_eq!(mu_maximal(5).unwrap(), rat(576, 625));
        assert!(mu_maximal(4).is_err());
    }

    #[test]
    fn factors() {
        assert_eq!(mass_factor(2, &Condition::All).unwrap(), rat(7, 6));
        assert_eq!(mass_factor(3, &Condition::All).unwrap(), rat(13, 12));
        assert_eq!(mass_factor(7, &Condition::All).unwrap(), rat(57, 56));
        for p in primes_up_to(100) {
            assert_eq!(mass_factor(p, &Condition::Maximal).unwrap(), BigRational::one());
            if p <= 50 {
                assert_eq!(mass_factor(p, &Condition::All).unwrap(), all_orders_factor(p), "p = {p}");
            }
        }
        assert_eq!(lemma26_factor(3), 3);
        assert_eq!(lemma26_factor(101), 1);
    }

    #[test]
    fn masses() {
        let m = mass(&FamilySpec::maximal(), 50).unwrap();
        assert!(m.is_exact());
        assert_eq!(m.partial, BigRational::one());
        let m = mass(&FamilySpec::maximal().with(2, Condition::All), 50).unwrap();
        assert_eq!(m.partial, rat(7, 6));
        let m = mass(&FamilySpec::all(), 1000).unwrap();
        assert!(m.contains(ZETA2_OVER_ZETA3), "{:?}", m);
        assert!(m.hi - m.lo < 2e-3);
    }

    #[test]
    fn order_counts() {
        let c = order_count_constant(&FamilySpec::all(), 100).unwrap();
        assert_eq!(c.partial, rat(1, 2));
        let c = order_count_constant(&FamilySpec::maximal(), 2000).unwrap();
        let target = 3.0 / std::f64::consts::PI.powi(2);
        assert!(c.lo <= target && target <= c.hi, "{c:?}");
        let c = order_count_constant(&FamilySpec::maximal().with(2, Condition::All), 2000).unwrap();
        let target = 4.0 / std::f64::consts::PI.powi(2);
        assert!(c.lo <= target && target <= c.hi, "{c:?}");
    }
}
