//! Quadratic orders, binary quadratic forms and the two 3-torsion oracles.

pub mod bqf;
pub mod cl3;
pub mod ideal3;

use serde::{Deserialize, Serialize};

use crate::arith::{factor, is_square, isqrt};
use crate::error::{Error, Result};

pub use bqf::Bqf;
pub use cl3::{cl3_count, class_number};
pub use ideal3::{ideal3_count, ideal3_count_direct};

/// The quadratic order of discriminant `d`: D = D₀f², ε = D mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadRing {
    pub d: i64,
    pub d0: i64,
    pub f: u64,
    pub eps: u8,
}

impl QuadRing {
    pub fn is_square(&self) -> bool {
        self.d0 == 1
    }

    /// τ² = ετ + n.
    pub fn n(&self) -> i64 {
        (self.d - self.eps as i64) / 4
    }

    pub fn is_maximal(&self) -> bool {
        self.f == 1
    }
}

pub fn check_disc(d: i64) -> Result<()> {
    if d == 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidDiscriminant(d as i128));
    }
    Ok(())
}

/// Non-square, valid discriminant: the precondition of the group oracles.
pub fn check_order_disc(d: i64) -> Result<()> {
    check_disc(d)?;
    if is_square(d as i128) {
        return Err(Error::SquareDiscriminant(d as i128));
    }
    Ok(())
}

pub fn ring_from_disc(d: i64) -> Result<QuadRing> {
    check_disc(d)?;
    let eps = d.rem_euclid(4) as u8;
    if is_square(d as i128) {
        let f = isqrt(d as u128) as u64;
        return Ok(QuadRing { d, d0: 1, f, eps });
    }
    let mut kernel: i64 = d.signum();
    for (p, e) in factor(d.unsigned_abs())? {
        if e % 2 == 1 {
            kernel *= p as i64;
        }
    }
    let d0 = if kernel.rem_euclid(4) == 1 { kernel } else { 4 * kernel };
    let f = isqrt((d / d0) as u128) as u64;
    debug_assert_eq!(d0 * (f * f) as i64, d);
    Ok(QuadRing { d, d0, f, eps })
}

/// Odd part squarefree and D mod 16 in {1, 5, 8, 9, 12, 13}.
pub fn is_maximal_disc(d: i64) -> bool {
    if !matches!(d.rem_euclid(16), 1 | 5 | 8 | 9 | 12 | 13) {
        return false;
    }
    let mut odd = d.unsigned_abs();
    odd >>= odd.trailing_zeros();
    match factor(odd) {
        Ok(fac) => fac.iter().all(|&(_, e)| e == 1),
        Err(_) => false,
    }
}

/// 3 exactly for the non-maximal orders of Q(√−3), where ζ₃ is missing.
pub fn u3_correction(d: i64) -> Result<u64> {
    check_order_disc(d)?;
    let r = ring_from_disc(d)?;
    Ok(if r.d0 == -3 && r.f > 1 { 3 } else { 1 })
}

/// |U⁺/U⁺³|.
pub fn unit_cube_index(d: i64) -> Result<u64> {
    check_order_disc(d)?;
    Ok(if d < -3 { 1 } else { 3 })
}

/// |H(O)| / |Cl₃(O)|.
pub fn sigma_factor(d: i64) -> Result<u64> {
    unit_cube_index(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rings() {
        let r = ring_from_disc(-44).unwrap();
        assert_eq!((r.d0, r.f, r.eps), (-11, 2, 0));
        let r = ring_from_disc(-11).unwrap();
        assert_eq!((r.d0, r.f, r.eps), (-11, 1, 1));
        let r = ring_from_disc(-12).unwrap();
        assert_eq!((r.d0, r.f, r.eps), (-3, 2, 0));
        let r = ring_from_disc(40).unwrap();
        assert_eq!((r.d0, r.f), (40, 1));
        let r = ring_from_disc(-16).unwrap();
        assert_eq!((r.d0, r.f), (-4, 2));
        let r = ring_from_disc(9).unwrap();
        assert_eq!((r.d0, r.f), (1, 3));
        assert!(ring_from_disc(-5).is_err());
        assert!(ring_from_disc(0).is_err());
    }

    #[test]
    fn maximality_matches_conductor() {
        assert!(is_maximal_disc(-11));
        assert!(!is_maximal_disc(-44));
        assert!(is_maximal_disc(40));
        for d in -3000i64..3000 {
            if check_order_disc(d).is_err() {
                continue;
            }
            assert_eq!(is_maximal_disc(d), ring_from_disc(d).unwrap().f == 1, "{d}");
        }
    }

    #[test]
    fn unit_constants() {
        assert_eq!(u3_correction(-12).unwrap(), 3);
        assert_eq!(u3_correction(-3).unwrap(), 1);
        assert_eq!(u3_correction(-44).unwrap(), 1);
        assert_eq!(unit_cube_index(-44).unwrap(), 1);
        assert_eq!(unit_cube_index(-3).unwrap(), 3);
        assert_eq!(unit_cube_index(40).unwrap(), 3);
        assert_eq!(sigma_factor(229).unwrap(), 3);
        assert_eq!(sigma_factor(-44).unwrap(), 1);
        assert!(sigma_factor(16).is_err());
    }
}
