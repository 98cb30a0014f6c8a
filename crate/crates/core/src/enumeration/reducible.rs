//! Reducible forms through their representatives with a = 0.

use serde::{Deserialize, Serialize};

use super::Sign;
use crate::arith::{floor_div, gcd, is_square, isqrt, mobius};
use crate::error::{Error, Result};
use crate::quad::check_disc;

/// Forms counted by an a = 0 loop, square discriminants kept apart.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct A0Count {
    pub forms: i64,
    pub square_disc: i64,
}

/// Forms 3bx²y + 3cxy² + dy³ with b > 0, n | gcd(b, c), −b < c ≤ b, a
/// reduced covariant (neg) or quadratic factor (pos) and 0 < ±disc < X.
pub fn count_reducible_a0(x: u64, sign: Sign, n: u64) -> Result<A0Count> {
    if n == 0 {
        return Err(Error::InvalidTriple("n must be positive".into()));
    }
    let x = x as i128;
    let n = n as i128;
    let mut out = A0Count::default();
    let mut b1: i128 = 1;
    loop {
        let b = n * b1;
        let in_region = match sign {
            Sign::Neg => 3 * b.pow(4) < 4 * x,
            Sign::Pos => 9 * b.pow(4) < 32 * x,
        };
        if !in_region {
            break;
        }
        for c1 in (1 - b1)..=b1 {
            let c = n * c1;
            match sign {
                Sign::Neg => {
                    // 3c²/(4b) − X/(4b³) < d ≤ c²/b − b
                    let lo = floor_div(3 * b * b * c * c - x, 4 * b * b * b) + 1;
                    let hi = floor_div(c * c - b * b, b);
                    if hi >= lo {
                        out.forms += (hi - lo + 1) as i64;
                    }
                }
                Sign::Pos => {
                    // 3b < d < X/(4b³) + 3c²/(4b)
                    let lo = 3 * b + 1;
                    let hi = floor_div(x - 1 + 3 * b * b * c * c, 4 * b * b * b);
                    let mut d = lo;
                    while d <= hi {
                        let core = 4 * b * d - 3 * c * c;
                        if is_square(core) {
                            out.square_disc += 1;
                        } else {
                            out.forms += 1;
                        }
                        d += 1;
                    }
                }
            }
        }
        b1 += 1;
    }
    Ok(out)
}

/// Σ_n μ(n)·count_reducible_a0(X, sign, n).
pub fn count_proj_reducible(x: u64, sign: Sign) -> Result<A0Count> {
    let mut out = A0Count::default();
    let mut n = 1u64;
    loop {
        let c = count_reducible_a0(x, sign, n)?;
        if c == A0Count::default() && n > 1 {
            // b ≥ n leaves the region from here on
            let b = n as i128;
            let outside = match sign {
                Sign::Neg => 3 * b.pow(4) >= 4 * x as i128,
                Sign::Pos => 9 * b.pow(4) >= 32 * x as i128,
            };
            if outside {
                break;
            }
        }
        let mu = mobius(n)? as i64;
        out.forms += mu * c.forms;
        out.square_disc += mu * c.square_disc;
        n += 1;
    }
    Ok(out)
}

/// 3·|Stab|/#roots for a projective reducible class of discriminant d.
fn weight3(d: i64) -> i64 {
    let stab = if d == -3 { 3 } else { 1 };
    let roots = if is_square(-3 * d as i128) { 3 } else { 1 };
    3 * stab / roots
}

/// Exact number of projective reducible classes of discriminant `d`: every
/// pair (class, rational root) has a unique representative 3bx²y + 3cxy² +
/// dy³ with b > 0 and −b < c ≤ b, so the a = 0 forms with gcd(b, c) = 1,
/// each weighted by |Stab|/#roots, add up to the class count.
pub fn proj_reducible_exact(d: i64) -> Result<u64> {
    check_disc(d)?;
    let m = d.unsigned_abs() as i128;
    let di = d as i128;
    let w = weight3(d);
    let mut total: i64 = 0;
    let bmax = isqrt(m as u128) as i128;
    for n in 1..=bmax {
        let mu = mobius(n as u64)? as i64;
        if mu == 0 {
            continue;
        }
        let mut b = n;
        while b <= bmax {
            if di % (b * b) == 0 {
                let core = di / (b * b);
                // 4bd = core + 3c²
                let mut c = n * floor_div(-b, n) + n;
                while c <= b {
                    if c > -b && (core + 3 * c * c) % (4 * b) == 0 {
                        total += mu * w;
                    }
                    c += n;
                }
            }
            b += n;
        }
    }
    if total % 3 != 0 || total < 0 {
        return Err(Error::Internal(format!("weighted a = 0 count {total} at D = {d} is not a multiple of 3")));
    }
    Ok((total / 3) as u64)
}

/// Exact projective reducible class totals over 0 < ±D < X, plus per-D
/// values for |D| ≤ `per_d` (indexed by |D|). Returns (non-square total,
/// square-discriminant total, table).
pub fn proj_reducible_exact_total(x: u64, sign: Sign, per_d: u64) -> Result<(u64, u64, Vec<u64>)> {
    let xi = x as i128;
    let per_d = per_d.min(x);
    let mut table3 = vec![0i64; per_d as usize + 1];
    let (mut sum3, mut sq3) = (0i64, 0i64);
    let mut b: i128 = 1;
    while b * b < xi {
        for c in (1 - b)..=b {
            if gcd(b as i64, c as i64) != 1 {
                continue;
            }
            let (lo, hi) = match sign {
                // −X < 4b³d − 3b²c² < 0
                Sign::Neg => (floor_div(3 * b * b * c * c - xi, 4 * b * b * b) + 1, floor_div(3 * c * c - 1, 4 * b)),
                // 0 < 4b³d − 3b²c² < X
                Sign::Pos => (floor_div(3 * c * c, 4 * b) + 1, floor_div(xi - 1 + 3 * b * b * c * c, 4 * b * b * b)),
            };
            let mut d = lo;
            while d <= hi {
                let disc = 4 * b * b * b * d - 3 * b * b * c * c;
                let disc64 = disc as i64;
                let w = weight3(disc64);
                if is_square(disc) {
                    sq3 += w;
                } else {
                    sum3 += w;
                }
                let m = disc.unsigned_abs() as u64;
                if m <= per_d {
                    table3[m as usize] += w;
                }
                d += 1;
            }
        }
        b += 1;
    }
    let third = |v: i64| -> Result<u64> {
        if v % 3 != 0 {
            return Err(Error::Internal(format!("weighted a = 0 total {v} is not a multiple of 3")));
        }
        Ok((v / 3) as u64)
    };
    let table = table3.into_iter().map(third).collect::<Result<Vec<_>>>()?;
    Ok((third(sum3)?, third(sq3)?, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(proj_reducible_exact(-3).unwrap(), 1);
        assert_eq!(proj_reducible_exact(-44).unwrap(), 3);
        assert_eq!(proj_reducible_exact(-23).unwrap(), 1);
        assert_eq!(proj_reducible_exact(-12).unwrap(), 1);
    }

    #[test]
    fn table_matches_single() {
        for sign in [Sign::Neg, Sign::Pos] {
            let (_, _, t) = proj_reducible_exact_total(800, sign, 799).unwrap();
            for m in 1..800i64 {
                let d = m * sign.unit();
                if check_disc(d).is_ok() {
                    assert_eq!(t[m as usize], proj_reducible_exact(d).unwrap(), "D = {d}");
                } else {
                    assert_eq!(t[m as usize], 0);
                }
            }
        }
    }

    #[test]
    fn moebius_over_n() {
        let x = 20_000;
        for sign in [Sign::Neg, Sign::Pos] {
            let all = count_reducible_a0(x, sign, 1).unwrap();
            let proj = count_proj_reducible(x, sign).unwrap();
            assert!(proj.forms < all.forms);
            assert!(proj.forms > 0);
        }
    }
}
