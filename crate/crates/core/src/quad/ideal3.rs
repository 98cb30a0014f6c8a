//! |I₃(O)| as the 3-torsion of (O_k/fO_k)^× / (Z/fZ)^×.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::arith::{factor, gcd};
use crate::error::Result;
use crate::quad::{check_order_disc, ring_from_disc};

/// 3-torsion count of (O_k/m)^× / (Z/m)^× with O_k = Z[ω], ω² = eps·ω + n,
/// by direct enumeration of residue pairs.
fn torsion_mod(m: u64, eps: u64, n: u64) -> u64 {
    let m = m as u128;
    let (eps, n) = (eps as u128, n as u128 % m);
    let mul = |(u1, v1): (u128, u128), (u2, v2): (u128, u128)| {
        let vv = v1 * v2 % m;
        ((u1 * u2 + n * vv) % m, (u1 * v2 + u2 * v1 + eps * vv) % m)
    };
    let mut count = 0u64;
    let mut units_z = 0u64;
    for u in 0..m {
        if gcd(u as i64, m as i64) == 1 {
            units_z += 1;
        }
        for v in 0..m {
            // norm u² + eps·uv − n·v²
            let norm = (u * u + eps * u * v % m + m * m - n * v % m * v % m) % m;
            if gcd(norm as i64, m as i64) != 1 {
                continue;
            }
            let x = (u, v);
            let cube = mul(mul(x, x), x);
            if cube.1 == 0 {
                count += 1;
            }
        }
    }
    count / units_z
}

type Memo = Mutex<HashMap<(u64, u64, u64), u64>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn local_torsion(pe: u64, eps: u64, n: i64) -> u64 {
    let n = n.rem_euclid(pe as i64) as u64;
    let key = (pe, eps, n);
    if let Some(&v) = memo().lock().expect("memo lock").get(&key) {
        return v;
    }
    let v = torsion_mod(pe, eps, n);
    memo().lock().expect("memo lock").insert(key, v);
    v
}

fn ring_data(d: i64) -> Result<(u64, u64, i64)> {
    check_order_disc(d)?;
    let r = ring_from_disc(d)?;
    let eps = r.d0.rem_euclid(4) as u64;
    let n = (r.d0 - eps as i64) / 4;
    Ok((r.f, eps, n))
}

/// Product of the local factors over the prime powers exactly dividing f.
pub fn ideal3_count(d: i64) -> Result<u64> {
    let (f, eps, n) = ring_data(d)?;
    let mut total = 1;
    for (p, e) in factor(f)? {
        total *= local_torsion(p.pow(e), eps, n);
    }
    Ok(total)
}

/// The same quantity by enumerating O_k/fO_k as a whole.
pub fn ideal3_count_direct(d: i64) -> Result<u64> {
    let (f, eps, n) = ring_data(d)?;
    Ok(if f == 1 { 1 } else { torsion_mod(f, eps, n.rem_euclid(f as i64) as u64) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::is_maximal_disc;

    #[test]
    fn examples() {
        assert_eq!(ideal3_count(-23).unwrap(), 1);
        assert_eq!(ideal3_count(-44).unwrap(), 3);
        assert_eq!(ideal3_count(-99).unwrap(), 1);
        assert_eq!(ideal3_count(-12).unwrap(), 3);
        assert_eq!(ideal3_count(-27).unwrap(), 3);
    }

    #[test]
    fn multiplicative_and_maximal() {
        for d in (-6000i64..6000).filter(|&d| check_order_disc(d).is_ok()) {
            let i3 = ideal3_count(d).unwrap();
            assert_eq!(i3, ideal3_count_direct(d).unwrap(), "D = {d}");
            assert!(matches!(i3, 1 | 3 | 9 | 27), "D = {d}");
            if is_maximal_disc(d) {
                assert_eq!(i3, 1);
            }
        }
    }
}
