//! Small integer toolkit: gcd, square roots, a smallest-prime-factor sieve,
//! factorization, Möbius function and Kronecker symbols.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Numbers below this bound are factored by table lookup.
pub const SIEVE_LIMIT: u64 = 1 << 21;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

pub fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

pub fn gcd3_128(a: i128, b: i128, c: i128) -> i128 {
    gcd128(gcd128(a, b), c)
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).is_none_or(|v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

pub fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u128);
    r * r == n as u128
}

/// Floor of the real cube root.
pub fn icbrt(n: u128) -> u128 {
    let mut x = (n as f64).cbrt() as u128;
    while x.checked_pow(3).is_none_or(|v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_pow(3).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

pub fn floor_div(a: i128, b: i128) -> i128 {
    a.div_euclid(b) - if b < 0 && a.rem_euclid(b) != 0 { 1 } else { 0 }
}

pub fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

fn sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| {
        let n = SIEVE_LIMIT as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let s = spf[i];
            for &p in &primes {
                if p > s || (p as usize) * i > n {
                    break;
                }
                spf[p as usize * i] = p;
            }
        }
        Sieve { spf, primes }
    })
}

/// Primes up to `n` (inclusive), `n` at most the sieve limit.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    assert!(n <= SIEVE_LIMIT, "prime list requested beyond the sieve");
    sieve().primes.iter().take_while(|&&p| p as u64 <= n).map(|&p| p as u64).collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n <= SIEVE_LIMIT {
        return sieve().spf[n as usize] as u64 == n;
    }
    miller_rabin(n)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn miller_rabin(n: u64) -> bool {
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
///
/// Fails only when a cofactor above the square of the sieve limit is
/// composite, which would need a real factoring algorithm.
pub fn factor(n: u64) -> Result<Vec<(u64, u32)>> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.last_mut() {
        Some(last) if last.0 == p => last.1 += 1,
        _ => out.push((p, 1)),
    };
    if n == 0 {
        return Err(Error::Factorization(0));
    }
    let sv = sieve();
    let mut m = n;
    if m <= SIEVE_LIMIT {
        while m > 1 {
            let p = sv.spf[m as usize] as u64;
            push(p, &mut out);
            m /= p;
        }
        return Ok(out);
    }
    for &p in &sv.primes {
        let p = p as u64;
        if p * p > m {
            break;
        }
        while m.is_multiple_of(p) {
            push(p, &mut out);
            m /= p;
        }
        if m <= SIEVE_LIMIT {
            while m > 1 {
                let q = sv.spf[m as usize] as u64;
                push(q, &mut out);
                m /= q;
            }
            return Ok(out);
        }
    }
    if m > 1 {
        let lim = SIEVE_LIMIT as u128;
        if (m as u128) >= lim * lim && !miller_rabin(m) {
            return Err(Error::Factorization(n));
        }
        push(m, &mut out);
    }
    Ok(out)
}

/// Factorization for numbers known to be below the sieve limit.
pub fn factor_small(n: u64, out: &mut Vec<(u64, u32)>) {
    out.clear();
    let sv = sieve();
    let mut m = n;
    while m > 1 {
        let p = sv.spf[m as usize] as u64;
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        out.push((p, e));
    }
}

/// All positive divisors, unsorted.
pub fn divisors_from(fac: &[(u64, u32)], out: &mut Vec<u64>) {
    out.clear();
    out.push(1);
    for &(p, e) in fac {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let fac = factor(n)?;
    let mut out = Vec::new();
    divisors_from(&fac, &mut out);
    out.sort_unstable();
    Ok(out)
}

pub fn mobius(n: u64) -> Result<i32> {
    let fac = factor(n)?;
    if fac.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if fac.len() % 2 == 0 { 1 } else { -1 })
}

pub fn is_squarefree(n: u64) -> Result<bool> {
    Ok(factor(n)?.iter().all(|&(_, e)| e == 1))
}

pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n != 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Kronecker symbol (a / n) for n > 0.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return if a.unsigned_abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut a = a as i128;
    let mut result = 1;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if tz % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
        n >>= tz;
    }
    // Jacobi symbol (a / n) with n odd.
    let mut n = n as i128;
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}
