//! 3-torsion of (narrow) form class groups.
//!
//! Definite discriminants use reduced forms under Gauss composition.
//! Indefinite discriminants use ρ-cycles of reduced forms, one cycle per
//! proper class, so the group computed is the narrow class group. Its
//! 3-part agrees with that of the ordinary class group.

use crate::arith::{gcd, isqrt};
use crate::error::Result;
use crate::quad::{check_order_disc, Bqf};

fn v3(mut h: u64) -> u32 {
    let mut v = 0;
    while h.is_multiple_of(3) {
        h /= 3;
        v += 1;
    }
    v
}

/// Primitive reduced positive definite forms of discriminant d < 0.
pub fn reduced_definite_forms(d: i64) -> Vec<Bqf> {
    let n = -d;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= n {
        let mut b = -a + 1;
        if (b - d).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if (c > a || (c == a && b >= 0)) && gcd(gcd(a, b), c) == 1 {
                    out.push(Bqf::new(a, b, c));
                }
            }
            b += 2;
        }
        a += 1;
    }
    out.sort_unstable();
    out
}

/// Primitive reduced indefinite forms with A > 0, sorted.
pub fn reduced_indefinite_forms(d: i64) -> Vec<Bqf> {
    let s = isqrt(d as u128) as i64;
    let mut out = Vec::new();
    let mut b = if d % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let num = d - b * b;
        for a in ((s - b) / 2 + 1)..=((s + b) / 2) {
            if num % (4 * a) == 0 {
                let c = -num / (4 * a);
                if gcd(gcd(a, b), c) == 1 {
                    out.push(Bqf::new(a, b, c));
                }
            }
        }
        b += 2;
    }
    out.sort_unstable();
    out
}

/// Class number and 3-torsion count from the sorted primitive reduced
/// forms of a definite discriminant.
pub fn definite_h_cl3(d: i64, forms: &[Bqf]) -> (u64, u64) {
    let h = forms.len() as u64;
    match v3(h) {
        0 => (h, 1),
        1 => (h, 3),
        _ => {
            let id = Bqf::identity(d).reduce_definite();
            let count =
                forms.iter().filter(|x| x.compose(&x.square().reduce_definite()).reduce_definite() == id).count();
            (h, count as u64)
        }
    }
}

/// Narrow class number and 3-torsion count from the sorted primitive
/// reduced indefinite forms with A > 0. Classes are the ρ²-orbits.
pub fn indefinite_h_cl3(d: i64, forms: &[Bqf]) -> (u64, u64) {
    let s = isqrt(d as u128) as i64;
    let index = |f: &Bqf| forms.binary_search(f).expect("reduced form of the same discriminant");
    let mut cycle = vec![u32::MAX; forms.len()];
    let mut reps = Vec::new();
    for start in 0..forms.len() {
        if cycle[start] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(forms[start]);
        let mut i = start;
        loop {
            cycle[i] = id;
            let g = forms[i].rho(s).rho(s);
            i = index(&g);
            if i == start {
                break;
            }
        }
    }
    let h = reps.len() as u64;
    let class_of = |f: Bqf| -> u32 {
        let mut g = f.reduce_indefinite(s);
        if g.a < 0 {
            g = g.rho(s);
        }
        cycle[index(&g)]
    };
    match v3(h) {
        0 => (h, 1),
        1 => (h, 3),
        _ => {
            let id = class_of(Bqf::identity(d));
            let count = reps
                .iter()
                .filter(|x| {
                    let sq = x.square().reduce_indefinite(s);
                    class_of(x.compose(&sq)) == id
                })
                .count();
            (h, count as u64)
        }
    }
}

/// Class number (narrow for D > 0).
pub fn class_number(d: i64) -> Result<u64> {
    check_order_disc(d)?;
    Ok(if d < 0 { reduced_definite_forms(d).len() as u64 } else { indefinite_h_cl3(d, &reduced_indefinite_forms(d)).0 })
}

pub fn cl3_count(d: i64) -> Result<u64> {
    check_order_disc(d)?;
    Ok(if d < 0 {
        definite_h_cl3(d, &reduced_definite_forms(d)).1
    } else {
        indefinite_h_cl3(d, &reduced_indefinite_forms(d)).1
    })
}

/// Class numbers and 3-torsion counts for every order discriminant with
/// 0 < ±D < x, indexed by |D| (zero entries for invalid or square |D|).
#[derive(Clone, Debug)]
pub struct Cl3Table {
    pub x: u64,
    pub negative: bool,
    pub h: Vec<u32>,
    pub cl3: Vec<u32>,
}

impl Cl3Table {
    pub fn get(&self, d: i64) -> Option<(u32, u32)> {
        let n = d.unsigned_abs() as usize;
        if (d < 0) != self.negative || n >= self.h.len() || self.h[n] == 0 {
            return None;
        }
        Some((self.h[n], self.cl3[n]))
    }
}

const WINDOW: u64 = 1 << 15;

/// Batch computation, windowed over |D| so memory stays bounded.
pub fn cl3_table(x: u64, negative: bool) -> Cl3Table {
    let len = x as usize;
    let mut h = vec![0u32; len.max(1)];
    let mut cl3 = vec![0u32; len.max(1)];
    let mut lo = 1u64;
    while lo < x {
        let hi = (lo + WINDOW).min(x);
        if negative {
            definite_window(lo, hi, &mut h, &mut cl3);
        } else {
            indefinite_window(lo, hi, &mut h, &mut cl3);
        }
        lo = hi;
    }
    Cl3Table { x, negative, h, cl3 }
}

/// Visits every primitive reduced definite form with lo ≤ −D < hi.
fn for_each_definite(lo: u64, hi: u64, mut visit: impl FnMut(u64, i64, i64, i64)) {
    let (lo, hi) = (lo as i64, hi as i64);
    let mut a = 1i64;
    while 3 * a * a < hi {
        for b in (-a + 1)..=a {
            let g = gcd(a, b);
            let cmin = if b < 0 { a + 1 } else { a };
            let c_lo = ((lo + b * b) + 4 * a - 1) / (4 * a);
            let c_hi = (hi - 1 + b * b) / (4 * a);
            for c in c_lo.max(cmin)..=c_hi {
                if g == 1 || gcd(g, c) == 1 {
                    visit((4 * a * c - b * b) as u64, a, b, c);
                }
            }
        }
        a += 1;
    }
}

fn definite_window(lo: u64, hi: u64, h: &mut [u32], cl3: &mut [u32]) {
    for_each_definite(lo, hi, |n, _, _, _| h[n as usize] += 1);
    let w = (hi - lo) as usize;
    let mut offsets = vec![0usize; w + 1];
    for n in lo..hi {
        let hn = h[n as usize] as u64;
        if hn > 0 {
            let v = v3(hn);
            cl3[n as usize] = match v {
                0 => 1,
                1 => 3,
                _ => 0,
            };
        }
    }
    for n in lo..hi {
        let i = (n - lo) as usize;
        let need = cl3[n as usize] == 0 && h[n as usize] > 0;
        offsets[i + 1] = offsets[i] + if need { h[n as usize] as usize } else { 0 };
    }
    if offsets[w] == 0 {
        return;
    }
    let mut store = vec![Bqf::new(0, 0, 0); offsets[w]];
    let mut fill = offsets.clone();
    for_each_definite(lo, hi, |n, a, b, c| {
        let i = (n - lo) as usize;
        if offsets[i + 1] > offsets[i] {
            store[fill[i]] = Bqf::new(a, b, c);
            fill[i] += 1;
        }
    });
    for i in 0..w {
        if offsets[i + 1] > offsets[i] {
            let forms = &mut store[offsets[i]..offsets[i + 1]];
            forms.sort_unstable();
            let d = -((lo as usize + i) as i64);
            cl3[lo as usize + i] = definite_h_cl3(d, forms).1 as u32;
        }
    }
}

/// Visits every primitive reduced indefinite form with A > 0 and
/// lo ≤ D < hi. Such forms have D = B² + 4A|C| inside
/// [max(B²+1, (2A−B)²), (2A+B)²).
fn for_each_indefinite(lo: u64, hi: u64, mut visit: impl FnMut(u64, i64, i64, i64)) {
    let (lo, hi) = (lo as i64, hi as i64);
    let smax = isqrt((hi - 1).max(0) as u128) as i64;
    for b in 1..=smax {
        let mut a = 1i64;
        loop {
            let top = (2 * a + b) * (2 * a + b); // D < top
            let bottom = if 2 * a > b { (2 * a - b) * (2 * a - b) } else { 0 }.max(b * b + 1);
            if bottom >= hi {
                break;
            }
            let dlo = bottom.max(lo);
            let dhi = top.min(hi); // exclusive
            if dlo < dhi {
                let g = gcd(a, b);
                let k_lo = (dlo - b * b + 4 * a - 1) / (4 * a);
                let k_hi = (dhi - 1 - b * b) / (4 * a);
                for k in k_lo.max(1)..=k_hi {
                    if g == 1 || gcd(g, k) == 1 {
                        visit((b * b + 4 * a * k) as u64, a, b, -k);
                    }
                }
            }
            a += 1;
        }
    }
}

fn indefinite_window(lo: u64, hi: u64, h: &mut [u32], cl3: &mut [u32]) {
    let w = (hi - lo) as usize;
    let mut counts = vec![0usize; w];
    for_each_indefinite(lo, hi, |n, _, _, _| counts[(n - lo) as usize] += 1);
    let mut offsets = vec![0usize; w + 1];
    for i in 0..w {
        offsets[i + 1] = offsets[i] + counts[i];
    }
    let mut store = vec![Bqf::new(0, 0, 0); offsets[w]];
    let mut fill = offsets.clone();
    for_each_indefinite(lo, hi, |n, a, b, c| {
        let i = (n - lo) as usize;
        store[fill[i]] = Bqf::new(a, b, c);
        fill[i] += 1;
    });
    for i in 0..w {
        let n = lo as usize + i;
        if offsets[i + 1] == offsets[i] || crate::arith::is_square(n as i128) {
            continue;
        }
        let forms = &mut store[offsets[i]..offsets[i + 1]];
        forms.sort_unstable();
        let (hn, c) = indefinite_h_cl3(n as i64, forms);
        h[n] = hn as u32;
        cl3[n] = c as u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(cl3_count(-23).unwrap(), 3);
        assert_eq!(cl3_count(-44).unwrap(), 3);
        assert_eq!(cl3_count(-4).unwrap(), 1);
        assert_eq!(cl3_count(-3).unwrap(), 1);
        assert_eq!(cl3_count(229).unwrap(), 3);
        assert_eq!(class_number(-23).unwrap(), 3);
        assert_eq!(class_number(-4).unwrap(), 1);
        assert_eq!(class_number(5).unwrap(), 1);
        // Q(√3): narrow class number 2
        assert_eq!(class_number(12).unwrap(), 2);
        // Q(√34): class number 2, narrow class number 4
        assert_eq!(class_number(136).unwrap(), 4);
        // 3-rank two: h(−3299) = 27, h(−4027) = 9 with C3 × C3
        assert_eq!(cl3_count(-3299).unwrap(), 9);
        assert_eq!(cl3_count(-4027).unwrap(), 9);
        assert!(cl3_count(16).is_err());
    }

    /// Counts 3-torsion directly, with no class-number shortcut.
    fn cl3_full(d: i64) -> u64 {
        if d < 0 {
            let forms = reduced_definite_forms(d);
            let id = Bqf::identity(d).reduce_definite();
            forms.iter().filter(|x| x.compose(&x.square().reduce_definite()).reduce_definite() == id).count() as u64
        } else {
            let s = isqrt(d as u128) as i64;
            let forms = reduced_indefinite_forms(d);
            let canon = |f: Bqf| {
                let start = f.reduce_indefinite(s);
                let mut best = start;
                let mut g = start.rho(s);
                while g != start {
                    best = best.min(g);
                    g = g.rho(s);
                }
                best
            };
            let id = canon(Bqf::identity(d));
            let mut reps: Vec<Bqf> = forms.iter().map(|&f| canon(f)).collect();
            reps.sort_unstable();
            reps.dedup();
            reps.iter().filter(|x| canon(x.compose(&x.square())) == id).count() as u64
        }
    }

    #[test]
    fn shortcut_agrees_with_full_count() {
        for d in (-1500i64..1500).filter(|&d| check_order_disc(d).is_ok()) {
            let c = cl3_count(d).unwrap();
            assert_eq!(c, cl3_full(d), "D = {d}");
            assert!(matches!(c, 1 | 3 | 9 | 27), "D = {d}");
        }
    }

    #[test]
    fn batch_matches_single() {
        for negative in [true, false] {
            let x = 70_000u64;
            let t = cl3_table(x, negative);
            for n in (1..x).step_by(7) {
                let d = if negative { -(n as i64) } else { n as i64 };
                match check_order_disc(d) {
                    Ok(()) => {
                        let (h, c) = t.get(d).expect("entry");
                        assert_eq!(h as u64, class_number(d).unwrap(), "D = {d}");
                        assert_eq!(c as u64, cl3_count(d).unwrap(), "D = {d}");
                    }
                    Err(_) => assert!(t.get(d).is_none(), "D = {d}"),
                }
            }
        }
    }
}
