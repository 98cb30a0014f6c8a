//! Binary quadratic forms: definite and indefinite reduction, composition.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{ext_gcd, gcd};

/// Ax² + Bxy + Cy².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bqf {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for Bqf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl Bqf {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Bqf { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    /// The principal form of discriminant d.
    pub fn identity(d: i64) -> Bqf {
        let e = d.rem_euclid(4);
        Bqf { a: 1, b: e, c: (e - d) / 4 }
    }

    pub fn inverse(&self) -> Bqf {
        Bqf { a: self.a, b: -self.b, c: self.c }
    }

    fn with_b(a: i64, b: i64, d: i64) -> Bqf {
        let num = b as i128 * b as i128 - d as i128;
        debug_assert_eq!(num % (4 * a as i128), 0);
        Bqf { a, b, c: (num / (4 * a as i128)) as i64 }
    }

    /// −A < B ≤ A < C or 0 ≤ B ≤ A = C.
    pub fn is_reduced_definite(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        (-a < b && b <= a && a < c) || (0 <= b && b <= a && a == c)
    }

    /// Gauss reduction of a positive definite form.
    pub fn reduce_definite(&self) -> Bqf {
        debug_assert!(self.disc() < 0 && self.a > 0);
        let d = self.disc();
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            if !(-a < b && b <= a) {
                let k = (a - b).div_euclid(2 * a);
                let nb = b + 2 * k * a;
                c = (nb * nb - d as i128) / (4 * a);
                b = nb;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        Bqf { a: a as i64, b: b as i64, c: c as i64 }
    }

    /// Composition of two primitive forms of the same discriminant, with
    /// nonzero first coefficients. The result is not reduced.
    pub fn compose(&self, other: &Bqf) -> Bqf {
        let d = self.disc();
        debug_assert_eq!(d, other.disc());
        let (f1, f2) = if self.a.abs() > other.a.abs() { (other, self) } else { (self, other) };
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (dd, y1) = if a2 % a1 == 0 {
            (a1.abs(), 0)
        } else {
            let (g, u, _v) = ext_gcd(a2, a1);
            (g, u)
        };
        let (d1, x2, y2) = if s % dd == 0 {
            (dd, 0, -1)
        } else {
            let (g, x, y) = ext_gcd(s, dd);
            (g, x, -y)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1.abs());
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        Bqf::with_b(a3 as i64, b3 as i64, d)
    }

    pub fn square(&self) -> Bqf {
        self.compose(self)
    }

    /// |√D − 2|A|| < B < √D, with s = ⌊√D⌋.
    pub fn is_reduced_indefinite(&self, s: i64) -> bool {
        let (a, b) = (self.a.abs(), self.b);
        b > 0 && b <= s && 2 * a > s - b && 2 * a <= s + b
    }

    /// One reduction step (A, B, C) ↦ (C, B', ·) with B' ≡ −B mod 2C.
    pub fn rho(&self, s: i64) -> Bqf {
        let d = self.disc();
        let c = self.c;
        let ac = c.abs();
        let m = 2 * ac;
        let nb = if ac > s {
            let mut r = (-self.b).rem_euclid(m);
            if r > ac {
                r -= m;
            }
            r
        } else {
            s - (s + self.b).rem_euclid(m)
        };
        Bqf::with_b(c, nb, d)
    }

    pub fn reduce_indefinite(&self, s: i64) -> Bqf {
        let mut f = *self;
        while !f.is_reduced_indefinite(s) {
            f = f.rho(s);
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::isqrt;

    fn reduced_forms(d: i64) -> Vec<Bqf> {
        let mut out = Vec::new();
        let mut a = 1;
        while 3 * a * a <= -d {
            for b in -a..=a {
                let num = b * b - d;
                if num % (4 * a) == 0 {
                    let f = Bqf::new(a, b, num / (4 * a));
                    if f.is_reduced_definite() && f.is_primitive() {
                        out.push(f);
                    }
                }
            }
            a += 1;
        }
        out
    }

    #[test]
    fn class_numbers() {
        assert_eq!(reduced_forms(-23).len(), 3);
        assert_eq!(reduced_forms(-44).len(), 3);
        assert_eq!(reduced_forms(-4).len(), 1);
        assert_eq!(reduced_forms(-23), vec![Bqf::new(1, 1, 6), Bqf::new(2, -1, 3), Bqf::new(2, 1, 3)]);
    }

    #[test]
    fn definite_group_laws() {
        for d in [-23i64, -44, -47, -71, -243, -356, -1004, -3299, -4027] {
            let forms = reduced_forms(d);
            let id = Bqf::identity(d).reduce_definite();
            for x in &forms {
                assert_eq!(x.compose(&id).reduce_definite(), *x);
                assert_eq!(x.compose(&x.inverse()).reduce_definite(), id);
                for y in &forms {
                    let xy = x.compose(y).reduce_definite();
                    assert_eq!(xy.disc(), d);
                    assert!(forms.contains(&xy));
                    assert_eq!(xy, y.compose(x).reduce_definite());
                    for z in forms.iter().take(5) {
                        let l = xy.compose(z).reduce_definite();
                        let r = x.compose(&y.compose(z).reduce_definite()).reduce_definite();
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn indefinite_reduction_cycles() {
        for d in [5i64, 12, 40, 229, 316, 1957] {
            let s = isqrt(d as u128) as i64;
            let f = Bqf::identity(d).reduce_indefinite(s);
            assert!(f.is_reduced_indefinite(s));
            let mut g = f.rho(s);
            let mut steps = 1;
            while g != f {
                assert!(g.is_reduced_indefinite(s));
                assert_eq!(g.disc(), d);
                g = g.rho(s);
                steps += 1;
                assert!(steps < 1000);
            }
            assert_eq!(steps % 2, 0);
        }
    }
}
