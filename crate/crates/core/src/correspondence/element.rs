use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::quad::QuadRing;

/// (u + vτ)/w in O ⊗ Q, with τ² = ετ + n. Always normalized: w > 0 and
/// gcd(u, v, w) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElement {
    pub u: BigInt,
    pub v: BigInt,
    pub w: BigInt,
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.w.is_one() {
            write!(f, "{} + {}τ", self.u, self.v)
        } else {
            write!(f, "({} + {}τ)/{}", self.u, self.v, self.w)
        }
    }
}

/// The multiplication constants (ε, n) of a ring.
#[derive(Clone, Debug)]
pub struct Mult {
    pub eps: BigInt,
    pub n: BigInt,
}

impl From<&QuadRing> for Mult {
    fn from(r: &QuadRing) -> Self {
        Mult { eps: BigInt::from(r.eps), n: BigInt::from(r.n()) }
    }
}

impl QuadElement {
    pub fn new(u: BigInt, v: BigInt, w: BigInt) -> Self {
        assert!(!w.is_zero(), "zero denominator");
        let g = u.gcd(&v).gcd(&w);
        let (mut u, mut v, mut w) = (u / &g, v / &g, w / &g);
        if w.is_negative() {
            u = -u;
            v = -v;
            w = -w;
        }
        QuadElement { u, v, w }
    }

    pub fn from_ints(u: i64, v: i64) -> Self {
        QuadElement::new(BigInt::from(u), BigInt::from(v), BigInt::one())
    }

    pub fn from_rationals(x: &BigRational, y: &BigRational) -> Self {
        let w = x.denom().lcm(y.denom());
        let u = x.numer() * (&w / x.denom());
        let v = y.numer() * (&w / y.denom());
        QuadElement::new(u, v, w)
    }

    pub fn zero() -> Self {
        QuadElement::from_ints(0, 0)
    }

    pub fn one() -> Self {
        QuadElement::from_ints(1, 0)
    }

    pub fn tau() -> Self {
        QuadElement::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.w.is_one()
    }

    /// Rational coordinates in the basis (1, τ).
    pub fn coords(&self) -> (BigRational, BigRational) {
        (BigRational::new(self.u.clone(), self.w.clone()), BigRational::new(self.v.clone(), self.w.clone()))
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadElement::new(&self.u * &o.w + &o.u * &self.w, &self.v * &o.w + &o.v * &self.w, &self.w * &o.w)
    }

    pub fn neg(&self) -> Self {
        QuadElement { u: -&self.u, v: -&self.v, w: self.w.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QuadElement::new(&self.u * k.numer(), &self.v * k.numer(), &self.w * k.denom())
    }

    pub fn mul(&self, o: &Self, m: &Mult) -> Self {
        let vv = &self.v * &o.v;
        let u = &self.u * &o.u + &m.n * &vv;
        let v = &self.u * &o.v + &o.u * &self.v + &m.eps * &vv;
        QuadElement::new(u, v, &self.w * &o.w)
    }

    pub fn pow(&self, e: u32, m: &Mult) -> Self {
        let mut r = QuadElement::one();
        for _ in 0..e {
            r = r.mul(self, m);
        }
        r
    }

    /// Image under τ ↦ ε − τ.
    pub fn conj(&self, m: &Mult) -> Self {
        QuadElement::new(&self.u + &m.eps * &self.v, -&self.v, self.w.clone())
    }

    pub fn norm(&self, m: &Mult) -> BigRational {
        let num = &self.u * &self.u + &m.eps * &self.u * &self.v - &m.n * &self.v * &self.v;
        BigRational::new(num, &self.w * &self.w)
    }

    pub fn inverse(&self, m: &Mult) -> Option<Self> {
        let nm = self.norm(m);
        if nm.is_zero() {
            return None;
        }
        Some(self.conj(m).scale(&nm.recip()))
    }

    pub fn div(&self, o: &Self, m: &Mult) -> Option<Self> {
        Some(self.mul(&o.inverse(m)?, m))
    }
}
