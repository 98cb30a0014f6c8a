use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::element::{Mult, QuadElement};
use crate::error::{Error, Result};
use crate::quad::{ring_from_disc, QuadRing};

/// A rank-2 lattice Zα + Zβ in O ⊗ Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadIdeal {
    pub ring: QuadRing,
    pub alpha: QuadElement,
    pub beta: QuadElement,
}

/// Hermite basis (h, 0), (k, m) of the integer lattice spanned by `vecs`,
/// with h, m > 0 and 0 ≤ k < h. None if the rank is below two.
fn hnf2(vecs: &[(BigInt, BigInt)]) -> Option<(BigInt, BigInt, BigInt)> {
    let mut h = BigInt::zero();
    let mut beta: Option<(BigInt, BigInt)> = None;
    for (x, y) in vecs {
        if y.is_zero() {
            h = h.gcd(x);
            continue;
        }
        match beta.take() {
            None => beta = Some((x.clone(), y.clone())),
            Some((bx, by)) => {
                let e = by.extended_gcd(y);
                let g = e.gcd.clone();
                let nb = (&e.x * &bx + &e.y * x, &e.x * &by + &e.y * y);
                // a combination with zero second coordinate
                let wx = (y / &g) * &bx - (&by / &g) * x;
                h = h.gcd(&wx);
                beta = Some(nb);
            }
        }
    }
    let (mut k, mut m) = beta?;
    if h.is_zero() {
        return None;
    }
    if m.is_negative() {
        k = -k;
        m = -m;
    }
    let k = k.mod_floor(&h);
    Some((h, k, m))
}

impl QuadIdeal {
    pub fn new(ring: QuadRing, alpha: QuadElement, beta: QuadElement) -> Result<Self> {
        let i = QuadIdeal { ring, alpha, beta };
        if i.orientation_det().is_zero() {
            return Err(Error::InvalidTriple("ideal basis is linearly dependent".into()));
        }
        Ok(i)
    }

    /// O itself with basis (1, τ).
    pub fn unit(ring: QuadRing) -> Self {
        QuadIdeal { ring, alpha: QuadElement::one(), beta: QuadElement::tau() }
    }

    pub fn mult(&self) -> Mult {
        Mult::from(&self.ring)
    }

    /// Determinant of the change of basis from (1, τ) to (α, β).
    pub fn orientation_det(&self) -> BigRational {
        let (au, av) = self.alpha.coords();
        let (bu, bv) = self.beta.coords();
        au * bv - av * bu
    }

    pub fn is_positively_oriented(&self) -> bool {
        self.orientation_det().is_positive()
    }

    pub fn norm(&self) -> BigRational {
        self.orientation_det().abs()
    }

    /// Coordinates of x in the basis (α, β).
    pub fn coords_of(&self, x: &QuadElement) -> (BigRational, BigRational) {
        let (au, av) = self.alpha.coords();
        let (bu, bv) = self.beta.coords();
        let (xu, xv) = x.coords();
        let det = &au * &bv - &av * &bu;
        let p = (&xu * &bv - &xv * &bu) / &det;
        let q = (&au * &xv - &av * &xu) / &det;
        (p, q)
    }

    pub fn contains(&self, x: &QuadElement) -> bool {
        let (p, q) = self.coords_of(x);
        p.is_integer() && q.is_integer()
    }

    /// Matrix of multiplication by τ: τα = m00·α + m01·β, τβ = m10·α + m11·β.
    pub fn tau_action(&self) -> [[BigRational; 2]; 2] {
        let m = self.mult();
        let t = QuadElement::tau();
        let (p0, q0) = self.coords_of(&t.mul(&self.alpha, &m));
        let (p1, q1) = self.coords_of(&t.mul(&self.beta, &m));
        [[p0, q0], [p1, q1]]
    }

    /// Closed under multiplication by O.
    pub fn is_ideal(&self) -> bool {
        self.tau_action().iter().flatten().all(|x| x.is_integer())
    }

    pub fn scale(&self, k: &QuadElement) -> QuadIdeal {
        let m = self.mult();
        QuadIdeal { ring: self.ring, alpha: self.alpha.mul(k, &m), beta: self.beta.mul(k, &m) }
    }

    /// Lattice generated by the given elements, in Hermite form.
    pub fn from_generators(ring: QuadRing, gens: &[QuadElement]) -> Result<QuadIdeal> {
        let mut den = BigInt::one();
        for g in gens {
            den = den.lcm(&g.w);
        }
        let vecs: Vec<(BigInt, BigInt)> = gens.iter().map(|g| (&g.u * (&den / &g.w), &g.v * (&den / &g.w))).collect();
        let (h, k, m) = hnf2(&vecs).ok_or_else(|| Error::InvalidTriple("generators do not span a lattice".into()))?;
        Ok(QuadIdeal {
            ring,
            alpha: QuadElement::new(h, BigInt::zero(), den.clone()),
            beta: QuadElement::new(k, m, den),
        })
    }

    /// Canonical positively oriented Hermite basis.
    pub fn hnf(&self) -> QuadIdeal {
        QuadIdeal::from_generators(self.ring, &[self.alpha.clone(), self.beta.clone()]).expect("basis spans a lattice")
    }

    pub fn mul(&self, o: &QuadIdeal) -> Result<QuadIdeal> {
        let m = self.mult();
        let gens = [
            self.alpha.mul(&o.alpha, &m),
            self.alpha.mul(&o.beta, &m),
            self.beta.mul(&o.alpha, &m),
            self.beta.mul(&o.beta, &m),
        ];
        QuadIdeal::from_generators(self.ring, &gens)
    }
}

/// The multiplier ring {x : xI ⊆ I}. If τ acts on I by the integer
/// matrix M, it is Z + Z·(τ − M₀₀)/g with g the content of the
/// off-diagonal entries and M₀₀ − M₁₁, so its discriminant is D/g².
pub fn endomorphism_ring(i: &QuadIdeal) -> Result<QuadRing> {
    let t = i.tau_action();
    let entries = [t[0][1].clone(), t[1][0].clone(), &t[0][0] - &t[1][1]];
    if !entries.iter().all(|x| x.is_integer()) || !t[0][0].is_integer() {
        return Err(Error::InvalidTriple("lattice is not an O-module".into()));
    }
    let mut g = BigInt::zero();
    for e in &entries {
        g = g.gcd(&e.to_integer());
    }
    let g: i64 = g.try_into().map_err(|_| Error::Overflow("endomorphism ring"))?;
    ring_from_disc(i.ring.d / (g * g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn hermite_and_norms() {
        let r = ring_from_disc(-44).unwrap();
        // (2, (−1 + √−11)/2) = (2, τ − 1)/... over Z[√−11] the lattice is Z·2 + Z·(−1+√−11)/2
        let i = QuadIdeal::unit(r);
        assert!(i.is_ideal());
        assert_eq!(endomorphism_ring(&i).unwrap(), r);
        let two = QuadIdeal::from_generators(
            r,
            &[QuadElement::from_ints(2, 0), QuadElement::from_ints(0, 2), QuadElement::from_ints(2, 2)],
        )
        .unwrap();
        assert_eq!(two.norm(), rat(4));
        // O_k = Z[(1+√−11)/2] viewed inside Q(√−11) as a Z[√−11]-module
        let ok =
            QuadIdeal::new(r, QuadElement::one(), QuadElement::new(BigInt::from(1), BigInt::from(1), BigInt::from(2)))
                .unwrap();
        assert!(ok.is_ideal());
        assert_eq!(endomorphism_ring(&ok).unwrap().d, -11);
        let sq = ok.mul(&ok).unwrap();
        assert_eq!(sq, ok.hnf());
    }
}
