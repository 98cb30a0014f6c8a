//! Étale cubic algebras over Q_p and the weights C(R), C^eq(R).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::family::{ramified_count, Algebra, LocalRingSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCubicAlgebra {
    pub p: u64,
    pub label: String,
    /// v_p(Disc K).
    pub disc_exp: u32,
    pub resolvent: Algebra,
    /// Conductor exponent of the resolvent ring D(K).
    pub resolvent_j: u32,
    pub aut: u32,
}

impl LocalCubicAlgebra {
    pub fn resolvent_ring(&self) -> LocalRingSpec {
        LocalRingSpec { p: self.p, algebra: self.resolvent, j: self.resolvent_j }
    }
}

fn entry(p: u64, label: String, resolvent: Algebra, resolvent_j: u32, aut: u32) -> LocalCubicAlgebra {
    let disc_exp = 2 * resolvent_j + resolvent.disc_exp(p);
    LocalCubicAlgebra { p, label, disc_exp, resolvent, resolvent_j, aut }
}

/// Every étale cubic algebra over Q_p up to isomorphism.
pub fn local_cubic_table(p: u64) -> Vec<LocalCubicAlgebra> {
    let mut t = vec![
        entry(p, "Qp^3".into(), Algebra::Split, 0, 6),
        entry(p, "Qp x Qp2".into(), Algebra::Inert, 0, 2),
        entry(p, "Qp3".into(), Algebra::Split, 0, 3),
    ];
    for k in 0..ramified_count(p) {
        t.push(entry(p, format!("Qp x F{k}"), Algebra::Ramified(k), 0, 2));
    }
    if p == 3 {
        // wild cubic fields over Q3, grouped by v_3(Disc) = 3, 4, 5
        t.push(entry(p, "c3 F0".into(), Algebra::Ramified(0), 1, 1));
        t.push(entry(p, "c3 F1".into(), Algebra::Ramified(1), 1, 1));
        for i in 0..3 {
            t.push(entry(p, format!("c4 cyclic{i}"), Algebra::Split, 2, 3));
        }
        t.push(entry(p, "c4 S3".into(), Algebra::Inert, 2, 1));
        for i in 0..3 {
            t.push(entry(p, format!("c5 S3-{i}"), Algebra::Ramified(1), 2, 1));
        }
    } else if p % 3 == 1 {
        for i in 0..3 {
            t.push(entry(p, format!("tame cyclic{i}"), Algebra::Split, 1, 3));
        }
    } else {
        t.push(entry(p, "tame S3".into(), Algebra::Inert, 1, 1));
    }
    t
}

fn weight(table: &[LocalCubicAlgebra], keep: impl Fn(&LocalCubicAlgebra) -> bool) -> BigRational {
    table
        .iter()
        .filter(|k| keep(k))
        .map(|k| BigRational::new(BigInt::from(1), BigInt::from(k.aut)))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Σ 1/#Aut(K) over K with R ⊆ D(K): same algebra, resolvent conductor
/// exponent at most that of R.
#[allow(non_snake_case)]
pub fn C_of_R(r: &LocalRingSpec) -> BigRational {
    let t = local_cubic_table(r.p);
    weight(&t, |k| k.resolvent == r.algebra && k.resolvent_j <= r.j)
}

/// The same sum restricted to D(K) = R.
#[allow(non_snake_case)]
pub fn C_eq_of_R(r: &LocalRingSpec) -> BigRational {
    let t = local_cubic_table(r.p);
    weight(&t, |k| k.resolvent == r.algebra && k.resolvent_j == r.j)
}

/// Largest resolvent conductor exponent occurring in `algebra`; C(R) is
/// constant from there on.
pub fn stable_j(p: u64, algebra: Algebra) -> u32 {
    local_cubic_table(p).iter().filter(|k| k.resolvent == algebra).map(|k| k.resolvent_j).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn table_shapes() {
        assert_eq!(local_cubic_table(7).len(), 3 + 2 + 3);
        let t5 = local_cubic_table(5);
        let tot: Vec<_> = t5.iter().filter(|k| k.disc_exp == 2 && k.resolvent == Algebra::Inert).collect();
        assert_eq!(tot.len(), 1);
        assert_eq!(tot[0].aut, 1);
        let t2 = local_cubic_table(2);
        assert_eq!(t2.len(), 3 + 6 + 1);
        assert!(t2.iter().any(|k| k.disc_exp == 3));
        assert!(t2.iter().any(|k| k.label.starts_with("tame") && k.disc_exp == 2 && k.resolvent == Algebra::Inert));
        let t3 = local_cubic_table(3);
        assert!(t3.iter().filter(|k| k.disc_exp >= 3).all(|k| (3..=5).contains(&k.disc_exp)));
    }

    #[test]
    fn tame_mass_lint() {
        // Σ p^{-(c-2)} over totally ramified entries = number of tame fields
        for p in [2u64, 5, 7, 11, 13] {
            let t = local_cubic_table(p);
            let total: u32 = t.iter().filter(|k| k.label.starts_with("tame")).map(|_| 1).sum();
            assert_eq!(total, if p % 3 == 1 { 3 } else { 1 });
        }
    }

    #[test]
    fn weights() {
        for p in [2u64, 3, 5, 7, 11] {
            for a in Algebra::all(p) {
                assert_eq!(C_of_R(&LocalRingSpec { p, algebra: a, j: 0 }), r(1, 2), "p={p} {a}");
                let mut prev = BigRational::zero();
                let mut acc = BigRational::zero();
                for j in 0..5 {
                    let spec = LocalRingSpec { p, algebra: a, j };
                    let c = C_of_R(&spec);
                    acc += C_eq_of_R(&spec);
                    assert_eq!(c, acc);
                    assert!(c >= prev);
                    if p != 3 && j >= 2 {
                        assert_eq!(c, prev);
                    }
                    prev = c;
                }
            }
        }
        assert_eq!(C_of_R(&LocalRingSpec { p: 5, algebra: Algebra::Inert, j: 1 }), r(3, 2));
        assert_eq!(C_of_R(&LocalRingSpec { p: 7, algebra: Algebra::Ramified(1), j: 3 }), r(1, 2));
        assert_eq!(C_eq_of_R(&LocalRingSpec { p: 7, algebra: Algebra::Split, j: 1 }), r(1, 1));
        assert_eq!(C_eq_of_R(&LocalRingSpec { p: 7, algebra: Algebra::Split, j: 2 }), r(0, 1));
        assert_eq!(C_eq_of_R(&LocalRingSpec { p: 5, algebra: Algebra::Split, j: 0 }), r(1, 2));
    }
}
