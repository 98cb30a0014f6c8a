use std::collections::{BTreeMap, BTreeSet};

use cubic_torsion::arith::is_square;
use cubic_torsion::enumeration::{
    canonical, classes_with_disc, count_proj_reducible, proj_reducible_exact_total, tally_classes, Sign,
};
use cubic_torsion::forms::{CubicForm, Unimodular};
use cubic_torsion::quad::{check_disc, cl3_count, ideal3_count, sigma_factor, u3_correction};

fn is_square_disc(d: i64) -> bool {
    is_square(d as i128)
}
use proptest::prelude::*;

fn quiet(_: cubic_torsion::enumeration::Progress) {}

// Every form in a coefficient box, canonicalized and grouped by discriminant.
fn box_classes(r: i64, dmax: i64) -> BTreeMap<i64, BTreeSet<CubicForm>> {
    let mut out: BTreeMap<i64, BTreeSet<CubicForm>> = BTreeMap::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                for d in -r..=r {
                    let f = CubicForm::new(a, b, c, d);
                    let Ok(disc) = f.reduced_disc() else { continue };
                    if disc == 0 || disc.abs() > dmax as i128 {
                        continue;
                    }
                    out.entry(disc as i64).or_default().insert(canonical(&f).unwrap());
                }
            }
        }
    }
    out
}

#[test]
fn box_agrees_with_per_disc() {
    let dmax = 150;
    let boxed = box_classes(9, dmax);
    for m in 1..=dmax {
        for d in [m, -m] {
            if check_disc(d).is_err() {
                continue;
            }
            let (reps, _) = classes_with_disc(d).unwrap();
            let found = boxed.get(&d).cloned().unwrap_or_default();
            assert!(found.is_subset(&reps.iter().copied().collect()), "D = {d}: box found an extra class");
            for f in &reps {
                if [f.a, f.b, f.c, f.d].iter().all(|v| v.abs() <= 9) {
                    assert!(found.contains(f), "D = {d}: {f} missing from box");
                }
            }
        }
    }
}

#[test]
fn stream_agrees_with_per_disc() {
    let x = 3001;
    for sign in [Sign::Neg, Sign::Pos] {
        let (tally, recs) = tally_classes(x, sign, x, 1, 1_000_000, &quiet).unwrap();
        let mut total = 0;
        let mut square = 0;
        for m in 1..x as i64 {
            let d = m * sign.unit();
            if check_disc(d).is_err() {
                assert_eq!(recs[m as usize].n_total, 0, "D = {d}");
                continue;
            }
            let (_, rec) = classes_with_disc(d).unwrap();
            assert_eq!(recs[m as usize], rec, "D = {d}");
            if is_square_disc(d) {
                square += rec.n_total;
            } else {
                total += rec.n_total;
            }
        }
        assert_eq!(tally.total, total);
        assert_eq!(tally.square_disc, square);
    }
}

#[test]
fn per_disc_identities() {
    for m in 1..=3000i64 {
        for d in [-m, m] {
            if check_disc(d).is_err() || is_square_disc(d) {
                continue;
            }
            let (_, rec) = classes_with_disc(d).unwrap();
            assert_eq!(rec.n_proj, sigma_factor(d).unwrap() * cl3_count(d).unwrap(), "D = {d}");
            assert_eq!(rec.n_proj_red * u3_correction(d).unwrap(), ideal3_count(d).unwrap(), "D = {d}");
        }
    }
}

#[test]
fn exact_a0_matches_stream() {
    let x = 3001;
    for sign in [Sign::Neg, Sign::Pos] {
        let (tally, recs) = tally_classes(x, sign, x, 1, 1_000_000, &quiet).unwrap();
        let (total, _, table) = proj_reducible_exact_total(x, sign, x).unwrap();
        assert_eq!(total, tally.reducible_projective);
        for m in 1..x as usize {
            assert_eq!(table[m], recs[m].n_proj_red, "|D| = {m}");
        }
    }
}

#[test]
fn a0_count_tracks_reducible_classes() {
    let x = 100_000;
    for sign in [Sign::Neg, Sign::Pos] {
        let (exact, _, _) = proj_reducible_exact_total(x, sign, 0).unwrap();
        let a0 = count_proj_reducible(x, sign).unwrap();
        let rel = (a0.forms as f64 - exact as f64).abs() / exact as f64;
        assert!(a0.forms as u64 <= exact && rel < 0.08, "{sign}: a = 0 count {} vs exact {exact}", a0.forms);
    }
}

fn matrix() -> impl Strategy<Value = Unimodular> {
    prop::collection::vec(0..4usize, 1..8).prop_map(|word| {
        let gens = [
            Unimodular { p: 1, q: 1, r: 0, s: 1 },
            Unimodular { p: 1, q: -1, r: 0, s: 1 },
            Unimodular { p: 1, q: 0, r: 1, s: 1 },
            Unimodular::S,
        ];
        word.into_iter().fold(Unimodular { p: 1, q: 0, r: 0, s: 1 }, |m, i| m.mul(&gens[i]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn canonical_is_orbit_invariant(a in -6i64..=6, b in -6i64..=6, c in -6i64..=6, d in -6i64..=6, g in matrix()) {
        let f = CubicForm::new(a, b, c, d);
        prop_assume!(f.reduced_disc().map(|v| v != 0).unwrap_or(false));
        let h = f.act(&g).unwrap();
        let cf = canonical(&f).unwrap();
        prop_assert_eq!(cf, canonical(&h).unwrap());
        prop_assert_eq!(cf, canonical(&cf).unwrap());
        prop_assert_eq!(cf.reduced_disc().unwrap(), f.reduced_disc().unwrap());
    }
}
