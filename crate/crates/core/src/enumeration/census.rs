//! Cubic fields of squarefree discriminant through classical binary cubics.

use std::collections::BTreeSet;

use super::{canonical, classes_with_disc_bounded};
use crate::arith::factor;
use crate::error::{Error, Result};
use crate::forms::{CubicForm, Unimodular};

/// Number of GL₂(Z)-classes of irreducible classical forms
/// ax³ + bx²y + cxy² + dy³ with b²c² − 4ac³ − 4b³d − 27a²d² + 18abcd = D.
///
/// Three times a classical form is the integer-matrix form (3a, b, c, 3d)
/// with reduced discriminant −3D, so the classes come from
/// `classes_with_disc` restricted to 3 | a, 3 | d.
pub fn cubic_census_squarefree(d: i64) -> Result<u64> {
    if d == 0 || d == 1 {
        return Err(Error::Degenerate);
    }
    if d.unsigned_abs() > super::PER_DISC_BOUND {
        return Err(Error::BoundExceeded(format!("|D| = {} exceeds {}", d.unsigned_abs(), super::PER_DISC_BOUND)));
    }
    if factor(d.unsigned_abs())?.iter().any(|&(_, e)| e > 1) {
        return Err(Error::InvalidDiscriminant(d as i128));
    }
    let (forms, _) = classes_with_disc_bounded(-3 * d, 3 * super::PER_DISC_BOUND)?;
    let mut gl2 = BTreeSet::new();
    for f in forms {
        if f.a % 3 != 0 || f.d % 3 != 0 || f.is_reducible() {
            continue;
        }
        let mirror = canonical(&f.act(&Unimodular::SWAP)?)?;
        gl2.insert(f.min(mirror));
    }
    Ok(gl2.len() as u64)
}

/// Classical discriminant of ax³ + bx²y + cxy² + dy³.
pub fn classical_disc(a: i64, b: i64, c: i64, d: i64) -> i128 {
    let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
    b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d
}

/// The integer-matrix form of three times a classical form.
pub fn from_classical(a: i64, b: i64, c: i64, d: i64) -> CubicForm {
    CubicForm::new(3 * a, b, c, 3 * d)
}
