//! Binary cubic forms and the 3-torsion of quadratic orders.

pub mod arith;
pub mod error;
pub mod forms;

pub use error::{Error, Result};
pub use forms::{CubicForm, Flavor, QuadCovariant, Unimodular};
pub mod correspondence;
pub mod enumeration;
pub mod harness;
pub mod local_mass;
pub mod quad;
