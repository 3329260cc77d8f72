//! Exact and certified-numeric tools for producing independent points on
//! elliptic curves over quadratic fields, together with the function-field,
//! permutation-group, quadratic-pencil and monodromy computations used to
//! study rational functions on such curves.

pub mod arith;
pub mod curve;
pub mod error;
pub mod ff;
pub mod monodromy;
pub mod pencil;
pub mod perm;
pub mod rank;

pub use error::{Error, Result};
