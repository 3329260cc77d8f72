//! Exact and certified-numeric arithmetic.

pub mod bigfloat;
pub mod field;
pub mod linalg;
pub mod mahler;
pub mod json_int;
pub mod poly;
pub mod quad;
pub mod rational;
pub mod roots;
pub mod square_class;

pub use bigfloat::{BigComplex, BigFloat, Estimate};
pub use field::Field;
pub use poly::{Poly, QPoly};
pub use quad::{QuadExt, Scalar};
pub use rational::Rational;
pub use square_class::{SquareClass, SquareClassBasis};
