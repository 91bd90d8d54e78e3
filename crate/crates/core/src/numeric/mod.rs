//! Multi-precision floating point support for the numeric half of the
//! toolkit. Only tolerance-based checks consume these values; every verdict
//! that matters is decided exactly elsewhere.

mod bigfloat;
pub mod linalg;
pub mod roots;

pub use bigfloat::{BigComplex, BigFloat};
