pub mod budget;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod harness;
pub mod io;
pub mod reduction;
pub mod scalar;
pub mod setfamily;
pub mod solvers;
pub mod witness;

pub use budget::Budget;
pub use error::{Error, Result};
pub use graph::Graph;
pub use scalar::{parse_scalar, Scalar};

/// Arbitrary-precision exact rational, the default scalar.
pub type Rational = num_rational::BigRational;
/// Machine-word rational for small denominators.
pub type SmallRational = num_rational::Ratio<i64>;
