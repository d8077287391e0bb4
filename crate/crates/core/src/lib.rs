//! Exact decision procedures for bounded-language matrix mortality.
//!
//! The kernels in [`linalg`] and [`poly`] are generic over any exact
//! [`Field`]; the deciders work over arbitrary-precision rationals through
//! the aliases below.

pub mod abc;
pub mod abcd;
pub mod arith;
pub mod config;
pub mod decomposition;
pub mod diophantine;
pub mod error;
pub mod linalg;
pub mod lrs;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod semilinear;
pub mod skolem;

pub use config::SearchConfig;
pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
pub use poly::Poly;
pub use scalar::Field;

pub type Rational = num_rational::BigRational;
pub type RationalMatrix = Matrix<Rational>;
pub type RationalVector = Vector<Rational>;
pub type RationalPolynomial = Poly<Rational>;
