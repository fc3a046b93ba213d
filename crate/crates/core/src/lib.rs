pub mod admissible;
pub mod building;
pub mod chains;
pub mod error;
pub mod linalg;
pub mod scalar;
pub mod weyl;
pub mod zips;

pub use error::{Error, Result};

pub type Rational = num_rational::Ratio<i64>;
pub type BigRational = num_rational::Ratio<num_bigint::BigInt>;
