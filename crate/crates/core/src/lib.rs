//! Frobenius relations for hyperelliptic families.

pub mod constructions;
pub mod curve_zeta;
pub mod distribution;
pub mod error;
pub mod galois;
pub mod relations;
pub mod sieve;
pub mod survey;
pub mod weil_poly;

pub use error::{CoreError, Result};
