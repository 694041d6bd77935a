//! Numerical toolkit for finite-dimensional operational-probabilistic
//! theories built on Euclidean Jordan algebras.

pub mod checkers;
pub mod cone;
pub mod dsl;
pub mod eja;
pub mod error;
pub mod field;
pub mod linalg;
pub mod purification;
pub mod report;
pub mod sample;
pub mod theory;

pub use error::{Error, Result};
