//! Matrix special functions and a numerical identity-verification catalog.
//!
//! The crate evaluates matrix gamma/beta/Pochhammer calculus, generalized
//! hypergeometric matrix functions pFq, Bateman and Young matrix families and
//! fractional-calculus operators, and machine-checks a catalog of identities
//! relating them against independent quadrature and formal-series oracles.
//! Each catalog entry ends in PASS, FAIL, or CORRECTED (the printed form
//! fails but a derived corrected form passes), collected into a JSON ledger.

pub mod error;
pub mod matrix;
pub mod eigen;
pub mod family;
pub mod scalar;
pub mod gamma;
pub mod hyper;
pub mod series;
pub mod quad;
pub mod transforms;
pub mod bateman;
pub mod young;
pub mod catalog;
pub mod report;

pub use error::{Error, Result};
pub use matrix::{C64, SquareMatrix};
