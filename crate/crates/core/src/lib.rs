//! Exact and certified computations around linear forms in exponentials of
//! algebraic numbers.

pub mod algebraic;
pub mod certified_eval;
pub mod cli;
pub mod ball;
pub mod error;
pub mod exact_poly;
pub mod explicit_bounds;
pub mod json;
pub mod number_field;
pub mod pigeonhole;

pub use error::{Error, Result};
