//! Exact Drinfeld-module arithmetic over F_q(T).

pub mod algebra;
pub mod drinfeld;
mod error;
pub mod experiments;
pub mod frobenius;
pub mod skew;

pub use error::{Error, Result};
