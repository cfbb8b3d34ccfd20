//! Exact calculus on coordinate formal manifolds `(ℝⁿ)^(k)`.

pub mod algebra;
pub mod derham;
pub mod dual;
pub mod error;
pub mod formal;
pub mod gen;
pub mod homotopy;
pub mod cli;
pub mod morphisms;

pub use error::{Error, ErrorCode, Result};
