//! Exact scalars, polynomials, piecewise polynomials and index combinatorics.

pub mod density;
pub mod multiindex;
pub mod piecewise;
pub mod poly;
pub mod rational;
pub mod tuple;

pub use density::{pp_integral, TensorDensity};
pub use multiindex::{multiindex_factorial, MultiIndex};
pub use piecewise::{bump, Cumulative, PiecewisePoly};
pub use poly::Poly;
pub use rational::Rational;
pub use tuple::{wedge_sign, OrderedTuple};

/// `∫_{-∞}^a f` for a piecewise polynomial.
pub fn pp_cumulative(f: &PiecewisePoly) -> Cumulative {
    f.cumulative()
}
