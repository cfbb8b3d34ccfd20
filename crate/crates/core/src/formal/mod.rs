//! Formal functions on `(ℝⁿ)^(k)`, differential operators, jets and point
//! distributions.

mod diffop;
mod function;
mod jet;

use std::fmt;

pub use diffop::DiffOp;
pub use function::FormalFunction;
pub use jet::{jet_dimension, Jet, PointDistribution};

/// The local model `(ℝⁿ)^(k)` with series stored modulo `(y)^{order+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Space {
    pub n: usize,
    pub k: usize,
    pub order: u32,
}

impl Space {
    pub fn new(n: usize, k: usize, order: u32) -> Self {
        Space { n, k, order }
    }

    /// Number of joint variables `x_1..x_n, y_1..y_k`.
    pub fn nvars(&self) -> usize {
        self.n + self.k
    }

    /// Same `(n, k)`, ignoring the truncation.
    pub fn compatible(&self, other: &Space) -> bool {
        self.n == other.n && self.k == other.k
    }

    pub fn check_compatible(&self, other: &Space) -> crate::Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(crate::Error::SpaceMismatch { left: *self, right: *other })
        }
    }

    pub fn meet(&self, other: &Space) -> Space {
        Space { n: self.n, k: self.k, order: self.order.min(other.order) }
    }

    pub fn with_order(&self, order: u32) -> Space {
        Space { order, ..*self }
    }

    /// `(n₁+n₂, k₁+k₂)` at the smaller truncation.
    pub fn product(&self, other: &Space) -> Space {
        Space {
            n: self.n + other.n,
            k: self.k + other.k,
            order: self.order.min(other.order),
        }
    }

    /// Joint variable names `x1..xn, y1..yk`.
    pub fn var_names(&self) -> Vec<String> {
        (1..=self.n)
            .map(|i| format!("x{i}"))
            .chain((1..=self.k).map(|j| format!("y{j}")))
            .collect()
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.k, self.order)
    }
}

impl serde::Serialize for Space {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.n as u64, self.k as u64, self.order as u64].serialize(s)
    }
}
