//! Finite sums of tensor products of piecewise polynomials.

use std::fmt;

use num_traits::{One, Zero};

use super::multiindex::MultiIndex;
use super::piecewise::PiecewisePoly;
use super::poly::Poly;
use super::rational::{self, Rational};

/// `Σ_s w_s · f_{s,1}(x_1) ⋯ f_{s,n}(x_n)` with compactly supported factors.
///
/// With zero axes this is just a rational number.
#[derive(Clone, Debug)]
pub struct TensorDensity {
    axes: usize,
    summands: Vec<(Rational, Vec<PiecewisePoly>)>,
}

impl TensorDensity {
    pub fn zero(axes: usize) -> Self {
        TensorDensity { axes, summands: Vec::new() }
    }

    /// The scalar `c` on zero axes.
    pub fn scalar(c: Rational) -> Self {
        Self::product(c, Vec::new())
    }

    pub fn product(weight: Rational, factors: Vec<PiecewisePoly>) -> Self {
        let mut t = TensorDensity { axes: factors.len(), summands: Vec::new() };
        t.push(weight, factors);
        t
    }

    fn push(&mut self, weight: Rational, factors: Vec<PiecewisePoly>) {
        debug_assert_eq!(factors.len(), self.axes);
        if weight.is_zero() || factors.iter().any(PiecewisePoly::is_zero) {
            return;
        }
        if let Some(pos) = self.summands.iter().position(|(_, f)| f == &factors) {
            self.summands[pos].0 += weight;
            if self.summands[pos].0.is_zero() {
                self.summands.remove(pos);
            }
        } else {
            self.summands.push((weight, factors));
        }
    }

    pub fn axes(&self) -> usize {
        self.axes
    }

    pub fn summands(&self) -> &[(Rational, Vec<PiecewisePoly>)] {
        &self.summands
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.axes, other.axes, "axis count mismatch");
        let mut out = self.clone();
        for (w, f) in &other.summands {
            out.push(w.clone(), f.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.axes);
        for (w, f) in &self.summands {
            out.push(w * c, f.clone());
        }
        out
    }

    /// Product of densities on disjoint axis sets.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.axes + other.axes);
        for (w1, f1) in &self.summands {
            for (w2, f2) in &other.summands {
                let mut f = f1.clone();
                f.extend(f2.iter().cloned());
                out.push(w1 * w2, f);
            }
        }
        out
    }

    /// Applies a linear map to the factor on axis `i` of every summand.
    pub fn map_axis(&self, i: usize, f: impl Fn(&PiecewisePoly) -> PiecewisePoly) -> Self {
        let mut out = Self::zero(self.axes);
        for (w, factors) in &self.summands {
            let mut factors = factors.clone();
            factors[i] = f(&factors[i]);
            out.push(w.clone(), factors);
        }
        out
    }

    /// Splits off the first `m` axes: `Σ w · left ⊗ right`.
    pub fn split_at(&self, m: usize) -> Vec<(Rational, TensorDensity, TensorDensity)> {
        self.summands
            .iter()
            .map(|(w, f)| {
                (
                    w.clone(),
                    Self::product(Rational::one(), f[..m].to_vec()),
                    Self::product(Rational::one(), f[m..].to_vec()),
                )
            })
            .collect()
    }

    /// `∂_{x_i}` (0-based axis).
    pub fn deriv(&self, i: usize) -> Self {
        self.map_axis(i, PiecewisePoly::deriv)
    }

    pub fn integral(&self) -> Rational {
        self.summands
            .iter()
            .map(|(w, f)| f.iter().fold(w.clone(), |acc, p| acc * p.integral()))
            .sum()
    }

    /// `∫ p · τ` for a polynomial `p` in `axes` variables.
    pub fn integrate_against(&self, p: &Poly) -> Rational {
        assert_eq!(p.nvars(), self.axes, "axis count mismatch");
        let mut acc = Rational::zero();
        for (m, c) in p.terms() {
            acc += c * self.moment(m);
        }
        acc
    }

    /// `∫ x^I τ`.
    pub fn moment(&self, index: &MultiIndex) -> Rational {
        self.summands
            .iter()
            .map(|(w, f)| {
                f.iter()
                    .zip(index.exponents())
                    .fold(w.clone(), |acc, (p, &e)| acc * p.moment(e))
            })
            .sum()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.summands
            .iter()
            .map(|(w, f)| f.iter().zip(point).fold(w.clone(), |acc, (p, x)| acc * p.eval(x)))
            .sum()
    }

    /// Exact zero test: on each cell of the common breakpoint grid the sum is
    /// a polynomial, and all of those must vanish.
    pub fn is_zero(&self) -> bool {
        if self.summands.is_empty() {
            return true;
        }
        let grids: Vec<Vec<Rational>> = (0..self.axes)
            .map(|i| {
                let mut g: Vec<Rational> = self
                    .summands
                    .iter()
                    .flat_map(|(_, f)| f[i].breakpoints().iter().cloned())
                    .collect();
                g.sort();
                g.dedup();
                g
            })
            .collect();
        let two = rational::int(2);
        let mids: Vec<Vec<Rational>> = grids
            .iter()
            .map(|g| g.windows(2).map(|w| (&w[0] + &w[1]) / &two).collect())
            .collect();
        let mut cell = vec![0usize; self.axes];
        loop {
            let mut total = Poly::zero(self.axes);
            for (w, f) in &self.summands {
                let mut term = Poly::constant(self.axes, w.clone());
                for (i, p) in f.iter().enumerate() {
                    let piece = piece_containing(p, &mids[i][cell[i]]);
                    term = &term * &piece.relabel(self.axes, &[i]);
                    if term.is_zero() {
                        break;
                    }
                }
                total = &total + &term;
            }
            if !total.is_zero() {
                return false;
            }
            // odometer over cells
            let mut i = 0;
            loop {
                if i == self.axes {
                    return true;
                }
                cell[i] += 1;
                if cell[i] < mids[i].len() {
                    break;
                }
                cell[i] = 0;
                i += 1;
            }
        }
    }

    /// Formats with one variable name per axis.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.summands.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (w, f) in &self.summands {
            let mut s = rational::to_canonical(w);
            for (p, name) in f.iter().zip(names) {
                s.push('*');
                s.push_str(&p.display_with(name));
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

fn piece_containing(p: &PiecewisePoly, mid: &Rational) -> Poly {
    let bps = p.breakpoints();
    match (bps.first(), bps.last()) {
        (Some(lo), Some(hi)) if mid >= lo && mid < hi => {
            p.pieces()[bps.partition_point(|b| b <= mid) - 1].clone()
        }
        _ => Poly::zero(1),
    }
}

impl PartialEq for TensorDensity {
    fn eq(&self, other: &Self) -> bool {
        self.axes == other.axes && self.sub(other).is_zero()
    }
}

impl fmt::Display for TensorDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.axes).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl serde::Serialize for TensorDensity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::{SerializeSeq, SerializeStruct};
        struct Summands<'a>(&'a [(Rational, Vec<PiecewisePoly>)]);
        impl serde::Serialize for Summands<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for (w, f) in self.0 {
                    seq.serialize_element(&(rational::to_canonical(w), f))?;
                }
                seq.end()
            }
        }
        let mut st = s.serialize_struct("TensorDensity", 2)?;
        st.serialize_field("axes", &self.axes)?;
        st.serialize_field("summands", &Summands(&self.summands))?;
        st.end()
    }
}

/// Exact integral of a density.
pub fn pp_integral(f: &TensorDensity) -> Rational {
    f.integral()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::piecewise::bump;
    use crate::algebra::rational::int;

    fn ind(a: i64, b: i64) -> PiecewisePoly {
        PiecewisePoly::indicator(int(a), int(b)).unwrap()
    }

    #[test]
    fn integral_examples() {
        assert_eq!(pp_integral(&TensorDensity::zero(2)), int(0));
        assert_eq!(pp_integral(&TensorDensity::product(int(1), vec![ind(0, 1)])), int(1));
        let x = PiecewisePoly::on_interval(int(0), int(2), Poly::var(1, 0)).unwrap();
        assert_eq!(pp_integral(&TensorDensity::product(int(1), vec![x])), int(2));
    }

    #[test]
    fn zero_test_sees_through_splitting() {
        // 1_[0,2] ⊗ 1_[0,1] = 1_[0,1] ⊗ 1_[0,1] + 1_[1,2] ⊗ 1_[0,1]
        let whole = TensorDensity::product(int(1), vec![ind(0, 2), ind(0, 1)]);
        let parts = TensorDensity::product(int(1), vec![ind(0, 1), ind(0, 1)])
            .add(&TensorDensity::product(int(1), vec![ind(1, 2), ind(0, 1)]));
        assert_eq!(whole, parts);
        assert_ne!(whole, parts.scale(&int(2)));
    }

    #[test]
    fn derivative_integrates_to_zero() {
        let g = bump(&int(0), &int(1), true).unwrap();
        let t = TensorDensity::product(int(3), vec![g.clone(), g]);
        assert_eq!(t.integral(), int(3));
        assert_eq!(t.deriv(0).integral(), int(0));
        assert_eq!(t.deriv(1).integral(), int(0));
    }

    #[test]
    fn scalar_density() {
        let s = TensorDensity::scalar(int(4));
        assert_eq!(s.integral(), int(4));
        assert_eq!(s.integrate_against(&Poly::constant(0, int(2))), int(8));
        assert!(TensorDensity::scalar(int(0)).is_zero());
    }
}
