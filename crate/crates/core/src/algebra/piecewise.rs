//! Compactly supported piecewise polynomials on the real line.

use std::fmt;

use num_traits::{One, Zero};

use super::multiindex::MultiIndex;
use super::poly::Poly;
use super::rational::{self, Rational};
use crate::error::{Error, Result};

/// A function that is polynomial on each interval `[b_i, b_{i+1})` and zero
/// outside `[b_0, b_m)`. Pieces are written in the global coordinate, not
/// relative to their interval.
///
/// The representation is canonical: no zero piece at either end and no two
/// neighbouring pieces equal, so derived equality is functional equality
/// up to values at breakpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn zero() -> Self {
        PiecewisePoly { breakpoints: Vec::new(), pieces: Vec::new() }
    }

    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Poly>) -> Result<Self> {
        if breakpoints.is_empty() && pieces.is_empty() {
            return Ok(Self::zero());
        }
        if breakpoints.len() != pieces.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                pieces.len()
            )));
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::DegenerateInterval {
                    lo: rational::to_canonical(&w[0]),
                    hi: rational::to_canonical(&w[1]),
                });
            }
        }
        if let Some(p) = pieces.iter().find(|p| p.nvars() != 1) {
            return Err(Error::InvalidArgument(format!(
                "piece in {} variables, expected 1",
                p.nvars()
            )));
        }
        Ok(Self::canonical(breakpoints, pieces))
    }

    /// Polynomial `p` restricted to `[a, b)`.
    pub fn on_interval(a: Rational, b: Rational, p: Poly) -> Result<Self> {
        Self::new(vec![a, b], vec![p])
    }

    pub fn indicator(a: Rational, b: Rational) -> Result<Self> {
        Self::on_interval(a, b, Poly::one(1))
    }

    fn canonical(mut breakpoints: Vec<Rational>, mut pieces: Vec<Poly>) -> Self {
        let mut i = 1;
        while i < pieces.len() {
            if pieces[i] == pieces[i - 1] {
                pieces.remove(i);
                breakpoints.remove(i);
            } else {
                i += 1;
            }
        }
        while pieces.last().is_some_and(Poly::is_zero) {
            pieces.pop();
            breakpoints.pop();
        }
        let lead = pieces.iter().take_while(|p| p.is_zero()).count();
        pieces.drain(..lead);
        breakpoints.drain(..lead);
        if pieces.is_empty() {
            return Self::zero();
        }
        PiecewisePoly { breakpoints, pieces }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Support hull `[b_0, b_m]`, `None` for zero.
    pub fn support(&self) -> Option<(Rational, Rational)> {
        Some((self.breakpoints.first()?.clone(), self.breakpoints.last()?.clone()))
    }

    /// Index of the piece containing `x`, right-continuously.
    fn locate(&self, x: &Rational) -> Option<usize> {
        let (lo, hi) = self.support()?;
        if x < &lo || x >= &hi {
            return None;
        }
        Some(self.breakpoints.partition_point(|b| b <= x) - 1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        match self.locate(x) {
            Some(i) => self.pieces[i].eval(std::slice::from_ref(x)),
            None => Rational::zero(),
        }
    }

    /// The polynomial in force on an interval with midpoint `mid`.
    fn piece_at(&self, mid: &Rational) -> Poly {
        match self.locate(mid) {
            Some(i) => self.pieces[i].clone(),
            None => Poly::zero(1),
        }
    }

    fn merged_breakpoints(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut all: Vec<Rational> = a.iter().chain(b).cloned().collect();
        all.sort();
        all.dedup();
        all
    }

    /// Combines two functions piecewise on their common refinement.
    fn zip_with(&self, other: &Self, f: impl Fn(&Poly, &Poly) -> Poly) -> Self {
        let bps = Self::merged_breakpoints(&self.breakpoints, &other.breakpoints);
        if bps.len() < 2 {
            return Self::zero();
        }
        let two = rational::int(2);
        let pieces = bps
            .windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) / &two;
                f(&self.piece_at(&mid), &other.piece_at(&mid))
            })
            .collect();
        Self::canonical(bps, pieces)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Product with a global polynomial in one variable.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        Self::canonical(
            self.breakpoints.clone(),
            self.pieces.iter().map(|q| q * p).collect(),
        )
    }

    /// Piecewise derivative. Jumps contribute nothing, so this is the
    /// distributional derivative exactly when the function is continuous.
    pub fn deriv(&self) -> Self {
        Self::canonical(
            self.breakpoints.clone(),
            self.pieces.iter().map(|p| p.deriv(0)).collect(),
        )
    }

    pub fn integral(&self) -> Rational {
        let mut acc = Rational::zero();
        for (w, p) in self.breakpoints.windows(2).zip(&self.pieces) {
            let anti = p.integrate(0);
            acc += anti.eval(std::slice::from_ref(&w[1])) - anti.eval(std::slice::from_ref(&w[0]));
        }
        acc
    }

    /// `∫ x^e f(x) dx`.
    pub fn moment(&self, e: u32) -> Rational {
        let mono = Poly::monomial(1, MultiIndex::new(vec![e]), Rational::one());
        self.mul_poly(&mono).integral()
    }

    /// `a ↦ ∫_{-∞}^a f`.
    pub fn cumulative(&self) -> Cumulative {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut running = Rational::zero();
        for (w, p) in self.breakpoints.windows(2).zip(&self.pieces) {
            let anti = p.integrate(0);
            let at_lo = anti.eval(std::slice::from_ref(&w[0]));
            let piece = &anti + &Poly::constant(1, &running - &at_lo);
            running = piece.eval(std::slice::from_ref(&w[1]));
            pieces.push(piece);
        }
        Cumulative {
            body: PiecewisePoly { breakpoints: self.breakpoints.clone(), pieces },
            tail: running,
        }
    }

    /// Formats as `pp(var,[b0,...],[p0,...])`.
    pub fn display_with(&self, var: &str) -> String {
        let names = [var.to_string()];
        let bps: Vec<String> = self.breakpoints.iter().map(rational::to_canonical).collect();
        let pcs: Vec<String> = self.pieces.iter().map(|p| p.display_with(&names)).collect();
        format!("pp({var},[{}],[{}])", bps.join(","), pcs.join(","))
    }
}

impl fmt::Display for PiecewisePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl serde::Serialize for PiecewisePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let bps: Vec<String> = self.breakpoints.iter().map(rational::to_canonical).collect();
        let mut st = s.serialize_struct("PiecewisePoly", 2)?;
        st.serialize_field("breakpoints", &bps)?;
        st.serialize_field("pieces", &self.pieces)?;
        st.end()
    }
}

/// A cumulative integral: `body` on its support, `0` to the left and the
/// constant `tail` to the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cumulative {
    body: PiecewisePoly,
    tail: Rational,
}

impl Cumulative {
    pub fn body(&self) -> &PiecewisePoly {
        &self.body
    }

    pub fn tail(&self) -> &Rational {
        &self.tail
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        match self.body.support() {
            Some((_, hi)) if x >= &hi => self.tail.clone(),
            _ => self.body.eval(x),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: &Rational, other: &Cumulative, b: &Rational) -> Cumulative {
        let bps = PiecewisePoly::merged_breakpoints(&self.body.breakpoints, &other.body.breakpoints);
        let two = rational::int(2);
        let pieces = bps
            .windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) / &two;
                &self.piece_at(&mid).scale(a) + &other.piece_at(&mid).scale(b)
            })
            .collect();
        Cumulative {
            body: PiecewisePoly::canonical(bps, pieces),
            tail: &self.tail * a + &other.tail * b,
        }
    }

    fn piece_at(&self, mid: &Rational) -> Poly {
        match self.body.support() {
            Some((_, hi)) if mid >= &hi => Poly::constant(1, self.tail.clone()),
            _ => self.body.piece_at(mid),
        }
    }

    /// The cumulative as a compactly supported function, when its tail is 0.
    pub fn into_compact(self) -> Result<PiecewisePoly> {
        if !self.tail.is_zero() {
            return Err(Error::NotCompactlySupported(format!(
                "cumulative integral tends to {}",
                rational::to_canonical(&self.tail)
            )));
        }
        Ok(self.body)
    }
}

/// The C¹ piecewise-cubic bump on `[a, b]`: the smoothstep `3t² − 2t³`
/// rising to 1 at the midpoint and mirrored after it. Its integral is
/// `(b − a)/2`; with `normalize` it is rescaled to integral 1.
pub fn bump(a: &Rational, b: &Rational, normalize: bool) -> Result<PiecewisePoly> {
    if a >= b {
        return Err(Error::DegenerateInterval {
            lo: rational::to_canonical(a),
            hi: rational::to_canonical(b),
        });
    }
    let two = rational::int(2);
    let m = (a + b) / &two;
    let half = &m - a;
    let step = |t: &Poly| &t.pow(2).scale(&rational::int(3)) - &t.pow(3).scale(&two);
    let x = Poly::var(1, 0);
    let rising = step(&(&x - &Poly::constant(1, a.clone())).scale(&(Rational::one() / &half)));
    let falling = step(&(&Poly::constant(1, b.clone()) - &x).scale(&(Rational::one() / &half)));
    let f = PiecewisePoly::new(vec![a.clone(), m, b.clone()], vec![rising, falling])?;
    Ok(if normalize { f.scale(&(two / (b - a))) } else { f })
}

/// Rescales `f` so its integral is exactly 1.
pub fn normalize(f: &PiecewisePoly) -> Result<PiecewisePoly> {
    let total = f.integral();
    if total.is_zero() {
        return Err(Error::NotNormalized { integral: "0".into() });
    }
    Ok(f.scale(&(Rational::one() / total)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{frac, int};

    fn x() -> Poly {
        Poly::var(1, 0)
    }

    #[test]
    fn integral_examples() {
        assert_eq!(PiecewisePoly::zero().integral(), int(0));
        assert_eq!(PiecewisePoly::indicator(int(0), int(1)).unwrap().integral(), int(1));
        assert_eq!(PiecewisePoly::on_interval(int(0), int(2), x()).unwrap().integral(), int(2));
    }

    #[test]
    fn cumulative_examples() {
        assert!(PiecewisePoly::zero().cumulative().body().is_zero());
        let ramp = PiecewisePoly::indicator(int(0), int(1)).unwrap().cumulative();
        assert_eq!(ramp.eval(&int(-1)), int(0));
        assert_eq!(ramp.eval(&frac(1, 3)), frac(1, 3));
        assert_eq!(ramp.eval(&int(1)), int(1));
        assert_eq!(ramp.eval(&int(5)), int(1));
        let wide = PiecewisePoly::indicator(int(0), int(2)).unwrap().cumulative();
        assert_eq!(wide.eval(&int(3)), int(2));
    }

    #[test]
    fn bump_examples() {
        let g = bump(&int(0), &int(1), true).unwrap();
        assert_eq!(g.integral(), int(1));
        let raw = bump(&int(0), &int(1), false).unwrap();
        assert_eq!(raw.eval(&int(0)), int(0));
        assert_eq!(raw.eval(&int(1)), int(0));
        assert_eq!(raw.eval(&frac(1, 2)), int(1));
        assert_eq!(raw.integral(), frac(1, 2));
        assert_eq!(bump(&int(-1), &int(1), true).unwrap().integral(), int(1));
        assert_eq!(
            bump(&int(1), &int(1), false).unwrap_err().code(),
            crate::error::ErrorCode::DegenerateInterval
        );
    }

    #[test]
    fn bump_is_c1() {
        let raw = bump(&int(-1), &int(3), false).unwrap();
        for f in [raw.clone(), raw.deriv()] {
            let bps = f.breakpoints();
            let p = f.pieces();
            assert_eq!(p[0].eval(std::slice::from_ref(&bps[0])), int(0));
            assert_eq!(p[1].eval(std::slice::from_ref(&bps[2])), int(0));
            assert_eq!(
                p[0].eval(std::slice::from_ref(&bps[1])),
                p[1].eval(std::slice::from_ref(&bps[1]))
            );
        }
    }

    #[test]
    fn canonical_merging() {
        let f = PiecewisePoly::new(
            vec![int(0), int(1), int(2), int(3)],
            vec![Poly::zero(1), Poly::one(1), Poly::one(1)],
        )
        .unwrap();
        assert_eq!(f, PiecewisePoly::indicator(int(1), int(3)).unwrap());
        let g = PiecewisePoly::indicator(int(0), int(2)).unwrap();
        assert!(g.sub(&g).is_zero());
    }

    #[test]
    fn cumulative_combination_compact() {
        let f = PiecewisePoly::indicator(int(0), int(1)).unwrap();
        let g = bump(&int(0), &int(4), true).unwrap();
        let c = f.cumulative().combine(&int(1), &g.cumulative(), &-f.integral());
        let h = c.into_compact().unwrap();
        assert_eq!(h.deriv(), f.sub(&g));
        assert!(f.cumulative().into_compact().is_err());
    }
}
