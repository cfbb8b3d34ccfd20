//! Coordinate morphisms `(ℝⁿ)^(k) → (ℝᵐ)^(l)` and their pullbacks.

use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{MultiIndex, Poly, Rational};
use crate::error::{Error, Result};
use crate::formal::{FormalFunction, Jet, Space};

/// A morphism given by the pullbacks of the target coordinates `x'_i` and
/// formal variables `y'_j`. The `y'` pullbacks must have zero reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Space,
    target: Space,
    x_pullbacks: Vec<FormalFunction>,
    y_pullbacks: Vec<FormalFunction>,
}

impl Morphism {
    /// `target.order` is ignored; pullbacks land in `source`.
    pub fn new(
        source: Space,
        target: Space,
        x_pullbacks: Vec<FormalFunction>,
        y_pullbacks: Vec<FormalFunction>,
    ) -> Result<Self> {
        if x_pullbacks.len() != target.n {
            return Err(Error::DimensionMismatch { expected: target.n, got: x_pullbacks.len() });
        }
        if y_pullbacks.len() != target.k {
            return Err(Error::DimensionMismatch { expected: target.k, got: y_pullbacks.len() });
        }
        for f in x_pullbacks.iter().chain(&y_pullbacks) {
            source.check_compatible(&f.space())?;
        }
        for (j, f) in y_pullbacks.iter().enumerate() {
            if !f.reduction().is_zero() {
                return Err(Error::NotLocal { index: j + 1 });
            }
        }
        Ok(Morphism { source, target: target.with_order(source.order), x_pullbacks, y_pullbacks })
    }

    pub fn identity(space: Space) -> Self {
        Morphism {
            source: space,
            target: space,
            x_pullbacks: (0..space.n).map(|i| FormalFunction::x(space, i)).collect(),
            y_pullbacks: (0..space.k).map(|j| FormalFunction::y(space, j)).collect(),
        }
    }

    pub fn source(&self) -> Space {
        self.source
    }

    pub fn target(&self) -> Space {
        self.target
    }

    pub fn x_pullbacks(&self) -> &[FormalFunction] {
        &self.x_pullbacks
    }

    pub fn y_pullbacks(&self) -> &[FormalFunction] {
        &self.y_pullbacks
    }

    /// Pullbacks of all joint target variables, `x'` then `y'`.
    pub fn joint_pullbacks(&self) -> impl Iterator<Item = &FormalFunction> {
        self.x_pullbacks.iter().chain(&self.y_pullbacks)
    }

    /// The underlying map `φ̄` on points.
    pub fn base_map(&self, a: &[Rational]) -> Result<Vec<Rational>> {
        self.x_pullbacks.iter().map(|f| f.value(a)).collect()
    }

    /// The best known order of `φ*(g)` given `g` known up to `g_known`.
    pub(crate) fn result_known_order(&self, g_known: u32) -> u32 {
        let mut known = self.source.order;
        for f in self.joint_pullbacks() {
            known = known.min(f.known_order());
        }
        // unknown terms of g start at y'-degree g_known + 1
        if let Some(v) = self.y_pullbacks.iter().filter_map(FormalFunction::y_valuation).min() {
            let bound = (g_known as u64 + 1) * v as u64 - 1;
            known = known.min(bound.min(u32::MAX as u64) as u32);
        }
        known
    }

    /// `φ*(g) = Σ_K T(g_K) Π_j φ*(y'_j)^{K_j}` with the Taylor pullback
    /// `T(h) = Σ_I (∂^I h / I!)(φ̄) · (φ*(x') − φ̄)^I`.
    pub fn pullback(&self, g: &FormalFunction) -> Result<FormalFunction> {
        self.target.check_compatible(&g.space())?;
        let known = self.result_known_order(g.known_order());
        let space = self.source;
        let reductions: Vec<Poly> = self.x_pullbacks.iter().map(FormalFunction::reduction).collect();
        let nilpotent: Vec<FormalFunction> = self
            .x_pullbacks
            .iter()
            .zip(&reductions)
            .map(|(f, r)| f.sub(&FormalFunction::from_x_poly(space, r)).map(|u| u.with_known(known)))
            .collect::<Result<_>>()?;
        let ys: Vec<FormalFunction> = self.y_pullbacks.iter().map(|f| f.with_known(known)).collect();
        let one = FormalFunction::one(space).with_known(known);

        let mut acc = FormalFunction::zero(space).with_known(known);
        for (kidx, gk) in g.coefficients() {
            let mut ymono = one.clone();
            for (f, &e) in ys.iter().zip(kidx.exponents()) {
                if e > 0 {
                    ymono = ymono.mul(&f.pow(e)?)?;
                }
            }
            if ymono.is_zero() {
                continue;
            }
            let t = self.taylor(&gk, &reductions, &nilpotent, known)?;
            acc = acc.add(&t.mul(&ymono)?)?;
        }
        Ok(acc)
    }

    fn taylor(
        &self,
        h: &Poly,
        reductions: &[Poly],
        nilpotent: &[FormalFunction],
        known: u32,
    ) -> Result<FormalFunction> {
        let space = self.source;
        let mut acc = FormalFunction::zero(space).with_known(known);
        let Some(deg) = h.degree() else { return Ok(acc) };
        let m = self.target.n;
        let base_images: Vec<Poly> = if m == 0 { Vec::new() } else { reductions.to_vec() };
        // u^I has y-valuation ≥ |I|, so higher I vanish after truncation
        for index in MultiIndex::all_up_to(m, deg.min(known)) {
            let dh = h.deriv_multi(&index);
            if dh.is_zero() {
                continue;
            }
            let at_base = if m == 0 {
                Poly::constant(space.n, dh.constant_term())
            } else {
                dh.compose(&base_images)
            };
            let mut term = FormalFunction::from_x_poly(space, &at_base)
                .scale(&(Rational::one() / index.factorial_q()))
                .with_known(known);
            for (u, &e) in nilpotent.iter().zip(index.exponents()) {
                if e > 0 {
                    term = term.mul(&u.pow(e)?)?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// `self ∘ other`, so that `(self ∘ other)^* = other^* ∘ self^*`.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        other.target.check_compatible(&self.source)?;
        let xs = self.x_pullbacks.iter().map(|f| other.pullback(f)).collect::<Result<_>>()?;
        let ys = self.y_pullbacks.iter().map(|f| other.pullback(f)).collect::<Result<_>>()?;
        Morphism::new(other.source, self.target, xs, ys)
    }

    /// The matrix of `φ*_a : O_{φ̄(a)}/m^r → O_a/m^r` on the monomial bases.
    pub fn jet_map(&self, a: &[Rational], r: u32) -> Result<JetMap> {
        let b = self.base_map(a)?;
        let tspace = self.target.with_order(r.saturating_sub(1).max(self.source.order));
        let tvars = tspace.nvars();
        let columns = if r == 0 { Vec::new() } else { MultiIndex::all_up_to(tvars, r - 1) };
        let rows = if r == 0 { Vec::new() } else { MultiIndex::all_up_to(self.source.nvars(), r - 1) };
        let shift_back: Vec<Rational> = b
            .iter()
            .map(|v| -v.clone())
            .chain(std::iter::repeat(Rational::zero()).take(tspace.k))
            .collect();
        let mut matrix = vec![vec![Rational::zero(); columns.len()]; rows.len()];
        for (c, idx) in columns.iter().enumerate() {
            // (x' − b)^I y'^J in target coordinates
            let basis = Poly::monomial(tvars, idx.clone(), Rational::one()).shift(&shift_back);
            let g = FormalFunction::new(tspace, basis)?;
            let jet = Jet::of(&self.pullback(&g)?, a, r)?;
            for (row, ridx) in rows.iter().enumerate() {
                matrix[row][c] = jet.coefficient(ridx);
            }
        }
        Ok(JetMap { rows, columns, matrix })
    }
}

/// A linear map between jet spaces, column `c` holding the image of the
/// `c`-th target basis monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetMap {
    pub rows: Vec<MultiIndex>,
    pub columns: Vec<MultiIndex>,
    pub matrix: Vec<Vec<Rational>>,
}

impl JetMap {
    pub fn is_identity(&self) -> bool {
        self.rows == self.columns
            && self.matrix.iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
            })
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "morphism src={} dst=({},{}) {{",
            self.source, self.target.n, self.target.k
        )?;
        for (i, p) in self.x_pullbacks.iter().enumerate() {
            write!(f, " x'{} = {};", i + 1, p)?;
        }
        for (j, p) in self.y_pullbacks.iter().enumerate() {
            write!(f, " y'{} = {};", j + 1, p)?;
        }
        write!(f, " }}")
    }
}

impl serde::Serialize for Morphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let xs: Vec<String> = self.x_pullbacks.iter().map(|f| f.to_string()).collect();
        let ys: Vec<String> = self.y_pullbacks.iter().map(|f| f.to_string()).collect();
        let mut st = s.serialize_struct("Morphism", 4)?;
        st.serialize_field("source", &self.source)?;
        st.serialize_field("target", &[self.target.n, self.target.k])?;
        st.serialize_field("x_pullbacks", &xs)?;
        st.serialize_field("y_pullbacks", &ys)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn x(s: Space, i: usize) -> FormalFunction {
        FormalFunction::x(s, i)
    }

    fn y(s: Space, j: usize) -> FormalFunction {
        FormalFunction::y(s, j)
    }

    #[test]
    fn identity_pullback() {
        let s = Space::new(2, 1, 3);
        let g = x(s, 0).mul(&y(s, 0)).unwrap().add(&x(s, 1).pow(3).unwrap()).unwrap();
        assert_eq!(Morphism::identity(s).pullback(&g).unwrap(), g);
    }

    #[test]
    fn smooth_target_example() {
        let src = Space::new(1, 1, 4);
        let tgt = Space::new(1, 0, 0);
        let phi = Morphism::new(src, tgt, vec![x(src, 0).add(&y(src, 0)).unwrap()], vec![]).unwrap();
        let g = x(tgt, 0).pow(2).unwrap();
        let expect = x(src, 0).add(&y(src, 0)).unwrap().pow(2).unwrap();
        assert_eq!(phi.pullback(&g).unwrap(), expect);
    }

    #[test]
    fn formal_target_example() {
        let src = Space::new(1, 1, 4);
        let tgt = Space::new(1, 1, 4);
        let phi = Morphism::new(
            src,
            tgt,
            vec![x(src, 0).add(&y(src, 0)).unwrap()],
            vec![x(src, 0).pow(2).unwrap().mul(&y(src, 0)).unwrap()],
        )
        .unwrap();
        let g = x(tgt, 0).mul(&y(tgt, 0)).unwrap();
        let x3y = x(src, 0).pow(3).unwrap().mul(&y(src, 0)).unwrap();
        let x2y2 = x(src, 0).pow(2).unwrap().mul(&y(src, 0).pow(2).unwrap()).unwrap();
        assert_eq!(phi.pullback(&g).unwrap(), x3y.add(&x2y2).unwrap());
    }

    #[test]
    fn rejects_nonlocal() {
        let s = Space::new(1, 1, 2);
        let err = Morphism::new(s, s, vec![x(s, 0)], vec![x(s, 0)]).unwrap_err();
        assert_eq!(err, Error::NotLocal { index: 1 });
    }

    #[test]
    fn translations_compose() {
        let s = Space::new(1, 0, 0);
        let shift = |c: i64| {
            Morphism::new(s, s, vec![x(s, 0).add(&FormalFunction::constant(s, int(c))).unwrap()], vec![]).unwrap()
        };
        assert_eq!(shift(1).compose(&shift(1)).unwrap(), shift(2));
        let phi = shift(3);
        assert_eq!(Morphism::identity(s).compose(&phi).unwrap(), phi);
    }

    #[test]
    fn jet_map_examples() {
        let s = Space::new(1, 1, 2);
        assert!(Morphism::identity(s).jet_map(&[int(1)], 3).unwrap().is_identity());
        let tgt = Space::new(1, 0, 0);
        let phi = Morphism::new(s, tgt, vec![x(s, 0).add(&y(s, 0)).unwrap()], vec![]).unwrap();
        let m = phi.jet_map(&[int(0)], 2).unwrap();
        // columns: 1, x'; rows: 1, y, x
        assert_eq!(m.columns.len(), 2);
        let col = |c: usize| m.matrix.iter().map(|r| r[c].clone()).collect::<Vec<_>>();
        assert_eq!(col(0), vec![int(1), int(0), int(0)]);
        assert_eq!(col(1), vec![int(0), int(1), int(1)]);
    }
}
