use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::Space;
use crate::algebra::{MultiIndex, Poly, Rational};
use crate::error::{Error, Result};

/// A truncated series `Σ_J f_J(x) y^J`.
///
/// Stored as one polynomial in the joint variables `x_1..x_n, y_1..y_k`.
/// Coefficients with `|J| > known_order` are unknown and never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalFunction {
    space: Space,
    known_order: u32,
    poly: Poly,
}

fn y_degree(m: &MultiIndex, n: usize) -> u32 {
    m.exponents()[n..].iter().sum()
}

impl FormalFunction {
    /// Truncates `poly` (in `n + k` variables) to the space.
    pub fn new(space: Space, poly: Poly) -> Result<Self> {
        Self::with_known_order(space, poly, space.order)
    }

    pub fn with_known_order(space: Space, poly: Poly, known_order: u32) -> Result<Self> {
        if poly.nvars() != space.nvars() {
            return Err(Error::DimensionMismatch { expected: space.nvars(), got: poly.nvars() });
        }
        let known_order = known_order.min(space.order);
        Ok(Self::raw(space, poly, known_order))
    }

    pub(crate) fn raw(space: Space, poly: Poly, known_order: u32) -> Self {
        let n = space.n;
        let poly = if poly.terms().any(|(m, _)| y_degree(m, n) > known_order) {
            poly.filter(|m| y_degree(m, n) <= known_order)
        } else {
            poly
        };
        FormalFunction { space, known_order, poly }
    }

    pub fn zero(space: Space) -> Self {
        Self::raw(space, Poly::zero(space.nvars()), space.order)
    }

    pub fn one(space: Space) -> Self {
        Self::constant(space, Rational::one())
    }

    pub fn constant(space: Space, c: Rational) -> Self {
        Self::raw(space, Poly::constant(space.nvars(), c), space.order)
    }

    /// The coordinate `x_{i+1}`.
    pub fn x(space: Space, i: usize) -> Self {
        assert!(i < space.n, "x index out of range");
        Self::raw(space, Poly::var(space.nvars(), i), space.order)
    }

    /// The formal variable `y_{j+1}`.
    pub fn y(space: Space, j: usize) -> Self {
        assert!(j < space.k, "y index out of range");
        Self::raw(space, Poly::var(space.nvars(), space.n + j), space.order)
    }

    /// Joint variable `z_i`: `x` for `i < n`, `y` afterwards.
    pub fn var(space: Space, i: usize) -> Self {
        if i < space.n {
            Self::x(space, i)
        } else {
            Self::y(space, i - space.n)
        }
    }

    /// A polynomial in `x` only, embedded as a `y`-constant series.
    pub fn from_x_poly(space: Space, p: &Poly) -> Self {
        assert_eq!(p.nvars(), space.n);
        let map: Vec<usize> = (0..space.n).collect();
        Self::raw(space, p.relabel(space.nvars(), &map), space.order)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn known_order(&self) -> u32 {
        self.known_order
    }

    /// The joint polynomial.
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Equality modulo the unknown coefficients of either side.
    pub fn agrees(&self, other: &Self) -> bool {
        self.sub(other).is_ok_and(|d| d.is_zero())
    }

    /// `J ↦ f_J`, with `f_J` a polynomial in `x`.
    pub fn coefficients(&self) -> BTreeMap<MultiIndex, Poly> {
        let n = self.space.n;
        let mut out: BTreeMap<MultiIndex, Poly> = BTreeMap::new();
        for (m, c) in self.poly.terms() {
            let j = m.slice(n, m.nvars());
            let i = m.slice(0, n);
            out.entry(j).or_insert_with(|| Poly::zero(n)).add_term(i, c.clone());
        }
        out
    }

    pub fn coefficient(&self, j: &MultiIndex) -> Poly {
        self.coefficients().remove(j).unwrap_or_else(|| Poly::zero(self.space.n))
    }

    /// The reduction `f_0`, a polynomial in `x`.
    pub fn reduction(&self) -> Poly {
        self.coefficient(&MultiIndex::zero(self.space.k))
    }

    /// Smallest `|J|` with `f_J ≠ 0`, `None` for zero.
    pub fn y_valuation(&self) -> Option<u32> {
        let n = self.space.n;
        self.poly.terms().map(|(m, _)| y_degree(m, n)).min()
    }

    /// Value at `a`: the reduction evaluated there.
    pub fn value(&self, a: &[Rational]) -> Result<Rational> {
        if a.len() != self.space.n {
            return Err(Error::DimensionMismatch { expected: self.space.n, got: a.len() });
        }
        Ok(self.reduction().eval(a))
    }

    fn combine(&self, other: &Self, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<Self> {
        self.space.check_compatible(&other.space)?;
        let space = self.space.meet(&other.space);
        let known = self.known_order.min(other.known_order);
        Ok(Self::raw(space, f(&self.poly, &other.poly), known))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.space.check_compatible(&other.space)?;
        let known = self.known_order.min(other.known_order);
        let n = self.space.n;
        let poly = self.poly.mul_filtered(&other.poly, |m| y_degree(m, n) <= known);
        Ok(Self::raw(self.space.meet(&other.space), poly, known))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::raw(self.space, self.poly.scale(c), self.known_order)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.space).with_known(self.known_order);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Lowers the known order (never raises it).
    pub fn with_known(&self, known: u32) -> Self {
        Self::raw(self.space, self.poly.clone(), known.min(self.known_order))
    }

    /// Re-tags the same polynomial in another truncation of the same
    /// `(n, k)`, trusting it to be exact up to `known`.
    pub(crate) fn retag(&self, space: Space, known: u32) -> Self {
        debug_assert!(space.compatible(&self.space));
        Self::raw(space, self.poly.clone(), known.min(space.order))
    }

    /// `∂/∂z_i` in the joint variables.
    pub fn deriv(&self, i: usize) -> Result<Self> {
        let mut known = self.known_order;
        if i >= self.space.n {
            if known == 0 {
                return Err(Error::KnownOrderExhausted { needed: 1, available: 0 });
            }
            known -= 1;
        }
        Ok(Self::raw(self.space, self.poly.deriv(i), known))
    }

    pub fn deriv_x(&self, i: usize) -> Result<Self> {
        self.deriv(i)
    }

    pub fn deriv_y(&self, j: usize) -> Result<Self> {
        self.deriv(self.space.n + j)
    }

    /// `∂^K` for a joint multi-index `K`.
    pub fn deriv_multi(&self, index: &MultiIndex) -> Result<Self> {
        let needed = y_degree(index, self.space.n);
        if needed > self.known_order {
            return Err(Error::KnownOrderExhausted { needed, available: self.known_order });
        }
        Ok(Self::raw(self.space, self.poly.deriv_multi(index), self.known_order - needed))
    }

    /// `f(x) g(x')` on the product space.
    pub fn external_product(&self, other: &Self) -> Self {
        let (a, b) = (self.space, other.space);
        let space = a.product(&b);
        let total = space.nvars();
        let left: Vec<usize> = (0..a.n).chain((0..a.k).map(|j| a.n + b.n + j)).collect();
        let right: Vec<usize> = (0..b.n).map(|i| a.n + i).chain((0..b.k).map(|j| a.n + b.n + a.k + j)).collect();
        let p = self.poly.relabel(total, &left);
        let q = other.poly.relabel(total, &right);
        let known = self.known_order.min(other.known_order);
        let n = space.n;
        Self::raw(space, p.mul_filtered(&q, |m| y_degree(m, n) <= known), known)
    }

    /// An inverse near `a`: `g` with `f·g ≡ 1` modulo `(x − a, y)^r`.
    pub fn invert(&self, a: &[Rational], r: u32) -> Result<Self> {
        let n = self.space.n;
        if a.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.len() });
        }
        if r == 0 {
            return Err(Error::InvalidArgument("jet order must be positive".into()));
        }
        if self.space.k > 0 && r > self.known_order + 1 {
            return Err(Error::KnownOrderExhausted { needed: r - 1, available: self.known_order });
        }
        let c = self.value(a)?;
        if c.is_zero() {
            return Err(Error::NotInvertible);
        }
        let nv = self.space.nvars();
        let shift: Vec<Rational> = a.iter().cloned().chain(std::iter::repeat(Rational::zero()).take(self.space.k)).collect();
        let keep = |m: &MultiIndex| m.degree() < r;
        // f(z + a) = c (1 + u) with u(0) = 0
        let shifted = self.poly.shift(&shift).filter(keep);
        let inv_c = Rational::one() / &c;
        let u = &shifted.scale(&inv_c) - &Poly::one(nv);
        let minus_u = -&u;
        let mut term = Poly::one(nv);
        let mut series = Poly::one(nv);
        for _ in 1..r {
            term = term.mul_filtered(&minus_u, keep);
            series = &series + &term;
        }
        let back: Vec<Rational> = shift.iter().map(|v| -v.clone()).collect();
        let g = series.scale(&inv_c).shift(&back);
        let known = self.known_order.min(r - 1);
        Ok(Self::raw(self.space, g, known))
    }
}

impl fmt::Display for FormalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.display_with(&self.space.var_names()))
    }
}

impl serde::Serialize for FormalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FormalFunction", 4)?;
        st.serialize_field("space", &self.space)?;
        st.serialize_field("known_order", &self.known_order)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("poly", &self.poly)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::formal::Jet;

    fn sp(n: usize, k: usize, o: u32) -> Space {
        Space::new(n, k, o)
    }

    #[test]
    fn mul_examples() {
        let s = sp(1, 1, 2);
        let x = FormalFunction::x(s, 0);
        let y = FormalFunction::y(s, 0);
        let one = FormalFunction::one(s);
        assert_eq!(x.mul(&one).unwrap(), x);
        let lhs = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        let rhs = x.pow(2).unwrap().sub(&y.pow(2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        let s0 = sp(0, 1, 2);
        let y = FormalFunction::y(s0, 0);
        let one = FormalFunction::one(s0);
        let a = one.add(&y).unwrap();
        let b = one.sub(&y).unwrap().add(&y.pow(2).unwrap()).unwrap();
        assert_eq!(a.mul(&b).unwrap(), one);
    }

    #[test]
    fn value_examples() {
        let s = sp(1, 1, 2);
        let x = FormalFunction::x(s, 0);
        let y = FormalFunction::y(s, 0);
        let f = FormalFunction::one(s)
            .add(&x)
            .unwrap()
            .add(&y.scale(&int(3)))
            .unwrap()
            .add(&x.mul(&y.pow(2).unwrap()).unwrap())
            .unwrap();
        assert_eq!(f.value(&[int(2)]).unwrap(), int(3));
        assert_eq!(y.value(&[int(7)]).unwrap(), int(0));
        assert_eq!(FormalFunction::zero(s).value(&[int(1)]).unwrap(), int(0));
        assert!(f.value(&[]).is_err());
    }

    #[test]
    fn invert_examples() {
        let s = sp(0, 1, 3);
        let y = FormalFunction::y(s, 0);
        let one = FormalFunction::one(s);
        let g = one.add(&y).unwrap().invert(&[], 3).unwrap();
        let expect = one.sub(&y).unwrap().add(&y.pow(2).unwrap()).unwrap();
        assert_eq!(g.poly(), expect.poly());
        let two = FormalFunction::constant(sp(1, 0, 0), int(2));
        assert_eq!(two.invert(&[int(0)], 1).unwrap().poly(), &Poly::constant(1, crate::algebra::rational::frac(1, 2)));
        let x = FormalFunction::x(sp(1, 0, 0), 0);
        assert_eq!(x.invert(&[int(0)], 2).unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn invert_away_from_origin() {
        let s = sp(1, 1, 3);
        let x = FormalFunction::x(s, 0);
        let y = FormalFunction::y(s, 0);
        let f = x.pow(2).unwrap().add(&y.mul(&x).unwrap()).unwrap().add(&FormalFunction::one(s)).unwrap();
        let a = [int(2)];
        for r in 1..=4 {
            let g = f.invert(&a, r).unwrap();
            let residual = f.mul(&g).unwrap().sub(&FormalFunction::one(s)).unwrap();
            assert!(Jet::of(&residual, &a, r).unwrap().is_zero(), "r = {r}");
        }
    }

    #[test]
    fn truncation_and_derivatives() {
        let s = sp(1, 1, 2);
        let y = FormalFunction::y(s, 0);
        assert!(y.pow(3).unwrap().is_zero());
        let d = y.pow(2).unwrap().deriv_y(0).unwrap();
        assert_eq!(d, y.scale(&int(2)).with_known(1));
        assert_eq!(d.known_order(), 1);
        let f = FormalFunction::one(s).with_known(0);
        assert!(matches!(f.deriv_y(0), Err(Error::KnownOrderExhausted { .. })));
        let other = FormalFunction::one(sp(2, 1, 2));
        assert_eq!(f.add(&other).unwrap_err().code(), crate::error::ErrorCode::SpaceMismatch);
    }

    #[test]
    fn external_product_examples() {
        let s = sp(1, 1, 2);
        let x = FormalFunction::x(s, 0);
        let y = FormalFunction::y(s, 0);
        let big = s.product(&s);
        assert_eq!(FormalFunction::one(s).external_product(&y), FormalFunction::y(big, 1));
        assert_eq!(
            x.external_product(&x),
            FormalFunction::x(big, 0).mul(&FormalFunction::x(big, 1)).unwrap()
        );
        let lhs = x.add(&y).unwrap().external_product(&y);
        let (x1, y1, y2) = (FormalFunction::x(big, 0), FormalFunction::y(big, 0), FormalFunction::y(big, 1));
        let rhs = x1.mul(&y2).unwrap().add(&y1.mul(&y2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
