use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{FormalFunction, Space};
use crate::algebra::rational::to_canonical;
use crate::algebra::{MultiIndex, Poly, Rational};
use crate::error::{Error, Result};

/// Number of monomials `(x − a)^I y^J` with `|I| + |J| < r`.
pub fn jet_dimension(n: usize, k: usize, r: u32) -> usize {
    if r == 0 {
        0
    } else {
        MultiIndex::all_up_to(n + k, r - 1).len()
    }
}

/// An element of `O_a / m_a^r`: coefficients on the basis `(x − a)^I y^J`,
/// indexed by joint multi-indices `(I, J)` with `|I| + |J| < r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    space: Space,
    basepoint: Vec<Rational>,
    order: u32,
    coeffs: BTreeMap<MultiIndex, Rational>,
}

impl Jet {
    /// The Taylor expansion of `f` at `a`, cut below total degree `r`.
    pub fn of(f: &FormalFunction, a: &[Rational], r: u32) -> Result<Self> {
        let space = f.space();
        if a.len() != space.n {
            return Err(Error::DimensionMismatch { expected: space.n, got: a.len() });
        }
        if space.k > 0 && r > f.known_order() + 1 {
            return Err(Error::KnownOrderExhausted { needed: r.saturating_sub(1), available: f.known_order() });
        }
        let shift: Vec<Rational> = a
            .iter()
            .cloned()
            .chain(std::iter::repeat(Rational::zero()).take(space.k))
            .collect();
        let shifted = f.poly().shift(&shift);
        let coeffs = shifted
            .terms()
            .filter(|(m, _)| m.degree() < r)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Ok(Jet { space, basepoint: a.to_vec(), order: r, coeffs })
    }

    /// Builds a jet from explicit coefficients, dropping zeros.
    pub fn from_coefficients(
        space: Space,
        basepoint: Vec<Rational>,
        order: u32,
        coeffs: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (m, c) in coeffs {
            if m.nvars() != space.nvars() || m.degree() >= order {
                return Err(Error::InvalidArgument(format!("{m} is not a basis index below order {order}")));
            }
            if !c.is_zero() {
                map.insert(m, c);
            }
        }
        Ok(Jet { space, basepoint, order, coeffs: map })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn basepoint(&self) -> &[Rational] {
        &self.basepoint
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficient(&self, index: &MultiIndex) -> Rational {
        self.coeffs.get(index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self) -> &BTreeMap<MultiIndex, Rational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn dimension(&self) -> usize {
        jet_dimension(self.space.n, self.space.k, self.order)
    }

    /// Basis indices in graded-lexicographic order.
    pub fn basis(&self) -> Vec<MultiIndex> {
        if self.order == 0 {
            return Vec::new();
        }
        MultiIndex::all_up_to(self.space.nvars(), self.order - 1)
    }

    /// Coordinates on [`Jet::basis`].
    pub fn to_vector(&self) -> Vec<Rational> {
        self.basis().iter().map(|m| self.coefficient(m)).collect()
    }

    /// The polynomial `Σ c (x − a)^I y^J` in the shifted coordinates.
    pub fn shifted_poly(&self) -> Poly {
        Poly::from_terms(self.space.nvars(), self.coeffs.iter().map(|(m, c)| (m.clone(), c.clone())))
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.space.n)
            .map(|i| {
                let a = &self.basepoint[i];
                if a.is_zero() {
                    format!("x{}", i + 1)
                } else {
                    format!("(x{}-{})", i + 1, to_canonical(a))
                }
            })
            .chain((1..=self.space.k).map(|j| format!("y{j}")))
            .collect();
        write!(f, "{}", self.shifted_poly().display_with(&names))
    }
}

impl serde::Serialize for Jet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let a: Vec<String> = self.basepoint.iter().map(to_canonical).collect();
        let coeffs: Vec<(&MultiIndex, String)> = self.coeffs.iter().map(|(m, c)| (m, to_canonical(c))).collect();
        let mut st = s.serialize_struct("Jet", 5)?;
        st.serialize_field("space", &self.space)?;
        st.serialize_field("basepoint", &a)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("coefficients", &coeffs)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

/// `Σ c_{I,J} Ev_a ∘ ∂_x^I ∂_y^J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointDistribution {
    space: Space,
    basepoint: Vec<Rational>,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl PointDistribution {
    pub fn new(
        space: Space,
        basepoint: Vec<Rational>,
        terms: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self> {
        if basepoint.len() != space.n {
            return Err(Error::DimensionMismatch { expected: space.n, got: basepoint.len() });
        }
        let mut map: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        for (m, c) in terms {
            if m.nvars() != space.nvars() {
                return Err(Error::DimensionMismatch { expected: space.nvars(), got: m.nvars() });
            }
            *map.entry(m).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(PointDistribution { space, basepoint, terms: map })
    }

    /// The Dirac distribution `δ_a`.
    pub fn dirac(space: Space, basepoint: Vec<Rational>) -> Result<Self> {
        Self::new(space, basepoint, [(MultiIndex::zero(space.nvars()), Rational::from_integer(1.into()))])
    }

    /// `Ev_a ∘ ∂^K` for a joint multi-index.
    pub fn derivative(space: Space, basepoint: Vec<Rational>, index: MultiIndex) -> Result<Self> {
        Self::new(space, basepoint, [(index, Rational::from_integer(1.into()))])
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Rational> {
        &self.terms
    }

    pub fn basepoint(&self) -> &[Rational] {
        &self.basepoint
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// `Σ c_K (∂^K f)(a)`.
    pub fn pair(&self, f: &FormalFunction) -> Result<Rational> {
        self.space.check_compatible(&f.space())?;
        let n = self.space.n;
        let needed = self
            .terms
            .keys()
            .map(|m| m.exponents()[n..].iter().sum::<u32>())
            .max()
            .unwrap_or(0);
        if needed > f.known_order() {
            return Err(Error::KnownOrderExhausted { needed, available: f.known_order() });
        }
        // (∂^K f)(a) = K! · [coefficient of (z − a)^K in the shifted expansion]
        let shift: Vec<Rational> = self
            .basepoint
            .iter()
            .cloned()
            .chain(std::iter::repeat(Rational::zero()).take(self.space.k))
            .collect();
        let shifted = f.poly().shift(&shift);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * shifted.coefficient(m) * m.factorial_q();
        }
        Ok(acc)
    }
}

impl fmt::Display for PointDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let a: Vec<String> = self.basepoint.iter().map(to_canonical).collect();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{}*ev[{}]d{}", to_canonical(c), a.join(","), m))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    #[test]
    fn jet_examples() {
        let s = Space::new(1, 0, 0);
        let x = FormalFunction::x(s, 0);
        let j = Jet::of(&x.pow(2).unwrap(), &[int(1)], 3).unwrap();
        assert_eq!(j.to_vector(), vec![int(1), int(2), int(1)]);
        let s = Space::new(1, 1, 1);
        let y = FormalFunction::y(s, 0);
        let j = Jet::of(&y, &[int(5)], 2).unwrap();
        assert_eq!(j.coefficient(&MultiIndex::new(vec![0, 1])), int(1));
        assert_eq!(j.coefficients().len(), 1);
        assert_eq!(jet_dimension(1, 1, 2), 3);
        assert!(Jet::of(&y.with_known(0), &[int(0)], 2).is_err());
    }

    #[test]
    fn pairing_examples() {
        let s = Space::new(1, 1, 2);
        let xy = FormalFunction::x(s, 0).mul(&FormalFunction::y(s, 0)).unwrap();
        let ev = PointDistribution::derivative(s, vec![int(0)], MultiIndex::new(vec![1, 1])).unwrap();
        assert_eq!(ev.pair(&xy).unwrap(), int(1));
        let delta = PointDistribution::dirac(s, vec![int(3)]).unwrap();
        assert_eq!(delta.pair(&FormalFunction::one(s)).unwrap(), int(1));
    }
}
