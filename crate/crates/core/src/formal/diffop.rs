use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{FormalFunction, Space};
use crate::algebra::{MultiIndex, Poly, Rational};
use crate::error::{Error, Result};

/// `Σ f_K ∂^K` in normal form, `K` a joint multi-index over `x` then `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    space: Space,
    terms: BTreeMap<MultiIndex, FormalFunction>,
}

impl DiffOp {
    pub fn zero(space: Space) -> Self {
        DiffOp { space, terms: BTreeMap::new() }
    }

    pub fn identity(space: Space) -> Self {
        Self::term(FormalFunction::one(space), MultiIndex::zero(space.nvars()))
    }

    /// `f ∘ ∂^K`.
    pub fn term(coefficient: FormalFunction, index: MultiIndex) -> Self {
        let space = coefficient.space();
        assert_eq!(index.nvars(), space.nvars(), "index length mismatch");
        let mut op = Self::zero(space);
        op.push(index, coefficient);
        op
    }

    /// `∂/∂z_i` in the joint variables.
    pub fn partial(space: Space, i: usize) -> Self {
        Self::term(FormalFunction::one(space), MultiIndex::unit(space.nvars(), i))
    }

    /// Multiplication by `f` as an order-0 operator.
    pub fn multiplication(f: FormalFunction) -> Self {
        let nv = f.space().nvars();
        Self::term(f, MultiIndex::zero(nv))
    }

    fn push(&mut self, index: MultiIndex, c: FormalFunction) {
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&index) {
            Some(old) => old.add(&c).expect("coefficients share the operator space"),
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(index, merged);
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, FormalFunction> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Normal-form order `max |K|`; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    fn max_y_order(&self) -> u32 {
        let n = self.space.n;
        self.terms
            .keys()
            .map(|m| m.exponents()[n..].iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.space.check_compatible(&other.space)?;
        let mut out = DiffOp { space: self.space.meet(&other.space), terms: self.terms.clone() };
        for (m, c) in &other.terms {
            out.push(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.space);
        for (m, f) in &self.terms {
            out.push(m.clone(), f.scale(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `f ∘ self`.
    pub fn left_mul(&self, f: &FormalFunction) -> Result<Self> {
        self.space.check_compatible(&f.space())?;
        let mut out = Self::zero(self.space);
        for (m, c) in &self.terms {
            out.push(m.clone(), f.mul(c)?);
        }
        Ok(out)
    }

    /// `D(f) = Σ f_K ∂^K f`.
    pub fn apply(&self, f: &FormalFunction) -> Result<FormalFunction> {
        self.space.check_compatible(&f.space())?;
        let needed = self.max_y_order();
        if needed > f.known_order() {
            return Err(Error::KnownOrderExhausted { needed, available: f.known_order() });
        }
        let known = f.known_order() - needed;
        let mut acc = FormalFunction::zero(f.space()).with_known(known);
        for (m, c) in &self.terms {
            let term = c.mul(&f.deriv_multi(m)?)?.with_known(known);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Normal form of `self ∘ other` by the Leibniz rule
    /// `∂^A (g ∂^B) = Σ_{L≤A} C(A,L) ∂^{A−L}(g) ∂^{L+B}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.space.check_compatible(&other.space)?;
        let mut out = Self::zero(self.space.meet(&other.space));
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                for l in a.divisors() {
                    let rest = a.checked_sub(&l).expect("divisor");
                    let coeff = Rational::from_integer(a.binomial(&l));
                    let dg = g.deriv_multi(&rest)?;
                    out.push(l.add(b), f.mul(&dg)?.scale(&coeff));
                }
            }
        }
        Ok(out)
    }

    /// `[D, f] = D ∘ f − f ∘ D`, in normal form.
    pub fn commutator_with_fn(&self, f: &FormalFunction) -> Result<Self> {
        self.space.check_compatible(&f.space())?;
        let mut out = Self::zero(self.space.meet(&f.space()));
        for (k, c) in &self.terms {
            for l in k.divisors() {
                if &l == k {
                    continue;
                }
                let rest = k.checked_sub(&l).expect("divisor");
                let coeff = Rational::from_integer(k.binomial(&l));
                out.push(l, c.mul(&f.deriv_multi(&rest)?)?.scale(&coeff));
            }
        }
        Ok(out)
    }

    /// Decides `order(D) ≤ r` twice: from the normal form, and by checking
    /// that `(r+1)`-fold iterated commutators with test functions vanish.
    /// The test functions are `trials` tuples of random monomials plus one
    /// tuple of coordinates taken from a leading term, which is a witness
    /// whenever the order exceeds `r`.
    pub fn order_certificate<R: Rng>(&self, r: u32, trials: usize, rng: &mut R) -> Result<bool> {
        let by_normal_form = self.order().map_or(true, |m| m <= r);
        let top = self.order().unwrap_or(0);
        let max_deg = top + 2;
        // room for every derivative the commutators can take
        let lifted_space = self.space.with_order(self.space.order + max_deg + r + 2);
        let lifted = self.retag(lifted_space);
        let nv = self.space.nvars();
        let monomials: Vec<MultiIndex> = MultiIndex::all_up_to(nv, max_deg)
            .into_iter()
            .filter(|m| !m.is_zero())
            .collect();
        let as_fn = |m: &MultiIndex| {
            FormalFunction::raw(lifted_space, Poly::monomial(nv, m.clone(), Rational::one()), lifted_space.order)
        };
        let mut tuples: Vec<Vec<FormalFunction>> = Vec::new();
        if !monomials.is_empty() {
            for _ in 0..trials {
                tuples.push((0..=r).map(|_| as_fn(monomials.choose(rng).expect("nonempty"))).collect());
            }
        }
        if let Some((lead, _)) = self.terms.iter().rev().find(|(m, _)| m.degree() == top) {
            if top > r {
                let mut vars = Vec::new();
                for (i, &e) in lead.exponents().iter().enumerate() {
                    vars.extend(std::iter::repeat(i).take(e as usize));
                }
                let witness = vars
                    .iter()
                    .take(r as usize + 1)
                    .map(|&i| FormalFunction::var(lifted_space, i))
                    .collect();
                tuples.push(witness);
            }
        }
        let mut by_commutators = true;
        for tuple in &tuples {
            let mut op = lifted.clone();
            for f in tuple {
                op = op.commutator_with_fn(f)?;
                if op.is_zero() {
                    break;
                }
            }
            if !op.is_zero() {
                by_commutators = false;
                break;
            }
        }
        if by_normal_form != by_commutators {
            return Err(Error::Internal(format!(
                "normal form says order <= {r} is {by_normal_form}, commutators say {by_commutators}"
            )));
        }
        Ok(by_normal_form)
    }

    fn retag(&self, space: Space) -> Self {
        let mut out = Self::zero(space);
        for (m, c) in &self.terms {
            out.push(m.clone(), c.retag(space, space.order));
        }
        out
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = self.space.var_names();
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mut factors = Vec::new();
                for (i, &e) in m.exponents().iter().enumerate() {
                    if e > 0 {
                        let d = format!("del_{}", names[i]);
                        factors.push(if e == 1 { d } else { format!("{d}^{e}") });
                    }
                }
                let coeff = format!("({c})");
                if factors.is_empty() {
                    coeff
                } else {
                    format!("{coeff}*{}", factors.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl serde::Serialize for DiffOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<(&MultiIndex, String)> = self.terms.iter().map(|(m, c)| (m, c.to_string())).collect();
        let mut st = s.serialize_struct("DiffOp", 3)?;
        st.serialize_field("space", &self.space)?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s() -> Space {
        Space::new(1, 1, 3)
    }

    fn dx() -> DiffOp {
        DiffOp::partial(s(), 0)
    }

    fn dy() -> DiffOp {
        DiffOp::partial(s(), 1)
    }

    #[test]
    fn apply_examples() {
        let y = FormalFunction::y(s(), 0);
        let x = FormalFunction::x(s(), 0);
        assert_eq!(dy().apply(&y.pow(2).unwrap()).unwrap(), y.scale(&int(2)).with_known(2));
        let f = x.mul(&y).unwrap();
        assert_eq!(DiffOp::identity(s()).apply(&f).unwrap(), f);
        let euler = dx().left_mul(&x).unwrap();
        assert_eq!(euler.apply(&x.pow(3).unwrap()).unwrap(), x.pow(3).unwrap().scale(&int(3)));
    }

    #[test]
    fn commutator_examples() {
        let y = FormalFunction::y(s(), 0);
        let x = FormalFunction::x(s(), 0);
        assert_eq!(dy().commutator_with_fn(&y).unwrap(), DiffOp::identity(s()).retag_known(2));
        let mult = DiffOp::multiplication(x.clone());
        assert!(mult.commutator_with_fn(&y).unwrap().is_zero());
        let dxx = dx().compose(&dx()).unwrap();
        assert_eq!(dxx.commutator_with_fn(&x).unwrap(), dx().scale(&int(2)));
    }

    #[test]
    fn certificate_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dxdy = dx().compose(&dy()).unwrap();
        assert!(dxdy.order_certificate(2, 10, &mut rng).unwrap());
        assert!(!dxdy.order_certificate(1, 10, &mut rng).unwrap());
        assert!(DiffOp::zero(s()).order_certificate(0, 10, &mut rng).unwrap());
    }

    impl DiffOp {
        fn retag_known(&self, known: u32) -> Self {
            let mut out = Self::zero(self.space);
            for (m, c) in &self.terms {
                out.push(m.clone(), c.with_known(known));
            }
            out
        }
    }
}
