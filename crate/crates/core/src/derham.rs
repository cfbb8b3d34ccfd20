//! Differential forms on `(ℝⁿ)^(k)`: wedge, coboundary, pullback and the
//! Künneth product.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::algebra::rational::{int, sign_pow};
use crate::algebra::tuple::sort_sign;
use crate::algebra::{OrderedTuple, Rational};
use crate::error::{Error, Result};
use crate::formal::{FormalFunction, Space};
use crate::morphisms::Morphism;

/// `Σ f_A dz_A` with `A` a strictly increasing tuple of joint indices:
/// `1..=n` stand for `dx_i`, `n+1..=n+k` for `dy_j`. The `dx` block thus
/// always precedes the `dy` block.
#[derive(Clone, Debug)]
pub struct Form {
    space: Space,
    degree: usize,
    terms: BTreeMap<OrderedTuple, FormalFunction>,
    /// Lowest known order of anything summed in, vanished summands included.
    floor: u32,
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.degree == other.degree && self.terms == other.terms
    }
}

impl Eq for Form {}

impl Form {
    pub fn zero(space: Space, degree: usize) -> Self {
        Form { space, degree, terms: BTreeMap::new(), floor: space.order }
    }

    /// A function as a 0-form.
    pub fn function(f: FormalFunction) -> Self {
        Self::term(f, OrderedTuple::empty())
    }

    /// `f dz_A`.
    pub fn term(f: FormalFunction, tuple: OrderedTuple) -> Self {
        let space = f.space();
        assert!(tuple.last_index() <= space.nvars(), "tuple index out of range");
        let mut out = Self::zero(space, tuple.len());
        out.push(tuple, f);
        out
    }

    /// `dz_i` for a 1-based joint index.
    pub fn dz(space: Space, i: usize) -> Self {
        Self::term(FormalFunction::one(space), OrderedTuple::new(vec![i]).expect("1-based"))
    }

    pub fn dx(space: Space, i: usize) -> Self {
        Self::dz(space, i)
    }

    pub fn dy(space: Space, j: usize) -> Self {
        Self::dz(space, space.n + j)
    }

    /// The basis tuples of `Ω^r`.
    pub fn basis(space: Space, r: usize) -> Vec<OrderedTuple> {
        OrderedTuple::all(space.nvars(), r)
    }

    fn push(&mut self, tuple: OrderedTuple, f: FormalFunction) {
        self.floor = self.floor.min(f.known_order());
        if f.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&tuple) {
            Some(old) => old.add(&f).expect("coefficients share the form space"),
            None => f,
        };
        if !merged.is_zero() {
            self.terms.insert(tuple, merged);
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<OrderedTuple, FormalFunction> {
        &self.terms
    }

    pub fn coefficient(&self, tuple: &OrderedTuple) -> FormalFunction {
        self.terms.get(tuple).cloned().unwrap_or_else(|| FormalFunction::zero(self.space))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Equality modulo the unknown coefficients of either side.
    pub fn agrees(&self, other: &Form) -> bool {
        self.sub(other).is_ok_and(|d| d.with_known(d.floor).is_zero())
    }

    /// Smallest known order over everything summed into the form.
    pub fn known_order(&self) -> u32 {
        self.terms
            .values()
            .map(FormalFunction::known_order)
            .fold(self.floor, u32::min)
    }

    /// Lowers the known order of every coefficient to at most `known`.
    pub fn with_known(&self, known: u32) -> Form {
        let mut out = Form::zero(self.space, self.degree);
        out.floor = self.floor.min(known);
        for (t, f) in &self.terms {
            out.push(t.clone(), f.with_known(known));
        }
        out
    }

    fn check_same(&self, other: &Form) -> Result<()> {
        self.space.check_compatible(&other.space)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, got: other.degree });
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.space = self.space.meet(&other.space);
        out.floor = out.floor.min(other.floor);
        for (t, f) in &other.terms {
            out.push(t.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Form {
        let mut out = Form::zero(self.space, self.degree);
        out.floor = self.floor;
        for (t, f) in &self.terms {
            out.push(t.clone(), f.scale(c));
        }
        out
    }

    /// `g · ω`.
    pub fn mul_fn(&self, g: &FormalFunction) -> Result<Form> {
        self.space.check_compatible(&g.space())?;
        let mut out = Form::zero(self.space, self.degree);
        out.floor = self.floor.min(g.known_order());
        for (t, f) in &self.terms {
            out.push(t.clone(), g.mul(f)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.space.check_compatible(&other.space)?;
        let mut out = Form::zero(self.space.meet(&other.space), self.degree + other.degree);
        out.floor = self.floor.min(other.floor);
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                let seq: Vec<usize> = a.indices().iter().chain(b.indices()).copied().collect();
                let Some((sign, tuple)) = sort_sign(&seq) else { continue };
                out.push(tuple, f.mul(g)?.scale(&int(sign as i64)));
            }
        }
        Ok(out)
    }

    /// `d(f dz_A) = Σ_{i∉A} ∂_i f dz_i ∧ dz_A`.
    pub fn d(&self) -> Result<Form> {
        let nv = self.space.nvars();
        let mut out = Form::zero(self.space, self.degree + 1);
        out.floor = if self.space.k > 0 { self.floor.saturating_sub(1) } else { self.floor };
        for (a, f) in &self.terms {
            for i in 1..=nv {
                let Some(tuple) = a.insert(i) else { continue };
                let df = f.deriv(i - 1)?;
                out.push(tuple, df.scale(&sign_pow(a.count_below(i))));
            }
        }
        Ok(out)
    }

    /// `φ^♮(f dz'_A) = d(φ*z'_{a_1}) ∧ ⋯ ∧ d(φ*z'_{a_r}) ∧ φ*(f)`.
    pub fn pullback(&self, phi: &Morphism) -> Result<Form> {
        phi.target().check_compatible(&self.space)?;
        let source = phi.source();
        let differentials: Vec<Form> = phi
            .joint_pullbacks()
            .map(|f| Form::function(f.clone()).d())
            .collect::<Result<_>>()?;
        let mut out = Form::zero(source, self.degree);
        out.floor = phi.result_known_order(self.floor);
        for (a, f) in &self.terms {
            let mut acc = Form::function(phi.pullback(f)?);
            for &i in a.indices().iter().rev() {
                acc = differentials[i - 1].wedge(&acc)?;
            }
            out.floor = out.floor.min(acc.floor);
            for (t, c) in acc.terms {
                out.push(t, c);
            }
        }
        Ok(out)
    }

    /// `Ψ(ω₁ ⊗ ω₂) = p₁^♮ω₁ ∧ p₂^♮ω₂` on the product space.
    pub fn kunneth(&self, other: &Form) -> Form {
        let (s1, s2) = (self.space, other.space);
        let space = s1.product(&s2);
        let mut out = Form::zero(space, self.degree + other.degree);
        out.floor = self.floor.min(other.floor);
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                let seq: Vec<usize> = a
                    .indices()
                    .iter()
                    .map(|&i| left_index(s1, s2, i))
                    .chain(b.indices().iter().map(|&i| right_index(s1, s2, i)))
                    .collect();
                let (sign, tuple) = sort_sign(&seq).expect("disjoint blocks");
                out.push(tuple, f.external_product(g).scale(&int(sign as i64)));
            }
        }
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let nv = self.space.nvars();
        let n = self.space.n;
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, f)| {
                let coeff = f.poly().display_with(&names[..nv]);
                let basis: Vec<String> = t
                    .indices()
                    .iter()
                    .map(|&i| if i <= n { format!("dx{i}") } else { format!("dy{}", i - n) })
                    .collect();
                if basis.is_empty() {
                    format!("({coeff})")
                } else {
                    format!("({coeff})*{}", basis.join("^^"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// Joint index of the left factor's `dz_i` inside the product space.
pub(crate) fn left_index(s1: Space, s2: Space, i: usize) -> usize {
    if i <= s1.n {
        i
    } else {
        s2.n + i
    }
}

/// Joint index of the right factor's `dz_i` inside the product space.
pub(crate) fn right_index(s1: Space, s2: Space, i: usize) -> usize {
    if i <= s2.n {
        s1.n + i
    } else {
        s1.n + s1.k + i
    }
}

/// The projections `p₁, p₂` of the product onto its factors.
pub fn projections(s1: Space, s2: Space) -> Result<(Morphism, Morphism)> {
    let space = s1.product(&s2);
    let var = |i: usize| FormalFunction::var(space, i - 1);
    let p1 = Morphism::new(
        space,
        s1,
        (1..=s1.n).map(|i| var(left_index(s1, s2, i))).collect(),
        (s1.n + 1..=s1.n + s1.k).map(|i| var(left_index(s1, s2, i))).collect(),
    )?;
    let p2 = Morphism::new(
        space,
        s2,
        (1..=s2.n).map(|i| var(right_index(s1, s2, i))).collect(),
        (s2.n + 1..=s2.n + s2.k).map(|i| var(right_index(s1, s2, i))).collect(),
    )?;
    Ok((p1, p2))
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&self.space.var_names()))
    }
}

impl serde::Serialize for Form {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<(&OrderedTuple, String)> = self.terms.iter().map(|(t, f)| (t, f.to_string())).collect();
        let mut st = s.serialize_struct("Form", 4)?;
        st.serialize_field("space", &self.space)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s11() -> Space {
        Space::new(1, 1, 3)
    }

    #[test]
    fn wedge_examples() {
        let s = Space::new(2, 0, 0);
        let (dx1, dx2) = (Form::dx(s, 1), Form::dx(s, 2));
        let top = Form::term(FormalFunction::one(s), OrderedTuple::full(2));
        assert_eq!(dx1.wedge(&dx2).unwrap(), top);
        assert_eq!(dx2.wedge(&dx1).unwrap(), top.neg());
        assert!(dx1.wedge(&dx1).unwrap().is_zero());
        let one = Form::function(FormalFunction::one(s));
        assert_eq!(dx1.wedge(&one).unwrap(), dx1);
    }

    #[test]
    fn d_examples() {
        let s = s11();
        let x = FormalFunction::x(s, 0);
        let y = FormalFunction::y(s, 0);
        let f = x.pow(2).unwrap().mul(&y).unwrap();
        let df = Form::function(f).d().unwrap();
        let expect = Form::dx(s, 1)
            .mul_fn(&x.mul(&y).unwrap().scale(&int(2)))
            .unwrap()
            .add(&Form::dy(s, 1).mul_fn(&x.pow(2).unwrap()).unwrap())
            .unwrap();
        assert!(df.sub(&expect).unwrap().is_zero());
        assert!(Form::function(FormalFunction::one(s)).d().unwrap().is_zero());
        assert!(df.d().unwrap().is_zero());
    }

    #[test]
    fn pullback_examples() {
        let s = s11();
        let tgt = Space::new(1, 0, 0);
        let x = FormalFunction::x(s, 0);
        let y = FormalFunction::y(s, 0);
        let phi = Morphism::new(s, tgt, vec![x.add(&y).unwrap()], vec![]).unwrap();
        let img = Form::dx(tgt, 1).pullback(&phi).unwrap();
        assert!(img.agrees(&Form::dx(s, 1).add(&Form::dy(s, 1)).unwrap()));

        let s = Space::new(1, 0, 0);
        let x = FormalFunction::x(s, 0);
        let sq = Morphism::new(s, s, vec![x.pow(2).unwrap()], vec![]).unwrap();
        let omega = Form::dx(s, 1).mul_fn(&x).unwrap();
        let expect = Form::dx(s, 1).mul_fn(&x.pow(3).unwrap().scale(&int(2))).unwrap();
        assert_eq!(omega.pullback(&sq).unwrap(), expect);
        let id = Morphism::identity(s11());
        let w = Form::dy(s11(), 1).mul_fn(&FormalFunction::x(s11(), 0)).unwrap();
        assert!(w.pullback(&id).unwrap().agrees(&w));
    }

    #[test]
    fn kunneth_examples() {
        let a = Space::new(1, 0, 2);
        let b = Space::new(1, 0, 2);
        let prod = a.product(&b);
        let psi = Form::dx(a, 1).kunneth(&Form::dx(b, 1));
        assert_eq!(psi, Form::dx(prod, 1).wedge(&Form::dx(prod, 2)).unwrap());
        let c = Space::new(0, 1, 2);
        let w = Form::dx(b, 1).mul_fn(&FormalFunction::x(b, 0)).unwrap();
        let one = Form::function(FormalFunction::one(c));
        let lifted = one.kunneth(&w);
        let cb = c.product(&b);
        assert_eq!(lifted, Form::dx(cb, 1).mul_fn(&FormalFunction::x(cb, 0)).unwrap());
        // dy ⊗ dx' lands as dy₁ ∧ dx₁ = −dx₁ ∧ dy₁
        let cross = Form::dy(c, 1).kunneth(&Form::dx(b, 1));
        assert_eq!(cross, Form::dx(cb, 1).wedge(&Form::dy(cb, 1)).unwrap().neg());
    }

    #[test]
    fn kunneth_agrees_with_projections() {
        let a = Space::new(1, 1, 2);
        let b = Space::new(1, 1, 2);
        let (p1, p2) = projections(a, b).unwrap();
        for t1 in (0..=2).flat_map(|r| Form::basis(a, r)) {
            for t2 in (0..=2).flat_map(|r| Form::basis(b, r)) {
                let w1 = Form::term(FormalFunction::x(a, 0), t1.clone());
                let w2 = Form::term(FormalFunction::y(b, 0), t2.clone());
                let direct = w1.kunneth(&w2);
                let via = w1.pullback(&p1).unwrap().wedge(&w2.pullback(&p2).unwrap()).unwrap();
                assert!(direct.sub(&via).unwrap().is_zero(), "{t1} {t2}");
            }
        }
    }
}
