//! Compactly supported formal densities, dual forms, the dual coboundary and
//! the dual Künneth product.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::rational::sign_pow;
use crate::algebra::tuple::{sort_sign, wedge_sign_i8};
use crate::algebra::{MultiIndex, OrderedTuple, Poly, Rational, TensorDensity};
use crate::derham::Form;
use crate::error::{Error, Result};
use crate::formal::{FormalFunction, Space};

/// `Σ_L τ_L (y*)^L` with compactly supported `τ_L` on `ℝⁿ`.
#[derive(Clone, Debug)]
pub struct Density {
    space: Space,
    terms: BTreeMap<MultiIndex, TensorDensity>,
}

impl Density {
    pub fn zero(space: Space) -> Self {
        Density { space, terms: BTreeMap::new() }
    }

    /// `τ (y*)^L`.
    pub fn term(space: Space, tau: TensorDensity, l: MultiIndex) -> Result<Self> {
        if tau.axes() != space.n {
            return Err(Error::DimensionMismatch { expected: space.n, got: tau.axes() });
        }
        if l.nvars() != space.k {
            return Err(Error::DimensionMismatch { expected: space.k, got: l.nvars() });
        }
        let mut out = Self::zero(space);
        out.push(l, tau);
        Ok(out)
    }

    fn push(&mut self, l: MultiIndex, tau: TensorDensity) {
        if tau.summands().is_empty() {
            return;
        }
        let merged = match self.terms.remove(&l) {
            Some(old) => old.add(&tau),
            None => tau,
        };
        if !merged.summands().is_empty() {
            self.terms.insert(l, merged);
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, TensorDensity> {
        &self.terms
    }

    pub fn component(&self, l: &MultiIndex) -> TensorDensity {
        self.terms.get(l).cloned().unwrap_or_else(|| TensorDensity::zero(self.space.n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(TensorDensity::is_zero)
    }

    pub fn add(&self, other: &Density) -> Result<Density> {
        self.space.check_compatible(&other.space)?;
        let mut out = self.clone();
        for (l, t) in &other.terms {
            out.push(l.clone(), t.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Density) -> Result<Density> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Density {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Density {
        self.map(|t| t.scale(c))
    }

    /// Applies a linear map to every `τ_L`.
    pub fn map(&self, f: impl Fn(&TensorDensity) -> TensorDensity) -> Density {
        let mut out = Density::zero(self.space);
        for (l, t) in &self.terms {
            out.push(l.clone(), f(t));
        }
        out
    }

    /// `∂_{x_i*}`, 0-based axis.
    pub fn deriv_x(&self, i: usize) -> Density {
        self.map(|t| t.deriv(i))
    }

    /// `m_{y_j*}: (y*)^L ↦ (y*)^{L+e_j}`, 0-based.
    pub fn mul_ystar(&self, j: usize) -> Density {
        let mut out = Density::zero(self.space);
        let e = MultiIndex::unit(self.space.k, j);
        for (l, t) in &self.terms {
            out.push(l.add(&e), t.clone());
        }
        out
    }

    /// `⟨f, η⟩ = Σ_L L! ∫ f_L τ_L`.
    pub fn pair(&self, f: &FormalFunction) -> Result<Rational> {
        self.space.check_compatible(&f.space())?;
        let needed = self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0);
        if needed > f.known_order() {
            return Err(Error::KnownOrderExhausted { needed, available: f.known_order() });
        }
        let coeffs = f.coefficients();
        let mut acc = Rational::zero();
        for (l, tau) in &self.terms {
            if let Some(fl) = coeffs.get(l) {
                acc += l.factorial_q() * tau.integrate_against(fl);
            }
        }
        Ok(acc)
    }

    /// `η₁ ⊗ η₂` on the product space: `(y*)^{(L₁,L₂)}` with `τ₁ ⊗ τ₂`.
    pub fn tensor(&self, other: &Density) -> Density {
        let mut out = Density::zero(self.space.product(&other.space));
        for (l1, t1) in &self.terms {
            for (l2, t2) in &other.terms {
                out.push(l1.concat(l2), t1.tensor(t2));
            }
        }
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let ys: Vec<String> = (1..=self.space.k).map(|j| format!("ystar{j}")).collect();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(l, t)| {
                let mono = crate::algebra::poly::monomial_text(l, &ys);
                let tau = t.display_with(names);
                if mono.is_empty() {
                    format!("({tau})")
                } else {
                    format!("({tau})*{mono}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.space.compatible(&other.space) && self.sub(other).is_ok_and(|d| d.is_zero())
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.space.n).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl serde::Serialize for Density {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<(&MultiIndex, &TensorDensity)> = self.terms.iter().collect();
        let mut st = s.serialize_struct("Density", 3)?;
        st.serialize_field("space", &self.space)?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

/// `Σ τ_A dz*_A`, a functional on `Ω^r` where `|A| = n + k − r`. Star
/// tuples use the same joint numbering as forms.
#[derive(Clone, Debug)]
pub struct DualForm {
    space: Space,
    degree: usize,
    terms: BTreeMap<OrderedTuple, Density>,
}

impl DualForm {
    pub fn zero(space: Space, degree: usize) -> Self {
        DualForm { space, degree, terms: BTreeMap::new() }
    }

    /// `η dz*_A`, of degree `n + k − |A|`.
    pub fn term(eta: Density, tuple: OrderedTuple) -> Result<Self> {
        let space = eta.space();
        let nv = space.nvars();
        if tuple.last_index() > nv {
            return Err(Error::InvalidArgument(format!("star tuple {tuple} exceeds {nv} variables")));
        }
        let mut out = Self::zero(space, nv - tuple.len());
        out.push(tuple, eta);
        Ok(out)
    }

    /// A density as a dual form of degree 0 (full star tuple).
    pub fn top(eta: Density) -> Self {
        let full = OrderedTuple::full(eta.space().nvars());
        Self::term(eta, full).expect("full tuple fits")
    }

    fn push(&mut self, tuple: OrderedTuple, eta: Density) {
        if eta.terms.is_empty() {
            return;
        }
        let merged = match self.terms.remove(&tuple) {
            Some(old) => old.add(&eta).expect("densities share the space"),
            None => eta,
        };
        if !merged.terms.is_empty() {
            self.terms.insert(tuple, merged);
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<OrderedTuple, Density> {
        &self.terms
    }

    pub fn coefficient(&self, tuple: &OrderedTuple) -> Density {
        self.terms.get(tuple).cloned().unwrap_or_else(|| Density::zero(self.space))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Density::is_zero)
    }

    fn check_same(&self, other: &DualForm) -> Result<()> {
        self.space.check_compatible(&other.space)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, got: other.degree });
        }
        Ok(())
    }

    pub fn add(&self, other: &DualForm) -> Result<DualForm> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (t, e) in &other.terms {
            out.push(t.clone(), e.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DualForm) -> Result<DualForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DualForm {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> DualForm {
        let mut out = DualForm::zero(self.space, self.degree);
        for (t, e) in &self.terms {
            out.push(t.clone(), e.scale(c));
        }
        out
    }

    /// `⟨ω, η⟩ = Σ ε(A', A) ⟨f_{A'}, τ_A⟩`, `ε` the sign with
    /// `dz_{A'} ∧ dz_A = ε · dz_1 ∧ ⋯ ∧ dz_{n+k}`.
    pub fn pair(&self, omega: &Form) -> Result<Rational> {
        self.space.check_compatible(&omega.space())?;
        if omega.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, got: omega.degree() });
        }
        let nv = self.space.nvars();
        let mut acc = Rational::zero();
        for (b, f) in omega.terms() {
            let a = b.complement(nv);
            let Some(eta) = self.terms.get(&a) else { continue };
            let eps = wedge_sign_i8(b, &a, nv);
            acc += Rational::from_integer(eps.into()) * eta.pair(f)?;
        }
        Ok(acc)
    }

    /// The dual coboundary, lowering the degree by one:
    /// `d(τ dz*_A) = Σ_{i∉A} (−1)^{#{a∈A: a<i}} D_i(τ) dz*_{A∪i}` with
    /// `D_i = ∂_{x_i*}` on the `x` block and `D_{n+j} = −m_{y_j*}`.
    pub fn d(&self) -> Result<DualForm> {
        if self.degree == 0 {
            return Ok(DualForm::zero(self.space, 0));
        }
        let n = self.space.n;
        let nv = self.space.nvars();
        let mut out = DualForm::zero(self.space, self.degree - 1);
        for (a, eta) in &self.terms {
            for i in 1..=nv {
                let Some(tuple) = a.insert(i) else { continue };
                let sign = sign_pow(a.count_below(i));
                let image = if i <= n {
                    eta.deriv_x(i - 1).scale(&sign)
                } else {
                    eta.mul_ystar(i - n - 1).scale(&-sign)
                };
                out.push(tuple, image);
            }
        }
        Ok(out)
    }

    /// `ζ(η) = ∫ τ_0` on the full star tuple, for `η` of degree 0.
    pub fn zeta(&self) -> Result<Rational> {
        if self.degree != 0 {
            return Err(Error::DegreeMismatch { expected: 0, got: self.degree });
        }
        let full = OrderedTuple::full(self.space.nvars());
        let l0 = MultiIndex::zero(self.space.k);
        Ok(self
            .terms
            .get(&full)
            .map_or_else(Rational::zero, |eta| eta.component(&l0).integral()))
    }

    /// `η₁ ⊠ η₂ = (−1)^a (τ₁ ⊗ τ₂) dx*_{(I₁, n₁+I₂)} dy*_{(J₁, k₁+J₂)}` with
    /// `a = t₂k₁ + n₂r₁ + n₂t₁ + r₂k₁ + n₁r₂ + r₁t₂ + t₁t₂`, `t_i = n_i − |I_i|`.
    pub fn boxtimes(&self, other: &DualForm) -> DualForm {
        let (s1, s2) = (self.space, other.space);
        let (n1, k1, n2) = (s1.n, s1.k, s2.n);
        let (r1, r2) = (self.degree, other.degree);
        let mut out = DualForm::zero(s1.product(&s2), r1 + r2);
        for (a1, e1) in &self.terms {
            let t1 = n1 - a1.count_below(n1 + 1);
            for (a2, e2) in &other.terms {
                let t2 = n2 - a2.count_below(n2 + 1);
                let seq: Vec<usize> = a1
                    .indices()
                    .iter()
                    .map(|&i| crate::derham::left_index(s1, s2, i))
                    .chain(a2.indices().iter().map(|&i| crate::derham::right_index(s1, s2, i)))
                    .collect();
                let (_, tuple) = sort_sign(&seq).expect("disjoint blocks");
                out.push(tuple, e1.tensor(e2).scale(&boxtimes_sign(n1, k1, n2, r1, r2, t1, t2)));
            }
        }
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            let first: Vec<usize> = (1..=self.space.nvars() - self.degree).collect();
            return format!("density(0)*{}", star_text(&self.space, &first));
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, eta)| {
                format!("density({})*{}", eta.display_with(names), star_text(&self.space, t.indices()))
            })
            .collect();
        parts.join(" + ")
    }
}

fn star_text(space: &Space, indices: &[usize]) -> String {
    if indices.is_empty() {
        return "star()".to_string();
    }
    indices
        .iter()
        .map(|&i| if i <= space.n { format!("dxstar{i}") } else { format!("dystar{}", i - space.n) })
        .collect::<Vec<_>>()
        .join("^^")
}

impl PartialEq for DualForm {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.sub(other).is_ok_and(|d| d.is_zero())
    }
}

impl fmt::Display for DualForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.space.n).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl serde::Serialize for DualForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<(&OrderedTuple, &Density)> = self.terms.iter().collect();
        let mut st = s.serialize_struct("DualForm", 4)?;
        st.serialize_field("space", &self.space)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

pub(crate) fn boxtimes_sign(n1: usize, k1: usize, n2: usize, r1: usize, r2: usize, t1: usize, t2: usize) -> Rational {
    sign_pow(t2 * k1 + n2 * r1 + n2 * t1 + r2 * k1 + n1 * r2 + r1 * t2 + t1 * t2)
}

/// `⟨f, η⟩` for a formal function and a density.
pub fn pair_density(f: &FormalFunction, eta: &Density) -> Result<Rational> {
    eta.pair(f)
}

/// `⟨ω, η⟩` for a form and a dual form of the same degree.
pub fn pair_dualform(omega: &Form, eta: &DualForm) -> Result<Rational> {
    eta.pair(omega)
}

/// A one-axis polynomial as a density factor restricted to `[lo, hi)`.
pub fn poly_density(p: Poly, lo: Rational, hi: Rational) -> Result<TensorDensity> {
    let f = crate::algebra::PiecewisePoly::on_interval(lo, hi, p)?;
    Ok(TensorDensity::product(Rational::one(), vec![f]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::piecewise::bump;
    use crate::algebra::rational::int;
    use crate::algebra::PiecewisePoly;

    fn ind(a: i64, b: i64) -> PiecewisePoly {
        PiecewisePoly::indicator(int(a), int(b)).unwrap()
    }

    #[test]
    fn pair_density_examples() {
        let s = Space::new(1, 1, 3);
        // ∫τ = 5
        let tau = TensorDensity::product(int(5), vec![ind(0, 1)]);
        let eta = Density::term(s, tau.clone(), MultiIndex::new(vec![2])).unwrap();
        let f = FormalFunction::y(s, 0).pow(2).unwrap().scale(&int(3));
        assert_eq!(pair_density(&f, &eta).unwrap(), int(30));
        let eta0 = Density::term(s, tau, MultiIndex::new(vec![0])).unwrap();
        assert_eq!(pair_density(&FormalFunction::one(s), &eta0).unwrap(), int(5));
        assert_eq!(pair_density(&FormalFunction::y(s, 0), &eta0).unwrap(), int(0));
    }

    #[test]
    fn pair_dualform_examples() {
        let s = Space::new(1, 0, 0);
        let x = FormalFunction::x(s, 0);
        let g = bump(&int(0), &int(2), false).unwrap();
        let tau = TensorDensity::product(int(1), vec![g.clone()]);
        let eta = DualForm::term(Density::term(s, tau.clone(), MultiIndex::new(vec![])).unwrap(), OrderedTuple::empty()).unwrap();
        let omega = Form::dx(s, 1).mul_fn(&x).unwrap();
        let direct = tau.integrate_against(x.poly());
        assert_eq!(pair_dualform(&omega, &eta).unwrap(), direct);

        let s2 = Space::new(2, 0, 0);
        let tau2 = TensorDensity::product(int(1), vec![g.clone(), g]);
        let eta = DualForm::term(
            Density::term(s2, tau2.clone(), MultiIndex::new(vec![])).unwrap(),
            OrderedTuple::new(vec![1]).unwrap(),
        )
        .unwrap();
        let f = FormalFunction::x(s2, 0);
        assert_eq!(
            pair_dualform(&Form::dx(s2, 2).mul_fn(&f).unwrap(), &eta).unwrap(),
            -tau2.integrate_against(f.poly())
        );
        assert_eq!(pair_dualform(&Form::dx(s2, 1).mul_fn(&f).unwrap(), &eta).unwrap(), int(0));
    }

    #[test]
    fn dual_d_integrates_by_parts() {
        let s = Space::new(1, 0, 0);
        let g = bump(&int(-1), &int(2), false).unwrap();
        let tau = TensorDensity::product(int(1), vec![g]);
        let eta = DualForm::term(Density::term(s, tau.clone(), MultiIndex::new(vec![])).unwrap(), OrderedTuple::empty()).unwrap();
        let de = eta.d().unwrap();
        let expect = DualForm::top(Density::term(s, tau.deriv(0), MultiIndex::new(vec![])).unwrap());
        assert_eq!(de, expect);
        let x = FormalFunction::x(s, 0);
        for f in [x.pow(2).unwrap(), x.pow(3).unwrap().add(&x).unwrap()] {
            let lhs = de.pair(&Form::function(f.clone())).unwrap();
            let rhs = eta.pair(&Form::function(f).d().unwrap()).unwrap();
            assert_eq!(lhs, -rhs);
        }
    }

    #[test]
    fn dual_d_on_formal_line() {
        let s = Space::new(0, 1, 4);
        let eta = DualForm::term(
            Density::term(s, TensorDensity::scalar(int(1)), MultiIndex::new(vec![1])).unwrap(),
            OrderedTuple::empty(),
        )
        .unwrap();
        let de = eta.d().unwrap();
        let expect = DualForm::top(
            Density::term(s, TensorDensity::scalar(int(-1)), MultiIndex::new(vec![2])).unwrap(),
        );
        assert_eq!(de, expect);
        for e in 0..4 {
            let f = FormalFunction::y(s, 0).pow(e).unwrap();
            let lhs = de.pair(&Form::function(f.clone())).unwrap();
            let rhs = eta.pair(&Form::function(f).d().unwrap()).unwrap();
            assert_eq!(lhs, -rhs, "y^{e}");
        }
    }

    #[test]
    fn zeta_examples() {
        let s = Space::new(1, 1, 2);
        let g = bump(&int(0), &int(1), true).unwrap();
        let tau = TensorDensity::product(int(1), vec![g]);
        let eta = DualForm::top(Density::term(s, tau.clone(), MultiIndex::zero(1)).unwrap());
        assert_eq!(eta.zeta().unwrap(), int(1));
        assert_eq!(eta.zeta().unwrap(), eta.pair(&Form::function(FormalFunction::one(s))).unwrap());
        let high = DualForm::top(Density::term(s, tau, MultiIndex::new(vec![1])).unwrap());
        assert_eq!(high.zeta().unwrap(), int(0));
        assert_eq!(DualForm::zero(s, 0).zeta().unwrap(), int(0));
    }

    #[test]
    fn boxtimes_degree_zero_is_plain() {
        let s = Space::new(1, 0, 0);
        let t = TensorDensity::product(int(1), vec![ind(0, 1)]);
        let eta = DualForm::top(Density::term(s, t.clone(), MultiIndex::new(vec![])).unwrap());
        let prod = eta.boxtimes(&eta);
        let expect = DualForm::top(Density::term(s.product(&s), t.tensor(&t), MultiIndex::new(vec![])).unwrap());
        assert_eq!(prod, expect);
    }
}
