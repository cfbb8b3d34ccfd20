//! Poincaré homotopy operators for forms and compactly supported dual
//! forms, their tensor composition, and strong-exactness certificates.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::rational::{int, sign_pow};
use crate::algebra::tuple::sort_sign;
use crate::algebra::{pp_cumulative, MultiIndex, OrderedTuple, PiecewisePoly, Poly, Rational, TensorDensity};
use crate::derham::{left_index, right_index, Form};
use crate::dual::{boxtimes_sign, Density, DualForm};
use crate::error::{Error, Result};
use crate::formal::{FormalFunction, Space};
use crate::gen::{self, Limits};

/// An element of one of the cochain complexes a contraction acts on.
pub trait Cochain: Clone + std::fmt::Display {
    fn space_of(&self) -> Space;
    fn degree_of(&self) -> usize;
    fn vanishes(&self) -> bool;
    fn zero_in(space: Space, degree: usize) -> Self;
    fn differential(&self) -> Result<Self>;
    fn plus(&self, other: &Self) -> Result<Self>;
    fn times(&self, c: &Rational) -> Self;
    /// Degree of `h(e)` for `e` of degree `r`, if that degree exists.
    fn homotopy_degree(space: Space, r: usize) -> Option<usize>;
    /// Decomposes an element of `s1 × s2` as `Σ c · join(u, v)`.
    fn split(&self, s1: Space, s2: Space) -> Vec<(Rational, Self, Self)>;
    /// The product of a left and a right factor element.
    fn join(u: &Self, v: &Self) -> Self;
    /// `σ(u)` in `d(join(u, v)) = join(du, v) + σ(u) · join(u, dv)`.
    fn leibniz_sign(u: &Self) -> Rational;
    fn random(rng: &mut ChaCha8Rng, space: Space, degree: usize, limits: Limits) -> Self;
    /// Truncates a result computed from `input` through `depth` applications
    /// of `d` to the order that is still determined.
    fn determined(&self, input: &Self, depth: u32) -> Self;
}

impl Cochain for Form {
    fn space_of(&self) -> Space {
        self.space()
    }

    fn degree_of(&self) -> usize {
        self.degree()
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }

    fn zero_in(space: Space, degree: usize) -> Self {
        Form::zero(space, degree)
    }

    fn differential(&self) -> Result<Self> {
        self.d()
    }

    fn plus(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }

    fn times(&self, c: &Rational) -> Self {
        self.scale(c)
    }

    fn homotopy_degree(_: Space, r: usize) -> Option<usize> {
        r.checked_sub(1)
    }

    fn split(&self, s1: Space, s2: Space) -> Vec<(Rational, Self, Self)> {
        let side = block_sides(s1, s2);
        let (nv1, nv2) = (s1.nvars(), s2.nvars());
        let mut out = Vec::new();
        for (tuple, f) in self.terms() {
            let (mut a1, mut a2) = (Vec::new(), Vec::new());
            for &i in tuple.indices() {
                match side[i - 1] {
                    (0, j) => a1.push(j),
                    (_, j) => a2.push(j),
                }
            }
            let seq: Vec<usize> = a1
                .iter()
                .map(|&i| left_index(s1, s2, i))
                .chain(a2.iter().map(|&i| right_index(s1, s2, i)))
                .collect();
            let (sign, _) = sort_sign(&seq).expect("distinct indices");
            let t1 = OrderedTuple::new(a1).expect("sorted");
            let t2 = OrderedTuple::new(a2).expect("sorted");
            let known = f.known_order();
            for (m, c) in f.poly().terms() {
                let mut e1 = vec![0; nv1];
                let mut e2 = vec![0; nv2];
                for (v, &e) in m.exponents().iter().enumerate() {
                    match side[v] {
                        (0, j) => e1[j - 1] = e,
                        (_, j) => e2[j - 1] = e,
                    }
                }
                let u = FormalFunction::with_known_order(s1, Poly::monomial(nv1, MultiIndex::new(e1), int(1)), known)
                    .expect("variable count");
                let v = FormalFunction::with_known_order(s2, Poly::monomial(nv2, MultiIndex::new(e2), int(1)), known)
                    .expect("variable count");
                out.push((c * int(sign as i64), Form::term(u, t1.clone()), Form::term(v, t2.clone())));
            }
        }
        out
    }

    fn join(u: &Self, v: &Self) -> Self {
        u.kunneth(v)
    }

    fn leibniz_sign(u: &Self) -> Rational {
        sign_pow(u.degree())
    }

    fn random(rng: &mut ChaCha8Rng, space: Space, degree: usize, limits: Limits) -> Self {
        gen::form(rng, space, degree, limits)
    }

    fn determined(&self, input: &Self, depth: u32) -> Self {
        if self.space().k == 0 {
            return self.clone();
        }
        match input.known_order().checked_sub(depth) {
            Some(known) => self.with_known(known),
            None => Form::zero(self.space(), self.degree()),
        }
    }
}

impl Cochain for DualForm {
    fn space_of(&self) -> Space {
        self.space()
    }

    fn degree_of(&self) -> usize {
        self.degree()
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }

    fn zero_in(space: Space, degree: usize) -> Self {
        DualForm::zero(space, degree)
    }

    fn differential(&self) -> Result<Self> {
        self.d()
    }

    fn plus(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }

    fn times(&self, c: &Rational) -> Self {
        self.scale(c)
    }

    fn homotopy_degree(space: Space, r: usize) -> Option<usize> {
        (r < space.nvars()).then_some(r + 1)
    }

    fn split(&self, s1: Space, s2: Space) -> Vec<(Rational, Self, Self)> {
        let side = block_sides(s1, s2);
        let (n1, k1, n2) = (s1.n, s1.k, s2.n);
        let mut out = Vec::new();
        for (tuple, eta) in self.terms() {
            let (mut a1, mut a2) = (Vec::new(), Vec::new());
            for &i in tuple.indices() {
                match side[i - 1] {
                    (0, j) => a1.push(j),
                    (_, j) => a2.push(j),
                }
            }
            let t1 = OrderedTuple::new(a1).expect("sorted");
            let t2 = OrderedTuple::new(a2).expect("sorted");
            let r1 = s1.nvars() - t1.len();
            let r2 = s2.nvars() - t2.len();
            let x1 = n1 - t1.count_below(n1 + 1);
            let x2 = n2 - t2.count_below(n2 + 1);
            let sign = boxtimes_sign(n1, k1, n2, r1, r2, x1, x2);
            for (l, tau) in eta.terms() {
                let (l1, l2) = (l.slice(0, k1), l.slice(k1, l.nvars()));
                for (w, left, right) in tau.split_at(n1) {
                    let u = Density::term(s1, left, l1.clone()).expect("shapes");
                    let v = Density::term(s2, right, l2.clone()).expect("shapes");
                    out.push((
                        &w * &sign,
                        DualForm::term(u, t1.clone()).expect("fits"),
                        DualForm::term(v, t2.clone()).expect("fits"),
                    ));
                }
            }
        }
        out
    }

    fn join(u: &Self, v: &Self) -> Self {
        u.boxtimes(v)
    }

    fn leibniz_sign(u: &Self) -> Rational {
        sign_pow(u.degree())
    }

    fn random(rng: &mut ChaCha8Rng, space: Space, degree: usize, limits: Limits) -> Self {
        gen::dual_form(rng, space, degree, 2, limits)
    }

    fn determined(&self, _: &Self, _: u32) -> Self {
        self.clone()
    }
}

/// For each 0-based joint variable of `s1 × s2`: its side (0 left, 1 right)
/// and its 1-based joint index within that factor.
fn block_sides(s1: Space, s2: Space) -> Vec<(u8, usize)> {
    let nv = s1.nvars() + s2.nvars();
    let mut side = vec![(0u8, 0usize); nv];
    for i in 1..=s1.nvars() {
        side[left_index(s1, s2, i) - 1] = (0, i);
    }
    for i in 1..=s2.nvars() {
        side[right_index(s1, s2, i) - 1] = (1, i);
    }
    side
}

/// Adds the nonzero parts, all of which must have degree `degree`.
fn sum_parts<E: Cochain>(space: Space, degree: usize, parts: impl IntoIterator<Item = E>) -> Result<E> {
    let mut acc = E::zero_in(space, degree);
    for p in parts {
        if p.vanishes() {
            continue;
        }
        if p.degree_of() != degree {
            return Err(Error::Internal(format!(
                "homotopy part of degree {} where {degree} was expected",
                p.degree_of()
            )));
        }
        acc = acc.plus(&p)?;
    }
    Ok(acc)
}

/// Homotopy data `(h, P)` on a complex with `dh + hd = id − P`, where `P`
/// is `ε∘g` on forms and `α∘ζ` on dual forms.
pub trait Contraction<E: Cochain> {
    fn space(&self) -> Space;
    fn h(&self, e: &E) -> Result<E>;
    fn project(&self, e: &E) -> Result<E>;
    fn describe(&self) -> String;
}

/// `e − P(e) − d(h(e)) − h(d(e))`.
pub fn identity_residual<E: Cochain>(c: &dyn Contraction<E>, e: &E) -> Result<E> {
    let r = e.degree_of();
    let space = e.space_of();
    let he = c.h(e)?;
    let dhe = if he.vanishes() { E::zero_in(space, r) } else { he.differential()? };
    let de = e.differential()?;
    let hde = if de.vanishes() { E::zero_in(space, r) } else { c.h(&de)? };
    let minus = -Rational::one();
    let res = sum_parts(
        space,
        r,
        [e.clone(), c.project(e)?.times(&minus), dhe.times(&minus), hde.times(&minus)],
    )?;
    Ok(res.determined(e, 1))
}

/// `d(h(d e)) − d e`.
pub fn strongness_residual<E: Cochain>(c: &dyn Contraction<E>, e: &E) -> Result<E> {
    let de = e.differential()?;
    if de.vanishes() {
        return Ok(de);
    }
    let h = c.h(&de)?;
    let dhd = if h.vanishes() { E::zero_in(e.space_of(), de.degree_of()) } else { h.differential()? };
    let res = sum_parts(e.space_of(), de.degree_of(), [dhd, de.times(&-Rational::one())])?;
    Ok(res.determined(e, 2))
}

/// `P(P e) − P e`.
pub fn projection_residual<E: Cochain>(c: &dyn Contraction<E>, e: &E) -> Result<E> {
    let p = c.project(e)?;
    sum_parts(e.space_of(), e.degree_of(), [c.project(&p)?, p.times(&-Rational::one())])
}

fn constant_part(omega: &Form) -> Form {
    let space = omega.space();
    if omega.degree() != 0 {
        return Form::zero(space, omega.degree());
    }
    let c = omega.coefficient(&OrderedTuple::empty()).poly().constant_term();
    Form::function(FormalFunction::constant(space, c))
}

/// The radial (cone) homotopy on `Ω•` with basepoint the origin.
#[derive(Clone, Copy, Debug)]
pub struct Radial {
    space: Space,
}

impl Radial {
    pub fn new(space: Space) -> Self {
        Radial { space }
    }
}

impl Contraction<Form> for Radial {
    fn space(&self) -> Space {
        self.space
    }

    fn h(&self, omega: &Form) -> Result<Form> {
        self.space.check_compatible(&omega.space())?;
        radial_homotopy(omega)
    }

    fn project(&self, omega: &Form) -> Result<Form> {
        Ok(constant_part(omega))
    }

    fn describe(&self) -> String {
        format!("radial{}", self.space)
    }
}

/// `K(f dz_A) = Σ_j (−1)^{j−1} z_{a_j} S(f) dz_{A∖a_j}`, where a monomial of
/// degree `m` in a degree-`r` term is divided by `m + r`.
pub fn radial_homotopy(omega: &Form) -> Result<Form> {
    let space = omega.space();
    let r = omega.degree();
    if r == 0 {
        return Ok(Form::zero(space, 0));
    }
    let nv = space.nvars();
    let mut out = Form::zero(space, r - 1);
    for (tuple, f) in omega.terms() {
        let mut coeffs: BTreeMap<usize, Poly> = BTreeMap::new();
        for (m, c) in f.poly().terms() {
            let weight = c / int(i64::from(m.degree()) + r as i64);
            for (j, &a) in tuple.indices().iter().enumerate() {
                let mono = m.add(&MultiIndex::unit(nv, a - 1));
                coeffs.entry(j).or_insert_with(|| Poly::zero(nv)).add_term(mono, &weight * sign_pow(j));
            }
        }
        for (j, p) in coeffs {
            let g = FormalFunction::with_known_order(space, p, f.known_order())?;
            out = out.add(&Form::term(g, tuple.remove_at(j)))?;
        }
    }
    Ok(out)
}

/// The formal-variable homotopy on `(ℝ⁰)^(1)`: `Σ c_i yⁱ dy ↦ Σ c_i/(i+1) y^{i+1}`.
#[derive(Clone, Copy, Debug)]
pub struct FormalLine {
    space: Space,
}

impl FormalLine {
    pub fn new(space: Space) -> Result<Self> {
        check_space(space, 0, 1)?;
        Ok(FormalLine { space })
    }
}

fn check_space(space: Space, n: usize, k: usize) -> Result<()> {
    space.check_compatible(&Space::new(n, k, space.order))
}

impl Contraction<Form> for FormalLine {
    fn space(&self) -> Space {
        self.space
    }

    fn h(&self, omega: &Form) -> Result<Form> {
        formal_homotopy(omega)
    }

    fn project(&self, omega: &Form) -> Result<Form> {
        Ok(constant_part(omega))
    }

    fn describe(&self) -> String {
        format!("formal{}", self.space)
    }
}

pub fn formal_homotopy(omega: &Form) -> Result<Form> {
    let space = omega.space();
    check_space(space, 0, 1)?;
    if omega.degree() == 0 {
        return Ok(Form::zero(space, 0));
    }
    let f = omega.coefficient(&OrderedTuple::full(1));
    let p = Poly::from_terms(
        1,
        f.poly().terms().map(|(m, c)| {
            let i = m.exponents()[0];
            (MultiIndex::new(vec![i + 1]), c / int(i64::from(i) + 1))
        }),
    );
    Ok(Form::function(FormalFunction::with_known_order(space, p, f.known_order())?))
}

/// `H(u⊗v) = h₁u⊗v + σ(u)·P₁u⊗h₂v`, with `P = P₁⊗P₂`.
pub struct Tensor<E: Cochain> {
    left: Box<dyn Contraction<E>>,
    right: Box<dyn Contraction<E>>,
    space: Space,
}

impl<E: Cochain> Tensor<E> {
    pub(crate) fn unchecked(left: Box<dyn Contraction<E>>, right: Box<dyn Contraction<E>>) -> Self {
        let space = left.space().product(&right.space());
        Tensor { left, right, space }
    }

    fn split(&self, e: &E) -> Result<Vec<(Rational, E, E)>> {
        self.space.check_compatible(&e.space_of())?;
        Ok(e.split(self.left.space(), self.right.space()))
    }
}

/// Combines two contractions after checking each on sampled elements.
pub fn tensor_homotopy<E: Cochain + 'static>(
    left: Box<dyn Contraction<E>>,
    right: Box<dyn Contraction<E>>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<Tensor<E>> {
    for c in [&left, &right] {
        let space = c.space();
        for degree in 0..=space.nvars() {
            for _ in 0..samples {
                let e = E::random(rng, space, degree, Limits::default());
                let res = identity_residual(c.as_ref(), &e)?;
                if !res.vanishes() {
                    return Err(Error::ResidualNonzero(format!("{} fails on {e}: residual {res}", c.describe())));
                }
            }
        }
    }
    Ok(Tensor::unchecked(left, right))
}

impl<E: Cochain> Contraction<E> for Tensor<E> {
    fn space(&self) -> Space {
        self.space
    }

    fn h(&self, e: &E) -> Result<E> {
        let r = e.degree_of();
        let degree = E::homotopy_degree(self.space, r).unwrap_or(r);
        let mut parts = Vec::new();
        for (c, u, v) in self.split(e)? {
            let hu = self.left.h(&u)?;
            if !hu.vanishes() {
                parts.push(E::join(&hu, &v).times(&c));
            }
            let pu = self.left.project(&u)?;
            if !pu.vanishes() {
                let hv = self.right.h(&v)?;
                if !hv.vanishes() {
                    parts.push(E::join(&pu, &hv).times(&(&c * E::leibniz_sign(&u))));
                }
            }
        }
        sum_parts(self.space, degree, parts)
    }

    fn project(&self, e: &E) -> Result<E> {
        let mut parts = Vec::new();
        for (c, u, v) in self.split(e)? {
            let pu = self.left.project(&u)?;
            if pu.vanishes() {
                continue;
            }
            parts.push(E::join(&pu, &self.right.project(&v)?).times(&c));
        }
        sum_parts(self.space, e.degree_of(), parts)
    }

    fn describe(&self) -> String {
        format!("{} ⊗ {}", self.left.describe(), self.right.describe())
    }
}

/// The trivial complex `ℂ` on `(ℝ⁰)^(0)`: `h = 0`, `P = id`.
#[derive(Clone, Copy, Debug)]
pub struct Point {
    space: Space,
}

impl Point {
    pub fn new(order: u32) -> Self {
        Point { space: Space::new(0, 0, order) }
    }
}

impl<E: Cochain> Contraction<E> for Point {
    fn space(&self) -> Space {
        self.space
    }

    fn h(&self, e: &E) -> Result<E> {
        Ok(E::zero_in(e.space_of(), e.degree_of()))
    }

    fn project(&self, e: &E) -> Result<E> {
        Ok(e.clone())
    }

    fn describe(&self) -> String {
        "point".to_string()
    }
}

fn check_normalized(g: &PiecewisePoly) -> Result<()> {
    let integral = g.integral();
    if integral != int(1) {
        return Err(Error::NotNormalized { integral: crate::algebra::rational::to_canonical(&integral) });
    }
    Ok(())
}

/// `g ⊛ f = ∫g · cum(f) − ∫f · cum(g)`, compactly supported.
fn star(g: &PiecewisePoly, f: &PiecewisePoly) -> Result<PiecewisePoly> {
    pp_cumulative(f)
        .combine(&g.integral(), &pp_cumulative(g), &-f.integral())
        .into_compact()
}

/// The compactly supported homotopy on `(ℝ¹)^(0)` with profile `g`.
#[derive(Clone, Debug)]
pub struct CsLine {
    space: Space,
    g: PiecewisePoly,
}

impl CsLine {
    pub fn new(space: Space, g: PiecewisePoly) -> Result<Self> {
        check_space(space, 1, 0)?;
        check_normalized(&g)?;
        Ok(CsLine { space, g })
    }
}

impl Contraction<DualForm> for CsLine {
    fn space(&self) -> Space {
        self.space
    }

    fn h(&self, eta: &DualForm) -> Result<DualForm> {
        cs_line(eta, &self.g)
    }

    fn project(&self, eta: &DualForm) -> Result<DualForm> {
        self.space.check_compatible(&eta.space())?;
        if eta.degree() != 0 {
            return Ok(DualForm::zero(self.space, eta.degree()));
        }
        let lambda = eta.zeta()?;
        let tau = TensorDensity::product(lambda, vec![self.g.clone()]);
        Ok(DualForm::top(Density::term(self.space, tau, MultiIndex::zero(0))?))
    }

    fn describe(&self) -> String {
        format!("cs{}[g = {}]", self.space, self.g.display_with("x1"))
    }
}

fn cs_line(eta: &DualForm, g: &PiecewisePoly) -> Result<DualForm> {
    let space = eta.space();
    check_space(space, 1, 0)?;
    if eta.degree() != 0 {
        return Ok(DualForm::zero(space, eta.degree()));
    }
    let tau = eta.coefficient(&OrderedTuple::full(1)).component(&MultiIndex::zero(0));
    let mut out = TensorDensity::zero(1);
    for (w, factors) in tau.summands() {
        out = out.add(&TensorDensity::product(w.clone(), vec![star(g, &factors[0])?]));
    }
    DualForm::term(Density::term(space, out, MultiIndex::zero(0))?, OrderedTuple::empty())
}

/// `h(f dx*) = (g ⊛ f)` on `(ℝ¹)^(0)`, a primitive of `f − (∫f)·g`.
pub fn cs_homotopy_1d(eta: &DualForm, g: &PiecewisePoly) -> Result<DualForm> {
    check_normalized(g)?;
    cs_line(eta, g)
}

/// The transpose of the formal homotopy on `(ℝ⁰)^(1)`:
/// `(y*)^L dy* ↦ −(y*)^{L−1}`.
#[derive(Clone, Copy, Debug)]
pub struct FormalDualLine {
    space: Space,
}

impl FormalDualLine {
    pub fn new(space: Space) -> Result<Self> {
        check_space(space, 0, 1)?;
        Ok(FormalDualLine { space })
    }
}

impl Contraction<DualForm> for FormalDualLine {
    fn space(&self) -> Space {
        self.space
    }

    fn h(&self, eta: &DualForm) -> Result<DualForm> {
        self.space.check_compatible(&eta.space())?;
        if eta.degree() != 0 {
            return Ok(DualForm::zero(self.space, eta.degree()));
        }
        let density = eta.coefficient(&OrderedTuple::full(1));
        let mut out = Density::zero(self.space);
        for (l, tau) in density.terms() {
            let e = l.exponents()[0];
            if e == 0 {
                continue;
            }
            out = out.add(&Density::term(self.space, tau.neg(), MultiIndex::new(vec![e - 1]))?)?;
        }
        DualForm::term(out, OrderedTuple::empty())
    }

    fn project(&self, eta: &DualForm) -> Result<DualForm> {
        self.space.check_compatible(&eta.space())?;
        if eta.degree() != 0 {
            return Ok(DualForm::zero(self.space, eta.degree()));
        }
        let lambda = eta.zeta()?;
        Ok(DualForm::top(Density::term(self.space, TensorDensity::scalar(lambda), MultiIndex::zero(1))?))
    }

    fn describe(&self) -> String {
        format!("formal-dual{}", self.space)
    }
}

/// The homotopy on `Ω•((ℝⁿ)^(k))` used for certification: the radial one.
pub fn omega_contraction(space: Space) -> Box<dyn Contraction<Form>> {
    Box::new(Radial::new(space))
}

/// The homotopy on `Ω•((ℝⁿ)^(k))` assembled factor by factor from the
/// radial homotopy on `ℝ¹` and the formal homotopy on `(ℝ⁰)^(1)`.
pub fn omega_tensor_contraction(space: Space) -> Box<dyn Contraction<Form>> {
    let order = space.order;
    if space.n > 0 {
        let rest = Space::new(space.n - 1, space.k, order);
        Box::new(Tensor::unchecked(Box::new(Radial::new(Space::new(1, 0, order))), omega_tensor_contraction(rest)))
    } else if space.k > 0 {
        let rest = Space::new(0, space.k - 1, order);
        let line = FormalLine::new(Space::new(0, 1, order)).expect("line space");
        Box::new(Tensor::unchecked(Box::new(line), omega_tensor_contraction(rest)))
    } else {
        Box::new(Point::new(order))
    }
}

/// The homotopy on the compactly supported dual complex of `(ℝⁿ)^(k)`,
/// one normalized profile per `x`-axis.
pub fn dual_contraction(space: Space, bumps: &[PiecewisePoly]) -> Result<Box<dyn Contraction<DualForm>>> {
    if bumps.len() < space.n {
        return Err(Error::MissingConfiguration(format!(
            "{} normalized bumps needed, {} configured",
            space.n,
            bumps.len()
        )));
    }
    let order = space.order;
    Ok(if space.n > 0 {
        let line = CsLine::new(Space::new(1, 0, order), bumps[0].clone())?;
        let rest = dual_contraction(Space::new(space.n - 1, space.k, order), &bumps[1..])?;
        Box::new(Tensor::unchecked(Box::new(line), rest))
    } else if space.k > 0 {
        let line = FormalDualLine::new(Space::new(0, 1, order))?;
        let rest = dual_contraction(Space::new(0, space.k - 1, order), bumps)?;
        Box::new(Tensor::unchecked(Box::new(line), rest))
    } else {
        Box::new(Point::new(order))
    })
}

/// `H(η)` on `(ℝⁿ)^(k)` for the configured per-axis profiles.
pub fn cs_homotopy(eta: &DualForm, bumps: &[PiecewisePoly]) -> Result<DualForm> {
    dual_contraction(eta.space(), bumps)?.h(eta)
}

/// `α(1)` for the configured profiles: `g₁ ⊗ ⋯ ⊗ gₙ` as a degree-0 dual form.
pub fn alpha(space: Space, bumps: &[PiecewisePoly]) -> Result<DualForm> {
    if bumps.len() < space.n {
        return Err(Error::MissingConfiguration(format!("{} normalized bumps needed", space.n)));
    }
    for g in &bumps[..space.n] {
        check_normalized(g)?;
    }
    let tau = TensorDensity::product(int(1), bumps[..space.n].to_vec());
    Ok(DualForm::top(Density::term(space, tau, MultiIndex::zero(space.k))?))
}

/// The default profile on every axis: the normalized bump on `[0, 1]`.
pub fn default_bumps(n: usize) -> Vec<PiecewisePoly> {
    let g = crate::algebra::bump(&int(0), &int(1), true).expect("nondegenerate");
    vec![g; n]
}

/// The complexes with a registered homotopy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexId {
    /// `Ω•` with the radial homotopy.
    Omega,
    /// `Ω•` with the factorwise tensor homotopy.
    OmegaTensor,
    /// The compactly supported dual complex with the `⊛` homotopy.
    Dual,
}

impl ComplexId {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(ComplexId::Omega),
            "omega-tensor" => Ok(ComplexId::OmegaTensor),
            "dual" | "cs" => Ok(ComplexId::Dual),
            other => Err(Error::InvalidArgument(format!("unknown complex '{other}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ComplexId::Omega => "omega",
            ComplexId::OmegaTensor => "omega-tensor",
            ComplexId::Dual => "dual",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeResidual {
    pub degree: usize,
    pub samples: usize,
    /// Samples with `dh + hd ≠ id − P`.
    pub identity_failures: usize,
    /// Samples with `d∘h∘d ≠ d`.
    pub strongness_failures: usize,
    /// Samples with `P∘P ≠ P`.
    pub projection_failures: usize,
    /// The first failing sample, if any.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyCertificate {
    pub complex: ComplexId,
    pub space: Space,
    pub degrees: (usize, usize),
    pub maps: String,
    pub homotopy: String,
    pub residuals: Vec<DegreeResidual>,
    pub passed: bool,
}

impl HomotopyCertificate {
    pub fn into_result(self) -> Result<Self> {
        if self.passed {
            return Ok(self);
        }
        let witness = self
            .residuals
            .iter()
            .find_map(|r| r.witness.clone())
            .unwrap_or_default();
        Err(Error::ResidualNonzero(witness))
    }
}

fn certify<E: Cochain>(
    c: &dyn Contraction<E>,
    space: Space,
    samples: usize,
    rng: &mut ChaCha8Rng,
    limits: Limits,
) -> Result<Vec<DegreeResidual>> {
    let mut out = Vec::new();
    for degree in 0..=space.nvars() {
        let mut row = DegreeResidual {
            degree,
            samples,
            identity_failures: 0,
            strongness_failures: 0,
            projection_failures: 0,
            witness: None,
        };
        for _ in 0..samples {
            let e = E::random(rng, space, degree, limits);
            let checks = [
                identity_residual(c, &e)?,
                strongness_residual(c, &e)?,
                projection_residual(c, &e)?,
            ];
            let failed: Vec<bool> = checks.iter().map(|r| !r.vanishes()).collect();
            row.identity_failures += usize::from(failed[0]);
            row.strongness_failures += usize::from(failed[1]);
            row.projection_failures += usize::from(failed[2]);
            if row.witness.is_none() && failed.iter().any(|&f| f) {
                row.witness = Some(e.to_string());
            }
        }
        out.push(row);
    }
    Ok(out)
}

/// Runs the identity, strongness and projection checks on `samples` random
/// elements per degree. Failures are recorded, not raised.
pub fn run_certificate(
    complex: ComplexId,
    space: Space,
    samples: usize,
    seed: u64,
    limits: Limits,
) -> Result<HomotopyCertificate> {
    let mut rng = gen::rng(seed);
    let (residuals, homotopy, maps) = match complex {
        ComplexId::Omega | ComplexId::OmegaTensor => {
            let c = if complex == ComplexId::Omega {
                omega_contraction(space)
            } else {
                omega_tensor_contraction(space)
            };
            let res = certify::<Form>(c.as_ref(), space, samples, &mut rng, limits)?;
            (res, c.describe(), "g: evaluation of the degree-0 part at 0; ε: constants".to_string())
        }
        ComplexId::Dual => {
            let bumps = default_bumps(space.n);
            let c = dual_contraction(space, &bumps)?;
            let res = certify::<DualForm>(c.as_ref(), space, samples, &mut rng, limits)?;
            let a = alpha(space, &bumps)?;
            (res, c.describe(), format!("ζ: ∫τ₀ on the full star tuple; α(1) = {a}"))
        }
    };
    let passed = residuals
        .iter()
        .all(|r| r.identity_failures + r.strongness_failures + r.projection_failures == 0);
    Ok(HomotopyCertificate {
        complex,
        space,
        degrees: (0, space.nvars()),
        maps,
        homotopy,
        residuals,
        passed,
    })
}

/// Like [`run_certificate`], failing with the first witness on any nonzero
/// residual.
pub fn certify_strong_exactness(complex: ComplexId, space: Space, samples: usize, seed: u64) -> Result<HomotopyCertificate> {
    run_certificate(complex, space, samples, seed, Limits::default())?.into_result()
}

/// `⟨H(η), ω⟩ − (−1)^{r+1}⟨η, K(ω)⟩` on `(ℝ⁰)^(k)`, `r` the degree of `η`.
pub fn transpose_defect(eta: &DualForm, omega: &Form) -> Result<Rational> {
    let space = eta.space();
    let h = cs_homotopy(eta, &[])?;
    let k = omega_tensor_contraction(space).h(omega)?;
    let lhs = if h.degree() == omega.degree() { h.pair(omega)? } else { Rational::zero() };
    let rhs = if k.degree() == eta.degree() && !k.is_zero() { eta.pair(&k)? } else { Rational::zero() };
    Ok(lhs - sign_pow(eta.degree() + 1) * rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::bump;
    use crate::algebra::rational::frac;

    fn s(n: usize, k: usize, o: u32) -> Space {
        Space::new(n, k, o)
    }

    #[test]
    fn radial_of_x_dx() {
        let sp = s(1, 0, 0);
        let x = FormalFunction::x(sp, 0);
        let omega = Form::function(x.clone()).d().unwrap().mul_fn(&x).unwrap();
        let k = radial_homotopy(&omega).unwrap();
        assert_eq!(k, Form::function(x.pow(2).unwrap().scale(&frac(1, 2))));
        assert_eq!(k.d().unwrap(), omega);
        assert!(radial_homotopy(&Form::function(FormalFunction::constant(sp, int(3)))).unwrap().is_zero());
    }

    #[test]
    fn radial_identity_on_exact_form() {
        let sp = s(1, 1, 3);
        let f = FormalFunction::x(sp, 0).pow(2).unwrap().mul(&FormalFunction::y(sp, 0)).unwrap();
        let df = Form::function(f).d().unwrap();
        let lhs = radial_homotopy(&df).unwrap().d().unwrap().add(&radial_homotopy(&df.d().unwrap()).unwrap()).unwrap();
        assert!(lhs.agrees(&df));
    }

    #[test]
    fn formal_homotopy_examples() {
        let sp = s(0, 1, 4);
        let y = FormalFunction::y(sp, 0);
        let omega = Form::term(y.pow(2).unwrap(), OrderedTuple::full(1));
        assert_eq!(
            formal_homotopy(&omega).unwrap(),
            Form::function(y.pow(3).unwrap().scale(&frac(1, 3)))
        );
        let y3 = Form::function(y.pow(3).unwrap());
        assert!(formal_homotopy(&y3).unwrap().is_zero());
        let c = FormalLine::new(sp).unwrap();
        assert!(identity_residual(&c, &y3).unwrap().is_zero());
        assert!(c.project(&y3).unwrap().is_zero());
        assert_eq!(formal_homotopy(&Form::zero(s(1, 0, 0), 1)).unwrap_err().code(), crate::ErrorCode::SpaceMismatch);
    }

    #[test]
    fn radial_matches_formal_on_the_formal_line() {
        let sp = s(0, 1, 4);
        let mut rng = gen::rng(1);
        for _ in 0..20 {
            let w = gen::form(&mut rng, sp, 1, Limits::default());
            assert_eq!(radial_homotopy(&w).unwrap(), formal_homotopy(&w).unwrap());
        }
    }

    #[test]
    fn tensor_of_lines_is_a_homotopy() {
        let mut rng = gen::rng(2);
        let t = tensor_homotopy::<Form>(
            Box::new(Radial::new(s(1, 0, 3))),
            Box::new(FormalLine::new(s(0, 1, 3)).unwrap()),
            &mut rng,
            3,
        )
        .unwrap();
        for degree in 0..=2 {
            for _ in 0..20 {
                let w = gen::form(&mut rng, s(1, 1, 3), degree, Limits::default());
                assert!(identity_residual(&t, &w).unwrap().is_zero(), "{w}");
            }
        }
    }

    #[test]
    fn tensor_of_points_is_zero() {
        let mut rng = gen::rng(3);
        let t = tensor_homotopy::<Form>(Box::new(Point::new(2)), Box::new(Point::new(2)), &mut rng, 2).unwrap();
        let c = Form::function(FormalFunction::constant(s(0, 0, 2), int(5)));
        assert!(t.h(&c).unwrap().is_zero());
        assert_eq!(t.project(&c).unwrap(), c);
    }

    #[test]
    fn tensor_rejects_a_broken_factor() {
        struct Broken;
        impl Contraction<Form> for Broken {
            fn space(&self) -> Space {
                Space::new(1, 0, 2)
            }
            fn h(&self, e: &Form) -> Result<Form> {
                Ok(Form::zero(e.space(), e.degree().saturating_sub(1)))
            }
            fn project(&self, e: &Form) -> Result<Form> {
                Ok(constant_part(e))
            }
            fn describe(&self) -> String {
                "broken".into()
            }
        }
        let mut rng = gen::rng(4);
        let err = tensor_homotopy::<Form>(Box::new(Broken), Box::new(Point::new(2)), &mut rng, 3).err().unwrap();
        assert_eq!(err.code(), crate::ErrorCode::ResidualNonzero);
    }

    #[test]
    fn tensor_sign_on_a_degree_one_factor() {
        let sp = s(1, 1, 3);
        let t = omega_tensor_contraction(sp);
        let w = Form::term(FormalFunction::x(sp, 0), OrderedTuple::new(vec![1, 2]).unwrap());
        let h = t.h(&w).unwrap();
        let expected = Form::term(
            FormalFunction::x(sp, 0).pow(2).unwrap().scale(&frac(-1, 2)),
            OrderedTuple::new(vec![2]).unwrap(),
        );
        assert_eq!(h, expected.neg());
        let w = Form::term(FormalFunction::y(sp, 0), OrderedTuple::new(vec![1]).unwrap());
        assert_eq!(t.h(&w).unwrap(), Form::function(FormalFunction::x(sp, 0).mul(&FormalFunction::y(sp, 0)).unwrap()));
        let dw = w.d().unwrap();
        assert!(t.h(&dw).unwrap().agrees(&Form::term(FormalFunction::x(sp, 0).neg(), OrderedTuple::new(vec![2]).unwrap())));
        assert!(identity_residual(t.as_ref(), &w).unwrap().is_zero());
    }

    #[test]
    fn dual_leibniz_sign() {
        let mut rng = gen::rng(7);
        let (s1, s2) = (s(1, 1, 2), s(1, 1, 2));
        for r1 in 0..=2 {
            for r2 in 0..=2 {
                let u = gen::dual_form(&mut rng, s1, r1, 2, Limits::default());
                let v = gen::dual_form(&mut rng, s2, r2, 2, Limits::default());
                let lhs = u.boxtimes(&v).d().unwrap();
                let mut rhs = DualForm::zero(lhs.space(), lhs.degree());
                let du = u.d().unwrap();
                if r1 > 0 {
                    rhs = rhs.add(&du.boxtimes(&v)).unwrap();
                }
                if r2 > 0 {
                    rhs = rhs.add(&u.boxtimes(&v.d().unwrap()).scale(&DualForm::leibniz_sign(&u))).unwrap();
                }
                if r1 + r2 > 0 {
                    assert_eq!(lhs, rhs, "r1={r1} r2={r2}");
                }
            }
        }
    }

    #[test]
    fn splits_reassemble() {
        let mut rng = gen::rng(8);
        let (s1, s2) = (s(1, 1, 2), s(1, 1, 2));
        let p = s1.product(&s2);
        for r in 0..=4 {
            let w = gen::form(&mut rng, p, r, Limits::default());
            let back = sum_parts(p, r, w.split(s1, s2).into_iter().map(|(c, u, v)| u.kunneth(&v).scale(&c))).unwrap();
            assert_eq!(back, w);
            let e = gen::dual_form(&mut rng, p, r, 2, Limits::default());
            let back = sum_parts(p, r, e.split(s1, s2).into_iter().map(|(c, u, v)| u.boxtimes(&v).scale(&c))).unwrap();
            assert_eq!(back, e);
        }
    }

    #[test]
    fn cs_line_examples() {
        let sp = s(1, 0, 0);
        let g = bump(&int(0), &int(1), true).unwrap();
        let ind = PiecewisePoly::indicator(int(0), int(1)).unwrap();
        assert!(star(&ind, &ind).unwrap().is_zero());
        let f = bump(&int(-1), &int(2), false).unwrap();
        assert!(star(&f, &f).unwrap().is_zero());
        let c = CsLine::new(sp, g.clone()).unwrap();
        let mut rng = gen::rng(11);
        for degree in 0..=1 {
            for _ in 0..10 {
                let e = gen::dual_form(&mut rng, sp, degree, 0, Limits::default());
                assert!(identity_residual(&c, &e).unwrap().is_zero());
            }
        }
        let unnormalized = bump(&int(0), &int(1), false).unwrap();
        let eta = gen::dual_form(&mut rng, sp, 0, 0, Limits::default());
        assert_eq!(cs_homotopy_1d(&eta, &unnormalized).unwrap_err().code(), crate::ErrorCode::NotNormalized);
        assert_eq!(cs_homotopy(&eta, &[g.clone()]).unwrap(), cs_homotopy_1d(&eta, &g).unwrap());
    }

    #[test]
    fn cs_homotopy_needs_bumps() {
        let eta = DualForm::zero(s(2, 0, 0), 0);
        assert_eq!(cs_homotopy(&eta, &default_bumps(1)).unwrap_err().code(), crate::ErrorCode::MissingConfiguration);
    }

    #[test]
    fn dual_identity_on_products() {
        for sp in [s(0, 1, 3), s(1, 1, 3), s(2, 1, 2), s(0, 2, 2)] {
            let c = dual_contraction(sp, &default_bumps(sp.n)).unwrap();
            let mut rng = gen::rng(12);
            for degree in 0..=sp.nvars() {
                for _ in 0..5 {
                    let e = gen::dual_form(&mut rng, sp, degree, 2, Limits::default());
                    let res = identity_residual(c.as_ref(), &e).unwrap();
                    assert!(res.is_zero(), "{sp} {e}: {res}");
                }
            }
        }
    }

    #[test]
    fn transpose_sign_on_the_formal_side() {
        let mut rng = gen::rng(13);
        for sp in [s(0, 1, 4), s(0, 2, 3)] {
            for r in 0..=sp.nvars() {
                for _ in 0..10 {
                    let eta = gen::dual_form(&mut rng, sp, r, 3, Limits::default());
                    if let Some(dr) = DualForm::homotopy_degree(sp, r) {
                        let omega = gen::form(&mut rng, sp, dr, Limits::default());
                        assert!(transpose_defect(&eta, &omega).unwrap().is_zero(), "{eta} / {omega}");
                    }
                }
            }
        }
    }

    #[test]
    fn certificates() {
        let c = certify_strong_exactness(ComplexId::Omega, s(2, 1, 3), 5, 1).unwrap();
        assert!(c.passed);
        assert_eq!(c.residuals.len(), 4);
        assert!(certify_strong_exactness(ComplexId::Omega, s(0, 0, 0), 3, 1).unwrap().passed);
        assert!(certify_strong_exactness(ComplexId::Dual, s(1, 1, 2), 5, 1).unwrap().passed);
        assert!(certify_strong_exactness(ComplexId::OmegaTensor, s(1, 2, 2), 5, 1).unwrap().passed);
    }
}
