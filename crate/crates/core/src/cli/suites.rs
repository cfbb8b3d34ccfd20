//! Invariant suites behind `check`: each runs exact identities on seeded
//! random or exhaustively enumerated inputs and tallies the failures.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ast::Param;
use super::Config;
use crate::algebra::rational::{frac, sign_pow};
use crate::algebra::{MultiIndex, OrderedTuple, Poly, Rational, TensorDensity};
use crate::derham::Form;
use crate::dual::{Density, DualForm};
use crate::formal::{jet_dimension, DiffOp, FormalFunction, Jet, PointDistribution, Space};
use crate::gen::{self, Limits};
use crate::homotopy::{default_bumps, run_certificate, ComplexId, HomotopyCertificate};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Dd,
    Poincare,
    Adjoint,
    Kunneth,
    Pullback,
    Jets,
    Filtration,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Dd,
        Suite::Poincare,
        Suite::Adjoint,
        Suite::Kunneth,
        Suite::Pullback,
        Suite::Jets,
        Suite::Filtration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dd => "dd",
            Suite::Poincare => "poincare",
            Suite::Adjoint => "adjoint",
            Suite::Kunneth => "kunneth",
            Suite::Pullback => "pullback",
            Suite::Jets => "jets",
            Suite::Filtration => "filtration",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

/// A fully resolved `check` request. Unset fields take per-suite defaults.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSpec {
    pub suite: Suite,
    pub complex: Option<ComplexId>,
    pub space: Option<(usize, usize)>,
    pub space2: Option<(usize, usize)>,
    /// Truncation order; for `jets` the jet order, for `filtration` the
    /// bound on `i + r`.
    pub order: Option<u32>,
    pub samples: Option<usize>,
    pub max_degree: Option<u32>,
    pub seed: u64,
}

impl SuiteSpec {
    pub fn new(suite: &str, sub: Option<&str>, seed: u64) -> Result<SuiteSpec> {
        let suite = Suite::parse(suite)?;
        let complex = match (suite, sub) {
            (Suite::Poincare, Some(c)) => Some(ComplexId::parse(c)?),
            (Suite::Poincare, None) => Some(ComplexId::Omega),
            (_, Some(s)) => {
                return Err(Error::InvalidArgument(format!("suite '{}' takes no variant, found '{s}'", suite.name())))
            }
            (_, None) => None,
        };
        Ok(SuiteSpec {
            suite,
            complex,
            space: None,
            space2: None,
            order: None,
            samples: None,
            max_degree: None,
            seed,
        })
    }

    pub fn from_statement(suite: &str, sub: Option<&str>, params: &[(String, Param)], cfg: &Config) -> Result<SuiteSpec> {
        let mut spec = SuiteSpec::new(suite, sub, cfg.seed)?;
        spec.max_degree = cfg.max_degree;
        for (key, value) in params {
            spec.set(key, value)?;
        }
        Ok(spec)
    }

    pub fn set(&mut self, key: &str, value: &Param) -> Result<()> {
        let bad = || Error::InvalidArgument(format!("bad value for '{key}'"));
        let int = |v: &Param| match v {
            Param::Int(n) => Ok(*n),
            _ => Err(bad()),
        };
        let pair = |v: &Param| match v {
            Param::Tuple(t) if t.len() == 2 => Ok((t[0] as usize, t[1] as usize)),
            _ => Err(bad()),
        };
        match key {
            "space" => self.space = Some(pair(value)?),
            "space2" if self.suite == Suite::Kunneth => self.space2 = Some(pair(value)?),
            "order" => self.order = Some(u32::try_from(int(value)?).map_err(|_| bad())?),
            "samples" => self.samples = Some(int(value)? as usize),
            "degree" => self.max_degree = Some(u32::try_from(int(value)?).map_err(|_| bad())?),
            "seed" => self.seed = int(value)?,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "suite '{}' has no parameter '{key}'",
                    self.suite.name()
                )))
            }
        }
        Ok(())
    }

    fn limits(&self, default: u32) -> Limits {
        Limits { max_degree: self.max_degree.unwrap_or(default), max_terms: 4 }
    }

    fn spaces(&self, default: impl FnOnce() -> Vec<(usize, usize)>) -> Vec<(usize, usize)> {
        match self.space {
            Some(s) => vec![s],
            None => default(),
        }
    }
}

/// All `(n, k)` with `n + k ≤ total`.
pub fn spaces_up_to(total: usize) -> Vec<(usize, usize)> {
    (0..=total).flat_map(|nv| (0..=nv).map(move |n| (n, nv - n))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub complex: Option<ComplexId>,
    pub seed: u64,
    pub cases: usize,
    pub failures: usize,
    pub passed: bool,
    /// The first failing input.
    pub witness: Option<String>,
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<HomotopyCertificate>,
}

impl SuiteReport {
    pub fn summary(&self) -> String {
        let name = match self.complex {
            Some(c) => format!("{} {}", self.suite.name(), c.name()),
            None => self.suite.name().to_string(),
        };
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{name}: {verdict} ({} cases, {} failures)", self.cases, self.failures)
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    witness: Option<String>,
    details: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    /// Runs `body` and appends a detail line with the cases it added.
    fn section(&mut self, label: String, body: impl FnOnce(&mut Tally) -> Result<()>) -> Result<()> {
        let (c0, f0) = (self.cases, self.failures);
        body(self)?;
        self.details
            .push(format!("{label}: {} cases, {} failures", self.cases - c0, self.failures - f0));
        Ok(())
    }
}

pub fn run(spec: &SuiteSpec) -> Result<SuiteReport> {
    let mut rng = gen::rng(spec.seed);
    let mut tally = Tally::default();
    let mut certificates = Vec::new();
    match spec.suite {
        Suite::Dd => dd(spec, &mut rng, &mut tally)?,
        Suite::Poincare => certificates = poincare(spec, &mut tally)?,
        Suite::Adjoint => adjoint(spec, &mut rng, &mut tally)?,
        Suite::Kunneth => kunneth(spec, &mut rng, &mut tally)?,
        Suite::Pullback => pullback(spec, &mut rng, &mut tally)?,
        Suite::Jets => jets(spec, &mut rng, &mut tally)?,
        Suite::Filtration => filtration(spec, &mut rng, &mut tally)?,
    }
    Ok(SuiteReport {
        suite: spec.suite,
        complex: spec.complex,
        seed: spec.seed,
        cases: tally.cases,
        failures: tally.failures,
        passed: tally.failures == 0,
        witness: tally.witness,
        details: tally.details,
        certificates,
    })
}

fn dd(spec: &SuiteSpec, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let order = spec.order.unwrap_or(4);
    let samples = spec.samples.unwrap_or(200);
    let limits = spec.limits(3);
    for (n, k) in spec.spaces(|| spaces_up_to(5)) {
        let s = Space::new(n, k, order);
        let nv = s.nvars();
        tally.section(format!("{s}"), |t| {
            for i in 0..samples {
                let r = i % (nv + 1);
                let w = gen::form(rng, s, r, limits);
                let dd = w.d()?.d()?;
                t.check(dd.is_zero(), || format!("d(d(w)) = {dd} for w = {w}"));
                let q = rng.gen_range(0..=nv - r);
                let v = gen::form(rng, s, q, limits);
                let lhs = w.wedge(&v)?.d()?;
                let rhs = w.d()?.wedge(&v)?.add(&w.wedge(&v.d()?)?.scale(&sign_pow(r)))?;
                t.check(lhs.agrees(&rhs), || format!("Leibniz fails for w = {w}, v = {v}"));
                let swapped = v.wedge(&w)?.scale(&sign_pow(r * q));
                t.check(w.wedge(&v)?.agrees(&swapped), || format!("graded commutativity fails for w = {w}, v = {v}"));
            }
            Ok(())
        })?;
    }
    Ok(())
}

fn poincare(spec: &SuiteSpec, tally: &mut Tally) -> Result<Vec<HomotopyCertificate>> {
    let complex = spec.complex.unwrap_or(ComplexId::Omega);
    let order = spec.order.unwrap_or(3);
    let (default_spaces, samples, degree) = match complex {
        ComplexId::Dual => (vec![(1, 0), (0, 1), (1, 1), (2, 1)], 50, 2),
        _ => (spaces_up_to(4), 100, 3),
    };
    let samples = spec.samples.unwrap_or(samples);
    let limits = spec.limits(degree);
    let mut certs = Vec::new();
    for (i, (n, k)) in spec.spaces(|| default_spaces).into_iter().enumerate() {
        let s = Space::new(n, k, order);
        let cert = run_certificate(complex, s, samples, spec.seed.wrapping_add(i as u64), limits)?;
        tally.section(format!("{s}"), |t| {
            for row in &cert.residuals {
                let failed = row.identity_failures + row.strongness_failures + row.projection_failures;
                t.cases += 3 * row.samples;
                t.failures += failed;
                if failed > 0 && t.witness.is_none() {
                    t.witness = row.witness.clone();
                }
            }
            Ok(())
        })?;
        certs.push(cert);
    }
    Ok(certs)
}

fn adjoint(spec: &SuiteSpec, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let order = spec.order.unwrap_or(3);
    let samples = spec.samples.unwrap_or(200);
    let limits = spec.limits(3);
    let max_l = order.saturating_sub(1);
    for (n, k) in spec.spaces(|| spaces_up_to(3)) {
        let s = Space::new(n, k, order);
        let nv = s.nvars();
        if nv == 0 {
            tally.details.push(format!("{s}: no degree pairs"));
            continue;
        }
        tally.section(format!("{s}"), |t| {
            for i in 0..samples {
                let r = i % nv;
                let eta = gen::dual_form(rng, s, r + 1, max_l, limits);
                let omega = gen::form(rng, s, r, limits);
                let de = eta.d()?;
                let lhs = de.pair(&omega)?;
                let rhs = sign_pow(r + 1) * eta.pair(&omega.d()?)?;
                t.check(lhs == rhs, || format!("adjointness fails for eta = {eta}, omega = {omega}"));
                t.check(de.d()?.is_zero(), || format!("d(d(eta)) != 0 for eta = {eta}"));
            }
            Ok(())
        })?;
    }
    Ok(())
}

fn form_basis(s: Space) -> Vec<Form> {
    let nv = s.nvars();
    let mut coeffs = vec![FormalFunction::one(s)];
    if nv > 0 {
        coeffs.push(FormalFunction::var(s, nv - 1));
    }
    let mut out = Vec::new();
    for r in 0..=nv {
        for t in Form::basis(s, r) {
            for c in &coeffs {
                out.push(Form::term(c.clone(), t.clone()));
            }
        }
    }
    out
}

fn dual_basis(s: Space) -> Result<Vec<DualForm>> {
    let nv = s.nvars();
    let tau = TensorDensity::product(Rational::one(), default_bumps(s.n));
    let mut ls = vec![MultiIndex::zero(s.k)];
    if s.k > 0 {
        ls.push(MultiIndex::unit(s.k, s.k - 1));
    }
    let mut out = Vec::new();
    for l in ls {
        let eta = Density::term(s, tau.clone(), l)?;
        for b in 0..=nv {
            for t in OrderedTuple::all(nv, b) {
                out.push(DualForm::term(eta.clone(), t)?);
            }
        }
    }
    Ok(out)
}

fn pairing(omega: &Form, eta: &DualForm) -> Result<Rational> {
    if omega.degree() == eta.degree() {
        eta.pair(omega)
    } else {
        Ok(Rational::zero())
    }
}

fn kunneth(spec: &SuiteSpec, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let order = spec.order.unwrap_or(3);
    let samples = spec.samples.unwrap_or(10);
    let limits = spec.limits(2);
    let pairs: Vec<((usize, usize), (usize, usize))> = match (spec.space, spec.space2) {
        (Some(a), Some(b)) => vec![(a, b)],
        (Some(a), None) | (None, Some(a)) => vec![(a, a)],
        (None, None) => {
            let all = spaces_up_to(3);
            all.iter().flat_map(|&a| all.iter().map(move |&b| (a, b))).collect()
        }
    };
    for ((n1, k1), (n2, k2)) in pairs {
        let s1 = Space::new(n1, k1, order);
        let s2 = Space::new(n2, k2, order);
        let s3 = s1.product(&s2);
        let (nv1, nv2) = (s1.nvars(), s2.nvars());
        tally.section(format!("{s1} x {s2}"), |t| {
            for r in 0..=nv1 + nv2 {
                let split: usize = (0..=r)
                    .map(|r1| Form::basis(s1, r1).len() * Form::basis(s2, r - r1).len())
                    .sum();
                let whole = Form::basis(s3, r).len();
                t.check(split == whole, || format!("dimension count {split} != {whole} in degree {r} on {s1} x {s2}"));
            }
            for _ in 0..samples {
                let r1 = rng.gen_range(0..=nv1);
                let r2 = rng.gen_range(0..=nv2);
                let w1 = gen::form(rng, s1, r1, limits);
                let w2 = gen::form(rng, s2, r2, limits);
                let lhs = w1.kunneth(&w2).d()?;
                let rhs = w1.d()?.kunneth(&w2).add(&w1.kunneth(&w2.d()?).scale(&sign_pow(r1)))?;
                t.check(lhs.agrees(&rhs), || format!("d does not commute with the product for {w1} and {w2}"));
            }
            if nv1 <= 2 && nv2 <= 2 {
                duality(s1, s2, t)?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

/// `⟨Ψ(ω₁⊗ω₂), η₁⊠η₂⟩ = (−1)^{r₁r₂}⟨ω₁,η₁⟩⟨ω₂,η₂⟩` over the small bases.
fn duality(s1: Space, s2: Space, t: &mut Tally) -> Result<()> {
    let (f1, f2) = (form_basis(s1), form_basis(s2));
    let (e1, e2) = (dual_basis(s1)?, dual_basis(s2)?);
    let table = |fs: &[Form], es: &[DualForm]| -> Result<Vec<Vec<Rational>>> {
        fs.iter().map(|w| es.iter().map(|e| pairing(w, e)).collect()).collect()
    };
    let (p1, p2) = (table(&f1, &e1)?, table(&f2, &e2)?);
    let products: Vec<Vec<Form>> = f1.iter().map(|a| f2.iter().map(|b| a.kunneth(b)).collect()).collect();
    for (j1, a) in e1.iter().enumerate() {
        for (j2, b) in e2.iter().enumerate() {
            let eta = a.boxtimes(b);
            for (i1, w1) in f1.iter().enumerate() {
                for (i2, w2) in f2.iter().enumerate() {
                    if w1.degree() + w2.degree() != eta.degree() {
                        continue;
                    }
                    let lhs = eta.pair(&products[i1][i2])?;
                    let rhs = sign_pow(w1.degree() * w2.degree()) * &p1[i1][j1] * &p2[i2][j2];
                    t.check(lhs == rhs, || format!("duality fails for {w1} x {w2} against {a} and {b}"));
                }
            }
        }
    }
    Ok(())
}

fn pullback(spec: &SuiteSpec, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let order = spec.order.unwrap_or(3);
    let samples = spec.samples.unwrap_or(100);
    let limits = spec.limits(4);
    let map_limits = Limits { max_degree: limits.max_degree.min(2), max_terms: 3 };
    let pool = spec.spaces(|| spaces_up_to(2));
    tally.section("random triples".to_string(), |t| {
        for _ in 0..samples {
            let mut pick = || {
                let &(n, k) = pool.choose(rng).expect("nonempty");
                Space::new(n, k, order)
            };
            let (a, b, c) = (pick(), pick(), pick());
            let phi = gen::morphism(rng, a, b, map_limits);
            let psi = gen::morphism(rng, b, c, map_limits);
            let g1 = gen::formal_function(rng, b, limits);
            let g2 = gen::formal_function(rng, b, limits);
            let prod = phi.pullback(&g1.mul(&g2)?)?;
            let split = phi.pullback(&g1)?.mul(&phi.pullback(&g2)?)?;
            t.check(prod.agrees(&split), || format!("pullback is not multiplicative: {phi}; {g1}; {g2}"));
            let one = phi.pullback(&FormalFunction::one(b))?;
            t.check(one == FormalFunction::one(a), || format!("pullback of 1 is {one} under {phi}"));
            let sum = phi.pullback(&g1.add(&g2)?)?;
            let parts = phi.pullback(&g1)?.add(&phi.pullback(&g2)?)?;
            t.check(sum.agrees(&parts), || format!("pullback is not additive: {phi}"));

            let r = rng.gen_range(0..=b.nvars());
            let w = gen::form(rng, b, r, limits);
            let lhs = w.d()?.pullback(&phi)?;
            let rhs = w.pullback(&phi)?.d()?;
            t.check(lhs.agrees(&rhs), || format!("pullback does not commute with d: {phi}; {w}"));

            let g = gen::formal_function(rng, c, limits);
            let once = psi.compose(&phi)?.pullback(&g)?;
            let twice = phi.pullback(&psi.pullback(&g)?)?;
            t.check(once.agrees(&twice), || format!("functoriality fails: {psi}; {phi}; {g}"));
        }
        Ok(())
    })
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| frac(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect()
}

/// `(z − a)^K` with the formal variables unshifted.
fn shifted_monomial(s: Space, a: &[Rational], index: &MultiIndex) -> Result<FormalFunction> {
    let back: Vec<Rational> = a.iter().map(|v| -v.clone()).chain(std::iter::repeat(Rational::zero()).take(s.k)).collect();
    FormalFunction::new(s, Poly::monomial(s.nvars(), index.clone(), Rational::one()).shift(&back))
}

fn jets(spec: &SuiteSpec, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let r = spec.order.unwrap_or(5).max(1);
    let limits = spec.limits(3);
    for (n, k) in spec.spaces(|| spaces_up_to(3)) {
        let s = Space::new(n, k, r - 1);
        let nv = s.nvars();
        let a = random_point(rng, n);
        tally.section(format!("{s} at jet order {r}"), |t| {
            let basis = MultiIndex::all_up_to(nv, r - 1);
            let brute = (0..(r as usize).pow(nv as u32))
                .filter(|code| {
                    let mut c = *code;
                    let mut sum = 0;
                    for _ in 0..nv {
                        sum += c % r as usize;
                        c /= r as usize;
                    }
                    sum < r as usize
                })
                .count();
            let dim = jet_dimension(n, k, r);
            t.check(dim == brute && basis.len() == brute, || format!("jet dimension {dim} != {brute} on {s}"));
            let f = gen::formal_function(rng, s, limits);
            let jet = Jet::of(&f, &a, r)?;
            t.check(jet.dimension() == brute, || format!("jet of {f} has dimension {}", jet.dimension()));
            let monomials: Vec<FormalFunction> =
                basis.iter().map(|m| shifted_monomial(s, &a, m)).collect::<Result<_>>()?;
            for kk in &basis {
                let ev = PointDistribution::derivative(s, a.clone(), kk.clone())?;
                for (m, g) in basis.iter().zip(&monomials) {
                    let got = ev.pair(g)?;
                    let want = if m == kk { kk.factorial_q() } else { Rational::zero() };
                    t.check(got == want, || format!("<ev d^{kk}, (z-a)^{m}> = {got} at a = {a:?}"));
                }
            }
            Ok(())
        })?;
    }
    Ok(())
}

fn random_diffop(rng: &mut ChaCha8Rng, s: Space, r: u32, limits: Limits) -> DiffOp {
    let indices = MultiIndex::all_up_to(s.nvars(), r);
    let top: Vec<&MultiIndex> = indices.iter().filter(|m| m.degree() == r).collect();
    let mut d = DiffOp::zero(s);
    let lead = (*top.choose(rng).expect("nonempty")).clone();
    let terms = std::iter::once(lead).chain((0..rng.gen_range(0..3)).map(|_| indices.choose(rng).expect("nonempty").clone()));
    for m in terms.collect::<Vec<_>>() {
        let c = gen::formal_function(rng, s, limits);
        d = d.add(&DiffOp::term(c, m)).expect("same space");
    }
    d
}

fn filtration(spec: &SuiteSpec, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let bound = spec.order.unwrap_or(5);
    let samples = spec.samples.unwrap_or(4);
    let limits = spec.limits(2);
    let default = || spaces_up_to(2).into_iter().filter(|&(n, k)| n + k > 0).collect();
    for (n, k) in spec.spaces(default) {
        let s = Space::new(n, k, bound);
        let nv = s.nvars();
        if nv == 0 {
            continue;
        }
        tally.section(format!("{s} with i + r <= {bound}"), |t| {
            for r in 0..=bound {
                for _ in 0..samples {
                    let d = random_diffop(rng, s, r, limits);
                    let f = gen::formal_function(rng, s, limits);
                    if let Some(m) = d.order().filter(|&m| m >= 1) {
                        let c = d.commutator_with_fn(&f)?;
                        t.check(c.order().map_or(true, |o| o < m), || format!("order([D, f]) >= order(D) for D = {d}, f = {f}"));
                    }
                    for i in 1..=bound - r {
                        let a = random_point(rng, n);
                        let lead = MultiIndex::all_of_degree(nv, i + r);
                        let mono = lead.choose(rng).expect("nonempty");
                        let g = shifted_monomial(s, &a, mono)?.mul(&gen::formal_function(rng, s, limits))?;
                        let image = d.apply(&g)?;
                        let jet = Jet::of(&image, &a, i)?;
                        t.check(jet.is_zero(), || format!("jet of order {i} of D(g) is {jet} for D = {d}, g = {g}"));
                    }
                }
                let d = random_diffop(rng, s, r, limits);
                let m = d.order().unwrap_or(0);
                let exact = d.order_certificate(m, 4, rng)?;
                let below = m == 0 || !d.order_certificate(m - 1, 4, rng)?;
                t.check(exact && below, || format!("order certificate disagrees with order {m} for D = {d}"));
            }
            Ok(())
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(suite: &str, sub: Option<&str>, space: (usize, usize)) -> SuiteReport {
        let mut spec = SuiteSpec::new(suite, sub, 7).unwrap();
        spec.space = Some(space);
        spec.samples = Some(5);
        run(&spec).unwrap()
    }

    #[test]
    fn suites_pass_on_small_inputs() {
        for (suite, sub) in [
            ("dd", None),
            ("poincare", Some("omega")),
            ("poincare", Some("dual")),
            ("adjoint", None),
            ("kunneth", None),
            ("pullback", None),
            ("jets", None),
            ("filtration", None),
        ] {
            let r = quick(suite, sub, (1, 1));
            assert!(r.passed, "{suite}: {:?}", r.witness);
            assert!(r.cases > 0, "{suite}");
        }
    }

    #[test]
    fn parameters_are_validated() {
        assert!(SuiteSpec::new("nope", None, 0).is_err());
        assert!(SuiteSpec::new("dd", Some("omega"), 0).is_err());
        assert!(SuiteSpec::new("poincare", Some("nope"), 0).is_err());
        let mut s = SuiteSpec::new("dd", None, 0).unwrap();
        assert!(s.set("space2", &Param::Tuple(vec![1, 1])).is_err());
        assert!(s.set("space", &Param::Int(3)).is_err());
        assert!(s.set("colour", &Param::Int(3)).is_err());
    }

    #[test]
    fn space_enumeration() {
        assert_eq!(spaces_up_to(1), vec![(0, 0), (0, 1), (1, 0)]);
        assert_eq!(spaces_up_to(5).len(), 21);
    }
}
