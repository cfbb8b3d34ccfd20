//! Seeded random generators for property tests and check suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::piecewise::bump;
use crate::algebra::rational::{frac, int};
use crate::algebra::{MultiIndex, OrderedTuple, PiecewisePoly, Poly, Rational, TensorDensity};
use crate::derham::Form;
use crate::dual::{Density, DualForm};
use crate::formal::{FormalFunction, Space};
use crate::morphisms::Morphism;

/// The generator used everywhere: ChaCha8, seeded by a `u64`.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bounds for random data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximal total degree of generated polynomials.
    pub max_degree: u32,
    /// Maximal number of terms per polynomial.
    pub max_terms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_degree: 3, max_terms: 4 }
    }
}

pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    let num = rng.gen_range(-5i64..=5);
    let den = rng.gen_range(1i64..=3);
    frac(num, den)
}

fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let q = rational(rng);
        if q != int(0) {
            return q;
        }
    }
}

/// A polynomial whose monomials satisfy `keep`.
pub fn poly_where<R: Rng>(
    rng: &mut R,
    nvars: usize,
    limits: Limits,
    keep: impl Fn(&MultiIndex) -> bool,
) -> Poly {
    let pool: Vec<MultiIndex> = MultiIndex::all_up_to(nvars, limits.max_degree)
        .into_iter()
        .filter(|m| keep(m))
        .collect();
    let mut p = Poly::zero(nvars);
    if pool.is_empty() {
        return p;
    }
    let count = rng.gen_range(1..=limits.max_terms.max(1));
    for _ in 0..count {
        let m = pool.choose(rng).expect("nonempty").clone();
        p.add_term(m, nonzero_rational(rng));
    }
    p
}

pub fn poly<R: Rng>(rng: &mut R, nvars: usize, limits: Limits) -> Poly {
    poly_where(rng, nvars, limits, |_| true)
}

/// A formal function exact up to the space's order.
pub fn formal_function<R: Rng>(rng: &mut R, space: Space, limits: Limits) -> FormalFunction {
    let n = space.n;
    let order = space.order;
    let p = poly_where(rng, space.nvars(), limits, |m| {
        m.exponents()[n..].iter().sum::<u32>() <= order
    });
    FormalFunction::new(space, p).expect("variable count matches")
}

/// A formal function with zero reduction.
pub fn nilpotent_function<R: Rng>(rng: &mut R, space: Space, limits: Limits) -> FormalFunction {
    let n = space.n;
    let order = space.order;
    let p = poly_where(rng, space.nvars(), limits, |m| {
        let yd: u32 = m.exponents()[n..].iter().sum();
        yd >= 1 && yd <= order
    });
    FormalFunction::new(space, p).expect("variable count matches")
}

/// A random form of the given degree (zero when the degree exceeds `n+k`).
pub fn form<R: Rng>(rng: &mut R, space: Space, degree: usize, limits: Limits) -> Form {
    let basis = Form::basis(space, degree);
    let mut out = Form::zero(space, degree);
    if basis.is_empty() {
        return out;
    }
    let count = rng.gen_range(1..=basis.len().min(3));
    for _ in 0..count {
        let t = basis.choose(rng).expect("nonempty").clone();
        let f = formal_function(rng, space, limits);
        out = out.add(&Form::term(f, t)).expect("same space");
    }
    out
}

fn small_point<R: Rng>(rng: &mut R) -> Rational {
    frac(rng.gen_range(-4i64..=4), 2)
}

/// A continuous piecewise polynomial vanishing outside its support: a
/// random polynomial times a bump, optionally plus a second such term.
pub fn piecewise<R: Rng>(rng: &mut R, limits: Limits) -> PiecewisePoly {
    let mut out = PiecewisePoly::zero();
    let count = rng.gen_range(1..=2);
    for _ in 0..count {
        let a = small_point(rng);
        let len = frac(rng.gen_range(1i64..=4), 2);
        let b = &a + &len;
        let g = bump(&a, &b, false).expect("positive length");
        let p = poly(rng, 1, Limits { max_degree: limits.max_degree.min(2), max_terms: 2 });
        out = out.add(&g.mul_poly(&p));
    }
    out
}

pub fn tensor_density<R: Rng>(rng: &mut R, axes: usize, limits: Limits) -> TensorDensity {
    let mut out = TensorDensity::zero(axes);
    let count = rng.gen_range(1..=2);
    for _ in 0..count {
        let factors = (0..axes).map(|_| piecewise(rng, limits)).collect();
        out = out.add(&TensorDensity::product(nonzero_rational(rng), factors));
    }
    out
}

/// `Σ τ_L (y*)^L` with `|L| ≤ max_l`.
pub fn density<R: Rng>(rng: &mut R, space: Space, max_l: u32, limits: Limits) -> Density {
    let ls = MultiIndex::all_up_to(space.k, max_l);
    let mut out = Density::zero(space);
    let count = rng.gen_range(1..=2);
    for _ in 0..count {
        let l = ls.choose(rng).expect("nonempty").clone();
        let tau = tensor_density(rng, space.n, limits);
        out = out.add(&Density::term(space, tau, l).expect("shapes match")).expect("same space");
    }
    out
}

/// A random dual form of the given degree (`n + k − degree` star indices).
pub fn dual_form<R: Rng>(rng: &mut R, space: Space, degree: usize, max_l: u32, limits: Limits) -> DualForm {
    let nv = space.nvars();
    let mut out = DualForm::zero(space, degree);
    if degree > nv {
        return out;
    }
    let basis = OrderedTuple::all(nv, nv - degree);
    let count = rng.gen_range(1..=basis.len().min(2));
    for _ in 0..count {
        let t = basis.choose(rng).expect("nonempty").clone();
        let eta = density(rng, space, max_l, limits);
        out = out.add(&DualForm::term(eta, t).expect("tuple fits")).expect("same degree");
    }
    out
}

/// A random morphism `source → target`.
pub fn morphism<R: Rng>(rng: &mut R, source: Space, target: Space, limits: Limits) -> Morphism {
    let xs = (0..target.n).map(|_| formal_function(rng, source, limits)).collect();
    let ys = (0..target.k)
        .map(|_| {
            if source.k == 0 {
                FormalFunction::zero(source)
            } else {
                nilpotent_function(rng, source, limits)
            }
        })
        .collect();
    Morphism::new(source, target, xs, ys).expect("generated data is local")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_under_seed() {
        let s = Space::new(2, 1, 3);
        let a = form(&mut rng(9), s, 1, Limits::default());
        let b = form(&mut rng(9), s, 1, Limits::default());
        assert_eq!(a, b);
    }

    #[test]
    fn piecewise_is_continuous_and_compact() {
        let mut r = rng(3);
        for _ in 0..20 {
            let f = piecewise(&mut r, Limits::default());
            let bps = f.breakpoints();
            for (i, b) in bps.iter().enumerate() {
                let left = if i == 0 { int(0) } else { f.pieces()[i - 1].eval(std::slice::from_ref(b)) };
                let right = if i == bps.len() - 1 { int(0) } else { f.pieces()[i].eval(std::slice::from_ref(b)) };
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn morphisms_are_local() {
        let mut r = rng(5);
        let m = morphism(&mut r, Space::new(1, 2, 3), Space::new(2, 2, 3), Limits::default());
        for f in m.y_pullbacks() {
            assert!(f.reduction().is_zero());
        }
    }
}
