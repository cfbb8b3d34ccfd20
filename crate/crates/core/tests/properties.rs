use proptest::prelude::*;

use formacalc::algebra::rational::{self, sign_pow};
use formacalc::algebra::Rational;
use formacalc::cli::{self, value::Value, Config, Session};
use formacalc::derham::Form;
use formacalc::formal::{FormalFunction, Space};
use formacalc::gen::{self, Limits};
use formacalc::homotopy::{identity_residual, omega_contraction, strongness_residual, Cochain};

const LIMITS: Limits = Limits { max_degree: 3, max_terms: 4 };

fn space() -> impl Strategy<Value = Space> {
    (0usize..=2, 0usize..=2, 1u32..=3).prop_map(|(n, k, o)| Space::new(n, k, o))
}

fn functions(s: Space, seed: u64, count: usize) -> Vec<FormalFunction> {
    let mut rng = gen::rng(seed);
    (0..count).map(|_| gen::formal_function(&mut rng, s, LIMITS)).collect()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn functions_form_a_commutative_ring(s in space(), seed: u64) {
        let v = functions(s, seed, 3);
        let (f, g, h) = (&v[0], &v[1], &v[2]);
        prop_assert!(f.mul(g).unwrap().mul(h).unwrap().agrees(&f.mul(&g.mul(h).unwrap()).unwrap()));
        prop_assert!(f.mul(g).unwrap().agrees(&g.mul(f).unwrap()));
        let lhs = f.mul(&g.add(h).unwrap()).unwrap();
        let rhs = f.mul(g).unwrap().add(&f.mul(h).unwrap()).unwrap();
        prop_assert!(lhs.agrees(&rhs));
        prop_assert_eq!(f.mul(&FormalFunction::one(s)).unwrap(), f.clone());
        prop_assert!(f.sub(f).unwrap().is_zero());
    }

    #[test]
    fn truncated_product_is_the_truncated_full_product(s in space(), seed: u64) {
        let v = functions(s, seed, 2);
        let full = v[0].poly() * v[1].poly();
        prop_assert_eq!(v[0].mul(&v[1]).unwrap(), FormalFunction::new(s, full).unwrap());
    }

    #[test]
    fn coboundary_squares_to_zero(s in space(), seed: u64, r in 0usize..=4) {
        prop_assume!(r <= s.nvars());
        let w = gen::form(&mut gen::rng(seed), s, r, LIMITS);
        if let Ok(dw) = w.d() {
            if let Ok(ddw) = dw.d() {
                prop_assert!(ddw.is_zero(), "d(d({})) = {}", w, ddw);
            }
        }
    }

    #[test]
    fn leibniz_and_graded_commutativity(seed: u64, p in 0usize..=3, q in 0usize..=3) {
        let s = Space::new(1, 2, 3);
        prop_assume!(p + q <= s.nvars());
        let mut rng = gen::rng(seed);
        let a = gen::form(&mut rng, s, p, LIMITS);
        let b = gen::form(&mut rng, s, q, LIMITS);
        let ab = a.wedge(&b).unwrap();
        prop_assert_eq!(&ab, &b.wedge(&a).unwrap().scale(&sign_pow(p * q)));
        let lhs = ab.d().unwrap();
        let rhs = a.d().unwrap().wedge(&b).unwrap().add(&a.wedge(&b.d().unwrap()).unwrap().scale(&sign_pow(p))).unwrap();
        prop_assert!(lhs.agrees(&rhs), "a = {}, b = {}", a, b);
    }

    #[test]
    fn pullback_is_a_unital_homomorphism_commuting_with_d(seed: u64) {
        let (src, dst) = (Space::new(1, 1, 3), Space::new(2, 1, 3));
        let mut rng = gen::rng(seed);
        let phi = gen::morphism(&mut rng, src, dst, Limits { max_degree: 2, max_terms: 3 });
        let f = gen::formal_function(&mut rng, dst, LIMITS);
        let g = gen::formal_function(&mut rng, dst, LIMITS);
        let pf = phi.pullback(&f).unwrap();
        let pg = phi.pullback(&g).unwrap();
        prop_assert!(phi.pullback(&f.mul(&g).unwrap()).unwrap().agrees(&pf.mul(&pg).unwrap()));
        prop_assert!(phi.pullback(&FormalFunction::one(dst)).unwrap().agrees(&FormalFunction::one(src)));
        let w = gen::form(&mut rng, dst, 1, LIMITS);
        let lhs = w.d().unwrap().pullback(&phi).unwrap();
        let rhs = w.pullback(&phi).unwrap().d().unwrap();
        prop_assert!(lhs.agrees(&rhs));
    }

    #[test]
    fn pullback_is_contravariant(seed: u64) {
        let (a, b, c) = (Space::new(1, 1, 3), Space::new(1, 1, 3), Space::new(2, 0, 3));
        let mut rng = gen::rng(seed);
        let small = Limits { max_degree: 2, max_terms: 3 };
        let phi = gen::morphism(&mut rng, a, b, small);
        let psi = gen::morphism(&mut rng, b, c, small);
        let g = gen::formal_function(&mut rng, c, LIMITS);
        let composed = psi.compose(&phi).unwrap();
        let lhs = composed.pullback(&g).unwrap();
        let rhs = phi.pullback(&psi.pullback(&g).unwrap()).unwrap();
        prop_assert!(lhs.agrees(&rhs));
    }

    #[test]
    fn omega_homotopy_is_a_strong_contraction(s in space(), seed: u64, r in 0usize..=3) {
        prop_assume!(r <= s.nvars());
        let w: Form = gen::form(&mut gen::rng(seed), s, r, LIMITS);
        let c = omega_contraction(s);
        let res = identity_residual(&*c, &w).unwrap();
        prop_assert!(res.vanishes(), "identity residual {} for {}", res, w);
        if s.k == 0 || s.order >= 2 {
            let res = strongness_residual(&*c, &w).unwrap();
            prop_assert!(res.vanishes(), "strongness residual {} for {}", res, w);
        }
    }

    #[test]
    fn rationals_round_trip_through_text(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = Rational::new(p.into(), q.into());
        prop_assert_eq!(rational::parse(&rational::to_canonical(&x)), Some(x));
    }

    #[test]
    fn printed_functions_parse_back(s in space(), seed: u64) {
        let f = &functions(s, seed, 1)[0];
        let mut session = Session::new(Config::default());
        let decl = cli::parse(&format!("space ({},{},{})", s.n, s.k, s.order)).unwrap();
        session.execute(&decl.stmts[0]);
        let e = cli::parse_expr(&f.to_string()).unwrap();
        let back = match session.eval(&e, Some(s)).unwrap() {
            Value::Function(g) => g,
            Value::Scalar(c) => FormalFunction::constant(s, c),
            other => panic!("unexpected {}", other.sort()),
        };
        prop_assert_eq!(back.poly(), f.poly());
        let printed = cli::print_expr(&e);
        prop_assert_eq!(cli::print_expr(&cli::parse_expr(&printed).unwrap()), printed);
    }
}
