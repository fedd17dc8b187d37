mod common;

use common::*;
use poisson_koszul::arith::linalg::{self, SparseVec};
use poisson_koszul::arith::{
    bounded_ideal_membership, monomials_of_weight, MembershipBound, Poly, Rational, WeightSystem,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn xyz() -> Vec<String> {
    names(&["x", "y", "z"])
}

fn polys(seed: u64, k: usize) -> Vec<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| random_poly(&mut rng, 3, 3, 4)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let v = polys(seed, 3);
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert!((a - a).is_zero());
        prop_assert_eq!(&(a + b) - b, a.clone());
    }

    #[test]
    fn division_identity(seed in any::<u64>()) {
        let v = polys(seed, 2);
        let (a, d) = (&v[0], &v[1]);
        prop_assume!(!d.is_zero());
        let (q, r) = a.div_rem(d).unwrap();
        prop_assert_eq!(&(&q * d) + &r, a.clone());
        // no term of r is divisible by the leading monomial of d
        let (lm, _) = d.leading_term().unwrap();
        for (m, _) in r.terms() {
            prop_assert!(m.div(lm).is_none());
        }
        prop_assert_eq!((a * d).exact_divide(d).unwrap(), a.clone());
    }

    #[test]
    fn derivative_is_a_derivation(seed in any::<u64>(), i in 0usize..3) {
        let v = polys(seed, 2);
        let (f, g) = (&v[0], &v[1]);
        let lhs = (f * g).partial_derivative(i).unwrap();
        let rhs = &(&f.partial_derivative(i).unwrap() * g) + &(f * &g.partial_derivative(i).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = random_poly(&mut rng, 3, 4, 5);
        let den = rng.gen_range(1i64..6);
        p = p.scale(&(q(1) / q(den)));
        let s = p.to_string_with(&xyz());
        prop_assert_eq!(Poly::parse(&s, &xyz()).unwrap(), p);
    }

    #[test]
    fn weights_add_under_products(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = WeightSystem::new(vec![3, 3, 2]).unwrap();
        let hom = |rng: &mut ChaCha8Rng, wt: u64| {
            let mut p = Poly::zero(3);
            for m in monomials_of_weight(&w, wt) {
                p.add_term(m, q(rng.gen_range(-2i64..=2)));
            }
            p
        };
        let f = hom(&mut rng, 6);
        let g = hom(&mut rng, 4);
        prop_assume!(!f.is_zero() && !g.is_zero());
        prop_assert_eq!((&f * &g).weight_of(&w).unwrap(), 10);
    }

    #[test]
    fn solver_recovers_consistent_systems(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cols: Vec<SparseVec> = Vec::new();
        for _ in 0..5 {
            let mut c = SparseVec::new();
            for i in 0..6 {
                if rng.gen_bool(0.5) {
                    c.add_entry(i, q(rng.gen_range(-3i64..=3)));
                }
            }
            cols.push(c);
        }
        let x0: Vec<Rational> = (0..5).map(|_| q(rng.gen_range(-3i64..=3))).collect();
        let mut b = SparseVec::new();
        for (c, x) in cols.iter().zip(&x0) {
            b.axpy(x, c);
        }
        let x = linalg::solve(&cols, &b).expect("consistent");
        let mut back = SparseVec::new();
        for (c, xi) in cols.iter().zip(&x) {
            back.axpy(xi, c);
        }
        prop_assert_eq!(back, b);
        prop_assert!(linalg::rank(cols.iter()) <= 5);
    }

    #[test]
    fn ideal_membership_finds_cofactors(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = vec![
            Poly::parse("x^2 + y^2 + z^2", &xyz()).unwrap(),
            Poly::parse("x*y - z", &xyz()).unwrap(),
        ];
        let a = random_poly(&mut rng, 3, 2, 3);
        let b = random_poly(&mut rng, 3, 2, 3);
        let f = &(&a * &gens[0]) + &(&b * &gens[1]);
        let cof = bounded_ideal_membership(&f, &gens, MembershipBound::Degree(2)).unwrap();
        let back = &(&cof[0] * &gens[0]) + &(&cof[1] * &gens[1]);
        prop_assert_eq!(back, f);
    }
}

#[test]
fn rationals_are_normalized() {
    let p = Poly::parse("6/4*x + 2/4", &xyz()).unwrap();
    assert_eq!(p.to_string_with(&xyz()), "3/2*x + 1/2");
    for (_, c) in p.terms() {
        assert!(c.denom() > &0.into());
    }
    assert!(Poly::parse("x - x", &xyz()).unwrap().is_zero());
}

#[test]
fn non_member_is_reported() {
    let gens = vec![Poly::parse("x^2", &xyz()).unwrap()];
    let f = Poly::parse("x", &xyz()).unwrap();
    assert!(bounded_ideal_membership(&f, &gens, MembershipBound::Degree(3)).is_err());
}
