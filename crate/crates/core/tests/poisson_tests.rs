mod common;

use common::*;
use poisson_koszul::arith::Poly;
use poisson_koszul::multivec::{index_tuples, sort_sign};
use poisson_koszul::poisson::*;
use poisson_koszul::schouten::is_homotopy_poisson;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sphere4() -> std::sync::Arc<poisson_koszul::dgalgebra::KoszulData> {
    algebra(&["x1", "x2", "x3", "x4"], &["x1^2 + x2^2 + x3^2 + x4^2"], Some(vec![1, 1, 1, 1]))
}

/// `p_{ijk} = ε_{ijkl} · g · φ_l`.
fn dual_tensor(g: &Poly, phi: &[Poly]) -> PTensor {
    let mut p = PTensor::new(3, 4);
    for t in index_tuples(4, 3) {
        let l = (0..4).find(|l| !t.contains(l)).unwrap();
        let mut idx = t.clone();
        idx.push(l);
        let (_, s) = sort_sign(&idx).unwrap();
        let v = g * &phi[l];
        if !v.is_zero() {
            p.add(&t, if s < 0 { -&v } else { v }).unwrap();
        }
    }
    p
}

fn linear_form(rng: &mut ChaCha8Rng) -> Poly {
    let mut f = Poly::zero(4);
    for i in 0..4 {
        f.add_term(monomial(&[(i == 0) as u32, (i == 1) as u32, (i == 2) as u32, (i == 3) as u32]), q(rng.gen_range(-2i64..=2)));
    }
    f
}

#[test]
fn decomposition_re_substitutes_exactly() {
    let a = sphere4();
    let h = &a.equations()[0];
    let grad = h.gradient();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut nontrivial = 0;
    for _ in 0..8 {
        let phi: Vec<Poly> = (0..4).map(|_| linear_form(&mut rng)).collect();
        let p = dual_tensor(h, &phi);
        let qt = solve_q(&p, a.equations(), a.weights(), 6).unwrap();
        if !qt.is_zero() {
            nontrivial += 1;
        }
        for t in index_tuples(4, 3) {
            let d = jacobi_defect(&p, a.equations(), [t[0], t[1], t[2]]).unwrap();
            let mut rhs = Poly::zero(4);
            for l in 0..4 {
                let mut idx = t.clone();
                idx.push(l);
                rhs += &(&qt.get(&idx) * &grad[l]);
            }
            assert_eq!(d, h * &rhs, "{t:?}");
        }
    }
    assert!(nontrivial > 0);
}

#[test]
fn undivided_tensor_is_obstructed() {
    let a = sphere4();
    let v = a.vars().to_vec();
    let phi: Vec<Poly> = ["0", "x1", "0", "x3"].iter().map(|s| Poly::parse(s, &v).unwrap()).collect();
    let p = dual_tensor(&Poly::one(4), &phi);
    let err = solve_q(&p, a.equations(), a.weights(), 6).unwrap_err();
    assert!(matches!(err, PoissonError::Obstructed(Obstruction::NotDivisible { .. })));
    assert!(err.is_obstruction());
    let err = build_reduced_structure(&p, a.clone(), 4, 6).unwrap_err();
    assert!(err.is_obstruction());
}

#[test]
fn lift_with_nonzero_third_component() {
    let a = sphere4();
    let v = a.vars().to_vec();
    let phi: Vec<Poly> = ["0", "x1", "0", "x3"].iter().map(|s| Poly::parse(s, &v).unwrap()).collect();
    let p = dual_tensor(&a.equations()[0], &phi);
    let pi = build_reduced_structure(&p, a.clone(), 4, 6).unwrap();
    assert!(!pi.component(3).is_zero());
    assert!(pi.component(4).is_zero());
    assert!(is_homotopy_poisson(&pi, 4).holds());
}

#[test]
fn degree_bounded_search_without_weights() {
    let a = algebra(&["x", "y", "z"], &["x^2 + y^2 + z^2"], None);
    let p = PTensor::levi_civita(3, Poly::one(3));
    let qt = solve_q(&p, a.equations(), None, 3).unwrap();
    assert!(qt.is_zero());
    let pi = build_reduced_structure(&p, a, 4, 3).unwrap();
    assert!(pi.component(3).is_zero());
}

#[test]
fn jacobian_bracket_of_two_equations() {
    // {f, g} = det(df, dg, dh1, dh2) is Poisson
    let a = algebra(&["x1", "x2", "x3", "x4"], &["x1^2 + x2^2", "x3^2 + x4^2"], Some(vec![1, 1, 1, 1]));
    let p = PTensor::levi_civita(4, Poly::one(4));
    for t in index_tuples(4, 3) {
        assert!(jacobi_defect(&p, a.equations(), [t[0], t[1], t[2]]).unwrap().is_zero());
    }
    let pi = build_reduced_structure(&p, a, 3, 4).unwrap();
    assert!(is_homotopy_poisson(&pi, 3).holds());
}

#[test]
fn lift_pi2_rejects_wrong_arity() {
    let a = sphere4();
    let p = PTensor::new(2, 4);
    assert!(matches!(lift_pi2(&p, a).unwrap_err(), PoissonError::ArityMismatch { expected: 3, found: 2 }));
}

#[test]
fn bracket_weight_shift_of_klein_surfaces() {
    let a1 = a1();
    let p = PTensor::levi_civita(3, Poly::one(3));
    assert_eq!(bracket_weight_shift(&p, a1.equations(), a1.weights().unwrap()), Some(-1));
    let a2 = algebra(&["x", "y", "z"], &["x^2 + y^2 + z^3"], Some(vec![3, 3, 2]));
    assert_eq!(bracket_weight_shift(&p, a2.equations(), a2.weights().unwrap()), Some(-2));
}

#[test]
fn table_bracket_agrees_with_tensor_expansion() {
    let a = sphere4();
    let h = &a.equations()[0];
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let phi: Vec<Poly> = (0..4).map(|_| linear_form(&mut rng)).collect();
        let p = dual_tensor(h, &phi);
        let table = BracketTable::new(&p, a.equations()).unwrap();
        let f = random_poly(&mut rng, 4, 3, 3);
        let g = random_poly(&mut rng, 4, 3, 3);
        assert_eq!(table.bracket(&f, &g), bracket_from_p(&p, a.equations(), &f, &g).unwrap());
        assert_eq!(table.bracket(&f, &g), -&table.bracket(&g, &f));
    }
}
