#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use poisson_koszul::arith::{monomials_up_to_degree, Monomial, Poly, Rational, WeightSystem};
use poisson_koszul::dgalgebra::{koszul_resolution, DgaElement, ExteriorMonomial, KoszulData};
use poisson_koszul::multivec::{Multivector, SymbolSpace};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn algebra(vars: &[&str], eqs: &[&str], weights: Option<Vec<u64>>) -> Arc<KoszulData> {
    let v = names(vars);
    let e = eqs.iter().map(|s| Poly::parse(s, &v).unwrap()).collect();
    let w = weights.map(|w| WeightSystem::new(w).unwrap());
    Arc::new(koszul_resolution(e, v, w).unwrap())
}

pub fn a1() -> Arc<KoszulData> {
    algebra(&["x", "y", "z"], &["x^2 + y^2 + z^2"], Some(vec![1, 1, 1]))
}

/// Small algebras with 0, 1 and 2 odd generators.
pub fn test_algebras() -> Vec<Arc<KoszulData>> {
    vec![
        algebra(&["x", "y"], &[], None),
        algebra(&["x", "y", "z"], &[], None),
        algebra(&["x", "y", "z"], &["x^2 + y^2 + z^2"], None),
        algebra(&["x", "y"], &["x*y"], None),
        algebra(&["x", "y"], &["x", "y^2"], None),
        algebra(&["x", "y", "z"], &["x*z", "y^2 - z"], None),
    ]
}

pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, max_terms: usize) -> Poly {
    let monos = monomials_up_to_degree(n, max_deg);
    let k = rng.gen_range(1..=max_terms);
    let mut p = Poly::zero(n);
    for _ in 0..k {
        let m = monos.choose(rng).unwrap().clone();
        let c = rng.gen_range(-3i64..=3);
        p.add_term(m, q(c));
    }
    p
}

/// Random element of exterior degree `d` (may be zero).
pub fn random_homogeneous(rng: &mut ChaCha8Rng, a: &KoszulData, d: usize, max_deg: u32) -> DgaElement {
    let (n, m) = (a.nvars(), a.nodd());
    let masks: Vec<u64> = (0u64..(1 << m)).filter(|x| x.count_ones() as usize == d).collect();
    let mut out = a.zero();
    if masks.is_empty() {
        return out;
    }
    for _ in 0..rng.gen_range(1..=2) {
        let mask = *masks.choose(rng).unwrap();
        let p = random_poly(rng, n, max_deg, 3);
        out.add_poly_term(ExteriorMonomial(mask), p);
    }
    out
}

pub fn random_element(rng: &mut ChaCha8Rng, a: &KoszulData, max_deg: u32) -> DgaElement {
    let d = rng.gen_range(0..=a.nodd());
    random_homogeneous(rng, a, d, max_deg)
}

/// Random multivector of the given order and internal degree, coefficient
/// degree at most `max_deg`.
pub fn random_multivector(
    rng: &mut ChaCha8Rng,
    a: &Arc<KoszulData>,
    order: usize,
    degree: i64,
    max_deg: u32,
) -> Multivector {
    let sp = SymbolSpace::of(a).unwrap();
    let mut entries = Vec::new();
    for t in sp.canonical_tuples(order) {
        if !rng.gen_bool(0.5) {
            continue;
        }
        let d = t.iter().map(|&g| sp.parity(g) as i64).sum::<i64>() + order as i64 - degree;
        if d < 0 || d > a.nodd() as i64 {
            continue;
        }
        let v = random_homogeneous(rng, a, d as usize, max_deg);
        entries.push((t, v));
    }
    Multivector::from_values(a.clone(), order, degree, entries).unwrap()
}

/// Random order in 1..=3 and a degree with room for nonzero values.
pub fn random_shape(rng: &mut ChaCha8Rng, a: &KoszulData) -> (usize, i64) {
    let s = rng.gen_range(1..=3usize);
    let m = a.nodd() as i64;
    let k = rng.gen_range((s as i64 - m)..=(s as i64 + m.min(1)));
    (s, k)
}

pub fn monomial(exps: &[u32]) -> Monomial {
    Monomial::new(exps.to_vec())
}

/// `{f, g} = Σ_{i,j} π(x_i, x_j) ∂_i f ∂_j g`, from the value table alone.
pub fn table_bracket(pi: &Multivector, f: &Poly, g: &Poly) -> Poly {
    let a = pi.algebra();
    let n = a.nvars();
    let mut out = Poly::zero(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let v = pi.value(&[i, j]).unwrap().even_part();
            if v.is_zero() {
                continue;
            }
            let fi = f.partial_derivative(i).unwrap();
            let gj = g.partial_derivative(j).unwrap();
            out += &(&v * &(&fi * &gj));
        }
    }
    out
}

/// Jacobiator of the table bracket on three polynomials.
pub fn table_jacobiator(pi: &Multivector, f: &Poly, g: &Poly, h: &Poly) -> Poly {
    let b = |u: &Poly, v: &Poly| table_bracket(pi, u, v);
    &(&b(&b(f, g), h) + &b(&b(g, h), f)) + &b(&b(h, f), g)
}
