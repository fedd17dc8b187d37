//! Acceptance criteria, one line each. Runs without the libtest harness.
//!
//! Criteria listed in `UNATTAINABLE` are checked as stated and expected to
//! fail; the run fails if any other criterion fails, or if one of those
//! unexpectedly passes.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use poisson_koszul::arith::{monomials_of_degree, Poly, Rational, WeightSystem};
use poisson_koszul::dgalgebra::{DgaElement, KoszulData};
use poisson_koszul::homology::{canonical_homology_dims, milnor_algebra, CanonicalComplex};
use poisson_koszul::multivec::{index_tuples, sort_sign, Multivector};
use poisson_koszul::poisson::{
    build_reduced_structure, jacobi_defect, lift_order, lift_pi2, lift_pi3, solve_q, PTensor,
};
use poisson_koszul::schouten::{
    antisymmetry_sign, bracket, is_homotopy_poisson, mc_residual, mv_differential, HomotopyPoisson,
    McReport, JACOBIATOR_SIGN,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNATTAINABLE: &[&str] = &["5a", "8b"];

struct Outcome {
    id: &'static str,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn check(id: &'static str, name: &'static str, limit: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (mut pass, mut detail) = f();
    let elapsed = start.elapsed();
    if let Some(l) = limit {
        if elapsed > l {
            pass = false;
            detail = format!("{detail}; over the {:.0?} limit", l);
        }
    }
    Outcome { id, name, pass, detail, elapsed }
}

fn signed(m: &Multivector, s: i32) -> Multivector {
    if s < 0 {
        m.scale(&q(-1))
    } else {
        m.clone()
    }
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

// 1

fn koszul_acyclicity() -> (bool, String) {
    let a = a1();
    let mut bad = Vec::new();
    for w in 0..=12u64 {
        if a.homology_rank(1, w).unwrap() != 0 {
            bad.push(format!("H1 at w={w}"));
        }
        // normal forms mod h are the monomials not divisible by x^2
        let count = monomials_of_degree(3, w as u32).iter().filter(|m| m.exponents()[0] < 2).count();
        if a.homology_rank(0, w).unwrap() != count {
            bad.push(format!("H0 at w={w}"));
        }
    }
    (bad.is_empty(), if bad.is_empty() { "k=1 zero, k=0 matches counts, w<=12".into() } else { bad.join(", ") })
}

// 2

fn sign_suite() -> (bool, String) {
    let algs = test_algebras();
    let mut failures = Vec::new();
    let mut nonzero = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = algs[rng.gen_range(0..algs.len())].clone();
        let mut mv = || {
            let (s, k) = random_shape(&mut rng, &a);
            random_multivector(&mut rng, &a, s, k, 2)
        };
        // resample until the pair has a nonzero bracket, within a budget
        let (mut p, mut r) = (mv(), mv());
        let mut pr = bracket(&p, &r).unwrap();
        for _ in 0..20 {
            if !pr.is_zero() {
                break;
            }
            p = mv();
            r = mv();
            pr = bracket(&p, &r).unwrap();
        }
        let t = mv();
        if !pr.is_zero() {
            nonzero += 1;
        }
        let anti = pr.checked_add(&signed(&bracket(&r, &p).unwrap(), antisymmetry_sign(&p, &r))).unwrap();
        if !anti.is_zero() {
            failures.push(format!("antisymmetry seed {seed}"));
        }
        let lhs = bracket(&p, &bracket(&r, &t).unwrap()).unwrap();
        let rhs = bracket(&pr, &t)
            .unwrap()
            .checked_add(&signed(&bracket(&r, &bracket(&p, &t).unwrap()).unwrap(), antisymmetry_sign(&p, &r)))
            .unwrap();
        if lhs.symbol() != rhs.symbol() {
            failures.push(format!("jacobi seed {seed}"));
        }
        let sign = if p.degree().rem_euclid(2) == 1 { 1 } else { -1 };
        let dl = mv_differential(&pr);
        let dr = bracket(&mv_differential(&p), &r)
            .unwrap()
            .checked_add(&signed(&bracket(&p, &mv_differential(&r)).unwrap(), sign))
            .unwrap();
        if dl.symbol() != dr.symbol() {
            failures.push(format!("derivation seed {seed}"));
        }
    }
    let ok = failures.is_empty() && nonzero >= 180;
    (ok, format!("200 triples, {nonzero} nonzero brackets, {} failures {:?}", failures.len(), failures))
}

// 3

fn random_bivector(rng: &mut ChaCha8Rng, a: &Arc<KoszulData>) -> Multivector {
    let n = a.nvars();
    let mut entries = Vec::new();
    for t in index_tuples(n, 2) {
        let v = random_poly(rng, n, 2, 3);
        entries.push((t, a.embed(&v)));
    }
    Multivector::from_values(a.clone(), 2, 2, entries).unwrap()
}

fn mc_components() -> (bool, String) {
    let algs = [
        algebra(&["x", "y", "z"], &["x^2 + y^2 + z^2"], None),
        algebra(&["x", "y", "z"], &["x*y - z^2"], None),
        algebra(&["x", "y", "z"], &["x^3 + y*z"], None),
    ];
    let mut failures = Vec::new();
    let mut nonzero_jac = 0;
    let mut sigma: Option<bool> = None;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let a = algs[seed as usize % algs.len()].clone();
        let n = a.nvars();
        let pi2 = random_bivector(&mut rng, &a);
        let pi3 = random_multivector(&mut rng, &a, 3, 2, 2);
        let pi = HomotopyPoisson::from_components(a.clone(), [pi2.clone(), pi3.clone()]).unwrap();

        // s = 2: the residual is δπ_2; on (x_i, h~) it is ± {x_i, h}
        let r2 = mc_residual(&pi, 2);
        if r2.symbol() != mv_differential(&pi2).symbol() {
            failures.push(format!("s=2 symbol seed {seed}"));
        }
        let h = &a.equations()[0];
        for i in 0..n {
            let v = r2.value(&[i, n]).unwrap().even_part();
            let b = table_bracket(&pi2, &Poly::var(n, i), h);
            let plus = v == b;
            let minus = v == -&b;
            let this = if plus && !minus { Some(true) } else if minus && !plus { Some(false) } else { None };
            match (this, sigma) {
                (None, _) if !(plus && minus) => failures.push(format!("s=2 value seed {seed}")),
                (Some(s), None) => sigma = Some(s),
                (Some(s), Some(t)) if s != t => failures.push(format!("s=2 sign seed {seed}")),
                _ => {}
            }
        }

        // s = 3: the residual is δπ_3 + ½[π_2, π_2]
        let r3 = mc_residual(&pi, 3);
        let expected = mv_differential(&pi3).checked_add(&bracket(&pi2, &pi2).unwrap().scale(&half())).unwrap();
        if r3.symbol() != expected.symbol() {
            failures.push(format!("s=3 symbol seed {seed}"));
        }
        // with π_3 = 0, on polynomial arguments it is the Jacobiator
        let only2 = HomotopyPoisson::from_components(a.clone(), [pi2.clone()]).unwrap();
        let r = mc_residual(&only2, 3);
        let generators: Vec<Poly> = (0..3).map(|i| Poly::var(n, i)).collect();
        let random: Vec<Poly> = (0..3).map(|_| random_poly(&mut rng, n, 2, 3)).collect();
        for (which, args) in [("generators", generators), ("random", random)] {
            let ev = r.evaluate(&args.iter().map(|f| a.embed(f)).collect::<Vec<DgaElement>>()).unwrap();
            let jac = table_jacobiator(&pi2, &args[0], &args[1], &args[2]);
            if which == "generators" && !jac.is_zero() {
                nonzero_jac += 1;
            }
            let jac = if JACOBIATOR_SIGN < 0 { -&jac } else { jac };
            if ev.even_part() != jac || ev.terms().any(|(e, _)| e.degree() > 0) {
                failures.push(format!("jacobiator on {which} seed {seed}"));
            }
        }
    }
    let ok = failures.is_empty() && nonzero_jac >= 40;
    (ok, format!("50 brackets, {nonzero_jac} with nonzero Jacobiator, {} failures {:?}", failures.len(), failures))
}

// 4

fn klein(h: &str, w: Vec<u64>) -> (bool, String) {
    let a = algebra(&["x", "y", "z"], &[h], Some(w));
    let p = PTensor::levi_civita(3, Poly::one(3));
    let defect = jacobi_defect(&p, a.equations(), [0, 1, 2]).unwrap();
    let qt = solve_q(&p, a.equations(), a.weights(), 6).unwrap();
    let pi = match build_reduced_structure(&p, a.clone(), 4, 6) {
        Ok(pi) => pi,
        Err(e) => return (false, format!("build failed: {e}")),
    };
    let zero34 = pi.component(3).is_zero() && pi.component(4).is_zero();
    let mc = is_homotopy_poisson(&pi, 4).holds();
    let ok = defect.is_zero() && qt.is_zero() && zero34 && mc;
    (ok, format!("defect 0: {}, q = 0: {}, π3 = π4 = 0: {zero34}, MC(S=4): {mc}", defect.is_zero(), qt.is_zero()))
}

// 5

fn sphere4() -> Arc<KoszulData> {
    algebra(&["x1", "x2", "x3", "x4"], &["x1^2 + x2^2 + x3^2 + x4^2"], Some(vec![1, 1, 1, 1]))
}

/// `p_{ijk} = ε_{ijkl} φ_l`.
fn dual_tensor(phi: &[Poly]) -> PTensor {
    let mut p = PTensor::new(3, 4);
    for t in index_tuples(4, 3) {
        let l = (0..4).find(|l| !t.contains(l)).unwrap();
        let mut idx = t.clone();
        idx.push(l);
        let (_, s) = sort_sign(&idx).unwrap();
        if !phi[l].is_zero() {
            p.add(&t, if s < 0 { -&phi[l] } else { phi[l].clone() }).unwrap();
        }
    }
    p
}

fn all_defects(p: &PTensor, a: &KoszulData) -> Vec<(Vec<usize>, Poly)> {
    index_tuples(4, 3)
        .into_iter()
        .map(|t| {
            let d = jacobi_defect(p, a.equations(), [t[0], t[1], t[2]]).unwrap();
            (t, d)
        })
        .collect()
}

/// Runs the full pipeline on `p`: nonzero defect, decomposition with the
/// re-substitution identity, and a lift through order 4.
fn nontrivial_lift(a: &Arc<KoszulData>, p: &PTensor) -> (bool, String) {
    let h = &a.equations()[0];
    let grad = h.gradient();
    let defects = all_defects(p, a);
    if defects.iter().all(|(_, d)| d.is_zero()) {
        return (false, "defect vanishes".into());
    }
    let qt = match solve_q(p, a.equations(), a.weights(), 6) {
        Ok(qt) => qt,
        Err(e) => return (false, format!("solve_q: {e}")),
    };
    for (t, d) in &defects {
        let mut rhs = Poly::zero(4);
        for l in 0..4 {
            let mut idx = t.clone();
            idx.push(l);
            rhs += &(&qt.get(&idx) * &grad[l]);
        }
        if *d != h * &rhs {
            return (false, format!("identity fails at {t:?}"));
        }
    }
    let mut pi = HomotopyPoisson::new(a.clone());
    pi.insert(lift_pi2(p, a.clone()).unwrap()).unwrap();
    pi.insert(lift_pi3(&qt, a.clone()).unwrap()).unwrap();
    let pi4 = match lift_order(&pi, 4, 6) {
        Ok(m) => m,
        Err(e) => return (false, format!("lift_order(4): {e}")),
    };
    pi.insert(pi4).unwrap();
    let report = is_homotopy_poisson(&pi, 4);
    let nonzero = defects.iter().filter(|(_, d)| !d.is_zero()).count();
    (
        report.holds(),
        format!("{nonzero} nonzero defects, q has {} entries, residuals through 4: {}", qt.values().len(), report.entries.len()),
    )
}

fn constant_p_lift() -> (bool, String) {
    // every constant antisymmetric 3-tensor on 4 indices is ε·v for some v
    let a = sphere4();
    for v in 0..81u32 {
        let coeffs: Vec<i64> = (0..4).map(|i| (v / 3u32.pow(i) % 3) as i64 - 1).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let phi: Vec<Poly> = coeffs.iter().map(|&c| Poly::from_int(4, c)).collect();
        let p = dual_tensor(&phi);
        if all_defects(&p, &a).iter().any(|(_, d)| !d.is_zero()) {
            return nontrivial_lift(&a, &p);
        }
    }
    (false, "all 80 constant tensors ε·v, v in {-1,0,1}^4, have zero defect".into())
}

fn polynomial_p_lift() -> (bool, String) {
    let a = sphere4();
    let v = a.vars().to_vec();
    let h = a.equations()[0].clone();
    let phi: Vec<Poly> = ["0", "x1", "0", "x3"].iter().map(|s| &h * &Poly::parse(s, &v).unwrap()).collect();
    let (ok, detail) = nontrivial_lift(&a, &dual_tensor(&phi));
    (ok, format!("p = ε·h·(x1 dx2 + x3 dx4): {detail}"))
}

// 6

fn milnor_numbers() -> (bool, String) {
    let v = names(&["x", "y", "z"]);
    let mu = |h: &str, w: Vec<u64>| {
        let hp = Poly::parse(h, &v).unwrap();
        milnor_algebra(&hp, &WeightSystem::new(w).unwrap(), 1000).unwrap().mu()
    };
    let fixed = [
        mu("x^2 + y^2 + z^2", vec![1, 1, 1]),
        mu("x^2 + y^2 + z^3", vec![3, 3, 2]),
        mu("x^3 + y^3 + z^3", vec![1, 1, 1]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut mismatches = Vec::new();
    for _ in 0..10 {
        let exps: Vec<u64> = (0..3).map(|_| rng.gen_range(2..=6u64)).collect();
        let l = exps.iter().fold(1u64, |acc, &e| num_integer::lcm(acc, e));
        let w: Vec<u64> = exps.iter().map(|e| l / e).collect();
        let h = format!("x^{} + y^{} + z^{}", exps[0], exps[1], exps[2]);
        let formula: u64 = w.iter().map(|wi| l / wi - 1).product();
        let got = mu(&h, w) as u64;
        if got != formula {
            mismatches.push(format!("{h}: {got} vs {formula}"));
        }
    }
    let ok = fixed == [1, 2, 8] && mismatches.is_empty();
    (ok, format!("μ = {fixed:?}, 10 Brieskorn checks, mismatches {mismatches:?}"))
}

// 7

fn canonical_homology() -> (bool, String) {
    let a = a1();
    let p = PTensor::levi_civita(3, Poly::one(3));
    let mut cx = CanonicalComplex::new(&a, &p).unwrap();
    let mut blocks = 0;
    for k in 0..=3 {
        for w in 0..=12 {
            if !cx.boundary_squares_to_zero(k, w).unwrap() {
                return (false, format!("∂² ≠ 0 at (k={k}, w={w})"));
            }
            blocks += 1;
        }
    }
    let plane = algebra(&["x", "y"], &[], Some(vec![1, 1]));
    let mut sp = PTensor::new(2, 2);
    sp.add(&[0, 1], Poly::one(2)).unwrap();
    let totals: Vec<usize> = canonical_homology_dims(&plane, &sp, 0..=2, 6)
        .unwrap()
        .totals
        .iter()
        .map(|t| t.1)
        .collect();
    let lo = canonical_homology_dims(&a, &p, 0..=3, 8).unwrap();
    let hi = canonical_homology_dims(&a, &p, 0..=3, 12).unwrap();
    let ok = totals == [0, 0, 1] && lo == hi;
    (ok, format!("∂² = 0 on {blocks} blocks, plane totals {totals:?}, A1 totals {:?} at 8 and 12", lo.totals))
}

// 8

fn mutated(tuple_index: usize) -> (Vec<usize>, McReport) {
    let a = a1();
    let p = PTensor::levi_civita(3, Poly::one(3));
    let pi2 = lift_pi2(&p, a.clone()).unwrap();
    let mut values: Vec<(Vec<usize>, DgaElement)> = pi2.values().into_iter().collect();
    let (t, v) = values[tuple_index].clone();
    values[tuple_index] = (t.clone(), -&v);
    let m = Multivector::from_values(a.clone(), 2, 2, values).unwrap();
    let pi = HomotopyPoisson::from_components(a, [m]).unwrap();
    (t, is_homotopy_poisson(&pi, 4))
}

fn mutation_localized() -> (bool, String) {
    let mut lines = Vec::new();
    let mut ok = true;
    for i in 0..3 {
        let (t, report) = mutated(i);
        let localized = report.entries.iter().all(|e| e.tuple.iter().any(|g| t.contains(g)));
        let orders: std::collections::BTreeSet<usize> = report.entries.iter().map(|e| e.order).collect();
        ok &= !report.holds() && localized;
        lines.push(format!("flip {t:?}: {} entries at orders {orders:?}", report.entries.len()));
    }
    (ok, lines.join("; "))
}

fn mutation_at_order_three() -> (bool, String) {
    let mut lines = Vec::new();
    let mut ok = true;
    for i in 0..3 {
        let (t, report) = mutated(i);
        let at3 = report.entries.iter().filter(|e| e.order == 3).count();
        ok &= at3 > 0;
        lines.push(format!("flip {t:?}: {at3} entries at s=3"));
    }
    (ok, lines.join("; "))
}

fn main() {
    let secs = Duration::from_secs;
    let results = vec![
        check("1", "Koszul acyclicity for x^2+y^2+z^2", Some(secs(10)), koszul_acyclicity),
        check("2", "sign conventions on 200 random triples", None, sign_suite),
        check("3", "Maurer-Cartan components against a Jacobiator oracle", None, mc_components),
        check("4a", "Klein surface A1", Some(secs(5)), || klein("x^2 + y^2 + z^2", vec![1, 1, 1])),
        check("4b", "Klein surface A2", Some(secs(5)), || klein("x^2 + y^2 + z^3", vec![3, 3, 2])),
        check("5a", "nontrivial lift from a constant p on the 4-dim quadric", Some(secs(60)), constant_p_lift),
        check("5b", "nontrivial lift from a polynomial p on the 4-dim quadric", Some(secs(60)), polynomial_p_lift),
        check("6", "Milnor numbers", None, milnor_numbers),
        check("7", "canonical homology sanity", None, canonical_homology),
        check("8a", "mutation gives a localized nonzero residual", None, mutation_localized),
        check("8b", "mutation residual appears at s=3", None, mutation_at_order_three),
    ];
    let mut unexpected = 0;
    for r in &results {
        let expected_fail = UNATTAINABLE.contains(&r.id);
        let status = match (r.pass, expected_fail) {
            (true, false) => "PASS",
            (false, true) => "FAIL (expected, unattainable as stated)",
            (true, true) => {
                unexpected += 1;
                "PASS (unexpected)"
            }
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!(
            "criterion {:<3} {:<58} {status} [{:.2}s] {}",
            r.id,
            r.name,
            r.elapsed.as_secs_f64(),
            r.detail
        );
    }
    let passed = results.iter().filter(|r| r.pass).count();
    println!("{passed}/{} criteria pass; {unexpected} unexpected", results.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
