//! Schouten bracket of multivectors, the differential induced by the Koszul
//! differential, and Maurer-Cartan residuals.
//!
//! Conventions, with `P` of internal degree `a` and `Q` of degree `b`:
//!
//! * `[P, Q] = P∘Q - (-1)^{(a+1)(b+1)} Q∘P`, of order `s + t - 1` and
//!   degree `a + b - 1`;
//! * `[P, Q] = -(-1)^{(a+1)(b+1)} [Q, P]`;
//! * `[P, [Q, R]] = [[P, Q], R] + (-1)^{(a+1)(b+1)} [Q, [P, R]]`;
//! * `δP = [Q_δ, P]` with `Q_δ = Σ_j h_j ξ_{e_j}`, so that
//!   `δ[P, Q] = [δP, Q] + (-1)^{a+1} [P, δQ]`.
//!
//! On degree-0 arguments the order-3 Maurer-Cartan component reads
//! `(δπ_3 + ½[π_2, π_2])(x_i, x_j, x_k) = (δπ_3)(x_i, x_j, x_k) + Jac(x_i, x_j, x_k)`
//! where `Jac(f, g, h) = {{f, g}, h} + {{g, h}, f} + {{h, f}, g}` and
//! `{f, g} = π_2(f, g)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::Rational;
use crate::dgalgebra::{DgaElement, KoszulData};
use crate::multivec::{Multivector, MultivecError, SymbolSpace, SymbolVar};

/// Sign relating the order-3 residual on degree-0 arguments to the
/// Jacobiator: `½[π_2, π_2](x, y, z) = JACOBIATOR_SIGN · Jac(x, y, z)`.
pub const JACOBIATOR_SIGN: i32 = 1;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SchoutenError {
    #[error("component of order {key} stored under a different order ({order})")]
    OrderMismatch { key: usize, order: usize },
    #[error("component of order {order} must have internal degree 2, found {degree}")]
    DegreeNotTwo { order: usize, degree: i64 },
    #[error("homotopy Poisson components start at order 2, found {0}")]
    OrderTooSmall(usize),
    #[error(transparent)]
    Multivec(#[from] MultivecError),
}

fn parity_sign(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `(-1)^{(a+1)(b+1)}` for internal degrees `a`, `b`: `[P, Q] + ε [Q, P] = 0`.
pub fn antisymmetry_sign(p: &Multivector, q: &Multivector) -> i32 {
    parity_sign((p.degree() + 1) * (q.degree() + 1))
}

/// The sign `σ` in `[P, Q] = P∘Q + σ Q∘P`.
pub fn bracket_sign(p: &Multivector, q: &Multivector) -> i32 {
    -antisymmetry_sign(p, q)
}

fn check_same(p: &Multivector, q: &Multivector) -> Result<SymbolSpace, MultivecError> {
    if !p.same_algebra(q) {
        return Err(MultivecError::MixedAlgebras);
    }
    Ok(p.symbols())
}

/// `P∘Q`: insertion of `Q` into the last slot of `P`, summed over shuffles.
pub fn circ(p: &Multivector, q: &Multivector) -> Result<Multivector, MultivecError> {
    let sp = check_same(p, q)?;
    Ok(Multivector::from_symbol_unchecked(
        p.algebra().clone(),
        p.order() + q.order() - 1,
        p.degree() + q.degree() - 1,
        sp.circ(p.symbol(), q.symbol()),
    ))
}

pub fn bracket(p: &Multivector, q: &Multivector) -> Result<Multivector, MultivecError> {
    let sp = check_same(p, q)?;
    Ok(Multivector::from_symbol_unchecked(
        p.algebra().clone(),
        p.order() + q.order() - 1,
        p.degree() + q.degree() - 1,
        sp.bracket(p.symbol(), q.symbol()),
    ))
}

/// Symbol of the Koszul differential, `Σ_j h_j ξ_{e_j}`.
pub fn differential_symbol(alg: &KoszulData) -> Result<DgaElement, MultivecError> {
    let sp = SymbolSpace::of(alg)?;
    let mut out = sp.zero();
    for (j, h) in alg.equations().iter().enumerate() {
        let hj = sp.embed(&alg.embed(h));
        out += &(&hj * &sp.variable(SymbolVar::Even(alg.nvars() + j)));
    }
    Ok(out)
}

/// `δP`: on generators, `(δP)(u..) = δ(P(u..)) - Σ ± P(.., δu_i, ..)`.
pub fn mv_differential(p: &Multivector) -> Multivector {
    let sp = p.symbols();
    let qd = differential_symbol(p.algebra()).expect("algebra already validated");
    Multivector::from_symbol_unchecked(
        p.algebra().clone(),
        p.order(),
        p.degree() + 1,
        sp.bracket(&qd, p.symbol()),
    )
}

/// Components `π_s`, `s ≥ 2`, each of internal degree 2.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyPoisson {
    algebra: Arc<KoszulData>,
    components: BTreeMap<usize, Multivector>,
}

impl HomotopyPoisson {
    pub fn new(algebra: Arc<KoszulData>) -> Self {
        HomotopyPoisson {
            algebra,
            components: BTreeMap::new(),
        }
    }

    pub fn from_components(
        algebra: Arc<KoszulData>,
        components: impl IntoIterator<Item = Multivector>,
    ) -> Result<Self, SchoutenError> {
        let mut out = Self::new(algebra);
        for c in components {
            out.insert(c)?;
        }
        Ok(out)
    }

    /// Adds or replaces the component of the multivector's order.
    pub fn insert(&mut self, pi: Multivector) -> Result<(), SchoutenError> {
        if pi.order() < 2 {
            return Err(SchoutenError::OrderTooSmall(pi.order()));
        }
        if pi.degree() != 2 {
            return Err(SchoutenError::DegreeNotTwo {
                order: pi.order(),
                degree: pi.degree(),
            });
        }
        if !pi.same_algebra_as(&self.algebra) {
            return Err(MultivecError::MixedAlgebras.into());
        }
        self.components.insert(pi.order(), pi);
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<KoszulData> {
        &self.algebra
    }

    /// `π_s`, zero when absent.
    pub fn component(&self, s: usize) -> Multivector {
        self.components.get(&s).cloned().unwrap_or_else(|| {
            Multivector::zero(self.algebra.clone(), s, 2).expect("algebra already validated")
        })
    }

    pub fn components(&self) -> impl Iterator<Item = (&usize, &Multivector)> {
        self.components.iter()
    }

    pub fn max_order(&self) -> usize {
        self.components.keys().next_back().copied().unwrap_or(1)
    }
}

impl Multivector {
    pub(crate) fn same_algebra_as(&self, a: &Arc<KoszulData>) -> bool {
        Arc::ptr_eq(self.algebra(), a) || **self.algebra() == **a
    }
}

/// `½ Σ_{p+q=s+1, p,q≥2} [π_p, π_q]`.
pub fn quadratic_term(pi: &HomotopyPoisson, s: usize) -> Multivector {
    let sp = SymbolSpace::of(pi.algebra()).expect("algebra already validated");
    let mut acc = sp.zero();
    for p in 2..s {
        let q = s + 1 - p;
        if q < 2 {
            continue;
        }
        let (a, b) = (pi.component(p), pi.component(q));
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc += &sp.bracket(a.symbol(), b.symbol());
    }
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    Multivector::from_symbol_unchecked(pi.algebra().clone(), s, 3, acc.scale(&half))
}

/// `δπ_s + ½ Σ_{p+q=s+1} [π_p, π_q]`.
pub fn mc_residual(pi: &HomotopyPoisson, s: usize) -> Multivector {
    let d = mv_differential(&pi.component(s));
    let quad = quadratic_term(pi, s);
    Multivector::from_symbol_unchecked(
        pi.algebra().clone(),
        s,
        3,
        d.symbol() + quad.symbol(),
    )
}

/// One nonzero residual value.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualEntry {
    pub order: usize,
    pub tuple: Vec<usize>,
    pub value: DgaElement,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct McReport {
    pub max_order: usize,
    pub entries: Vec<ResidualEntry>,
}

impl McReport {
    pub fn holds(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Evaluates the residuals for `s = 2..=max_order` on all canonical
/// generator tuples.
pub fn is_homotopy_poisson(pi: &HomotopyPoisson, max_order: usize) -> McReport {
    let mut entries = Vec::new();
    for s in 2..=max_order {
        for (tuple, value) in mc_residual(pi, s).values() {
            entries.push(ResidualEntry {
                order: s,
                tuple,
                value,
            });
        }
    }
    McReport { max_order, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Poly, WeightSystem};
    use crate::dgalgebra::koszul_resolution;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn algebra(vars: &[&str], eqs: &[&str]) -> Arc<KoszulData> {
        let v = names(vars);
        let e = eqs.iter().map(|s| Poly::parse(s, &v).unwrap()).collect();
        Arc::new(koszul_resolution(e, v, None).unwrap())
    }

    fn bivector(a: &Arc<KoszulData>, entries: &[(&[usize], &str)]) -> Multivector {
        Multivector::from_values(
            a.clone(),
            2,
            2,
            entries
                .iter()
                .map(|(t, v)| (t.to_vec(), a.parse(v).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn differential_of_odd_value() {
        let a = algebra(&["x", "y"], &["x^2 - y^3"]);
        let p = Multivector::from_values(a.clone(), 2, 1, [(vec![0, 1], a.parse("h1").unwrap())])
            .unwrap();
        let d = mv_differential(&p);
        assert_eq!(d.value(&[0, 1]).unwrap(), a.parse("x^2 - y^3").unwrap());
        assert!(mv_differential(&d).is_zero());
    }

    #[test]
    fn vector_field_commutes_with_itself() {
        let a = algebra(&["x", "y"], &[]);
        let x = Multivector::from_values(
            a.clone(),
            1,
            1,
            [(vec![0], a.parse("y").unwrap()), (vec![1], a.parse("x^2").unwrap())],
        )
        .unwrap();
        assert!(bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn jacobiator_sign() {
        let a = algebra(&["x", "y", "z"], &[]);
        let pi = bivector(&a, &[(&[0, 1], "z"), (&[1, 2], "x*y")]);
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let sq = bracket(&pi, &pi).unwrap().scale(&half);
        let br = |f: &DgaElement, g: &DgaElement| pi.evaluate(&[f.clone(), g.clone()]).unwrap();
        let (x, y, z) = (a.generator(0), a.generator(1), a.generator(2));
        let jac = &(&br(&br(&x, &y), &z) + &br(&br(&y, &z), &x)) + &br(&br(&z, &x), &y);
        assert!(!jac.is_zero());
        let expect = if JACOBIATOR_SIGN < 0 { -&jac } else { jac };
        assert_eq!(sq.value(&[0, 1, 2]).unwrap(), expect);
    }

    #[test]
    fn klein_structure_is_poisson() {
        let v = names(&["x", "y", "z"]);
        let h = Poly::parse("x^2 + y^2 + z^2", &v).unwrap();
        let a = Arc::new(koszul_resolution(vec![h], v, Some(WeightSystem::standard(3))).unwrap());
        let pi2 = bivector(&a, &[(&[0, 1], "2*z"), (&[1, 2], "2*x"), (&[0, 2], "-2*y")]);
        let pi = HomotopyPoisson::from_components(a.clone(), [pi2]).unwrap();
        assert!(is_homotopy_poisson(&pi, 4).holds());
    }
}
