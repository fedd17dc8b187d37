//! Exact multivariate polynomial arithmetic over the rationals.

pub mod linalg;
mod parse;
mod poly;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

pub use parse::{parse_expr, Expr, ParseTarget};
pub use poly::{
    monomials_of_degree, monomials_of_weight, monomials_up_to_degree, Monomial, Poly, PolyDisplay,
};

use linalg::SparseVec;

/// Exact rational numbers, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub(crate) use poly::fmt_signed_term;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ArithError {
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
    #[error("not divisible; remainder {remainder:?}")]
    NotDivisible { remainder: Poly },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not weighted-homogeneous")]
    NonHomogeneous,
    #[error("the zero polynomial has no weight")]
    ZeroPolynomial,
    #[error("expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("invalid weight system: {0}")]
    InvalidWeights(String),
    #[error("no ideal membership certificate within the search bound")]
    NotFoundWithinBound,
    #[error("parse error: {message}")]
    Parse { message: String },
}

/// Positive integer weights on the variables, with an optional target total
/// weight for quasi-homogeneous data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    weights: Vec<u64>,
    total: Option<u64>,
}

impl WeightSystem {
    pub fn new(weights: Vec<u64>) -> Result<Self, ArithError> {
        if weights.iter().any(|&w| w == 0) {
            return Err(ArithError::InvalidWeights("weights must be positive".into()));
        }
        Ok(WeightSystem {
            weights,
            total: None,
        })
    }

    pub fn with_total(mut self, d: u64) -> Self {
        self.total = Some(d);
        self
    }

    /// Uniform weight 1 on `n` variables.
    pub fn standard(n: usize) -> Self {
        WeightSystem {
            weights: vec![1; n],
            total: None,
        }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn total(&self) -> Option<u64> {
        self.total
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(1)
    }
}

/// How far [`bounded_ideal_membership`] searches for cofactors.
#[derive(Clone, Copy, Debug)]
pub enum MembershipBound<'a> {
    /// Cofactors of total degree at most the given value.
    Degree(u32),
    /// Cofactors of exactly the weight forced by homogeneity; complete for
    /// quasi-homogeneous input.
    Weighted(&'a WeightSystem),
}

/// Searches for `a` with `f = Σ a_i gens_i` by solving the linear system on
/// the unknown cofactor coefficients.
pub fn bounded_ideal_membership(
    f: &Poly,
    gens: &[Poly],
    bound: MembershipBound<'_>,
) -> Result<Vec<Poly>, ArithError> {
    let n = f.nvars();
    for g in gens {
        f.check_arity(g)?;
    }
    if f.is_zero() {
        return Ok(vec![Poly::zero(n); gens.len()]);
    }
    let candidates: Vec<Vec<Monomial>> = match bound {
        MembershipBound::Degree(d) => gens.iter().map(|_| monomials_up_to_degree(n, d)).collect(),
        MembershipBound::Weighted(w) => {
            let wf = f.weight_of(w)?;
            gens.iter()
                .map(|g| {
                    if g.is_zero() {
                        return Ok(Vec::new());
                    }
                    let wg = g.weight_of(w)?;
                    Ok(if wg <= wf {
                        monomials_of_weight(w, wf - wg)
                    } else {
                        Vec::new()
                    })
                })
                .collect::<Result<_, ArithError>>()?
        }
    };

    let mut index = MonomialIndex::default();
    let mut columns = Vec::new();
    let mut owners = Vec::new();
    for (gi, (g, monos)) in gens.iter().zip(&candidates).enumerate() {
        for m in monos {
            let prod = g.mul_monomial(m, &Rational::from_integer(1.into()));
            columns.push(index.vectorize(&prod));
            owners.push((gi, m.clone()));
        }
    }
    let rhs = index.vectorize(f);
    let sol = linalg::solve(&columns, &rhs).ok_or(ArithError::NotFoundWithinBound)?;
    let mut out = vec![Poly::zero(n); gens.len()];
    for ((gi, m), c) in owners.into_iter().zip(sol) {
        if !c.is_zero() {
            out[gi].add_term(m, c);
        }
    }
    Ok(out)
}

/// Assigns coordinates to monomials on first sight, turning polynomials into
/// sparse vectors for the linear solver.
#[derive(Default, Debug, Clone)]
pub struct MonomialIndex {
    map: std::collections::HashMap<Monomial, usize>,
}

impl MonomialIndex {
    pub fn index_of(&mut self, m: &Monomial) -> usize {
        let next = self.map.len();
        *self.map.entry(m.clone()).or_insert(next)
    }

    pub fn vectorize(&mut self, p: &Poly) -> SparseVec {
        p.terms()
            .map(|(m, c)| (self.index_of(m), c.clone()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
