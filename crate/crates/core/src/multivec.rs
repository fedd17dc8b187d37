//! Multivectors on a Koszul dg-algebra and reduced cochains.
//!
//! A multivector of order `s` is kept as its symbol: an element of the
//! super-polynomial algebra `T = Õ[ξ_1..ξ_r]` with one dual variable `ξ_a`
//! per generator `u_a` of `Õ`, of parity `|u_a| + 1`. For `Õ` with even
//! `x_1..x_n` and odd `e_1..e_m`, `T` has even variables `x_1..x_n,
//! η_1..η_m` (`η_j = ξ_{e_j}`) and odd variables `e_1..e_m, θ_1..θ_n`
//! (`θ_i = ξ_{x_i}`). Degrees in `T` are `|x| = 0`, `|e| = 1`, `|θ| = -1`,
//! `|η| = -2`, so a multivector of internal degree `k` has degree `-k`.
//!
//! The value on a generator tuple `(u_{b_1}, .., u_{b_s})` is
//! `κ(b) · F ∂/∂ξ_{b_1} .. ∂/∂ξ_{b_s}` (right derivatives, applied in that
//! order) with `κ(b) = (-1)^{Σ_i (s-i)|u_{b_i}|}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::arith::{ArithError, Monomial, Poly, Rational};
use crate::dgalgebra::{DgaElement, ExteriorMonomial, KoszulData};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MultivecError {
    #[error("expected {expected} arguments, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("element does not belong to the algebra")]
    ForeignElement,
    #[error("multivectors live on different algebras")]
    MixedAlgebras,
    #[error("generator index {0} out of range")]
    GeneratorIndex(usize),
    #[error("tuple {0:?} is not in canonical order")]
    NonCanonicalTuple(Vec<usize>),
    #[error("tuple {0:?} given twice")]
    DuplicateTuple(Vec<usize>),
    #[error("value on {tuple:?} must have homological degree {expected}")]
    DegreeMismatch { tuple: Vec<usize>, expected: i64 },
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("index tuple {0:?} repeats an index or is out of range")]
    BadIndexTuple(Vec<usize>),
    #[error("reduced cochain needs {expected} odd generators, algebra has {found}")]
    JacobianArity { expected: usize, found: usize },
    #[error("multivector is not weight-homogeneous")]
    NotWeightHomogeneous,
    #[error("algebra too large for the symbol calculus ({0} generators)")]
    TooManyGenerators(usize),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A variable of the symbol algebra `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolVar {
    Even(usize),
    Odd(usize),
}

/// Index bookkeeping between `Õ` and its symbol algebra `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolSpace {
    n: usize,
    m: usize,
}

impl SymbolSpace {
    pub fn new(n: usize, m: usize) -> Result<Self, MultivecError> {
        if n + m > 64 {
            return Err(MultivecError::TooManyGenerators(n + m));
        }
        Ok(SymbolSpace { n, m })
    }

    pub fn of(alg: &KoszulData) -> Result<Self, MultivecError> {
        Self::new(alg.nvars(), alg.nodd())
    }

    pub fn num_generators(&self) -> usize {
        self.n + self.m
    }

    pub fn t_even(&self) -> usize {
        self.n + self.m
    }

    pub fn t_odd(&self) -> usize {
        self.m + self.n
    }

    pub fn is_odd(&self, a: usize) -> bool {
        a >= self.n
    }

    pub fn parity(&self, a: usize) -> usize {
        usize::from(self.is_odd(a))
    }

    pub fn u(&self, a: usize) -> SymbolVar {
        if a < self.n {
            SymbolVar::Even(a)
        } else {
            SymbolVar::Odd(a - self.n)
        }
    }

    pub fn xi(&self, a: usize) -> SymbolVar {
        if a < self.n {
            SymbolVar::Odd(self.m + a)
        } else {
            SymbolVar::Even(a)
        }
    }

    pub fn zero(&self) -> DgaElement {
        DgaElement::zero(self.t_even(), self.t_odd())
    }

    pub fn variable(&self, v: SymbolVar) -> DgaElement {
        match v {
            SymbolVar::Even(i) => DgaElement::even_generator(self.t_even(), self.t_odd(), i),
            SymbolVar::Odd(j) => DgaElement::odd_generator(self.t_even(), self.t_odd(), j),
        }
    }

    pub fn embed(&self, e: &DgaElement) -> DgaElement {
        e.resize(self.t_even(), self.t_odd())
            .expect("embedding only adds generators")
    }

    /// Inverse of [`SymbolSpace::embed`] on symbols free of `ξ`.
    pub fn project(&self, e: &DgaElement) -> Option<DgaElement> {
        e.resize(self.n, self.m)
    }

    pub fn left(&self, f: &DgaElement, v: SymbolVar) -> DgaElement {
        match v {
            SymbolVar::Even(i) => f.even_derivative(i),
            SymbolVar::Odd(j) => f.left_odd_derivative(j),
        }
    }

    pub fn right(&self, f: &DgaElement, v: SymbolVar) -> DgaElement {
        match v {
            SymbolVar::Even(i) => f.even_derivative(i),
            SymbolVar::Odd(j) => f.right_odd_derivative(j),
        }
    }

    /// `Σ_a (F ∂⃖_{ξ_a})(∂⃗_{u_a} G)`.
    pub fn circ(&self, f: &DgaElement, g: &DgaElement) -> DgaElement {
        let mut out = self.zero();
        for a in 0..self.num_generators() {
            let fa = self.right(f, self.xi(a));
            if fa.is_zero() {
                continue;
            }
            let ga = self.left(g, self.u(a));
            if !ga.is_zero() {
                out += &(&fa * &ga);
            }
        }
        out
    }

    /// `[F, G] = Σ_a (F ∂⃖_{ξ_a})(∂⃗_{u_a} G) - (F ∂⃖_{u_a})(∂⃗_{ξ_a} G)`.
    pub fn bracket(&self, f: &DgaElement, g: &DgaElement) -> DgaElement {
        let mut out = self.circ(f, g);
        for a in 0..self.num_generators() {
            let fa = self.right(f, self.u(a));
            if fa.is_zero() {
                continue;
            }
            let ga = self.left(g, self.xi(a));
            if !ga.is_zero() {
                out -= &(&fa * &ga);
            }
        }
        out
    }

    /// Number of `ξ` factors in a basis monomial.
    pub fn xi_degree(&self, ext: ExteriorMonomial, mono: &Monomial) -> usize {
        let theta = ext.indices().filter(|&j| j >= self.m).count();
        let eta: u32 = mono.exponents()[self.n..].iter().sum();
        theta + eta as usize
    }

    /// Degree in `T` of a basis monomial.
    pub fn t_degree(&self, ext: ExteriorMonomial, mono: &Monomial) -> i64 {
        let odd = ext.indices().filter(|&j| j < self.m).count() as i64;
        let theta = ext.indices().filter(|&j| j >= self.m).count() as i64;
        let eta: u32 = mono.exponents()[self.n..].iter().sum();
        odd - theta - 2 * eta as i64
    }

    /// Weight in `T` of a basis monomial; `ξ_a` carries minus the weight of
    /// `u_a`.
    pub fn t_weight(&self, alg: &KoszulData, ext: ExteriorMonomial, mono: &Monomial) -> Option<i64> {
        let w = alg.weights()?;
        let mut total = 0i64;
        for (i, e) in mono.exponents().iter().enumerate() {
            let wi = if i < self.n {
                w.weights()[i] as i64
            } else {
                -(alg.equation_weight(i - self.n)? as i64)
            };
            total += wi * *e as i64;
        }
        for j in ext.indices() {
            total += if j < self.m {
                alg.equation_weight(j)? as i64
            } else {
                -(w.weights()[j - self.m] as i64)
            };
        }
        Some(total)
    }

    /// Sign `(-1)^{Σ_i (s-i)|u_{b_i}|}`.
    pub fn kappa(&self, tuple: &[usize]) -> i32 {
        let s = tuple.len();
        let e: usize = tuple
            .iter()
            .enumerate()
            .map(|(i, &a)| (s - 1 - i) * self.parity(a))
            .sum();
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Canonical tuples of length `s`: non-decreasing generator indices with
    /// no even generator repeated.
    pub fn canonical_tuples(&self, s: usize) -> Vec<Vec<usize>> {
        fn rec(sp: &SymbolSpace, s: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == s {
                out.push(cur.clone());
                return;
            }
            for a in start..sp.num_generators() {
                cur.push(a);
                let next = if sp.is_odd(a) { a } else { a + 1 };
                rec(sp, s, next, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self, s, 0, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_canonical(&self, tuple: &[usize]) -> bool {
        tuple.windows(2).all(|w| {
            if self.is_odd(w[0]) {
                w[0] <= w[1]
            } else {
                w[0] < w[1]
            }
        })
    }

    /// Canonical tuple read off from the `ξ` factors of a basis monomial.
    fn tuple_of(&self, ext: ExteriorMonomial, mono: &Monomial) -> Vec<usize> {
        let mut t: Vec<usize> = ext
            .indices()
            .filter(|&j| j >= self.m)
            .map(|j| j - self.m)
            .collect();
        for (j, e) in mono.exponents()[self.n..].iter().enumerate() {
            t.extend(std::iter::repeat(self.n + j).take(*e as usize));
        }
        t
    }

    /// `[Y, f]` for `f` free of `ξ`.
    fn apply(&self, y: &DgaElement, f: &DgaElement) -> DgaElement {
        self.circ(y, f)
    }
}

fn signed(e: &DgaElement, sign: i32) -> DgaElement {
    if sign < 0 {
        -e
    } else {
        e.clone()
    }
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// An antisymmetric multiderivation of order `s` and internal degree `k` on
/// a Koszul dg-algebra: the value on generators of degrees `d_1..d_s` has
/// degree `Σ d_i + s - k`.
#[derive(Clone)]
pub struct Multivector {
    order: usize,
    degree: i64,
    algebra: Arc<KoszulData>,
    field: DgaElement,
}

impl PartialEq for Multivector {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.degree == other.degree
            && (Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra)
            && self.field == other.field
    }
}

impl Multivector {
    pub fn zero(algebra: Arc<KoszulData>, order: usize, degree: i64) -> Result<Self, MultivecError> {
        let sp = SymbolSpace::of(&algebra)?;
        Ok(Multivector {
            order,
            degree,
            algebra,
            field: sp.zero(),
        })
    }

    /// Builds a multivector from its values on canonical tuples.
    pub fn from_values(
        algebra: Arc<KoszulData>,
        order: usize,
        degree: i64,
        entries: impl IntoIterator<Item = (Vec<usize>, DgaElement)>,
    ) -> Result<Self, MultivecError> {
        if order == 0 {
            return Err(MultivecError::ZeroOrder);
        }
        let sp = SymbolSpace::of(&algebra)?;
        let mut field = sp.zero();
        let mut seen = BTreeSet::new();
        for (tuple, value) in entries {
            if tuple.len() != order {
                return Err(MultivecError::ArityMismatch {
                    expected: order,
                    found: tuple.len(),
                });
            }
            if let Some(&a) = tuple.iter().find(|&&a| a >= sp.num_generators()) {
                return Err(MultivecError::GeneratorIndex(a));
            }
            if !sp.is_canonical(&tuple) {
                return Err(MultivecError::NonCanonicalTuple(tuple));
            }
            if !seen.insert(tuple.clone()) {
                return Err(MultivecError::DuplicateTuple(tuple));
            }
            if !algebra.owns(&value) {
                return Err(MultivecError::ForeignElement);
            }
            if value.is_zero() {
                continue;
            }
            let expected =
                tuple.iter().map(|&a| sp.parity(a) as i64).sum::<i64>() + order as i64 - degree;
            if value.exterior_degree().map(|d| d as i64) != Some(expected) {
                return Err(MultivecError::DegreeMismatch { tuple, expected });
            }
            let mut mult = BTreeMap::new();
            for &a in tuple.iter().filter(|&&a| sp.is_odd(a)) {
                *mult.entry(a).or_insert(0u32) += 1;
            }
            let denom: BigInt = mult.values().map(|&r| factorial(r)).product();
            let coeff = Rational::new(BigInt::from(sp.kappa(&tuple)), denom);
            let mut term = sp.embed(&value).scale(&coeff);
            for &a in tuple.iter().rev() {
                term = &term * &sp.variable(sp.xi(a));
            }
            field += &term;
        }
        Ok(Multivector {
            order,
            degree,
            algebra,
            field,
        })
    }

    /// Wraps a symbol; checks that every term has order `order` and degree
    /// `-degree` in `T`.
    pub fn from_symbol(
        algebra: Arc<KoszulData>,
        order: usize,
        degree: i64,
        field: DgaElement,
    ) -> Result<Self, MultivecError> {
        let sp = SymbolSpace::of(&algebra)?;
        if field.nvars() != sp.t_even() || field.nodd() != sp.t_odd() {
            return Err(MultivecError::ForeignElement);
        }
        for (ext, p) in field.terms() {
            for (mono, _) in p.terms() {
                let ok = sp.xi_degree(*ext, mono) == order && sp.t_degree(*ext, mono) == -degree;
                if !ok {
                    return Err(MultivecError::DegreeMismatch {
                        tuple: sp.tuple_of(*ext, mono),
                        expected: -degree,
                    });
                }
            }
        }
        Ok(Multivector {
            order,
            degree,
            algebra,
            field,
        })
    }

    pub(crate) fn from_symbol_unchecked(
        algebra: Arc<KoszulData>,
        order: usize,
        degree: i64,
        field: DgaElement,
    ) -> Self {
        Multivector {
            order,
            degree,
            algebra,
            field,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn algebra(&self) -> &Arc<KoszulData> {
        &self.algebra
    }

    pub fn symbols(&self) -> SymbolSpace {
        SymbolSpace::of(&self.algebra).expect("checked at construction")
    }

    /// The symbol of the multivector in `T`.
    pub fn symbol(&self) -> &DgaElement {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero()
    }

    pub fn same_algebra(&self, other: &Multivector) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }

    /// Value on an arbitrary (not necessarily canonical) generator tuple.
    pub fn value(&self, tuple: &[usize]) -> Result<DgaElement, MultivecError> {
        let sp = self.symbols();
        if tuple.len() != self.order {
            return Err(MultivecError::ArityMismatch {
                expected: self.order,
                found: tuple.len(),
            });
        }
        let mut cur = self.field.clone();
        for &a in tuple {
            if a >= sp.num_generators() {
                return Err(MultivecError::GeneratorIndex(a));
            }
            cur = sp.right(&cur, sp.xi(a));
            if cur.is_zero() {
                return Ok(self.algebra.zero());
            }
        }
        let v = sp.project(&cur).expect("all symbols consumed");
        Ok(signed(&v, sp.kappa(tuple)))
    }

    /// Nonzero values on canonical tuples.
    pub fn values(&self) -> BTreeMap<Vec<usize>, DgaElement> {
        let sp = self.symbols();
        let mut tuples = BTreeSet::new();
        for (ext, p) in self.field.terms() {
            for (mono, _) in p.terms() {
                tuples.insert(sp.tuple_of(*ext, mono));
            }
        }
        tuples
            .into_iter()
            .filter_map(|t| {
                let v = self.value(&t).expect("tuple from own symbol");
                (!v.is_zero()).then_some((t, v))
            })
            .collect()
    }

    /// Evaluates on arbitrary elements by the graded Leibniz rule.
    pub fn evaluate(&self, args: &[DgaElement]) -> Result<DgaElement, MultivecError> {
        if args.len() != self.order {
            return Err(MultivecError::ArityMismatch {
                expected: self.order,
                found: args.len(),
            });
        }
        if args.iter().any(|a| !self.algebra.owns(a)) {
            return Err(MultivecError::ForeignElement);
        }
        let sp = self.symbols();
        let parts: Vec<Vec<(usize, DgaElement)>> = args
            .iter()
            .map(|a| a.homogeneous_components().into_iter().collect())
            .collect();
        let mut out = self.algebra.zero();
        let mut choice = vec![0usize; args.len()];
        if parts.iter().any(|p| p.is_empty()) {
            return Ok(out);
        }
        loop {
            let mut cur = self.field.clone();
            let mut exponent = 0usize;
            let s = args.len();
            for (i, p) in parts.iter().enumerate() {
                let (d, f) = &p[choice[i]];
                exponent += (s - 1 - i) * d;
                cur = sp.apply(&cur, &sp.embed(f));
                if cur.is_zero() {
                    break;
                }
            }
            if !cur.is_zero() {
                let v = sp.project(&cur).expect("all symbols consumed");
                out += &signed(&v, if exponent % 2 == 0 { 1 } else { -1 });
            }
            // advance the mixed-radix counter
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return Ok(out);
                }
                choice[i] += 1;
                if choice[i] < parts[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    pub fn checked_add(&self, other: &Multivector) -> Result<Multivector, MultivecError> {
        self.compatible(other)?;
        Ok(Multivector::from_symbol_unchecked(
            self.algebra.clone(),
            self.order,
            self.degree,
            &self.field + &other.field,
        ))
    }

    pub fn checked_sub(&self, other: &Multivector) -> Result<Multivector, MultivecError> {
        self.compatible(other)?;
        Ok(Multivector::from_symbol_unchecked(
            self.algebra.clone(),
            self.order,
            self.degree,
            &self.field - &other.field,
        ))
    }

    fn compatible(&self, other: &Multivector) -> Result<(), MultivecError> {
        if !self.same_algebra(other) {
            return Err(MultivecError::MixedAlgebras);
        }
        if self.order != other.order {
            return Err(MultivecError::ArityMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(MultivecError::DegreeMismatch {
                tuple: vec![],
                expected: self.degree,
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Multivector {
        Multivector::from_symbol_unchecked(
            self.algebra.clone(),
            self.order,
            self.degree,
            self.field.scale(c),
        )
    }

    /// Weight of the symbol, `None` for zero or when no weights are declared.
    pub fn weight(&self) -> Result<Option<i64>, MultivecError> {
        let sp = self.symbols();
        let mut found = None;
        for (ext, p) in self.field.terms() {
            for (mono, _) in p.terms() {
                let w = match sp.t_weight(&self.algebra, *ext, mono) {
                    Some(w) => w,
                    None => return Ok(None),
                };
                match found {
                    None => found = Some(w),
                    Some(f) if f != w => return Err(MultivecError::NotWeightHomogeneous),
                    _ => {}
                }
            }
        }
        Ok(found)
    }

    /// True when every canonical tuple containing an odd generator has
    /// value zero.
    pub fn vanishes_on_odd_tuples(&self) -> bool {
        let sp = self.symbols();
        self.values()
            .keys()
            .all(|t| t.iter().all(|&a| !sp.is_odd(a)))
    }

    pub fn format_tuple(&self, tuple: &[usize]) -> Vec<String> {
        tuple
            .iter()
            .map(|&a| self.algebra.generator_name(a).to_string())
            .collect()
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(order {}, degree {}; ", self.order, self.degree)?;
        let mut first = true;
        for (t, v) in self.values() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(
                f,
                "({}) -> {}",
                self.format_tuple(&t).join(","),
                self.algebra.format(&v)
            )?;
        }
        f.write_str(")")
    }
}

/// Sign of the permutation sorting `idx`, or `None` on a repeated index.
pub fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Totally antisymmetric cochain on `(s + m)`-tuples of coordinate indices
/// (0-based) with values in `Õ`, contracted against `dh_1 ∧ .. ∧ dh_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedCochain {
    order: usize,
    jacobian_arity: usize,
    nvars: usize,
    values: BTreeMap<Vec<usize>, DgaElement>,
}

impl ReducedCochain {
    pub fn new(order: usize, jacobian_arity: usize, nvars: usize) -> Self {
        ReducedCochain {
            order,
            jacobian_arity,
            nvars,
            values: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn jacobian_arity(&self) -> usize {
        self.jacobian_arity
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn arity(&self) -> usize {
        self.order + self.jacobian_arity
    }

    /// Adds `value` at `indices` (any order; the permutation sign is
    /// applied).
    pub fn add(&mut self, indices: &[usize], value: DgaElement) -> Result<(), MultivecError> {
        if indices.len() != self.arity() {
            return Err(MultivecError::ArityMismatch {
                expected: self.arity(),
                found: indices.len(),
            });
        }
        if indices.iter().any(|&i| i >= self.nvars) {
            return Err(MultivecError::BadIndexTuple(indices.to_vec()));
        }
        let (sorted, sign) =
            sort_sign(indices).ok_or_else(|| MultivecError::BadIndexTuple(indices.to_vec()))?;
        let v = signed(&value, sign);
        let slot = self.values.entry(sorted.clone());
        let e = slot.or_insert_with(|| DgaElement::zero(v.nvars(), v.nodd()));
        *e += &v;
        if e.is_zero() {
            self.values.remove(&sorted);
        }
        Ok(())
    }

    /// Value at any index tuple; zero on repeated indices.
    pub fn get(&self, indices: &[usize]) -> Option<DgaElement> {
        let (sorted, sign) = sort_sign(indices)?;
        self.values.get(&sorted).map(|v| signed(v, sign))
    }

    pub fn values(&self) -> &BTreeMap<Vec<usize>, DgaElement> {
        &self.values
    }
}

fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Strictly increasing `k`-tuples from `0..n`.
pub fn index_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    increasing_tuples(n, k)
}

/// Ordered tuples of `k` distinct indices from `0..n` avoiding `exclude`.
fn ordered_distinct(n: usize, k: usize, exclude: &[usize]) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, ex: &[usize], out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if ex.contains(&i) || cur.contains(&i) {
                continue;
            }
            cur.push(i);
            rec(n, k, cur, ex, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), exclude, &mut out);
    out
}

/// Contraction `ϖ(dx_I, dh_1, .., dh_m)` for an index tuple `I`.
pub fn contract_with_jacobian(
    cochain: &ReducedCochain,
    alg: &KoszulData,
    idx: &[usize],
) -> DgaElement {
    let n = alg.nvars();
    let grads: Vec<Vec<Poly>> = alg.equations().iter().map(|h| h.gradient()).collect();
    let mut out = alg.zero();
    for k in ordered_distinct(n, alg.nodd(), idx) {
        let mut full = idx.to_vec();
        full.extend(&k);
        let Some(v) = cochain.get(&full) else { continue };
        let mut factor = Poly::one(n);
        for (j, &kj) in k.iter().enumerate() {
            factor = &factor * &grads[j][kj];
            if factor.is_zero() {
                break;
            }
        }
        if !factor.is_zero() {
            out += &v.mul_poly(&factor);
        }
    }
    out
}

/// The reduced-form multivector of a cochain: on even generators
/// `x_{i_1},..,x_{i_s}` it is `ϖ(dx_{i_1},..,dx_{i_s}, dh_1,..,dh_m)`; on
/// tuples containing an odd generator it vanishes.
pub fn from_reduced(
    cochain: &ReducedCochain,
    algebra: Arc<KoszulData>,
) -> Result<Multivector, MultivecError> {
    let (n, m) = (algebra.nvars(), algebra.nodd());
    if cochain.jacobian_arity() != m {
        return Err(MultivecError::JacobianArity {
            expected: cochain.jacobian_arity(),
            found: m,
        });
    }
    if cochain.nvars() != n {
        return Err(MultivecError::ArityMismatch {
            expected: n,
            found: cochain.nvars(),
        });
    }
    if cochain.values().values().any(|v| !algebra.owns(v)) {
        return Err(MultivecError::ForeignElement);
    }
    let s = cochain.order();
    let mut entries = Vec::new();
    for idx in increasing_tuples(n, s) {
        let v = contract_with_jacobian(cochain, &algebra, &idx);
        if !v.is_zero() {
            entries.push((idx, v));
        }
    }
    Multivector::from_values(algebra, s, 2, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::WeightSystem;
    use crate::dgalgebra::koszul_resolution;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn a1() -> Arc<KoszulData> {
        let v = names(&["x", "y", "z"]);
        let h = Poly::parse("x^2 + y^2 + z^2", &v).unwrap();
        Arc::new(koszul_resolution(vec![h], v, Some(WeightSystem::standard(3))).unwrap())
    }

    fn plain(vars: &[&str]) -> Arc<KoszulData> {
        Arc::new(koszul_resolution(vec![], names(vars), None).unwrap())
    }

    #[test]
    fn leibniz_example() {
        let a = plain(&["x", "y", "z"]);
        let p = Multivector::from_values(a.clone(), 2, 2, [(vec![0, 1], a.parse("2*z").unwrap())])
            .unwrap();
        let r = p
            .evaluate(&[a.parse("x^2").unwrap(), a.parse("y").unwrap()])
            .unwrap();
        assert_eq!(r, a.parse("4*x*z").unwrap());
        let f = a.parse("x*y + z^3").unwrap();
        assert!(p.evaluate(&[f.clone(), f]).unwrap().is_zero());
        assert_eq!(p.value(&[1, 0]).unwrap(), a.parse("-2*z").unwrap());
    }

    #[test]
    fn table_round_trip_with_odd_repeats() {
        let v = names(&["x", "y"]);
        let eqs = vec![Poly::parse("x", &v).unwrap(), Poly::parse("y", &v).unwrap()];
        let a = Arc::new(koszul_resolution(eqs, v, None).unwrap());
        let entries = vec![
            (vec![0, 1], a.parse("x*y").unwrap()),
            (vec![0, 2], a.parse("y*h2").unwrap()),
            (vec![2, 2], a.parse("3*h1*h2").unwrap()),
            (vec![2, 3], a.parse("x*h1*h2").unwrap()),
        ];
        let p = Multivector::from_values(a.clone(), 2, 2, entries.clone()).unwrap();
        let got = p.values();
        assert_eq!(got.len(), entries.len());
        for (t, v) in entries {
            assert_eq!(got[&t], v, "tuple {t:?}");
        }
        assert_eq!(p.value(&[2, 0]).unwrap(), a.parse("-y*h2").unwrap());
        // two odd arguments commute
        assert_eq!(p.value(&[3, 2]).unwrap(), a.parse("x*h1*h2").unwrap());
    }

    #[test]
    fn rejects_bad_tables() {
        let a = a1();
        let bad = Multivector::from_values(a.clone(), 2, 2, [(vec![1, 0], a.parse("1").unwrap())]);
        assert!(matches!(bad, Err(MultivecError::NonCanonicalTuple(_))));
        let bad = Multivector::from_values(a.clone(), 2, 2, [(vec![0, 1], a.parse("h1").unwrap())]);
        assert!(matches!(bad, Err(MultivecError::DegreeMismatch { .. })));
        let bad = Multivector::from_values(a.clone(), 2, 2, [(vec![0, 0], a.parse("1").unwrap())]);
        assert!(matches!(bad, Err(MultivecError::NonCanonicalTuple(_))));
    }

    #[test]
    fn reduced_bivector_of_a1() {
        let a = a1();
        let mut w = ReducedCochain::new(2, 1, 3);
        w.add(&[0, 1, 2], a.parse("1").unwrap()).unwrap();
        let p = from_reduced(&w, a.clone()).unwrap();
        assert_eq!(p.value(&[0, 1]).unwrap(), a.parse("2*z").unwrap());
        assert_eq!(p.value(&[1, 2]).unwrap(), a.parse("2*x").unwrap());
        assert_eq!(p.value(&[2, 0]).unwrap(), a.parse("2*y").unwrap());
        assert!(p.value(&[0, 3]).unwrap().is_zero());
        assert!(p.vanishes_on_odd_tuples());
        let h = a.parse("x^2 + y^2 + z^2").unwrap();
        for i in 0..3 {
            let v = p.evaluate(&[a.generator(i), h.clone()]).unwrap();
            assert!(v.is_zero());
        }
    }

    #[test]
    fn sort_signs() {
        assert_eq!(sort_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_sign(&[1, 0, 2]), Some((vec![0, 1, 2], -1)));
        assert_eq!(sort_sign(&[1, 1]), None);
    }
}
