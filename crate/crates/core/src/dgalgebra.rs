//! Free graded-commutative dg-algebras `Q[x_1..x_n] ⊗ Λ[e_1..e_m]` and the
//! Koszul resolution of a sequence of polynomials.
//!
//! Even generators have homological degree 0 and odd generators degree 1.
//! An element is stored as a map from exterior monomials (bitmasks of odd
//! generators, read in increasing index order) to polynomial coefficients.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::One;
use thiserror::Error;

use crate::arith::linalg::{self, SparseVec};
use crate::arith::{
    fmt_signed_term, monomials_of_weight, parse_expr, ArithError, Monomial, ParseTarget, Poly,
    Rational, WeightSystem,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DgaError {
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("equation {index} is not quasi-homogeneous for the declared weights")]
    NonHomogeneousEquation { index: usize },
    #[error("a weight system is required for this operation")]
    NoWeights,
    #[error("elements belong to different algebras")]
    MixedAlgebras,
    #[error("too many odd generators ({0}, at most 32 supported)")]
    TooManyOddGenerators(usize),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Exterior monomial in the odd generators, as a bitmask; bit `j` is `e_j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct ExteriorMonomial(pub u64);

impl ExteriorMonomial {
    pub const ONE: ExteriorMonomial = ExteriorMonomial(0);

    pub fn generator(j: usize) -> Self {
        ExteriorMonomial(1 << j)
    }

    pub fn from_indices(indices: &[usize]) -> Option<(Self, i32)> {
        let mut acc = ExteriorMonomial::ONE;
        let mut sign = 1;
        for &j in indices {
            let (m, s) = acc.mul(Self::generator(j))?;
            acc = m;
            sign *= s;
        }
        Some((acc, sign))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..64).filter(move |j| mask >> j & 1 == 1)
    }

    /// Product with its Koszul sign, or `None` if a generator repeats.
    pub fn mul(self, other: Self) -> Option<(Self, i32)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        for j in other.indices() {
            swaps += (self.0 >> (j + 1)).count_ones();
        }
        Some((ExteriorMonomial(self.0 | other.0), if swaps % 2 == 0 { 1 } else { -1 }))
    }

    /// Derivative from the left: the sign counts factors in front of `e_j`.
    pub fn left_derivative(self, j: usize) -> Option<(Self, i32)> {
        if !self.contains(j) {
            return None;
        }
        let before = (self.0 & ((1u64 << j) - 1)).count_ones();
        Some((ExteriorMonomial(self.0 ^ (1 << j)), if before % 2 == 0 { 1 } else { -1 }))
    }

    /// Derivative from the right: the sign counts factors behind `e_j`.
    pub fn right_derivative(self, j: usize) -> Option<(Self, i32)> {
        if !self.contains(j) {
            return None;
        }
        let after = (self.0 >> (j + 1)).count_ones();
        Some((ExteriorMonomial(self.0 ^ (1 << j)), if after % 2 == 0 { 1 } else { -1 }))
    }
}

fn signed(p: &Poly, sign: i32) -> Poly {
    if sign < 0 {
        -p
    } else {
        p.clone()
    }
}

/// Element of a free graded-commutative algebra with `nvars` even and
/// `nodd` odd generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DgaElement {
    nvars: usize,
    nodd: usize,
    terms: BTreeMap<ExteriorMonomial, Poly>,
}

impl DgaElement {
    pub fn zero(nvars: usize, nodd: usize) -> Self {
        DgaElement {
            nvars,
            nodd,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize, nodd: usize) -> Self {
        Self::from_poly(Poly::one(nvars), nodd)
    }

    pub fn from_poly(p: Poly, nodd: usize) -> Self {
        Self::monomial(p, ExteriorMonomial::ONE, nodd)
    }

    pub fn monomial(p: Poly, e: ExteriorMonomial, nodd: usize) -> Self {
        let mut out = Self::zero(p.nvars(), nodd);
        out.add_poly_term(e, p);
        out
    }

    pub fn even_generator(nvars: usize, nodd: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(nvars, i), nodd)
    }

    pub fn odd_generator(nvars: usize, nodd: usize, j: usize) -> Self {
        Self::monomial(Poly::one(nvars), ExteriorMonomial::generator(j), nodd)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nodd(&self) -> usize {
        self.nodd
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExteriorMonomial, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: ExteriorMonomial) -> Poly {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.nvars))
    }

    pub fn add_poly_term(&mut self, e: ExteriorMonomial, p: Poly) {
        if p.is_zero() {
            return;
        }
        assert_eq!(p.nvars(), self.nvars, "polynomial arity mismatch");
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(p);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &p;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Exterior degree, when all terms share it. `None` for zero or mixed
    /// elements.
    pub fn exterior_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|e| e.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Splits into components of fixed exterior degree.
    pub fn homogeneous_components(&self) -> BTreeMap<usize, DgaElement> {
        let mut out: BTreeMap<usize, DgaElement> = BTreeMap::new();
        for (e, p) in &self.terms {
            out.entry(e.degree())
                .or_insert_with(|| DgaElement::zero(self.nvars, self.nodd))
                .add_poly_term(*e, p.clone());
        }
        out
    }

    /// Exterior-degree-zero part.
    pub fn even_part(&self) -> Poly {
        self.coefficient(ExteriorMonomial::ONE)
    }

    pub fn scale(&self, c: &Rational) -> DgaElement {
        let mut out = DgaElement::zero(self.nvars, self.nodd);
        for (e, p) in &self.terms {
            out.add_poly_term(*e, p.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, q: &Poly) -> DgaElement {
        let mut out = DgaElement::zero(self.nvars, self.nodd);
        for (e, p) in &self.terms {
            out.add_poly_term(*e, p * q);
        }
        out
    }

    pub fn same_shape(&self, other: &DgaElement) -> bool {
        self.nvars == other.nvars && self.nodd == other.nodd
    }

    pub fn try_mul(&self, other: &DgaElement) -> Result<DgaElement, DgaError> {
        if !self.same_shape(other) {
            return Err(DgaError::MixedAlgebras);
        }
        let mut out = DgaElement::zero(self.nvars, self.nodd);
        for (e1, p1) in &self.terms {
            for (e2, p2) in &other.terms {
                if let Some((e, s)) = e1.mul(*e2) {
                    out.add_poly_term(e, signed(&(p1 * p2), s));
                }
            }
        }
        Ok(out)
    }

    /// Derivative with respect to an even generator.
    pub fn even_derivative(&self, i: usize) -> DgaElement {
        let mut out = DgaElement::zero(self.nvars, self.nodd);
        for (e, p) in &self.terms {
            out.add_poly_term(*e, p.derivative_unchecked(i));
        }
        out
    }

    /// Derivative with respect to an odd generator, acting from the left.
    pub fn left_odd_derivative(&self, j: usize) -> DgaElement {
        let mut out = DgaElement::zero(self.nvars, self.nodd);
        for (e, p) in &self.terms {
            if let Some((rest, s)) = e.left_derivative(j) {
                out.add_poly_term(rest, signed(p, s));
            }
        }
        out
    }

    /// Derivative with respect to an odd generator, acting from the right.
    pub fn right_odd_derivative(&self, j: usize) -> DgaElement {
        let mut out = DgaElement::zero(self.nvars, self.nodd);
        for (e, p) in &self.terms {
            if let Some((rest, s)) = e.right_derivative(j) {
                out.add_poly_term(rest, signed(p, s));
            }
        }
        out
    }

    /// Re-embeds into an algebra with more (or fewer) generators of each
    /// kind. Fails if a dropped generator occurs.
    pub fn resize(&self, nvars: usize, nodd: usize) -> Option<DgaElement> {
        let mut out = DgaElement::zero(nvars, nodd);
        let keep = if nodd >= 64 { u64::MAX } else { (1u64 << nodd) - 1 };
        for (e, p) in &self.terms {
            if e.0 & !keep != 0 {
                return None;
            }
            out.add_poly_term(*e, p.resize(nvars)?);
        }
        Some(out)
    }

    pub fn display<'a>(&'a self, even: &'a [String], odd: &'a [String]) -> DgaDisplay<'a> {
        DgaDisplay {
            elem: self,
            even,
            odd,
        }
    }

    pub fn to_string_with(&self, even: &[String], odd: &[String]) -> String {
        self.display(even, odd).to_string()
    }

    /// Parses text in the polynomial syntax where odd generator names may
    /// also appear; products are taken in the written order.
    pub fn parse(s: &str, even: &[String], odd: &[String]) -> Result<DgaElement, ArithError> {
        let (n, m) = (even.len(), odd.len());
        let expr = parse_expr(s)?;
        let lookup = |name: &str| {
            if let Some(i) = even.iter().position(|v| v == name) {
                Some(DgaTarget::Elem(DgaElement::even_generator(n, m, i)))
            } else {
                odd.iter()
                    .position(|v| v == name)
                    .map(|j| DgaTarget::Elem(DgaElement::odd_generator(n, m, j)))
            }
        };
        Ok(match expr.eval_with(&lookup)? {
            DgaTarget::Const(c) => DgaElement::from_poly(Poly::constant(n, c), m),
            DgaTarget::Elem(e) => e,
        })
    }
}

#[derive(Clone)]
enum DgaTarget {
    Const(Rational),
    Elem(DgaElement),
}

impl ParseTarget for DgaTarget {
    fn from_rational(c: Rational) -> Self {
        DgaTarget::Const(c)
    }
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (DgaTarget::Const(a), DgaTarget::Const(b)) => DgaTarget::Const(a + b),
            (DgaTarget::Const(c), DgaTarget::Elem(e)) | (DgaTarget::Elem(e), DgaTarget::Const(c)) => {
                let k = DgaElement::from_poly(Poly::constant(e.nvars, c), e.nodd);
                DgaTarget::Elem(&e + &k)
            }
            (DgaTarget::Elem(a), DgaTarget::Elem(b)) => DgaTarget::Elem(&a + &b),
        }
    }
    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (DgaTarget::Const(a), DgaTarget::Const(b)) => DgaTarget::Const(a * b),
            (DgaTarget::Const(c), DgaTarget::Elem(e)) | (DgaTarget::Elem(e), DgaTarget::Const(c)) => {
                DgaTarget::Elem(e.scale(&c))
            }
            (DgaTarget::Elem(a), DgaTarget::Elem(b)) => DgaTarget::Elem(&a * &b),
        }
    }
    fn neg(self) -> Self {
        match self {
            DgaTarget::Const(c) => DgaTarget::Const(-c),
            DgaTarget::Elem(e) => DgaTarget::Elem(-&e),
        }
    }
}

pub struct DgaDisplay<'a> {
    elem: &'a DgaElement,
    even: &'a [String],
    odd: &'a [String],
}

impl fmt::Display for DgaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return f.write_str("0");
        }
        let mut keys: Vec<&ExteriorMonomial> = self.elem.terms.keys().collect();
        keys.sort_by_key(|e| (e.degree(), e.0));
        let mut lead = true;
        for e in keys {
            let odd_part: Vec<&str> = e.indices().map(|j| self.odd[j].as_str()).collect();
            for (m, c) in self.elem.terms[e].terms().rev() {
                let mut body = String::new();
                if !m.is_one() || odd_part.is_empty() {
                    m.fmt_with(self.even, &mut body)?;
                }
                for o in &odd_part {
                    if body.is_empty() || body == "1" {
                        body.clear();
                    } else {
                        body.push('*');
                    }
                    body.push_str(o);
                }
                fmt_signed_term(c, &body, lead, f)?;
                lead = false;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DgaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let even: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        let odd: Vec<String> = (1..=self.nodd).map(|j| format!("e{j}")).collect();
        write!(f, "Dga({})", self.display(&even, &odd))
    }
}

impl AddAssign<&DgaElement> for DgaElement {
    fn add_assign(&mut self, rhs: &DgaElement) {
        assert!(self.same_shape(rhs), "algebra mismatch");
        for (e, p) in &rhs.terms {
            self.add_poly_term(*e, p.clone());
        }
    }
}

impl SubAssign<&DgaElement> for DgaElement {
    fn sub_assign(&mut self, rhs: &DgaElement) {
        assert!(self.same_shape(rhs), "algebra mismatch");
        for (e, p) in &rhs.terms {
            self.add_poly_term(*e, -p);
        }
    }
}

impl Add for &DgaElement {
    type Output = DgaElement;
    fn add(self, rhs: &DgaElement) -> DgaElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &DgaElement {
    type Output = DgaElement;
    fn sub(self, rhs: &DgaElement) -> DgaElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &DgaElement {
    type Output = DgaElement;
    fn neg(self) -> DgaElement {
        self.scale(&-Rational::one())
    }
}

impl Mul for &DgaElement {
    type Output = DgaElement;
    fn mul(self, rhs: &DgaElement) -> DgaElement {
        self.try_mul(rhs).expect("algebra mismatch")
    }
}

/// Coordinates for (exterior monomial, monomial) pairs, turning elements
/// into sparse vectors.
#[derive(Default, Debug, Clone)]
pub struct DgaIndex {
    map: HashMap<(ExteriorMonomial, Monomial), usize>,
}

impl DgaIndex {
    pub fn vectorize(&mut self, e: &DgaElement) -> SparseVec {
        let mut v = SparseVec::new();
        for (ext, p) in e.terms() {
            for (m, c) in p.terms() {
                let next = self.map.len();
                let i = *self.map.entry((*ext, m.clone())).or_insert(next);
                v.add_entry(i, c.clone());
            }
        }
        v
    }
}

/// The Koszul dg-algebra `Q[x_1..x_n, e_1..e_m]` with `|e_j| = 1` and
/// `δ(e_j) = h_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulData {
    vars: Vec<String>,
    odd_names: Vec<String>,
    equations: Vec<Poly>,
    weights: Option<WeightSystem>,
    equation_weights: Vec<u64>,
}

fn default_odd_names(m: usize) -> Vec<String> {
    (1..=m).map(|j| format!("h{j}")).collect()
}

/// Builds the Koszul resolution of `equations` in the variables `vars`, with
/// odd generators named `h1, h2, ...`.
pub fn koszul_resolution(
    equations: Vec<Poly>,
    vars: Vec<String>,
    weights: Option<WeightSystem>,
) -> Result<KoszulData, DgaError> {
    let names = default_odd_names(equations.len());
    KoszulData::with_names(equations, vars, names, weights)
}

impl KoszulData {
    pub fn with_names(
        equations: Vec<Poly>,
        vars: Vec<String>,
        odd_names: Vec<String>,
        weights: Option<WeightSystem>,
    ) -> Result<KoszulData, DgaError> {
        let n = vars.len();
        if equations.len() > 32 {
            return Err(DgaError::TooManyOddGenerators(equations.len()));
        }
        assert_eq!(odd_names.len(), equations.len(), "one name per equation");
        let mut seen = HashSet::new();
        for name in vars.iter().chain(&odd_names) {
            if !seen.insert(name.clone()) {
                return Err(DgaError::DuplicateName(name.clone()));
            }
        }
        for h in &equations {
            if h.nvars() != n {
                return Err(ArithError::ArityMismatch {
                    expected: n,
                    found: h.nvars(),
                }
                .into());
            }
        }
        let mut equation_weights = Vec::new();
        if let Some(w) = &weights {
            if w.len() != n {
                return Err(ArithError::ArityMismatch {
                    expected: n,
                    found: w.len(),
                }
                .into());
            }
            for (index, h) in equations.iter().enumerate() {
                match h.weight_of(w) {
                    Ok(d) => equation_weights.push(d),
                    Err(_) => return Err(DgaError::NonHomogeneousEquation { index }),
                }
            }
        }
        Ok(KoszulData {
            vars,
            odd_names,
            equations,
            weights,
            equation_weights,
        })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn nodd(&self) -> usize {
        self.equations.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn odd_names(&self) -> &[String] {
        &self.odd_names
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }

    pub fn weights(&self) -> Option<&WeightSystem> {
        self.weights.as_ref()
    }

    /// Weight of `h_j` (and of its odd generator), when weights are declared.
    pub fn equation_weight(&self, j: usize) -> Option<u64> {
        self.equation_weights.get(j).copied()
    }

    /// Number of generators: `x_1..x_n` then `e_1..e_m`.
    pub fn num_generators(&self) -> usize {
        self.nvars() + self.nodd()
    }

    pub fn generator_is_odd(&self, a: usize) -> bool {
        a >= self.nvars()
    }

    pub fn generator_degree(&self, a: usize) -> usize {
        usize::from(self.generator_is_odd(a))
    }

    pub fn generator_name(&self, a: usize) -> &str {
        if a < self.nvars() {
            &self.vars[a]
        } else {
            &self.odd_names[a - self.nvars()]
        }
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.vars
            .iter()
            .chain(&self.odd_names)
            .position(|v| v == name)
    }

    pub fn generator_weight(&self, a: usize) -> Option<u64> {
        let w = self.weights.as_ref()?;
        Some(if a < self.nvars() {
            w.weights()[a]
        } else {
            self.equation_weights[a - self.nvars()]
        })
    }

    pub fn generator(&self, a: usize) -> DgaElement {
        let (n, m) = (self.nvars(), self.nodd());
        if a < n {
            DgaElement::even_generator(n, m, a)
        } else {
            DgaElement::odd_generator(n, m, a - n)
        }
    }

    pub fn zero(&self) -> DgaElement {
        DgaElement::zero(self.nvars(), self.nodd())
    }

    pub fn embed(&self, p: &Poly) -> DgaElement {
        DgaElement::from_poly(p.clone(), self.nodd())
    }

    pub fn owns(&self, e: &DgaElement) -> bool {
        e.nvars() == self.nvars() && e.nodd() == self.nodd()
    }

    pub fn parse(&self, s: &str) -> Result<DgaElement, ArithError> {
        DgaElement::parse(s, &self.vars, &self.odd_names)
    }

    pub fn parse_poly(&self, s: &str) -> Result<Poly, ArithError> {
        Poly::parse(s, &self.vars)
    }

    pub fn format(&self, e: &DgaElement) -> String {
        e.to_string_with(&self.vars, &self.odd_names)
    }

    pub fn format_poly(&self, p: &Poly) -> String {
        p.to_string_with(&self.vars)
    }

    /// The Koszul differential, extended as an odd derivation.
    pub fn differential(&self, e: &DgaElement) -> DgaElement {
        let mut out = self.zero();
        for (ext, p) in e.terms() {
            for j in ext.indices() {
                if let Some((rest, s)) = ext.left_derivative(j) {
                    out.add_poly_term(rest, signed(&(p * &self.equations[j]), s));
                }
            }
        }
        out
    }

    pub fn multiply(&self, a: &DgaElement, b: &DgaElement) -> Result<DgaElement, DgaError> {
        if !self.owns(a) || !self.owns(b) {
            return Err(DgaError::MixedAlgebras);
        }
        a.try_mul(b)
    }

    /// Normal form of the degree-0 part modulo `(h_1, ..., h_m)`, by division
    /// by each equation in turn. Canonical when `m = 1`.
    pub fn augment(&self, e: &DgaElement) -> Poly {
        self.reduce_mod_equations(&e.even_part())
    }

    pub fn reduce_mod_equations(&self, p: &Poly) -> Poly {
        let mut r = p.clone();
        for h in &self.equations {
            if h.is_zero() {
                continue;
            }
            r = r.div_rem(h).expect("same arity").1;
        }
        r
    }

    /// Weight of a basis monomial `x^a e_S`.
    pub fn monomial_weight(&self, m: &Monomial, ext: ExteriorMonomial) -> Option<u64> {
        let w = self.weights.as_ref()?;
        Some(m.weight(w) + ext.indices().map(|j| self.equation_weights[j]).sum::<u64>())
    }

    /// Monomial basis of the degree-`k`, weight-`w` component, ordered by
    /// exterior bitmask and then grlex.
    pub fn weight_block_basis(&self, k: usize, w: u64) -> Result<Vec<DgaElement>, DgaError> {
        let ws = self.weights.as_ref().ok_or(DgaError::NoWeights)?;
        let (n, m) = (self.nvars(), self.nodd());
        let mut out = Vec::new();
        if k > m {
            return Ok(out);
        }
        for mask in 0u64..(1u64 << m) {
            let ext = ExteriorMonomial(mask);
            if ext.degree() != k {
                continue;
            }
            let ew: u64 = ext.indices().map(|j| self.equation_weights[j]).sum();
            if ew > w {
                continue;
            }
            for mono in monomials_of_weight(ws, w - ew) {
                out.push(DgaElement::monomial(Poly::term(mono, Rational::one()), ext, m));
            }
        }
        debug_assert!(out.iter().all(|e| e.nvars() == n));
        Ok(out)
    }

    /// Dimension of `H_k` in weight `w`: `dim ker δ_k − rank δ_{k+1}`.
    pub fn homology_rank(&self, k: usize, w: u64) -> Result<usize, DgaError> {
        let basis = self.weight_block_basis(k, w)?;
        let above = self.weight_block_basis(k + 1, w)?;
        let mut index = DgaIndex::default();
        let rank_out = if k == 0 {
            0
        } else {
            let images: Vec<SparseVec> = basis
                .iter()
                .map(|b| index.vectorize(&self.differential(b)))
                .collect();
            linalg::rank(images.iter())
        };
        let images_in: Vec<SparseVec> = above
            .iter()
            .map(|b| index.vectorize(&self.differential(b)))
            .collect();
        let rank_in = linalg::rank(images_in.iter());
        Ok(basis.len() - rank_out - rank_in)
    }
}

/// Checks `δ² = 0` on every basis element of the blocks with weight at most
/// `max_weight`; returns the first failing element.
pub fn check_differential_squares_to_zero(
    a: &KoszulData,
    max_weight: u64,
) -> Result<Option<DgaElement>, DgaError> {
    for w in 0..=max_weight {
        for k in 0..=a.nodd() {
            for b in a.weight_block_basis(k, w)? {
                if !a.differential(&a.differential(&b)).is_zero() {
                    return Ok(Some(b));
                }
            }
        }
    }
    Ok(None)
}
