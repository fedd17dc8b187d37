//! Brackets on complete intersections given by antisymmetric tensors, their
//! Jacobi defect, and order-by-order construction of homotopy Poisson
//! structures on the Koszul resolution.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::linalg::{self, SparseVec};
use crate::arith::{
    monomials_of_weight, monomials_up_to_degree, ArithError, Monomial, Poly,
    Rational, WeightSystem,
};
use crate::dgalgebra::{DgaElement, DgaIndex, ExteriorMonomial, KoszulData};
use crate::multivec::{
    from_reduced, index_tuples, sort_sign, Multivector, MultivecError, ReducedCochain, SymbolSpace,
};
use crate::schouten::{
    is_homotopy_poisson, mc_residual, mv_differential, quadratic_term, HomotopyPoisson,
    SchoutenError, JACOBIATOR_SIGN,
};

/// Engine-level failures of the construction.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Obstruction {
    #[error("Jacobi defect at {triple:?} is not divisible by h (remainder {remainder:?})")]
    NotDivisible { triple: [usize; 3], remainder: Poly },
    #[error("no solution within the search bound at order {order}")]
    NoSolutionWithinBound { order: usize },
    #[error("the order-{order} obstruction is not δ-closed")]
    ResidualNotClosed { order: usize },
    #[error("the order-{order} residual does not vanish after construction")]
    ResidualNonzero { order: usize },
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PoissonError {
    #[error("obstructed: {0}")]
    Obstructed(#[from] Obstruction),
    #[error("at order {order}: {source}")]
    AtOrder {
        order: usize,
        #[source]
        source: Box<PoissonError>,
    },
    #[error("tensor has arity {found}, expected {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("index tuple {0:?} repeats an index or is out of range")]
    BadIndexTuple(Vec<usize>),
    #[error("only available for a single equation (found {0})")]
    NeedsHypersurface(usize),
    #[error(transparent)]
    Multivec(#[from] MultivecError),
    #[error(transparent)]
    Schouten(#[from] SchoutenError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

impl PoissonError {
    /// True when the failure is an obstruction rather than bad input.
    pub fn is_obstruction(&self) -> bool {
        match self {
            PoissonError::Obstructed(_) => true,
            PoissonError::AtOrder { source, .. } => source.is_obstruction(),
            _ => false,
        }
    }

    fn at(self, order: usize) -> PoissonError {
        match self {
            e @ PoissonError::AtOrder { .. } => e,
            e => PoissonError::AtOrder {
                order,
                source: Box::new(e),
            },
        }
    }
}

/// Totally antisymmetric tensor on coordinate indices (0-based) with
/// polynomial values, stored on increasing tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntisymmetricTensor {
    arity: usize,
    nvars: usize,
    values: BTreeMap<Vec<usize>, Poly>,
}

/// `p_{i j k_1 .. k_m}`: arity `2 + m`.
pub type PTensor = AntisymmetricTensor;
/// `q_{i j k l}`: arity `3 + m`.
pub type QTensor = AntisymmetricTensor;

impl AntisymmetricTensor {
    pub fn new(arity: usize, nvars: usize) -> Self {
        AntisymmetricTensor {
            arity,
            nvars,
            values: BTreeMap::new(),
        }
    }

    /// Levi-Civita symbol on `n` indices, times `c`.
    pub fn levi_civita(n: usize, c: Poly) -> Self {
        let mut t = Self::new(n, n);
        t.add(&(0..n).collect::<Vec<_>>(), c).expect("valid tuple");
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Adds `value` at `indices` in any order, with the permutation sign.
    pub fn add(&mut self, indices: &[usize], value: Poly) -> Result<(), PoissonError> {
        if indices.len() != self.arity {
            return Err(PoissonError::ArityMismatch {
                expected: self.arity,
                found: indices.len(),
            });
        }
        if indices.iter().any(|&i| i >= self.nvars) {
            return Err(PoissonError::BadIndexTuple(indices.to_vec()));
        }
        if value.nvars() != self.nvars {
            return Err(ArithError::ArityMismatch {
                expected: self.nvars,
                found: value.nvars(),
            }
            .into());
        }
        let (sorted, sign) =
            sort_sign(indices).ok_or_else(|| PoissonError::BadIndexTuple(indices.to_vec()))?;
        let v = if sign < 0 { -&value } else { value };
        let e = self
            .values
            .entry(sorted.clone())
            .or_insert_with(|| Poly::zero(v.nvars()));
        *e += &v;
        if e.is_zero() {
            self.values.remove(&sorted);
        }
        Ok(())
    }

    /// Value at any tuple; zero on repeated indices.
    pub fn get(&self, indices: &[usize]) -> Poly {
        match sort_sign(indices) {
            Some((sorted, sign)) => match self.values.get(&sorted) {
                Some(v) if sign < 0 => -v,
                Some(v) => v.clone(),
                None => Poly::zero(self.nvars),
            },
            None => Poly::zero(self.nvars),
        }
    }

    pub fn values(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.values
    }
}

/// Calls `visit(perm, sign)` for every permutation of `0..k`.
fn for_each_permutation(k: usize, mut visit: impl FnMut(&[usize], i32)) {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, sign: i32, visit: &mut dyn FnMut(&[usize], i32)) {
        let k = used.len();
        if cur.len() == k {
            visit(cur, sign);
            return;
        }
        for i in 0..k {
            if used[i] {
                continue;
            }
            // inversions added by placing i after the current prefix
            let inv = (0..i).filter(|&j| !used[j]).count() as u32;
            used[i] = true;
            cur.push(i);
            rec(cur, used, if inv % 2 == 0 { sign } else { -sign }, visit);
            cur.pop();
            used[i] = false;
        }
    }
    rec(&mut Vec::new(), &mut vec![false; k], 1, &mut visit);
}

fn check_p(p: &PTensor, h: &[Poly]) -> Result<usize, PoissonError> {
    if p.arity() != 2 + h.len() {
        return Err(PoissonError::ArityMismatch {
            expected: 2 + h.len(),
            found: p.arity(),
        });
    }
    let n = p.nvars();
    for g in h {
        if g.nvars() != n {
            return Err(ArithError::ArityMismatch {
                expected: n,
                found: g.nvars(),
            }
            .into());
        }
    }
    Ok(n)
}

/// `{f, g} = Σ p_{i j k_1..k_m} f'_i g'_j (h_1)'_{k_1} .. (h_m)'_{k_m}`.
pub fn bracket_from_p(p: &PTensor, h: &[Poly], f: &Poly, g: &Poly) -> Result<Poly, PoissonError> {
    let n = check_p(p, h)?;
    f.check_arity(g)?;
    if f.nvars() != n {
        return Err(ArithError::ArityMismatch {
            expected: n,
            found: f.nvars(),
        }
        .into());
    }
    let mut slots: Vec<Vec<Poly>> = vec![f.gradient(), g.gradient()];
    slots.extend(h.iter().map(|hj| hj.gradient()));
    let mut out = Poly::zero(n);
    for (idx, v) in p.values() {
        for_each_permutation(idx.len(), |perm, sign| {
            let mut term = v.clone();
            for (slot, &pi) in perm.iter().enumerate() {
                term = &term * &slots[slot][idx[pi]];
                if term.is_zero() {
                    return;
                }
            }
            if sign < 0 {
                out -= &term;
            } else {
                out += &term;
            }
        });
    }
    Ok(out)
}

/// The bivector `{x_i, x_j}` of a bracket, for evaluating it on arbitrary
/// polynomials without expanding `p` again.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTable {
    nvars: usize,
    entries: BTreeMap<(usize, usize), Poly>,
}

impl BracketTable {
    pub fn new(p: &PTensor, h: &[Poly]) -> Result<Self, PoissonError> {
        let n = check_p(p, h)?;
        let mut entries = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let b = bracket_from_p(p, h, &Poly::var(n, i), &Poly::var(n, j))?;
                if !b.is_zero() {
                    entries.insert((i, j), b);
                }
            }
        }
        Ok(BracketTable { nvars: n, entries })
    }

    pub fn get(&self, i: usize, j: usize) -> Poly {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.entries.get(&(i, j)).cloned().unwrap_or_else(|| Poly::zero(self.nvars)),
            std::cmp::Ordering::Greater => -&self.get(j, i),
            std::cmp::Ordering::Equal => Poly::zero(self.nvars),
        }
    }

    /// `{f, g} = Σ_{i<j} {x_i, x_j} (f'_i g'_j - f'_j g'_i)`.
    pub fn bracket(&self, f: &Poly, g: &Poly) -> Poly {
        let (df, dg) = (f.gradient(), g.gradient());
        let mut out = Poly::zero(self.nvars);
        for (&(i, j), t) in &self.entries {
            let minor = &(&df[i] * &dg[j]) - &(&df[j] * &dg[i]);
            if !minor.is_zero() {
                out += &(t * &minor);
            }
        }
        out
    }

    /// Jacobiator at `(x_i, x_j, x_k)`.
    pub fn jacobiator(&self, [i, j, k]: [usize; 3]) -> Poly {
        let x = |a: usize| Poly::var(self.nvars, a);
        let mut out = self.bracket(&self.get(i, j), &x(k));
        out += &self.bracket(&self.get(j, k), &x(i));
        out += &self.bracket(&self.get(k, i), &x(j));
        out
    }
}

/// Jacobiator of the bracket at `(x_i, x_j, x_k)`.
pub fn jacobi_defect(p: &PTensor, h: &[Poly], triple: [usize; 3]) -> Result<Poly, PoissonError> {
    let n = check_p(p, h)?;
    if triple.iter().any(|&i| i >= n) {
        return Err(PoissonError::BadIndexTuple(triple.to_vec()));
    }
    Ok(BracketTable::new(p, h)?.jacobiator(triple))
}

/// Weight shift `c` of the bracket: `{x_i, x_j}` has weight `w_i + w_j + c`.
/// `None` when the tensor is zero or not homogeneous.
pub fn bracket_weight_shift(p: &PTensor, h: &[Poly], w: &WeightSystem) -> Option<i64> {
    let dsum: i64 = h
        .iter()
        .map(|hj| hj.weight_of(w).ok().map(|d| d as i64))
        .sum::<Option<i64>>()?;
    let mut found = None;
    for (idx, v) in p.values() {
        let wv = v.weight_of(w).ok()? as i64;
        let c = wv + dsum - idx.iter().map(|&i| w.weights()[i] as i64).sum::<i64>();
        match found {
            None => found = Some(c),
            Some(f) if f != c => return None,
            _ => {}
        }
    }
    found
}

fn candidate_monomials(n: usize, weights: Option<(&WeightSystem, i64)>, degree_bound: u32) -> Vec<Monomial> {
    match weights {
        Some((w, target)) if target >= 0 => monomials_of_weight(w, target as u64),
        Some(_) => Vec::new(),
        None => monomials_up_to_degree(n, degree_bound),
    }
}

/// Decomposes the Jacobi defect of a hypersurface bracket as
/// `Jac(x_i, x_j, x_k) = h · Σ_l q_{ijkl} h'_l`.
///
/// With weights the unknown `q` is searched in its forced weight;
/// otherwise among polynomials of degree at most `degree_bound`.
pub fn solve_q(
    p: &PTensor,
    h: &[Poly],
    weights: Option<&WeightSystem>,
    degree_bound: u32,
) -> Result<QTensor, PoissonError> {
    if h.len() != 1 {
        return Err(PoissonError::NeedsHypersurface(h.len()));
    }
    let n = check_p(p, h)?;
    let hh = &h[0];
    let grad = hh.gradient();
    let triples = index_tuples(n, 3);
    let table = BracketTable::new(p, h)?;
    let mut quotients = Vec::new();
    let mut defects = Vec::new();
    for t in &triples {
        let triple = [t[0], t[1], t[2]];
        let defect = table.jacobiator(triple);
        defects.push(defect.clone());
        let e = match defect.exact_divide(hh) {
            Ok(e) => e,
            Err(ArithError::NotDivisible { remainder }) => {
                return Err(Obstruction::NotDivisible { triple, remainder }.into())
            }
            Err(e) => return Err(e.into()),
        };
        quotients.push(e);
    }
    let mut out = QTensor::new(4, n);
    if quotients.iter().all(|e| e.is_zero()) {
        return Ok(out);
    }
    let target = weights.and_then(|w| {
        let c = bracket_weight_shift(p, h, w)?;
        let d = hh.weight_of(w).ok()? as i64;
        Some((w, c, d))
    });
    let quads = index_tuples(n, 4);
    let triple_pos: BTreeMap<Vec<usize>, usize> =
        triples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    // coordinates: (triple, monomial)
    let mut index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let mut coord = |t: usize, m: &Monomial| {
        let next = index.len();
        *index.entry((t, m.clone())).or_insert(next)
    };
    let mut columns = Vec::new();
    let mut owners = Vec::new();
    for quad in &quads {
        let ws = target.map(|(w, c, d)| {
            let sum: i64 = quad.iter().map(|&i| w.weights()[i] as i64).sum();
            (w, sum + 2 * c - 2 * d)
        });
        for mono in candidate_monomials(n, ws, degree_bound) {
            let mut col = SparseVec::new();
            for (pos, &l) in quad.iter().enumerate() {
                let mut rest = quad.clone();
                rest.remove(pos);
                let mut ordered = rest.clone();
                ordered.push(l);
                let (_, sign) = sort_sign(&ordered).expect("distinct");
                let term = grad[l].mul_monomial(&mono, &Rational::from_integer(sign.into()));
                let t = triple_pos[&rest];
                for (m, c) in term.terms() {
                    col.add_entry(coord(t, m), c.clone());
                }
            }
            columns.push(col);
            owners.push((quad.clone(), mono));
        }
    }
    let mut rhs = SparseVec::new();
    for (t, e) in quotients.iter().enumerate() {
        for (m, c) in e.terms() {
            rhs.add_entry(coord(t, m), c.clone());
        }
    }
    let sol = linalg::solve(&columns, &rhs)
        .ok_or(Obstruction::NoSolutionWithinBound { order: 3 })?;
    for ((quad, mono), c) in owners.into_iter().zip(sol) {
        if !c.is_zero() {
            out.add(&quad, Poly::term(mono, c))?;
        }
    }
    // re-substitution, exactly as polynomials
    for (tr, defect) in triples.iter().zip(&defects) {
        let mut acc = Poly::zero(n);
        for l in 0..n {
            if tr.contains(&l) {
                continue;
            }
            let mut idx = tr.clone();
            idx.push(l);
            acc += &(&out.get(&idx) * &grad[l]);
        }
        if &acc * hh != *defect {
            return Err(Obstruction::ResidualNonzero { order: 3 }.into());
        }
    }
    Ok(out)
}

/// Reduced cochain of `p`, embedded in degree 0 of the algebra.
fn p_cochain(p: &PTensor, a: &KoszulData) -> Result<ReducedCochain, PoissonError> {
    check_p(p, a.equations())?;
    let mut c = ReducedCochain::new(2, a.nodd(), a.nvars());
    for (idx, v) in p.values() {
        c.add(idx, a.embed(v))?;
    }
    Ok(c)
}

/// Reduced-form bivector `π_2(x_i, x_j) = p(dx_i, dx_j, dh_1, .., dh_m)`;
/// checks `δπ_2 = 0`.
pub fn lift_pi2(p: &PTensor, algebra: Arc<KoszulData>) -> Result<Multivector, PoissonError> {
    let c = p_cochain(p, &algebra)?;
    let pi2 = from_reduced(&c, algebra)?;
    if !mv_differential(&pi2).is_zero() {
        return Err(Obstruction::ResidualNonzero { order: 2 }.into());
    }
    Ok(pi2)
}

/// `π_3(x_i, x_j, x_k) = -e · Σ_l q_{ijkl} h'_l`, zero on tuples with
/// an odd generator. The sign makes the order-3 residual vanish when `q`
/// solves [`solve_q`].
pub fn lift_pi3(q: &QTensor, algebra: Arc<KoszulData>) -> Result<Multivector, PoissonError> {
    if algebra.nodd() != 1 {
        return Err(PoissonError::NeedsHypersurface(algebra.nodd()));
    }
    if q.arity() != 4 || q.nvars() != algebra.nvars() {
        return Err(PoissonError::ArityMismatch {
            expected: 4,
            found: q.arity(),
        });
    }
    let e = algebra.generator(algebra.nvars());
    let sign = Rational::from_integer((-JACOBIATOR_SIGN).into());
    let mut c = ReducedCochain::new(3, 1, algebra.nvars());
    for (idx, v) in q.values() {
        c.add(idx, e.mul_poly(v).scale(&sign))?;
    }
    Ok(from_reduced(&c, algebra)?)
}

/// Basis of `Õ` in exterior degree `d`: weight-exact when `weight` is
/// given, otherwise all monomials of degree at most `degree_bound`.
fn value_basis(a: &KoszulData, d: usize, weight: Option<i64>, degree_bound: u32) -> Vec<DgaElement> {
    match (weight, a.weights()) {
        (Some(w), Some(_)) => {
            if w < 0 {
                return Vec::new();
            }
            a.weight_block_basis(d, w as u64).expect("weights declared")
        }
        _ => {
            let mut out = Vec::new();
            let m = a.nodd();
            for mask in 0u64..(1u64 << m) {
                let ext = ExteriorMonomial(mask);
                if ext.degree() != d {
                    continue;
                }
                for mono in monomials_up_to_degree(a.nvars(), degree_bound) {
                    out.push(DgaElement::monomial(Poly::term(mono, Rational::one()), ext, m));
                }
            }
            out
        }
    }
}

/// Solves `δπ_s = -½ Σ_{p+q=s+1} [π_p, π_q]` for `π_s`, after checking that
/// the right-hand side is `δ`-closed.
pub fn lift_order(
    pi: &HomotopyPoisson,
    s: usize,
    degree_bound: u32,
) -> Result<Multivector, PoissonError> {
    let a = pi.algebra().clone();
    let r = quadratic_term(pi, s);
    if !mv_differential(&r).is_zero() {
        return Err(Obstruction::ResidualNotClosed { order: s }.into());
    }
    if r.is_zero() {
        return Ok(Multivector::zero(a, s, 2)?);
    }
    let sp = SymbolSpace::of(&a)?;
    let weight = match r.weight() {
        Ok(w) => w,
        Err(MultivecError::NotWeightHomogeneous) => None,
        Err(e) => return Err(e.into()),
    };
    let mut index = DgaIndex::default();
    let mut columns = Vec::new();
    let mut owners = Vec::new();
    for tuple in sp.canonical_tuples(s) {
        let odd: usize = tuple.iter().map(|&g| sp.parity(g)).sum();
        let d = odd + s - 2;
        if d > a.nodd() {
            continue;
        }
        let vw = weight.map(|w| {
            w + tuple
                .iter()
                .map(|&g| a.generator_weight(g).expect("weights declared") as i64)
                .sum::<i64>()
        });
        for b in value_basis(&a, d, vw, degree_bound) {
            let e = Multivector::from_values(a.clone(), s, 2, [(tuple.clone(), b.clone())])?;
            columns.push(index.vectorize(mv_differential(&e).symbol()));
            owners.push((tuple.clone(), b));
        }
    }
    let rhs = index.vectorize(&(-r.symbol()));
    let sol = linalg::solve(&columns, &rhs)
        .ok_or(Obstruction::NoSolutionWithinBound { order: s })?;
    let mut table: BTreeMap<Vec<usize>, DgaElement> = BTreeMap::new();
    for ((tuple, b), c) in owners.into_iter().zip(sol) {
        if c.is_zero() {
            continue;
        }
        let slot = table.entry(tuple).or_insert_with(|| a.zero());
        *slot += &b.scale(&c);
    }
    let pis = Multivector::from_values(a, s, 2, table)?;
    let mut trial = pi.clone();
    trial.insert(pis.clone())?;
    if !mc_residual(&trial, s).is_zero() {
        return Err(Obstruction::ResidualNonzero { order: s }.into());
    }
    Ok(pis)
}

/// `π_2` from `p`, `π_3` from the defect decomposition (hypersurfaces) or
/// the generic solver, and `π_4..π_S` by [`lift_order`].
pub fn build_reduced_structure(
    p: &PTensor,
    algebra: Arc<KoszulData>,
    max_order: usize,
    degree_bound: u32,
) -> Result<HomotopyPoisson, PoissonError> {
    let mut pi = HomotopyPoisson::new(algebra.clone());
    let pi2 = lift_pi2(p, algebra.clone()).map_err(|e| e.at(2))?;
    pi.insert(pi2)?;
    if max_order >= 3 {
        let pi3 = if algebra.nodd() == 1 {
            let q = solve_q(p, algebra.equations(), algebra.weights(), degree_bound)
                .map_err(|e| e.at(3))?;
            lift_pi3(&q, algebra.clone()).map_err(|e| e.at(3))?
        } else {
            lift_order(&pi, 3, degree_bound).map_err(|e| e.at(3))?
        };
        pi.insert(pi3)?;
    }
    for s in 4..=max_order {
        let pis = lift_order(&pi, s, degree_bound).map_err(|e| e.at(s))?;
        pi.insert(pis)?;
    }
    let report = is_homotopy_poisson(&pi, max_order);
    if let Some(first) = report.entries.first() {
        return Err(PoissonError::from(Obstruction::ResidualNonzero { order: first.order }).at(first.order));
    }
    Ok(pi)
}
