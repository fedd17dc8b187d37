//! Milnor algebras and the canonical homology of Kähler forms over
//! `O = Q[x]/(h_1..h_m)` with a bracket given by a `p` tensor, computed one
//! weight block at a time.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use thiserror::Error;

use crate::arith::linalg::{Echelon, SparseVec};
use crate::arith::{monomials_of_weight, ArithError, Monomial, Poly, Rational, WeightSystem};
use crate::dgalgebra::KoszulData;
use crate::multivec::{index_tuples, sort_sign};
use crate::poisson::{bracket_weight_shift, BracketTable, PTensor, PoissonError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HomologyError {
    #[error("the Milnor algebra has not stabilized below weight {ceiling}; likely infinite-dimensional")]
    InfiniteDimensional { ceiling: u64 },
    #[error("a weight system is required")]
    NoWeights,
    #[error("the bracket is not weight-homogeneous")]
    InhomogeneousBracket,
    #[error("the bracket does not preserve the relations of Ω(O) in block (k={k}, w={w})")]
    BracketDoesNotDescend { k: usize, w: u64 },
    #[error("form degree must be at least 1")]
    ZeroDegree,
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `Q[x]/(∂h/∂x_1, .., ∂h/∂x_n)` with a monomial basis per weight.
#[derive(Clone, Debug, PartialEq)]
pub struct MilnorAlgebra {
    pub h: Poly,
    pub weights: WeightSystem,
    /// Standard monomials per weight, only nonempty blocks.
    pub blocks: BTreeMap<u64, Vec<Monomial>>,
    /// Smallest weight from which all blocks vanish.
    pub stabilized_at: u64,
}

impl MilnorAlgebra {
    pub fn mu(&self) -> usize {
        self.blocks.values().map(Vec::len).sum()
    }

    pub fn basis(&self) -> Vec<Monomial> {
        self.blocks.values().flatten().cloned().collect()
    }
}

/// Reduces `(generators restricted to one weight)` and returns the
/// monomials of `target` weight not hit by a pivot. Coordinates are
/// assigned in decreasing grlex order, so pivots are leading monomials.
fn standard_monomials(monos: &[Monomial], relations: &[Poly]) -> Vec<Monomial> {
    let index: HashMap<&Monomial, usize> = monos.iter().rev().enumerate().map(|(i, m)| (m, i)).collect();
    let mut ech = Echelon::new();
    for r in relations {
        let v: SparseVec = r.terms().map(|(m, c)| (index[m], c.clone())).collect();
        ech.insert(&v);
    }
    let order: Vec<&Monomial> = monos.iter().rev().collect();
    let mut out: Vec<Monomial> = (0..order.len())
        .filter(|i| !ech.is_pivot(*i))
        .map(|i| order[i].clone())
        .collect();
    out.sort();
    out
}

/// Milnor algebra of a quasi-homogeneous `h`. Blocks are computed in
/// increasing weight until `max(3, max w_i)` consecutive blocks vanish,
/// which forces all higher blocks to vanish.
pub fn milnor_algebra(h: &Poly, w: &WeightSystem, ceiling: u64) -> Result<MilnorAlgebra, HomologyError> {
    if w.len() != h.nvars() {
        return Err(ArithError::ArityMismatch {
            expected: h.nvars(),
            found: w.len(),
        }
        .into());
    }
    let d = h.weight_of(w)?;
    let grad = h.gradient();
    let window = w.max_weight().max(3);
    let mut blocks = BTreeMap::new();
    let mut zeros = 0u64;
    let mut wt = 0u64;
    loop {
        if wt > ceiling {
            return Err(HomologyError::InfiniteDimensional { ceiling });
        }
        let monos = monomials_of_weight(w, wt);
        let mut rels = Vec::new();
        for (i, g) in grad.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let gw = d - w.weights()[i];
            if gw > wt {
                continue;
            }
            for m in monomials_of_weight(w, wt - gw) {
                rels.push(g.mul_monomial(&m, &Rational::one()));
            }
        }
        let basis = standard_monomials(&monos, &rels);
        if basis.is_empty() {
            zeros += 1;
            if zeros >= window {
                return Ok(MilnorAlgebra {
                    h: h.clone(),
                    weights: w.clone(),
                    blocks,
                    stabilized_at: wt + 1 - zeros,
                });
            }
        } else {
            zeros = 0;
            blocks.insert(wt, basis);
        }
        wt += 1;
    }
}

/// A differential form `Σ g_I dx_I` with polynomial coefficients, `I`
/// strictly increasing; a representative of a class in `Ω^k(O)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KahlerForm {
    degree: usize,
    nvars: usize,
    terms: BTreeMap<Vec<usize>, Poly>,
}

impl KahlerForm {
    pub fn zero(degree: usize, nvars: usize) -> Self {
        KahlerForm {
            degree,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(f: Poly) -> Self {
        let mut out = Self::zero(0, f.nvars());
        out.add_term(&[], f);
        out
    }

    /// `f · dx_{i_1} ∧ .. ∧ dx_{i_k}` with the indices in any order.
    pub fn monomial_form(f: Poly, idx: &[usize]) -> Self {
        let mut out = Self::zero(idx.len(), f.nvars());
        out.add_term(idx, f);
        out
    }

    /// `df = Σ ∂_i f dx_i`.
    pub fn exact(f: &Poly) -> Self {
        let mut out = Self::zero(1, f.nvars());
        for (i, g) in f.gradient().into_iter().enumerate() {
            out.add_term(&[i], g);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.terms
    }

    pub fn add_term(&mut self, idx: &[usize], f: Poly) {
        let Some((sorted, sign)) = sort_sign(idx) else { return };
        let f = if sign < 0 { -&f } else { f };
        let e = self
            .terms
            .entry(sorted.clone())
            .or_insert_with(|| Poly::zero(f.nvars()));
        *e += &f;
        if e.is_zero() {
            self.terms.remove(&sorted);
        }
    }

    pub fn add(&mut self, other: &KahlerForm) {
        for (idx, f) in &other.terms {
            self.add_term(idx, f.clone());
        }
    }

    pub fn scale_poly(&self, g: &Poly) -> KahlerForm {
        let mut out = Self::zero(self.degree, self.nvars);
        for (idx, f) in &self.terms {
            out.add_term(idx, f * g);
        }
        out
    }

    pub fn wedge(&self, other: &KahlerForm) -> KahlerForm {
        let mut out = Self::zero(self.degree + other.degree, self.nvars);
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                let mut idx = a.clone();
                idx.extend(b);
                out.add_term(&idx, f * g);
            }
        }
        out
    }

    /// Splits into weight-homogeneous parts (`w(g dx_I) = w(g) + Σ w_i`).
    pub fn weight_components(&self, w: &WeightSystem) -> BTreeMap<u64, KahlerForm> {
        let mut out: BTreeMap<u64, KahlerForm> = BTreeMap::new();
        for (idx, f) in &self.terms {
            let base: u64 = idx.iter().map(|&i| w.weights()[i]).sum();
            for (m, c) in f.terms() {
                out.entry(base + m.weight(w))
                    .or_insert_with(|| KahlerForm::zero(self.degree, self.nvars))
                    .add_term(idx, Poly::term(m.clone(), c.clone()));
            }
        }
        out
    }
}

/// Brylinski boundary on representatives:
/// `∂(f_0 df_1 ∧ .. ∧ df_k) = Σ_i (-1)^{i+1} {f_0, f_i} df_1 ..î.. df_k
///  + Σ_{i<j} (-1)^{i+j} f_0 d{f_i, f_j} ∧ df_1 ..î..ĵ.. df_k`.
pub fn brylinski_boundary(
    form: &KahlerForm,
    p: &PTensor,
    h: &[Poly],
) -> Result<KahlerForm, HomologyError> {
    let n = form.nvars;
    let mut out = KahlerForm::zero(form.degree.saturating_sub(1), n);
    if form.degree == 0 {
        return Ok(out);
    }
    let x: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
    let table = BracketTable::new(p, h)?;
    for (idx, f0) in &form.terms {
        let k = idx.len();
        for i in 0..k {
            let b = table.bracket(f0, &x[idx[i]]);
            if b.is_zero() {
                continue;
            }
            let rest: Vec<usize> = idx.iter().enumerate().filter(|(t, _)| *t != i).map(|(_, &v)| v).collect();
            let b = if i % 2 == 0 { b } else { -&b };
            out.add_term(&rest, b);
        }
        for i in 0..k {
            for j in i + 1..k {
                let bij = &table.get(idx[i], idx[j]);
                if bij.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| *t != i && *t != j)
                    .map(|(_, &v)| v)
                    .collect();
                // 1-based exponent i + j has the parity of the 0-based one
                let sign_neg = (i + j) % 2 == 1;
                let mut term = KahlerForm::exact(bij).wedge(&KahlerForm::monomial_form(f0.clone(), &rest));
                if sign_neg {
                    term = term.scale_poly(&Poly::from_int(n, -1));
                }
                out.add(&term);
            }
        }
    }
    Ok(out)
}

/// One weight block `(k, w)` of `Ω^k(O)`: the free module coordinates, the
/// relation space spanned by `h_j Ω^k` and `dh_j ∧ Ω^{k-1}`, and the
/// coordinates that form a basis of the quotient.
#[derive(Clone, Debug)]
pub struct WeightBlock {
    pub k: usize,
    pub w: u64,
    coords: Vec<(Vec<usize>, Monomial)>,
    index: HashMap<(Vec<usize>, Monomial), usize>,
    relations: Echelon,
    quotient: Vec<usize>,
}

impl WeightBlock {
    pub fn dim(&self) -> usize {
        self.quotient.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates of a weight-`w` form of degree `k`.
    fn vectorize(&self, f: &KahlerForm) -> SparseVec {
        let mut v = SparseVec::new();
        for (idx, g) in f.terms() {
            for (m, c) in g.terms() {
                let i = self.index[&(idx.clone(), m.clone())];
                v.add_entry(i, c.clone());
            }
        }
        v
    }

    pub fn normal_form(&self, f: &KahlerForm) -> SparseVec {
        self.relations.reduce(&self.vectorize(f))
    }

    /// Representatives of the quotient basis.
    pub fn basis_forms(&self, nvars: usize) -> Vec<KahlerForm> {
        self.quotient
            .iter()
            .map(|&i| {
                let (idx, m) = &self.coords[i];
                KahlerForm::monomial_form(Poly::term(m.clone(), Rational::one()), idx)
                    .resized(nvars)
            })
            .collect()
    }
}

impl KahlerForm {
    fn resized(mut self, nvars: usize) -> Self {
        self.nvars = nvars;
        self
    }
}

/// The canonical complex `(Ω^*(O), ∂)` by weight blocks.
pub struct CanonicalComplex<'a> {
    algebra: &'a KoszulData,
    p: &'a PTensor,
    shift: i64,
    blocks: BTreeMap<(usize, u64), WeightBlock>,
}

impl<'a> CanonicalComplex<'a> {
    pub fn new(algebra: &'a KoszulData, p: &'a PTensor) -> Result<Self, HomologyError> {
        let w = algebra.weights().ok_or(HomologyError::NoWeights)?;
        let shift = if p.is_zero() {
            0
        } else {
            bracket_weight_shift(p, algebra.equations(), w).ok_or(HomologyError::InhomogeneousBracket)?
        };
        Ok(CanonicalComplex {
            algebra,
            p,
            shift,
            blocks: BTreeMap::new(),
        })
    }

    /// `∂` maps block `(k, w)` to `(k - 1, w + shift)`.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    fn weights(&self) -> &WeightSystem {
        self.algebra.weights().expect("checked in new")
    }

    pub fn block(&mut self, k: usize, w: u64) -> &WeightBlock {
        if !self.blocks.contains_key(&(k, w)) {
            let b = self.build_block(k, w);
            self.blocks.insert((k, w), b);
        }
        &self.blocks[&(k, w)]
    }

    fn build_block(&self, k: usize, w: u64) -> WeightBlock {
        let ws = self.weights();
        let n = self.algebra.nvars();
        let mut coords = Vec::new();
        let subsets = if k <= n { index_tuples(n, k) } else { Vec::new() };
        for idx in &subsets {
            let base: u64 = idx.iter().map(|&i| ws.weights()[i]).sum();
            if base > w {
                continue;
            }
            let mut monos = monomials_of_weight(ws, w - base);
            monos.reverse();
            for m in monos {
                coords.push((idx.clone(), m));
            }
        }
        let index: HashMap<(Vec<usize>, Monomial), usize> =
            coords.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let mut block = WeightBlock {
            k,
            w,
            coords,
            index,
            relations: Echelon::new(),
            quotient: Vec::new(),
        };
        let mut rels = Vec::new();
        for (j, h) in self.algebra.equations().iter().enumerate() {
            let d = self.algebra.equation_weight(j).expect("weights declared");
            // h_j · m dx_I
            for idx in &subsets {
                let base: u64 = idx.iter().map(|&i| ws.weights()[i]).sum();
                if base + d > w {
                    continue;
                }
                for m in monomials_of_weight(ws, w - base - d) {
                    let f = h.mul_monomial(&m, &Rational::one());
                    rels.push(KahlerForm::monomial_form(f, idx));
                }
            }
            // dh_j ∧ m dx_J
            if k >= 1 {
                let dh = KahlerForm::exact(h);
                for idx in index_tuples(n, k - 1) {
                    let base: u64 = idx.iter().map(|&i| ws.weights()[i]).sum();
                    if base + d > w {
                        continue;
                    }
                    for m in monomials_of_weight(ws, w - base - d) {
                        let f = Poly::term(m, Rational::one());
                        rels.push(dh.wedge(&KahlerForm::monomial_form(f, &idx)));
                    }
                }
            }
        }
        for r in &rels {
            let v = block.vectorize(r);
            block.relations.insert(&v);
        }
        block.quotient = (0..block.coords.len())
            .filter(|&i| !block.relations.is_pivot(i))
            .collect();
        block
    }

    fn target_weight(&self, w: u64) -> Option<u64> {
        let t = w as i64 + self.shift;
        (t >= 0).then_some(t as u64)
    }

    /// Normal forms of `∂` of the quotient basis of block `(k, w)`, or
    /// `None` when the target weight is negative (so the map is zero).
    fn boundary_images(&mut self, k: usize, w: u64) -> Result<Vec<SparseVec>, HomologyError> {
        let n = self.algebra.nvars();
        if k == 0 {
            return Ok(Vec::new());
        }
        let forms = self.block(k, w).basis_forms(n);
        let Some(tw) = self.target_weight(w) else {
            return Ok(vec![SparseVec::new(); forms.len()]);
        };
        let (p, h) = (self.p, self.algebra.equations());
        let images: Vec<KahlerForm> = forms
            .iter()
            .map(|f| brylinski_boundary(f, p, h))
            .collect::<Result<_, _>>()?;
        let target = self.block(k - 1, tw);
        Ok(images.iter().map(|f| target.normal_form(f)).collect())
    }

    /// Checks `∂(relations) ⊂ relations` on block `(k, w)`.
    pub fn check_descends(&mut self, k: usize, w: u64) -> Result<(), HomologyError> {
        if k == 0 || self.p.is_zero() {
            return Ok(());
        }
        let Some(tw) = self.target_weight(w) else { return Ok(()) };
        let (p, h) = (self.p, self.algebra.equations());
        let n = self.algebra.nvars();
        let block = self.block(k, w).clone();
        let target = self.block(k - 1, tw).clone();
        // pivot rows of the relation space are a basis of it
        for piv in block.relations.pivots().collect::<Vec<_>>() {
            let form = self.relation_form(&block, piv, n);
            let img = brylinski_boundary(&form, p, h)?;
            if !target.normal_form(&img).is_zero() {
                return Err(HomologyError::BracketDoesNotDescend { k, w });
            }
        }
        Ok(())
    }

    fn relation_form(&self, block: &WeightBlock, pivot: usize, n: usize) -> KahlerForm {
        // the relation row with this pivot: e_pivot - normal_form(e_pivot)
        let mut e = SparseVec::new();
        e.add_entry(pivot, Rational::one());
        let nf = block.relations.reduce(&e);
        let mut row = e;
        row.axpy(&-Rational::one(), &nf);
        let mut out = KahlerForm::zero(block.k, n);
        for (i, c) in row.iter() {
            let (idx, m) = &block.coords[i];
            out.add_term(idx, Poly::term(m.clone(), c.clone()));
        }
        out
    }

    /// Rank of `∂: (k, w) → (k - 1, w + shift)` on the quotient.
    pub fn boundary_rank(&mut self, k: usize, w: u64) -> Result<usize, HomologyError> {
        let imgs = self.boundary_images(k, w)?;
        let mut e = Echelon::new();
        for v in &imgs {
            e.insert(v);
        }
        Ok(e.rank())
    }

    /// `dim H_k` in weight `w`.
    pub fn homology_dim(&mut self, k: usize, w: u64) -> Result<usize, HomologyError> {
        let dim = self.block(k, w).dim();
        let out_rank = self.boundary_rank(k, w)?;
        let in_rank = match w as i64 - self.shift {
            src if src >= 0 => self.boundary_rank(k + 1, src as u64)?,
            _ => 0,
        };
        Ok(dim - out_rank - in_rank)
    }

    /// True when `∂∂` vanishes on every quotient basis element of `(k, w)`.
    pub fn boundary_squares_to_zero(&mut self, k: usize, w: u64) -> Result<bool, HomologyError> {
        if k < 2 {
            return Ok(true);
        }
        let n = self.algebra.nvars();
        let Some(t1) = self.target_weight(w) else { return Ok(true) };
        let Some(t2) = self.target_weight(t1) else { return Ok(true) };
        let forms = self.block(k, w).basis_forms(n);
        let (p, h) = (self.p, self.algebra.equations());
        let target = self.block(k - 2, t2).clone();
        for f in forms {
            let once = brylinski_boundary(&f, p, h)?;
            let twice = brylinski_boundary(&once, p, h)?;
            if !target.normal_form(&twice).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Homology dimensions per `(k, w)` and their weight-truncated totals.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalHomology {
    pub rows: Vec<(usize, u64, usize)>,
    pub totals: Vec<(usize, usize)>,
    pub shift: i64,
}

/// Dimensions of `H^can_k` in weights `0..=w_max` for `k` in `k_range`.
pub fn canonical_homology_dims(
    algebra: &KoszulData,
    p: &PTensor,
    k_range: std::ops::RangeInclusive<usize>,
    w_max: u64,
) -> Result<CanonicalHomology, HomologyError> {
    let mut cx = CanonicalComplex::new(algebra, p)?;
    let mut rows = Vec::new();
    let mut totals = Vec::new();
    for k in k_range {
        let mut total = 0;
        for w in 0..=w_max {
            cx.check_descends(k, w)?;
            let d = cx.homology_dim(k, w)?;
            if d > 0 {
                rows.push((k, w, d));
            }
            total += d;
        }
        totals.push((k, total));
    }
    Ok(CanonicalHomology {
        rows,
        totals,
        shift: cx.shift(),
    })
}
