//! Exact sparse linear algebra over Q: incremental echelon bases, ranks,
//! normal forms modulo a row space, and particular solutions of linear
//! systems.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::Rational;

/// Sparse vector indexed by coordinate; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec(BTreeMap<usize, Rational>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(BTreeMap::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Rational {
        self.0.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_entry(&mut self, i: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(i) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.0.iter().map(|(i, c)| (*i, c))
    }

    pub fn first(&self) -> Option<(usize, &Rational)> {
        self.0.iter().next().map(|(i, c)| (*i, c))
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: &Rational, other: &SparseVec) {
        if c.is_zero() {
            return;
        }
        for (i, v) in &other.0 {
            self.add_entry(*i, c * v);
        }
    }

    pub fn scale(&mut self, c: &Rational) {
        if c.is_zero() {
            self.0.clear();
        } else {
            for v in self.0.values_mut() {
                *v *= c;
            }
        }
    }
}

impl FromIterator<(usize, Rational)> for SparseVec {
    fn from_iter<I: IntoIterator<Item = (usize, Rational)>>(iter: I) -> Self {
        let mut v = SparseVec::new();
        for (i, c) in iter {
            v.add_entry(i, c);
        }
        v
    }
}

#[derive(Clone, Debug)]
struct EchelonRow {
    vec: SparseVec,
    combo: SparseVec,
}

/// Row-echelon basis of a growing subspace. Each stored row has its pivot
/// (lowest nonzero index) normalized to 1, and no two rows share a pivot.
/// Optionally tracks every row as a combination of the inserted vectors.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, EchelonRow>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    fn reduce_tracked(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut r = v.clone();
        let mut combo = SparseVec::new();
        // Rows only touch coordinates at or beyond their pivot, so a single
        // sweep in increasing pivot order clears every pivot coordinate.
        let mut cursor = 0usize;
        loop {
            let next = r.0.range(cursor..).find(|(i, _)| self.rows.contains_key(i));
            let (i, c) = match next {
                Some((i, c)) => (*i, c.clone()),
                None => break,
            };
            let row = &self.rows[&i];
            let neg = -c.clone();
            r.axpy(&neg, &row.vec);
            combo.axpy(&c, &row.combo);
            cursor = i + 1;
        }
        (r, combo)
    }

    /// Normal form of `v` modulo the row space: zero at every pivot.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns `true` when it enlarged the space.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let (mut r, combo) = self.reduce_tracked(v);
        let (pivot, lead) = match r.first() {
            Some((i, c)) => (i, c.clone()),
            None => return false,
        };
        // combo expresses v - r; the new row is r = v - combo.
        let mut row_combo = SparseVec::new();
        row_combo.add_entry(index, Rational::one());
        row_combo.axpy(&-Rational::one(), &combo);
        let inv = Rational::one() / lead;
        r.scale(&inv);
        row_combo.scale(&inv);
        self.rows.insert(
            pivot,
            EchelonRow {
                vec: r,
                combo: row_combo,
            },
        );
        true
    }

    /// Writes `v` as a combination of the inserted vectors, if it lies in
    /// their span. Vectors that were dependent at insertion time get
    /// coefficient zero.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let (r, combo) = self.reduce_tracked(v);
        r.is_zero().then_some(combo)
    }
}

/// Rank of the span of `vectors`.
pub fn rank<'a>(vectors: impl IntoIterator<Item = &'a SparseVec>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Finds `u` with `Σ u_k columns[k] = rhs`, preferring earlier columns
/// (later dependent columns receive zero). Returns `None` when `rhs` is not
/// in the column span.
pub fn solve(columns: &[SparseVec], rhs: &SparseVec) -> Option<Vec<Rational>> {
    let mut e = Echelon::new();
    for c in columns {
        e.insert(c);
    }
    let combo = e.express(rhs)?;
    let mut out = vec![Rational::zero(); columns.len()];
    for (i, c) in combo.iter() {
        out[i] = c.clone();
    }
    Some(out)
}
