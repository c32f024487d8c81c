//! Sparse exact linear algebra over ℚ.
//!
//! Vectors are maps from coordinate index to nonzero rational. Echelon
//! forms pivot on the smallest coordinate index, so results depend only on
//! the order in which callers number their coordinates and insert vectors.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::scalar::Q;

pub type SparseVec = BTreeMap<usize, Q>;

/// `y += c·x`, dropping zeros.
pub fn axpy(y: &mut SparseVec, c: &Q, x: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (i, v) in x {
        let e = y.entry(*i).or_insert_with(Q::zero);
        *e += c * v;
        if e.is_zero() {
            y.remove(i);
        }
    }
}

pub fn scale(x: &SparseVec, c: &Q) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    x.iter().map(|(i, v)| (*i, v * c)).collect()
}

/// Row echelon form that remembers, for every stored row, which
/// combination of the inserted vectors produced it.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    /// pivot -> (row with leading 1 at pivot, combination of inputs)
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors inserted so far; the next one gets this label.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduce `v` against the stored rows. Returns the residual and the
    /// combination `c` of inputs with `v − residual = Σ c_j input_j`.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut r = v.clone();
        let mut combo = SparseVec::new();
        loop {
            // smallest coordinate of r that is a pivot
            let hit = r.iter().find(|(i, _)| self.rows.contains_key(i)).map(|(i, c)| (*i, c.clone()));
            let Some((p, c)) = hit else {
                break;
            };
            let (row, rc) = &self.rows[&p];
            axpy(&mut r, &-c.clone(), row);
            axpy(&mut combo, &c, rc);
        }
        (r, combo)
    }

    /// Insert `v` with label `self.inserted()`. Returns `None` if `v` was
    /// independent, otherwise the kernel relation it creates (coefficients
    /// over input labels, with coefficient 1 on the new label).
    pub fn insert(&mut self, v: &SparseVec) -> Option<SparseVec> {
        let label = self.inserted;
        self.inserted += 1;
        let (r, combo) = self.reduce(v);
        let mut own = SparseVec::new();
        own.insert(label, Q::from_integer(1.into()));
        // v − Σ combo = r, so r corresponds to own − combo
        axpy(&mut own, &Q::from_integer((-1).into()), &combo);
        let Some((&p, lead)) = r.iter().next() else {
            return Some(own);
        };
        let inv = lead.recip();
        let row = scale(&r, &inv);
        let rc = scale(&own, &inv);
        // keep rows fully reduced at existing pivots is unnecessary: reduce()
        // loops until no pivot remains
        self.rows.insert(p, (row, rc));
        None
    }
}

/// A solution `x` of `Σ x_j columns_j = b`, if one exists.
pub fn solve(columns: &[SparseVec], b: &SparseVec) -> Option<SparseVec> {
    let mut e = Echelon::new();
    for c in columns {
        e.insert(c);
    }
    let (r, combo) = e.reduce(b);
    r.is_empty().then_some(combo)
}

/// A basis of `{x : Σ x_j columns_j = 0}`.
pub fn kernel(columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    columns.iter().filter_map(|c| e.insert(c)).collect()
}

/// `Σ x_j columns_j`.
pub fn combine(columns: &[SparseVec], x: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (j, c) in x {
        axpy(&mut out, c, &columns[*j]);
    }
    out
}

/// Dimension of the span of `vs`.
pub fn rank(vs: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v);
    }
    e.rank()
}
