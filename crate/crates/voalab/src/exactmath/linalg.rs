//! Sparse vectors/matrices over [`Scalar`] and deterministic Gaussian
//! elimination.
//!
//! Pivots are always chosen by lowest column index and, within a column, by
//! lowest row index — never by magnitude (there is no rounding to worry
//! about).  All downstream kernel bases, quotient dimensions and membership
//! certificates inherit their determinism from this choice.  Strata are small
//! enough that the elimination works on dense buffers internally; the sparse
//! types are the interchange format.

use super::Scalar;
use num_traits::{One, Zero};

/// Sorted, zero-free list of `(index, coefficient)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseVector {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVector {
    /// Build from unsorted entries; repeated indices are summed, zeros pruned.
    pub fn new(mut entries: Vec<(usize, Scalar)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, Scalar)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc += c,
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        SparseVector { entries: merged }
    }

    pub fn zero() -> Self {
        SparseVector { entries: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> Scalar {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn from_dense(row: &[Scalar]) -> Self {
        SparseVector {
            entries: row
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); dim];
        for (i, c) in &self.entries {
            assert!(*i < dim, "sparse entry {i} out of range {dim}");
            out[*i] = c.clone();
        }
        out
    }
}

/// Row-major sparse matrix with an explicit column count.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    pub rows: Vec<SparseVector>,
    pub ncols: usize,
}

impl SparseMatrix {
    pub fn new(rows: Vec<SparseVector>, ncols: usize) -> Self {
        for r in &rows {
            if let Some((i, _)) = r.entries().last() {
                assert!(*i < ncols, "row entry {i} out of range {ncols}");
            }
        }
        SparseMatrix { rows, ncols }
    }

    fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.rows.iter().map(|r| r.to_dense(self.ncols)).collect()
    }
}

/// Reduced row echelon form, in place.  Returns the list of pivot columns in
/// increasing order.  Deterministic: columns are visited left to right and the
/// first row carrying a nonzero entry becomes the pivot row.
fn rref(m: &mut [Vec<Scalar>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next_row = 0usize;
    for col in 0..ncols {
        if next_row >= m.len() {
            break;
        }
        let Some(p) = (next_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(next_row, p);
        let inv = {
            let lead = m[next_row][col].clone();
            Scalar::one() / lead
        };
        for c in col..ncols {
            let v = m[next_row][c].clone() * inv.clone();
            m[next_row][c] = v;
        }
        for r in 0..m.len() {
            if r != next_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..ncols {
                    let delta = factor.clone() * m[next_row][c].clone();
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        next_row += 1;
    }
    pivots
}

/// Rank of the row span.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut dense = m.to_dense();
    rref(&mut dense, m.ncols).len()
}

/// Basis of the right kernel `{ v : M v = 0 }`, one vector per free column,
/// in increasing free-column order.  The representative for free column `f`
/// has coefficient 1 at `f` and `-RREF[r][f]` at each pivot column.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVector> {
    let mut dense = m.to_dense();
    let pivots = rref(&mut dense, m.ncols);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for f in 0..m.ncols {
        if pivot_set.contains(&f) {
            continue;
        }
        let mut entries = vec![(f, Scalar::one())];
        for (r, &pc) in pivots.iter().enumerate() {
            let c = &dense[r][f];
            if !c.is_zero() {
                entries.push((pc, -c.clone()));
            }
        }
        basis.push(SparseVector::new(entries));
    }
    basis
}

/// Solve `sum_i x_i g_i = v` for the generators `gens`, all living in a
/// coordinate space of dimension `dim`.  Returns the deterministic particular
/// solution with every free variable set to zero, or `None` when `v` is not in
/// the span.
pub fn span_membership(
    v: &SparseVector,
    gens: &[SparseVector],
    dim: usize,
) -> Option<Vec<Scalar>> {
    // Columns are the generators, plus v as the augmented right-hand side.
    let ncols = gens.len() + 1;
    let mut dense = vec![vec![Scalar::zero(); ncols]; dim];
    for (j, g) in gens.iter().enumerate() {
        for (i, c) in g.entries() {
            assert!(*i < dim, "generator entry out of range");
            dense[*i][j] = c.clone();
        }
    }
    for (i, c) in v.entries() {
        assert!(*i < dim, "target entry out of range");
        dense[*i][gens.len()] = c.clone();
    }
    let pivots = rref(&mut dense, ncols);
    if pivots.contains(&gens.len()) {
        return None; // inconsistent: pivot in the augmented column
    }
    let mut x = vec![Scalar::zero(); gens.len()];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = dense[r][gens.len()].clone();
    }
    Some(x)
}

/// Incrementally maintained row space: feed vectors one at a time and learn
/// which of them enlarge the span.  Deterministic given insertion order.
pub struct SpanBuilder {
    dim: usize,
    /// Reduced rows, each paired with its pivot column, kept pivot-ascending.
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl SpanBuilder {
    pub fn new(dim: usize) -> Self {
        SpanBuilder { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current rows; if a nonzero remainder survives,
    /// absorb it and return true.
    pub fn insert(&mut self, v: &SparseVector) -> bool {
        let mut dense = v.to_dense(self.dim);
        for (pivot, row) in &self.rows {
            let c = dense[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for j in *pivot..self.dim {
                let d = c.clone() * row[j].clone();
                dense[j] -= d;
            }
        }
        let Some(pivot) = dense.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = Scalar::one() / dense[pivot].clone();
        for c in dense.iter_mut() {
            *c *= inv.clone();
        }
        let pos = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(pos, (pivot, dense));
        true
    }

    /// Whether `v` already lies in the span (without absorbing it).
    pub fn contains(&self, v: &SparseVector) -> bool {
        let mut dense = v.to_dense(self.dim);
        for (pivot, row) in &self.rows {
            let c = dense[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for j in *pivot..self.dim {
                let d = c.clone() * row[j].clone();
                dense[j] -= d;
            }
        }
        dense.iter().all(Zero::is_zero)
    }
}

/// Apply the matrix to a vector (used by tests to certify kernels).
pub fn mat_vec(m: &SparseMatrix, v: &SparseVector) -> SparseVector {
    let dense_v = v.to_dense(m.ncols);
    let entries = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut acc = Scalar::zero();
            for (j, c) in row.entries() {
                acc += c.clone() * dense_v[*j].clone();
            }
            (i, acc)
        })
        .collect();
    SparseVector::new(entries)
}
