//! Binary sparsity patterns and values aligned to them.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::dense::{norm2, DenseMatrix};
use crate::error::{Error, Result};

/// A row-compressed binary pattern `S`.
///
/// Row `i` owns the slots `row_offsets[i]..row_offsets[i + 1]`; the column of
/// each slot is stored in `col_indices`, strictly increasing within a row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityPattern {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
}

impl SparsityPattern {
    /// Builds a pattern from per-row column lists. Each list is sorted here;
    /// duplicates and out-of-range columns are rejected.
    pub fn from_rows(n_cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let n_rows = rows.len();
        let mut row_offsets = Vec::with_capacity(n_rows + 1);
        let mut col_indices = Vec::new();
        row_offsets.push(0);
        for (i, mut cols) in rows.into_iter().enumerate() {
            cols.sort_unstable();
            for w in cols.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::invalid(format!(
                        "duplicate column {} in row {i}",
                        w[0]
                    )));
                }
            }
            if let Some(&last) = cols.last() {
                if last >= n_cols {
                    return Err(Error::invalid(format!(
                        "column {last} out of range in row {i} (n_cols = {n_cols})"
                    )));
                }
            }
            col_indices.extend(cols);
            row_offsets.push(col_indices.len());
        }
        Ok(SparsityPattern {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
        })
    }

    /// Builds a pattern from `(row, col)` pairs; repeated pairs are collapsed.
    pub fn from_entries(
        n_rows: usize,
        n_cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut rows = vec![BTreeSet::new(); n_rows];
        for (i, j) in entries {
            if i >= n_rows || j >= n_cols {
                return Err(Error::invalid(format!(
                    "entry ({i}, {j}) outside {n_rows}x{n_cols}"
                )));
            }
            rows[i].insert(j);
        }
        Self::from_rows(
            n_cols,
            rows.into_iter().map(|r| r.into_iter().collect()).collect(),
        )
    }

    fn from_predicate(n_rows: usize, n_cols: usize, keep: impl Fn(usize, usize) -> bool) -> Self {
        let rows = (0..n_rows)
            .map(|i| (0..n_cols).filter(|&j| keep(i, j)).collect())
            .collect();
        Self::from_rows(n_cols, rows).expect("predicate yields sorted in-range columns")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Total number of slots.
    pub fn nnz(&self) -> usize {
        self.col_indices.len()
    }

    /// Columns of row `i`, sorted.
    #[inline]
    pub fn row(&self, i: usize) -> &[usize] {
        &self.col_indices[self.row_offsets[i]..self.row_offsets[i + 1]]
    }

    #[inline]
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.row_offsets[i]..self.row_offsets[i + 1]
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_offsets[i + 1] - self.row_offsets[i]
    }

    /// `s`: the largest number of slots in any row.
    pub fn max_row_nnz(&self) -> usize {
        (0..self.n_rows).map(|i| self.row_nnz(i)).max().unwrap_or(0)
    }

    pub fn col_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_cols];
        for &j in &self.col_indices {
            deg[j] += 1;
        }
        deg
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    /// Slot index of `(i, j)`, if present.
    pub fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n_rows {
            return None;
        }
        self.row(i)
            .binary_search(&j)
            .ok()
            .map(|k| self.row_offsets[i] + k)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.slot(i, j).is_some()
    }

    /// Iterates `(row, col)` over all slots in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_rows).flat_map(move |i| self.row(i).iter().map(move |&j| (i, j)))
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    /// True when `(i, j)` is a slot exactly when `(j, i)` is.
    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.entries().all(|(i, j)| self.contains(j, i))
    }

    /// The 0/1 matrix of this pattern.
    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n_rows, self.n_cols);
        for (i, j) in self.entries() {
            m[(i, j)] = 1.0;
        }
        m
    }
}

/// Slot (i, i) for each i.
pub fn diagonal_pattern(d: usize) -> SparsityPattern {
    SparsityPattern::from_rows(d, (0..d).map(|i| vec![i]).collect()).expect("diagonal is valid")
}

/// Slots with `|i - j| <= b`; total bandwidth `2b + 1`.
pub fn banded_pattern(d: usize, b: usize) -> SparsityPattern {
    let rows = (0..d)
        .map(|i| (i.saturating_sub(b)..=(i + b).min(d.saturating_sub(1))).collect())
        .collect();
    SparsityPattern::from_rows(d, rows).expect("band is valid")
}

/// Slots with cyclic distance `min(|i-j|, d-|i-j|) <= b`: exactly `2b + 1` per row and column.
pub fn circulant_band_pattern(d: usize, b: usize) -> Result<SparsityPattern> {
    if d <= 2 * b {
        return Err(Error::invalid(format!(
            "circulant band needs d > 2b, got d = {d}, b = {b}"
        )));
    }
    Ok(SparsityPattern::from_predicate(d, d, |i, j| {
        let diff = i.abs_diff(j);
        diff.min(d - diff) <= b
    }))
}

/// Union of half-width-`b` bands centered on the diagonals at `±t` for each offset `t`.
///
/// A slot `(i, j)` is present when `|i - j - t| <= b` or `|i - j + t| <= b` for some
/// `t` in `offsets`. The main diagonal only appears if an offset admits it.
pub fn multiband_pattern(d: usize, offsets: &[usize], b: usize) -> Result<SparsityPattern> {
    if offsets.is_empty() {
        return Err(Error::invalid(
            "multiband pattern needs at least one offset",
        ));
    }
    let rows = (0..d)
        .map(|i| {
            let mut cols = BTreeSet::new();
            for &t in offsets {
                // centers at j = i - t and j = i + t
                for center in [i as i64 - t as i64, i as i64 + t as i64] {
                    let lo = (center - b as i64).max(0);
                    let hi = (center + b as i64).min(d as i64 - 1);
                    for j in lo..=hi {
                        cols.insert(j as usize);
                    }
                }
            }
            cols.into_iter().collect()
        })
        .collect();
    SparsityPattern::from_rows(d, rows)
}

/// Powers of two below `d`: `{1, 2, 4, ...}`.
pub fn power_of_two_offsets(d: usize) -> Vec<usize> {
    std::iter::successors(Some(1usize), |t| t.checked_mul(2))
        .take_while(|&t| t < d)
        .collect()
}

/// The `k^2 x k^2` pattern whose column-intersection graph is complete.
///
/// Row `p*k + i`, column `q*k + j` is a slot when `i == q` or `j == p`.
pub fn hard_coloring_pattern(k: usize) -> SparsityPattern {
    let d = k * k;
    SparsityPattern::from_predicate(d, d, |row, col| {
        let (p, i) = (row / k, row % k);
        let (q, j) = (col / k, col % k);
        i == q || j == p
    })
}

/// Dense `block x block` blocks along the diagonal.
pub fn block_diagonal_pattern(d: usize, block: usize) -> Result<SparsityPattern> {
    if block == 0 || d % block != 0 {
        return Err(Error::invalid(format!(
            "block size {block} does not divide d = {d}"
        )));
    }
    Ok(SparsityPattern::from_predicate(d, d, |i, j| {
        i / block == j / block
    }))
}

/// Values aligned one-to-one with the slots of a pattern; off-pattern entries are
/// structurally zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseApprox {
    pattern: Arc<SparsityPattern>,
    values: Vec<f64>,
}

impl SparseApprox {
    pub fn new(pattern: Arc<SparsityPattern>, values: Vec<f64>) -> Result<Self> {
        if values.len() != pattern.nnz() {
            return Err(Error::invalid(format!(
                "{} values for a pattern with {} slots",
                values.len(),
                pattern.nnz()
            )));
        }
        Ok(SparseApprox { pattern, values })
    }

    pub fn zeros(pattern: Arc<SparsityPattern>) -> Self {
        let values = vec![0.0; pattern.nnz()];
        SparseApprox { pattern, values }
    }

    pub fn pattern(&self) -> &Arc<SparsityPattern> {
        &self.pattern
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn row_values(&self, i: usize) -> &[f64] {
        &self.values[self.pattern.row_range(i)]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pattern.slot(i, j).map_or(0.0, |k| self.values[k])
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.pattern.n_rows(), self.pattern.n_cols());
        for ((i, j), &v) in self.pattern.entries().zip(&self.values) {
            m[(i, j)] = v;
        }
        m
    }

    /// Frobenius norm of the difference, over the shared pattern.
    pub fn distance(&self, other: &SparseApprox) -> Result<f64> {
        if self.pattern != other.pattern {
            return Err(Error::invalid("approximations have different patterns"));
        }
        let diff: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(norm2(&diff))
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.values)
    }
}

/// `S ∘ A` restricted to the pattern slots.
pub fn hadamard_mask(a: &DenseMatrix, pattern: &Arc<SparsityPattern>) -> Result<SparseApprox> {
    if a.shape() != (pattern.n_rows(), pattern.n_cols()) {
        return Err(Error::invalid(format!(
            "matrix is {}x{} but pattern is {}x{}",
            a.n_rows(),
            a.n_cols(),
            pattern.n_rows(),
            pattern.n_cols()
        )));
    }
    let values = pattern.entries().map(|(i, j)| a[(i, j)]).collect();
    SparseApprox::new(Arc::clone(pattern), values)
}
