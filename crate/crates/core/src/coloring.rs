//! Coloring (probing) baselines.
//!
//! Columns whose supports in the pattern are disjoint can share a query: a
//! vector supported on one color class reads every on-pattern entry of those
//! columns at once, provided `A` vanishes off the pattern.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::oracle::MatVecOracle;
use crate::pattern::{banded_pattern, SparseApprox, SparsityPattern};
use crate::random::{rademacher_vector, RandomSeed};
use crate::recover::RecoveryResult;

/// Undirected simple graph on the columns of a pattern; `i ~ j` when columns
/// `i` and `j` share a row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnGraph {
    adjacency: Vec<Vec<usize>>,
}

impl ColumnGraph {
    pub fn n_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }
}

pub fn column_intersection_graph(pattern: &SparsityPattern) -> ColumnGraph {
    let mut adjacency = vec![Vec::new(); pattern.n_cols()];
    for i in 0..pattern.n_rows() {
        let cols = pattern.row(i);
        for (k, &a) in cols.iter().enumerate() {
            for &b in &cols[k + 1..] {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }
    ColumnGraph { adjacency }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColoringOrder {
    /// Vertices in index order.
    #[default]
    Natural,
    /// Highest degree first, ties by index.
    #[serde(alias = "degree")]
    LargestDegreeFirst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    color_of: Vec<usize>,
    n_colors: usize,
}

impl Coloring {
    /// Wraps an assignment, renumbering nothing; colors must cover `0..n_colors`.
    pub fn new(color_of: Vec<usize>) -> Result<Self> {
        let n_colors = color_of.iter().max().map_or(0, |c| c + 1);
        let mut used = vec![false; n_colors];
        for &c in &color_of {
            used[c] = true;
        }
        if used.iter().any(|u| !u) {
            return Err(Error::invalid(
                "colors must form a contiguous range starting at 0",
            ));
        }
        Ok(Coloring { color_of, n_colors })
    }

    pub fn n_cols(&self) -> usize {
        self.color_of.len()
    }

    pub fn n_colors(&self) -> usize {
        self.n_colors
    }

    pub fn color_of(&self, col: usize) -> usize {
        self.color_of[col]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.color_of
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.n_colors];
        for (col, &c) in self.color_of.iter().enumerate() {
            classes[c].push(col);
        }
        classes
    }

    /// Checks that no row of `pattern` has two slots of the same color.
    pub fn is_valid_for(&self, pattern: &SparsityPattern) -> bool {
        if self.color_of.len() != pattern.n_cols() {
            return false;
        }
        let mut seen = vec![usize::MAX; self.n_colors];
        (0..pattern.n_rows()).all(|i| {
            pattern.row(i).iter().all(|&j| {
                let c = self.color_of[j];
                let fresh = seen[c] != i;
                seen[c] = i;
                fresh
            })
        })
    }
}

/// Greedy coloring: each vertex takes the smallest color unused by its
/// already-colored neighbors.
pub fn greedy_coloring(graph: &ColumnGraph, order: ColoringOrder) -> Coloring {
    let n = graph.n_vertices();
    let mut sequence: Vec<usize> = (0..n).collect();
    if order == ColoringOrder::LargestDegreeFirst {
        sequence.sort_by(|&a, &b| graph.degree(b).cmp(&graph.degree(a)).then(a.cmp(&b)));
    }
    let mut color_of = vec![usize::MAX; n];
    let mut mark = vec![usize::MAX; n + 1];
    for &v in &sequence {
        for &u in graph.neighbors(v) {
            let c = color_of[u];
            if c != usize::MAX {
                mark[c] = v;
            }
        }
        color_of[v] = (0..).find(|&c| mark[c] != v).expect("a free color exists");
    }
    if n == 0 {
        return Coloring {
            color_of,
            n_colors: 0,
        };
    }
    Coloring::new(color_of).expect("greedy colors are contiguous")
}

/// Reads `S ∘ A` with one query per color class. Exact when `A = S ∘ A`;
/// otherwise same-color columns contaminate the reads.
pub fn exact_recover_by_coloring<O: MatVecOracle + ?Sized>(
    oracle: &O,
    pattern: &Arc<SparsityPattern>,
    coloring: &Coloring,
) -> Result<RecoveryResult> {
    if oracle.n_rows() != pattern.n_rows() || oracle.n_cols() != pattern.n_cols() {
        return Err(Error::invalid("operator and pattern dimensions differ"));
    }
    if !coloring.is_valid_for(pattern) {
        return Err(Error::invalid("coloring is not valid for the pattern"));
    }
    let k = coloring.n_colors();
    let mut probes = DenseMatrix::zeros(pattern.n_cols(), k);
    for (col, &c) in coloring.assignment().iter().enumerate() {
        probes[(col, c)] = 1.0;
    }
    let responses = oracle.apply(&probes)?;
    let values = pattern
        .entries()
        .map(|(i, j)| responses[(i, coloring.color_of(j))])
        .collect();
    Ok(RecoveryResult {
        approx: SparseApprox::new(Arc::clone(pattern), values)?,
        queries_used: k,
        m: k,
        seed: None,
    })
}

/// Unbiased Rademacher probing of a banded `S ∘ A` with bandwidth `s = 2b + 1`.
///
/// Column `j` belongs to color `j mod s`. Each repetition draws signs `v` on all
/// columns and submits one block of `s` queries, query `c` carrying the signs on
/// color `c`. For slot `(i, j)` the estimate is `v_j (A q_c)_i` with `c = j mod s`,
/// averaged over `t` repetitions. Requires `d` to be a multiple of `s`.
pub fn banded_rademacher_estimate<O: MatVecOracle + ?Sized>(
    oracle: &O,
    d: usize,
    b: usize,
    t: usize,
    seed: RandomSeed,
) -> Result<RecoveryResult> {
    let s = 2 * b + 1;
    if d == 0 || d % s != 0 {
        return Err(Error::invalid(format!(
            "d = {d} must be a positive multiple of the bandwidth {s}"
        )));
    }
    if t == 0 {
        return Err(Error::invalid("need at least one repetition"));
    }
    if oracle.n_rows() != d || oracle.n_cols() != d {
        return Err(Error::invalid("operator must be d x d"));
    }
    let pattern = Arc::new(banded_pattern(d, b));
    let mut sums = vec![0.0; pattern.nnz()];
    for rep in 0..t {
        let signs = rademacher_vector(d, seed.offset(rep as u64))?;
        let mut probes = DenseMatrix::zeros(d, s);
        for (j, &v) in signs.iter().enumerate() {
            probes[(j, j % s)] = v;
        }
        let responses = oracle.apply(&probes)?;
        for ((i, j), acc) in pattern.entries().zip(sums.iter_mut()) {
            *acc += signs[j] * responses[(i, j % s)];
        }
    }
    let values = sums.into_iter().map(|v| v / t as f64).collect();
    Ok(RecoveryResult {
        approx: SparseApprox::new(pattern, values)?,
        queries_used: s * t,
        m: s * t,
        seed: Some(seed),
    })
}
