//! Sketch-and-solve recovery of `S ∘ A` from Gaussian matvec queries.
//!
//! One block of `m` Gaussian queries `G` (`d x m`) gives the sketch `Z = A G`.
//! Each row `i` of the approximation is then the least-squares fit of the
//! sketch row `z_i` by the rows of `G` indexed by the pattern row `S_i`:
//!
//! ```text
//! ã_i = argmin_x || G[S_i, :]^T x - z_i ||_2
//! ```
//!
//! Rows are independent given `(G, Z)`. With `m >= s + 2` the expected squared
//! recovery error is at most `s / (m - s - 1)` times the off-pattern mass, and
//! exactly that when every row has `s` slots. If `A` lives on the pattern and
//! `m >= s`, recovery is exact.

use std::sync::Arc;

use rayon::prelude::*;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::linalg::HouseholderQr;
use crate::oracle::MatVecOracle;
use crate::pattern::{SparseApprox, SparsityPattern};
use crate::random::{gaussian_matrix, rademacher_matrix, RandomSeed};

/// Output of any recovery routine.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub approx: SparseApprox,
    /// Matvec queries consumed.
    pub queries_used: usize,
    /// Sketch width (queries per independent run).
    pub m: usize,
    /// `None` for deterministic methods.
    pub seed: Option<RandomSeed>,
}

/// Query-vector distribution for the diagonal estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeDistribution {
    Gaussian,
    Rademacher,
}

fn check_row_counts(pattern: &SparsityPattern, m: usize) -> Result<()> {
    if let Some(row) = (0..pattern.n_rows()).find(|&i| pattern.row_nnz(i) > m) {
        return Err(Error::InsufficientQueries {
            row,
            row_nnz: pattern.row_nnz(row),
            m,
        });
    }
    Ok(())
}

/// Solves the per-row least-squares problems for a given sketch.
///
/// `g` is `d x m` (the queries), `z` is `n x m` (the responses). Rows of the
/// pattern with no slots yield nothing.
pub fn recover_from_sketch(
    g: &DenseMatrix,
    z: &DenseMatrix,
    pattern: &Arc<SparsityPattern>,
) -> Result<SparseApprox> {
    let m = g.n_cols();
    if g.n_rows() != pattern.n_cols() {
        return Err(Error::invalid(format!(
            "sketch has {} rows but the pattern has {} columns",
            g.n_rows(),
            pattern.n_cols()
        )));
    }
    if z.n_rows() != pattern.n_rows() || z.n_cols() != m {
        return Err(Error::invalid(format!(
            "responses are {}x{}, expected {}x{m}",
            z.n_rows(),
            z.n_cols(),
            pattern.n_rows()
        )));
    }
    check_row_counts(pattern, m)?;

    let rows: Vec<Vec<f64>> = (0..pattern.n_rows())
        .into_par_iter()
        .map(|i| {
            let cols = pattern.row(i);
            if cols.is_empty() {
                return Ok(Vec::new());
            }
            // Column k of G_i is row cols[k] of G, so the column-major buffer
            // is just those rows laid end to end.
            let mut buf = Vec::with_capacity(m * cols.len());
            for &c in cols {
                buf.extend_from_slice(g.row(c));
            }
            HouseholderQr::factor_col_major(m, cols.len(), buf)?.solve(z.row(i))
        })
        .collect::<Result<_>>()?;

    SparseApprox::new(Arc::clone(pattern), rows.concat())
}

fn check_dims(oracle: &(impl MatVecOracle + ?Sized), pattern: &SparsityPattern) -> Result<()> {
    if oracle.n_rows() != pattern.n_rows() || oracle.n_cols() != pattern.n_cols() {
        return Err(Error::invalid(format!(
            "operator is {}x{} but pattern is {}x{}",
            oracle.n_rows(),
            oracle.n_cols(),
            pattern.n_rows(),
            pattern.n_cols()
        )));
    }
    Ok(())
}

/// Slot-wise average of `Ã` and `Ãᵀ`. The pattern must be symmetric.
pub fn symmetrize(approx: &SparseApprox) -> Result<SparseApprox> {
    let pattern = approx.pattern();
    if !pattern.is_symmetric() {
        return Err(Error::invalid(
            "symmetrize needs a square pattern with a symmetric slot set",
        ));
    }
    let values = pattern
        .entries()
        .zip(approx.values())
        .map(|((i, j), &v)| {
            let k = pattern.slot(j, i).expect("pattern is symmetric");
            0.5 * (v + approx.values()[k])
        })
        .collect();
    SparseApprox::new(Arc::clone(pattern), values)
}

/// Gaussian sketch-and-solve with `m` non-adaptive queries submitted as one block.
pub fn fixed_sparse_recover<O: MatVecOracle + ?Sized>(
    oracle: &O,
    pattern: &Arc<SparsityPattern>,
    m: usize,
    seed: RandomSeed,
    symmetrize_output: bool,
) -> Result<RecoveryResult> {
    check_dims(oracle, pattern)?;
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    check_row_counts(pattern, m)?;
    if symmetrize_output && !pattern.is_symmetric() {
        return Err(Error::invalid(
            "symmetrize needs a square pattern with a symmetric slot set",
        ));
    }
    let g = gaussian_matrix(pattern.n_cols(), m, seed)?;
    let z = oracle.apply(&g)?;
    let mut approx = recover_from_sketch(&g, &z, pattern)?;
    if symmetrize_output {
        approx = symmetrize(&approx)?;
    }
    Ok(RecoveryResult {
        approx,
        queries_used: m,
        m,
        seed: Some(seed),
    })
}

/// Hutchinson's diagonal estimator:
/// `d = [Σ_j r_j ∘ (A r_j)] ⊘ [Σ_j r_j ∘ r_j]`.
///
/// The probes are the columns of a `d x m` matrix drawn from `seed`, the same
/// draw [`fixed_sparse_recover`] makes, so with Gaussian probes the two agree
/// on the diagonal pattern.
pub fn hutchinson_diagonal<O: MatVecOracle + ?Sized>(
    oracle: &O,
    m: usize,
    dist: ProbeDistribution,
    seed: RandomSeed,
) -> Result<Vec<f64>> {
    let d = oracle.n_rows();
    if d != oracle.n_cols() {
        return Err(Error::invalid(
            "diagonal estimation needs a square operator",
        ));
    }
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    let probes = match dist {
        ProbeDistribution::Gaussian => gaussian_matrix(d, m, seed)?,
        ProbeDistribution::Rademacher => rademacher_matrix(d, m, seed)?,
    };
    let responses = oracle.apply(&probes)?;
    (0..d)
        .map(|i| {
            let r = probes.row(i);
            let num: f64 = r.iter().zip(responses.row(i)).map(|(a, b)| a * b).sum();
            let den: f64 = r.iter().map(|a| a * a).sum();
            if den == 0.0 {
                Err(Error::EstimateUndefined { index: i })
            } else {
                Ok(num / den)
            }
        })
        .collect()
}

/// Pairwise Frobenius distances between candidate approximations.
pub fn pairwise_distances(candidates: &[SparseApprox]) -> Result<Vec<Vec<f64>>> {
    let r = candidates.len();
    let mut dist = vec![vec![0.0; r]; r];
    for i in 0..r {
        for j in (i + 1)..r {
            let d = candidates[i].distance(&candidates[j])?;
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    Ok(dist)
}

/// `B_i`: the `⌈r/2⌉`-th smallest entry of row `i` (the zero self-distance counts).
pub fn median_radii(distances: &[Vec<f64>]) -> Vec<f64> {
    let r = distances.len();
    let rank = r.div_ceil(2);
    distances
        .iter()
        .map(|row| {
            let mut sorted = row.clone();
            sorted.sort_by(f64::total_cmp);
            sorted[rank - 1]
        })
        .collect()
}

/// Index minimizing the median radius; ties go to the lowest index.
pub fn select_candidate(distances: &[Vec<f64>]) -> Result<usize> {
    if distances.is_empty() {
        return Err(Error::invalid("no candidates to select from"));
    }
    if distances.iter().any(|row| row.len() != distances.len()) {
        return Err(Error::invalid("distance matrix must be square"));
    }
    let radii = median_radii(distances);
    let mut best = 0;
    for (i, &b) in radii.iter().enumerate().skip(1) {
        if b < radii[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Boosted recovery: `r` independent runs, return the run closest to most others.
///
/// Candidate `j` is drawn from stream `seed.stream + j`. The output is one of the
/// candidates verbatim.
pub fn boosted_recover<O: MatVecOracle + ?Sized>(
    oracle: &O,
    pattern: &Arc<SparsityPattern>,
    m: usize,
    r: usize,
    seed: RandomSeed,
) -> Result<RecoveryResult> {
    if r == 0 {
        return Err(Error::invalid("boosting needs r >= 1"));
    }
    let mut candidates: Vec<RecoveryResult> = (0..r as u64)
        .into_par_iter()
        .map(|j| fixed_sparse_recover(oracle, pattern, m, seed.offset(j), false))
        .collect::<Result<_>>()?;
    let approxes: Vec<SparseApprox> = candidates.iter().map(|c| c.approx.clone()).collect();
    let best = select_candidate(&pairwise_distances(&approxes)?)?;
    let chosen = candidates.swap_remove(best);
    Ok(RecoveryResult {
        approx: chosen.approx,
        queries_used: m * r,
        m,
        seed: chosen.seed,
    })
}

/// Number of boosting rounds sufficient for failure probability `delta`: `⌈10 ln(1/δ)⌉`.
pub fn boost_rounds_for(delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(((10.0 * (1.0 / delta).ln()).ceil() as usize).max(1))
}

/// Sketch width sufficient for the boosted guarantee at accuracy `epsilon`:
/// `max(s + 2, ⌈s (90/ε + 1) + 1⌉)`.
pub fn boost_sketch_width_for(s: usize, epsilon: f64) -> Result<usize> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::invalid(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let m = (s as f64 * (90.0 / epsilon + 1.0) + 1.0).ceil() as usize;
    Ok(m.max(s + 2))
}

/// Sketch width for the single-run tail bound:
/// `max(s + 2, ⌈s (1/(2δε) + 1) + 1⌉)`.
pub fn sketch_width_for(s: usize, epsilon: f64, delta: f64) -> Result<usize> {
    if epsilon.is_nan() || epsilon <= 0.0 || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("need epsilon > 0 and delta in (0, 1)"));
    }
    let m = (s as f64 * (1.0 / (2.0 * delta * epsilon) + 1.0) + 1.0).ceil() as usize;
    Ok(m.max(s + 2))
}

/// `s / (m - s - 1)`, the expected squared-error ratio; `None` when `m < s + 2`.
pub fn expected_error_ratio(s: usize, m: usize) -> Option<f64> {
    (m >= s + 2).then(|| s as f64 / (m - s - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{counting_oracle, dense_oracle};
    use crate::pattern::{banded_pattern, circulant_band_pattern, diagonal_pattern, hadamard_mask};

    fn on_pattern_matrix(pattern: &SparsityPattern, seed: u64) -> DenseMatrix {
        let g =
            gaussian_matrix(pattern.n_rows(), pattern.n_cols(), RandomSeed::new(seed, 0)).unwrap();
        DenseMatrix::from_fn(pattern.n_rows(), pattern.n_cols(), |i, j| {
            if pattern.contains(i, j) {
                g[(i, j)]
            } else {
                0.0
            }
        })
    }

    #[test]
    fn empty_pattern_gives_empty_result() {
        let p = Arc::new(SparsityPattern::from_rows(4, vec![vec![]; 3]).unwrap());
        let g = gaussian_matrix(4, 2, RandomSeed::new(1, 0)).unwrap();
        let z = gaussian_matrix(3, 2, RandomSeed::new(1, 1)).unwrap();
        let out = recover_from_sketch(&g, &z, &p).unwrap();
        assert!(out.values().is_empty());
        assert_eq!(out.to_dense(), DenseMatrix::zeros(3, 4));
    }

    #[test]
    fn exact_on_pattern() {
        let p = Arc::new(banded_pattern(30, 2));
        let a = on_pattern_matrix(&p, 5);
        let g = gaussian_matrix(30, 5, RandomSeed::new(6, 0)).unwrap();
        let z = a.matmul(&g).unwrap();
        let out = recover_from_sketch(&g, &z, &p).unwrap();
        let truth = hadamard_mask(&a, &p).unwrap();
        assert!(out.distance(&truth).unwrap() <= 1e-10 * truth.frobenius_norm());
    }

    #[test]
    fn diagonal_closed_form() {
        let p = Arc::new(diagonal_pattern(3));
        let a = gaussian_matrix(3, 3, RandomSeed::new(8, 0)).unwrap();
        let g = gaussian_matrix(3, 4, RandomSeed::new(8, 1)).unwrap();
        let z = a.matmul(&g).unwrap();
        let out = recover_from_sketch(&g, &z, &p).unwrap();
        for i in 0..3 {
            let gi = g.row(i);
            let zi = z.row(i);
            let expected = crate::dense::dot(gi, zi) / crate::dense::dot(gi, gi);
            assert!((out.values()[i] - expected).abs() <= 1e-12 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn insufficient_queries_names_row() {
        let p = Arc::new(banded_pattern(6, 1));
        let g = gaussian_matrix(6, 2, RandomSeed::new(1, 0)).unwrap();
        let z = gaussian_matrix(6, 2, RandomSeed::new(1, 1)).unwrap();
        assert!(matches!(
            recover_from_sketch(&g, &z, &p),
            Err(Error::InsufficientQueries {
                row: 1,
                row_nnz: 3,
                m: 2
            })
        ));
        let oracle = counting_oracle(dense_oracle(DenseMatrix::identity(6)));
        assert!(fixed_sparse_recover(&oracle, &p, 2, RandomSeed::new(1, 0), false).is_err());
        assert_eq!(oracle.count(), 0, "validation must precede queries");
    }

    #[test]
    fn duplicated_sketch_rows_are_rank_deficient() {
        let p = Arc::new(SparsityPattern::from_rows(2, vec![vec![0, 1]]).unwrap());
        let g = DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]]);
        let z = DenseMatrix::from_rows(&[[1.0, 1.0, 1.0]]);
        assert!(matches!(
            recover_from_sketch(&g, &z, &p),
            Err(Error::RankDeficient { rank: 1, cols: 2 })
        ));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let p = Arc::new(diagonal_pattern(4));
        let oracle = dense_oracle(DenseMatrix::identity(5));
        assert!(fixed_sparse_recover(&oracle, &p, 3, RandomSeed::new(1, 0), false).is_err());
        let oracle = dense_oracle(DenseMatrix::identity(4));
        assert!(fixed_sparse_recover(&oracle, &p, 0, RandomSeed::new(1, 0), false).is_err());
    }

    #[test]
    fn single_block_and_exact_count() {
        let p = Arc::new(banded_pattern(20, 1));
        let a = gaussian_matrix(20, 20, RandomSeed::new(3, 0)).unwrap();
        let oracle = counting_oracle(dense_oracle(a));
        let res = fixed_sparse_recover(&oracle, &p, 9, RandomSeed::new(3, 1), false).unwrap();
        assert_eq!((oracle.count(), oracle.blocks()), (9, 1));
        assert_eq!(res.queries_used, 9);
        assert_eq!(res.approx.pattern().as_ref(), p.as_ref());
    }

    #[test]
    fn row_results_do_not_depend_on_scheduling() {
        let p = Arc::new(banded_pattern(64, 3));
        let a = gaussian_matrix(64, 64, RandomSeed::new(12, 0)).unwrap();
        let seed = RandomSeed::new(12, 1);
        let parallel = fixed_sparse_recover(&dense_oracle(a.clone()), &p, 12, seed, false).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool
            .install(|| fixed_sparse_recover(&dense_oracle(a), &p, 12, seed, false))
            .unwrap();
        assert_eq!(parallel.approx.values(), serial.approx.values());
    }

    #[test]
    fn symmetrize_averages_pairs() {
        let p = Arc::new(banded_pattern(3, 1));
        let approx = hadamard_mask(
            &DenseMatrix::from_rows(&[[1.0, 2.0, 0.0], [4.0, 5.0, 6.0], [0.0, 8.0, 9.0]]),
            &p,
        )
        .unwrap();
        let sym = symmetrize(&approx).unwrap();
        assert_eq!(sym.get(0, 1), 3.0);
        assert_eq!(sym.get(1, 0), 3.0);
        assert_eq!(sym.get(1, 2), 7.0);
        assert_eq!(sym.get(1, 1), 5.0);

        let lower =
            Arc::new(SparsityPattern::from_entries(2, 2, [(0, 0), (1, 0), (1, 1)]).unwrap());
        let oracle = dense_oracle(DenseMatrix::identity(2));
        assert!(fixed_sparse_recover(&oracle, &lower, 4, RandomSeed::new(1, 0), true).is_err());
    }

    #[test]
    fn symmetrized_output_is_symmetric() {
        let p = Arc::new(banded_pattern(15, 2));
        let a = gaussian_matrix(15, 15, RandomSeed::new(21, 0)).unwrap();
        let res =
            fixed_sparse_recover(&dense_oracle(a), &p, 11, RandomSeed::new(21, 1), true).unwrap();
        for (i, j) in p.entries() {
            assert_eq!(res.approx.get(i, j), res.approx.get(j, i));
        }
    }

    #[test]
    fn hutchinson_identity_is_exact() {
        let oracle = dense_oracle(DenseMatrix::identity(6));
        for dist in [ProbeDistribution::Gaussian, ProbeDistribution::Rademacher] {
            for m in [1, 3, 10] {
                let d =
                    hutchinson_diagonal(&oracle, m, dist, RandomSeed::new(m as u64, 2)).unwrap();
                assert!(d.iter().all(|&v| v == 1.0), "{dist:?} m={m}: {d:?}");
            }
        }
    }

    #[test]
    fn hutchinson_rademacher_diagonal_is_exact() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]]);
        let d = hutchinson_diagonal(
            &dense_oracle(a),
            1,
            ProbeDistribution::Rademacher,
            RandomSeed::new(4, 0),
        )
        .unwrap();
        assert_eq!(d, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn hutchinson_matches_sketch_on_diagonal_pattern() {
        let a = gaussian_matrix(16, 16, RandomSeed::new(31, 0)).unwrap();
        let oracle = dense_oracle(a);
        let seed = RandomSeed::new(31, 7);
        let p = Arc::new(diagonal_pattern(16));
        let alg = fixed_sparse_recover(&oracle, &p, 5, seed, false).unwrap();
        let hutch = hutchinson_diagonal(&oracle, 5, ProbeDistribution::Gaussian, seed).unwrap();
        for (x, y) in alg.approx.values().iter().zip(&hutch) {
            assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn hutchinson_rejects_rectangular() {
        let oracle = dense_oracle(DenseMatrix::zeros(3, 4));
        assert!(hutchinson_diagonal(
            &oracle,
            2,
            ProbeDistribution::Gaussian,
            RandomSeed::new(0, 0)
        )
        .is_err());
    }

    fn mock(values: &[f64]) -> Vec<SparseApprox> {
        let p = Arc::new(diagonal_pattern(1));
        values
            .iter()
            .map(|&v| SparseApprox::new(Arc::clone(&p), vec![v]).unwrap())
            .collect()
    }

    #[test]
    fn median_radius_by_hand() {
        // Ã_1 = Ã_2 = 0, Ã_3 = 10: distances rows (0,0,10), (0,0,10), (10,10,0).
        let cands = mock(&[0.0, 0.0, 10.0]);
        let dist = pairwise_distances(&cands).unwrap();
        assert_eq!(dist[0], vec![0.0, 0.0, 10.0]);
        // ⌈3/2⌉ = 2nd smallest
        assert_eq!(median_radii(&dist), vec![0.0, 0.0, 10.0]);
        assert_eq!(select_candidate(&dist).unwrap(), 0);
    }

    #[test]
    fn selection_ties_and_counts() {
        // r = 4 -> 2nd smallest of each row.
        let cands = mock(&[0.0, 1.0, 3.0, 4.0]);
        let dist = pairwise_distances(&cands).unwrap();
        assert_eq!(median_radii(&dist), vec![1.0, 1.0, 1.0, 1.0]);
        assert_eq!(select_candidate(&dist).unwrap(), 0);

        let cands = mock(&[9.0, 0.0, 0.5, 0.25, 100.0]);
        let dist = pairwise_distances(&cands).unwrap();
        // ⌈5/2⌉ = 3rd smallest: row 3 -> {0, 0.25, 0.25, ..} -> 0.25
        assert_eq!(select_candidate(&dist).unwrap(), 3);

        assert_eq!(select_candidate(&[vec![0.0]]).unwrap(), 0);
        assert!(select_candidate(&[]).is_err());
    }

    #[test]
    fn boosted_picks_a_candidate_and_counts() {
        let p = Arc::new(banded_pattern(25, 1));
        let a = gaussian_matrix(25, 25, RandomSeed::new(40, 0)).unwrap();
        let oracle = counting_oracle(dense_oracle(a));
        let seed = RandomSeed::new(40, 100);
        let res = boosted_recover(&oracle, &p, 8, 5, seed).unwrap();
        assert_eq!(res.queries_used, 40);
        assert_eq!(oracle.count(), 40);
        let matches: Vec<u64> = (0..5)
            .filter(|&j| {
                let c = fixed_sparse_recover(oracle.inner(), &p, 8, seed.offset(j), false).unwrap();
                c.approx.values() == res.approx.values()
            })
            .collect();
        assert_eq!(matches.len(), 1);
        assert_eq!(res.seed, Some(seed.offset(matches[0])));
    }

    #[test]
    fn boosted_single_round_is_plain() {
        let p = Arc::new(banded_pattern(12, 1));
        let oracle = dense_oracle(gaussian_matrix(12, 12, RandomSeed::new(2, 0)).unwrap());
        let seed = RandomSeed::new(2, 5);
        let boosted = boosted_recover(&oracle, &p, 6, 1, seed).unwrap();
        let plain = fixed_sparse_recover(&oracle, &p, 6, seed, false).unwrap();
        assert_eq!(boosted.approx, plain.approx);
        assert!(boosted_recover(&oracle, &p, 6, 0, seed).is_err());
    }

    #[test]
    fn parameter_rules() {
        assert_eq!(boost_rounds_for(0.5).unwrap(), 7);
        assert_eq!(boost_rounds_for(0.01).unwrap(), 47);
        assert!(boost_rounds_for(1.0).is_err());
        assert_eq!(boost_sketch_width_for(3, 90.0).unwrap(), 7);
        assert_eq!(sketch_width_for(3, 0.5, 0.1).unwrap(), 34);
        assert_eq!(expected_error_ratio(3, 10), Some(0.5));
        assert_eq!(expected_error_ratio(3, 4), None);
    }

    #[test]
    fn tail_bound_failure_rate() {
        // m = s(1/(2δε) + 1) + 1 with δ = 0.1, ε = 0.5 -> failure rate <= δ.
        let p = Arc::new(circulant_band_pattern(40, 1).unwrap());
        let a = gaussian_matrix(40, 40, RandomSeed::new(77, 0)).unwrap();
        let off = a
            .axpby(1.0, &hadamard_mask(&a, &p).unwrap().to_dense(), -1.0)
            .unwrap();
        let off_mass = off.frobenius_norm();
        let m = sketch_width_for(3, 0.5, 0.1).unwrap();
        let oracle = dense_oracle(a.clone());
        let trials = 1000;
        let failures = (0..trials)
            .filter(|&t| {
                let res =
                    fixed_sparse_recover(&oracle, &p, m, RandomSeed::new(78, t), false).unwrap();
                let err = a
                    .axpby(1.0, &res.approx.to_dense(), -1.0)
                    .unwrap()
                    .frobenius_norm();
                err > 1.5 * off_mass
            })
            .count();
        assert!(
            failures as f64 / trials as f64 <= 0.15,
            "{failures} failures"
        );
    }
}
