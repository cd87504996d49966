//! Householder least squares and LU with partial pivoting.

use crate::dense::{norm2, DenseMatrix};
use crate::error::{Error, Result};

/// Householder QR of a tall matrix, kept in compact form.
///
/// Column-major storage: column `j` holds the Householder vector below the
/// diagonal and `R` on and above it; the diagonal of `R` is kept separately.
#[derive(Debug, Clone)]
pub struct HouseholderQr {
    rows: usize,
    cols: usize,
    qr: Vec<f64>,
    r_diag: Vec<f64>,
    betas: Vec<f64>,
}

impl HouseholderQr {
    /// Factors a row-major `rows x cols` buffer. Requires `rows >= cols >= 1`.
    pub fn factor(matrix: &DenseMatrix) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        let mut colmajor = vec![0.0; rows * cols];
        for i in 0..rows {
            for (j, &v) in matrix.row(i).iter().enumerate() {
                colmajor[j * rows + i] = v;
            }
        }
        Self::factor_col_major(rows, cols, colmajor)
    }

    pub(crate) fn factor_col_major(rows: usize, cols: usize, mut qr: Vec<f64>) -> Result<Self> {
        if cols == 0 {
            return Err(Error::invalid("least squares needs at least one column"));
        }
        if rows < cols {
            return Err(Error::Underdetermined { rows, cols });
        }
        debug_assert_eq!(qr.len(), rows * cols);
        let mut r_diag = vec![0.0; cols];
        let mut betas = vec![0.0; cols];
        for j in 0..cols {
            let (head, tail) = qr.split_at_mut((j + 1) * rows);
            let col = &mut head[j * rows + j..];
            let norm = norm2(col);
            if norm == 0.0 {
                r_diag[j] = 0.0;
                continue;
            }
            let alpha = if col[0] > 0.0 { -norm } else { norm };
            // v = x - alpha e1, stored in place; beta = 2 / (v^T v) = 1 / (norm * |v0|)
            col[0] -= alpha;
            let beta = 1.0 / (norm * col[0].abs());
            r_diag[j] = alpha;
            betas[j] = beta;
            for k in (j + 1)..cols {
                let target = &mut tail[(k - j - 1) * rows + j..(k - j) * rows];
                let s = beta
                    * col
                        .iter()
                        .zip(target.iter())
                        .map(|(a, b)| a * b)
                        .sum::<f64>();
                for (t, v) in target.iter_mut().zip(col.iter()) {
                    *t -= s * v;
                }
            }
        }
        Ok(HouseholderQr {
            rows,
            cols,
            qr,
            r_diag,
            betas,
        })
    }

    /// Number of diagonal entries of `R` above `max(rows, cols) * eps * |r_11|`.
    pub fn rank(&self) -> usize {
        let tol = self.tolerance();
        self.r_diag.iter().filter(|r| r.abs() > tol).count()
    }

    fn tolerance(&self) -> f64 {
        self.rows.max(self.cols) as f64 * f64::EPSILON * self.r_diag[0].abs()
    }

    pub fn r_diagonal(&self) -> &[f64] {
        &self.r_diag
    }

    /// Minimizer of `||A x - b||_2`.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.rows {
            return Err(Error::invalid(format!(
                "right-hand side has length {}, expected {}",
                rhs.len(),
                self.rows
            )));
        }
        let tol = self.tolerance();
        if self.r_diag.iter().any(|r| r.abs() <= tol) {
            return Err(Error::RankDeficient {
                rank: self.rank(),
                cols: self.cols,
            });
        }
        let rows = self.rows;
        let mut y = rhs.to_vec();
        for j in 0..self.cols {
            let v = &self.qr[j * rows + j..(j + 1) * rows];
            let seg = &mut y[j..];
            let s = self.betas[j] * v.iter().zip(seg.iter()).map(|(a, b)| a * b).sum::<f64>();
            for (t, vv) in seg.iter_mut().zip(v) {
                *t -= s * vv;
            }
        }
        let mut x = vec![0.0; self.cols];
        for j in (0..self.cols).rev() {
            let mut acc = y[j];
            for k in (j + 1)..self.cols {
                acc -= self.qr[k * rows + j] * x[k];
            }
            x[j] = acc / self.r_diag[j];
        }
        Ok(x)
    }
}

/// `argmin_x ||G x - z||_2` through a Householder QR of `G`.
pub fn least_squares_solve(g: &DenseMatrix, z: &[f64]) -> Result<Vec<f64>> {
    HouseholderQr::factor(g)?.solve(z)
}

/// `P A = L U` with partial pivoting, stored compactly.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl LuFactorization {
    pub fn factor(matrix: &DenseMatrix) -> Result<Self> {
        let n = matrix.n_rows();
        if n != matrix.n_cols() {
            return Err(Error::invalid(format!(
                "LU needs a square matrix, got {}x{}",
                n,
                matrix.n_cols()
            )));
        }
        if n == 0 {
            return Err(Error::invalid("LU of an empty matrix"));
        }
        if !matrix.is_finite() {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        let max_abs = matrix.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = n as f64 * f64::EPSILON * max_abs;
        let mut lu = matrix.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pval) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if pval <= tol {
                return Err(Error::Singular { column: k });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let a = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = a;
                }
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor != 0.0 {
                    for j in (k + 1)..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= factor * u;
                    }
                }
            }
        }
        Ok(LuFactorization { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `M X = B` for a block of right-hand sides.
    pub fn solve(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.dim();
        if rhs.n_rows() != n {
            return Err(Error::invalid(format!(
                "right-hand side has {} rows, expected {n}",
                rhs.n_rows()
            )));
        }
        let m = rhs.n_cols();
        let mut x = DenseMatrix::zeros(n, m);
        for (i, &p) in self.perm.iter().enumerate() {
            x.row_mut(i).copy_from_slice(rhs.row(p));
        }
        let data = x.as_mut_slice();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[(i, k)];
                if l != 0.0 {
                    let (done, rest) = data.split_at_mut(i * m);
                    let src = &done[k * m..(k + 1) * m];
                    for (t, s) in rest[..m].iter_mut().zip(src) {
                        *t -= l * s;
                    }
                }
            }
        }
        for i in (0..n).rev() {
            let (head, tail) = data.split_at_mut((i + 1) * m);
            let row = &mut head[i * m..];
            for k in (i + 1)..n {
                let u = self.lu[(i, k)];
                if u != 0.0 {
                    let src = &tail[(k - i - 1) * m..(k - i) * m];
                    for (t, s) in row.iter_mut().zip(src) {
                        *t -= u * s;
                    }
                }
            }
            let d = self.lu[(i, i)];
            for t in row.iter_mut() {
                *t /= d;
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> DenseMatrix {
        self.solve(&DenseMatrix::identity(self.dim()))
            .expect("identity has matching dimension")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::dot;
    use crate::random::{gaussian_matrix, RandomSeed};
    use proptest::prelude::*;

    #[test]
    fn identity_system() {
        let g = DenseMatrix::identity(2);
        let x = least_squares_solve(&g, &[5.0, 7.0]).unwrap();
        assert!((x[0] - 5.0).abs() < 1e-15 && (x[1] - 7.0).abs() < 1e-15);
    }

    #[test]
    fn single_column_gives_mean() {
        let g = DenseMatrix::from_rows(&[[1.0], [1.0], [1.0]]);
        let x = least_squares_solve(&g, &[1.0, 2.0, 3.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn consistent_system_recovered() {
        let g = gaussian_matrix(6, 3, RandomSeed::new(3, 0)).unwrap();
        let x_star = [0.5, -1.25, 2.0];
        let z: Vec<f64> = (0..6).map(|i| dot(g.row(i), &x_star)).collect();
        let x = least_squares_solve(&g, &z).unwrap();
        let err: f64 = x
            .iter()
            .zip(&x_star)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-10 * norm2(&x_star), "err {err}");
    }

    #[test]
    fn underdetermined_rejected() {
        let g = DenseMatrix::zeros(2, 3);
        assert!(matches!(
            least_squares_solve(&g, &[0.0, 0.0]),
            Err(Error::Underdetermined { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn duplicated_column_is_rank_deficient() {
        let g = DenseMatrix::from_rows(&[[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]);
        match least_squares_solve(&g, &[1.0, 2.0, 3.0]) {
            Err(Error::RankDeficient { rank, cols }) => {
                assert_eq!((rank, cols), (1, 2));
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
        let zero = DenseMatrix::zeros(3, 1);
        assert!(matches!(
            least_squares_solve(&zero, &[1.0, 2.0, 3.0]),
            Err(Error::RankDeficient { rank: 0, .. })
        ));
    }

    #[test]
    fn lu_examples() {
        let m = DenseMatrix::identity(3).scale(2.0);
        let lu = LuFactorization::factor(&m).unwrap();
        let x = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]);
        assert_eq!(lu.solve(&x).unwrap(), x.scale(0.5));
        let singular = DenseMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]);
        assert!(matches!(
            LuFactorization::factor(&singular),
            Err(Error::Singular { column: 1 })
        ));
    }

    #[test]
    fn lu_random_residual() {
        let m = gaussian_matrix(12, 12, RandomSeed::new(4, 0)).unwrap();
        let b = gaussian_matrix(12, 5, RandomSeed::new(4, 1)).unwrap();
        let x = LuFactorization::factor(&m).unwrap().solve(&b).unwrap();
        let r = m.matmul(&x).unwrap().axpby(1.0, &b, -1.0).unwrap();
        assert!(r.frobenius_norm() <= 1e-10 * b.frobenius_norm());
    }

    /// `||G^+||_F^2` summed column by column of the pseudoinverse.
    fn pinv_frob_sq(g: &DenseMatrix) -> f64 {
        let qr = HouseholderQr::factor(g).unwrap();
        (0..g.n_rows())
            .map(|i| {
                let mut e = vec![0.0; g.n_rows()];
                e[i] = 1.0;
                qr.solve(&e).unwrap().iter().map(|v| v * v).sum::<f64>()
            })
            .sum()
    }

    #[test]
    fn inverse_wishart_trace_moment() {
        // E ||G^+||_F^2 = q / (p - q - 1) for G ~ Gaussian(p, q); p = 20, q = 5 -> 5/14.
        let trials = 2000;
        let mean = (0..trials)
            .map(|t| pinv_frob_sq(&gaussian_matrix(20, 5, RandomSeed::new(2024, t)).unwrap()))
            .sum::<f64>()
            / trials as f64;
        let expected = 5.0 / 14.0;
        assert!(
            (mean / expected - 1.0).abs() < 0.10,
            "mean {mean} vs {expected}"
        );
    }

    #[test]
    fn gaussian_sandwich_moment() {
        // E ||X G Y||_F^2 = ||X||_F^2 ||Y||_F^2.
        let p = 20;
        let q = 5;
        let x = gaussian_matrix(4, p, RandomSeed::new(99, 0)).unwrap();
        let y = gaussian_matrix(q, 4, RandomSeed::new(99, 1)).unwrap();
        let trials = 5000;
        let mean = (0..trials)
            .map(|t| {
                let g = gaussian_matrix(p, q, RandomSeed::new(100, t)).unwrap();
                x.matmul(&g)
                    .unwrap()
                    .matmul(&y)
                    .unwrap()
                    .frobenius_norm()
                    .powi(2)
            })
            .sum::<f64>()
            / trials as f64;
        let expected = x.frobenius_norm().powi(2) * y.frobenius_norm().powi(2);
        assert!(
            (mean / expected - 1.0).abs() < 0.10,
            "mean {mean} vs {expected}"
        );
    }

    proptest! {
        #[test]
        fn residual_orthogonal_to_columns(m in 3usize..12, k in 1usize..4, seed in any::<u64>()) {
            prop_assume!(m > k);
            let g = gaussian_matrix(m, k, RandomSeed::new(seed, 0)).unwrap();
            let z = gaussian_matrix(m, 1, RandomSeed::new(seed, 1)).unwrap().into_vec();
            let x = least_squares_solve(&g, &z).unwrap();
            let resid: Vec<f64> = (0..m).map(|i| dot(g.row(i), &x) - z[i]).collect();
            let gt_r: Vec<f64> = (0..k).map(|j| (0..m).map(|i| g[(i, j)] * resid[i]).sum()).collect();
            prop_assert!(norm2(&gt_r) <= 1e-8 * g.frobenius_norm() * norm2(&z));
        }
    }
}
