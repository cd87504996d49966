//! Wishart test matrices `A = GᵀG` with `G ~ Gaussian(r, d)`.

use serde::{Deserialize, Serialize};

use crate::dense::{dot, DenseMatrix};
use crate::error::{Error, Result};
use crate::random::{gaussian_matrix, RandomSeed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WishartSpec {
    /// Inner dimension (rows of `G`).
    pub r: usize,
    /// Output dimension.
    pub d: usize,
    pub seed: RandomSeed,
}

impl WishartSpec {
    pub fn new(r: usize, d: usize, seed: RandomSeed) -> Result<Self> {
        if r == 0 || d == 0 {
            return Err(Error::invalid(format!(
                "wishart needs r, d >= 1, got r = {r}, d = {d}"
            )));
        }
        Ok(WishartSpec { r, d, seed })
    }
}

/// `GᵀG`, assembled from the upper triangle and mirrored so it is exactly symmetric.
pub fn wishart_matrix(spec: &WishartSpec) -> Result<DenseMatrix> {
    let WishartSpec { r, d, seed } = *spec;
    let g = gaussian_matrix(r, d, seed)?;
    // columns of G as contiguous rows
    let gt = g.transpose();
    let mut a = DenseMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let v = dot(gt.row(i), gt.row(j));
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    Ok(a)
}

/// Expected `(‖I∘A‖_F², ‖A − I∘A‖_F²)` for `A = GᵀG`: `(d(2r + r²), (d² − d) r)`.
pub fn wishart_expected_norms(r: usize, d: usize) -> (f64, f64) {
    let (r, d) = (r as f64, d as f64);
    (d * (2.0 * r + r * r), (d * d - d) * r)
}

/// Squared Frobenius norms of the diagonal and off-diagonal parts.
pub fn diagonal_split_norms(a: &DenseMatrix) -> (f64, f64) {
    let mut on = 0.0;
    let mut off = 0.0;
    for i in 0..a.n_rows() {
        for (j, &v) in a.row(i).iter().enumerate() {
            if i == j {
                on += v * v;
            } else {
                off += v * v;
            }
        }
    }
    (on, off)
}
