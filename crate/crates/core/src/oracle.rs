//! Matrix-vector product access to `A`.
//!
//! The recovery algorithms never see `A` itself, only the responses to blocks
//! of query vectors. A block `X` is `n_cols x m` (one query per column) and the
//! response is `A X`, `n_rows x m`.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::linalg::LuFactorization;
use crate::pattern::{SparseApprox, SparsityPattern};

pub trait MatVecOracle: Send + Sync {
    fn n_rows(&self) -> usize;

    fn n_cols(&self) -> usize;

    /// Returns `A X` for a block of queries stored as the columns of `X`.
    fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix>;
}

impl<O: MatVecOracle + ?Sized> MatVecOracle for &O {
    fn n_rows(&self) -> usize {
        (**self).n_rows()
    }
    fn n_cols(&self) -> usize {
        (**self).n_cols()
    }
    fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        (**self).apply(x)
    }
}

impl<O: MatVecOracle + ?Sized> MatVecOracle for Box<O> {
    fn n_rows(&self) -> usize {
        (**self).n_rows()
    }
    fn n_cols(&self) -> usize {
        (**self).n_cols()
    }
    fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        (**self).apply(x)
    }
}

impl<O: MatVecOracle + ?Sized> MatVecOracle for Arc<O> {
    fn n_rows(&self) -> usize {
        (**self).n_rows()
    }
    fn n_cols(&self) -> usize {
        (**self).n_cols()
    }
    fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        (**self).apply(x)
    }
}

fn check_block(oracle: &impl MatVecOracle, x: &DenseMatrix) -> Result<()> {
    if x.n_rows() != oracle.n_cols() {
        return Err(Error::invalid(format!(
            "query block has {} rows but the operator has {} columns",
            x.n_rows(),
            oracle.n_cols()
        )));
    }
    Ok(())
}

/// Explicit dense `A`.
#[derive(Debug, Clone)]
pub struct DenseOracle {
    a: DenseMatrix,
}

pub fn dense_oracle(a: DenseMatrix) -> DenseOracle {
    DenseOracle { a }
}

impl DenseOracle {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }
}

impl MatVecOracle for DenseOracle {
    fn n_rows(&self) -> usize {
        self.a.n_rows()
    }
    fn n_cols(&self) -> usize {
        self.a.n_cols()
    }
    fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        check_block(self, x)?;
        self.a.matmul(x)
    }
}

/// A sparse matrix held as a pattern plus aligned values.
#[derive(Debug, Clone)]
pub struct CsrOracle {
    approx: SparseApprox,
}

pub fn csr_oracle(pattern: &Arc<SparsityPattern>, values: &SparseApprox) -> Result<CsrOracle> {
    if values.pattern().as_ref() != pattern.as_ref() {
        return Err(Error::invalid("values are not aligned with the pattern"));
    }
    Ok(CsrOracle {
        approx: values.clone(),
    })
}

impl MatVecOracle for CsrOracle {
    fn n_rows(&self) -> usize {
        self.approx.pattern().n_rows()
    }
    fn n_cols(&self) -> usize {
        self.approx.pattern().n_cols()
    }
    fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        check_block(self, x)?;
        let pattern = self.approx.pattern();
        let m = x.n_cols();
        let mut out = DenseMatrix::zeros(pattern.n_rows(), m);
        for i in 0..pattern.n_rows() {
            let out_row = out.row_mut(i);
            for (&j, &v) in pattern.row(i).iter().zip(self.approx.row_values(i)) {
                for (o, &xv) in out_row.iter_mut().zip(x.row(j)) {
                    *o += v * xv;
                }
            }
        }
        Ok(out)
    }
}

/// `A = M^{-1}`, realized by an LU factorization of `M` computed once.
#[derive(Debug, Clone)]
pub struct InverseOracle {
    lu: LuFactorization,
}

pub fn inverse_oracle(m: &DenseMatrix) -> Result<InverseOracle> {
    Ok(InverseOracle {
        lu: LuFactorization::factor(m)?,
    })
}

impl MatVecOracle for InverseOracle {
    fn n_rows(&self) -> usize {
        self.lu.dim()
    }
    fn n_cols(&self) -> usize {
        self.lu.dim()
    }
    fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        check_block(self, x)?;
        self.lu.solve(x)
    }
}

/// Wraps an oracle and counts the queries (columns) and blocks it serves.
#[derive(Debug)]
pub struct CountingOracle<O> {
    inner: O,
    queries: AtomicU64,
    blocks: AtomicU64,
}

pub fn counting_oracle<O: MatVecOracle>(inner: O) -> CountingOracle<O> {
    CountingOracle {
        inner,
        queries: AtomicU64::new(0),
        blocks: AtomicU64::new(0),
    }
}

impl<O> CountingOracle<O> {
    /// Individual matvec queries consumed so far.
    pub fn count(&self) -> u64 {
        self.queries.load(Ordering::SeqCst)
    }

    /// Number of `apply` calls so far.
    pub fn blocks(&self) -> u64 {
        self.blocks.load(Ordering::SeqCst)
    }

    pub fn reset(&self) {
        self.queries.store(0, Ordering::SeqCst);
        self.blocks.store(0, Ordering::SeqCst);
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: MatVecOracle> MatVecOracle for CountingOracle<O> {
    fn n_rows(&self) -> usize {
        self.inner.n_rows()
    }
    fn n_cols(&self) -> usize {
        self.inner.n_cols()
    }
    fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        self.queries.fetch_add(x.n_cols() as u64, Ordering::SeqCst);
        self.blocks.fetch_add(1, Ordering::SeqCst);
        self.inner.apply(x)
    }
}
