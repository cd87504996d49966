//! Error-versus-queries sweeps.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::source::{MatrixSource, PatternSource};
use crate::coloring::{
    banded_rademacher_estimate, column_intersection_graph, exact_recover_by_coloring,
    greedy_coloring, ColoringOrder,
};
use crate::dense::{norm2, DenseMatrix};
use crate::error::{Error, Result};
use crate::oracle::{counting_oracle, dense_oracle, DenseOracle};
use crate::pattern::{hadamard_mask, SparseApprox, SparsityPattern};
use crate::random::{RandomSeed, GENERATOR_ID};
use crate::recover::{boosted_recover, expected_error_ratio, fixed_sparse_recover, RecoveryResult};

/// CSV schema version, written in the header comment of every report.
pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_TRIALS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    #[default]
    Sketch,
    Boosted,
    Coloring,
    BandedRademacher,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sketch => "sketch",
            Algorithm::Boosted => "boosted",
            Algorithm::Coloring => "coloring",
            Algorithm::BandedRademacher => "banded-rademacher",
        }
    }
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

/// One sweep. For `banded-rademacher` each `m` is a query budget and
/// `t = m / s` repetitions are run; for `coloring` the number of queries is the
/// number of colors and `m` only labels the rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub matrix: MatrixSource,
    pub pattern: PatternSource,
    pub m_values: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub stream: u64,
    #[serde(default)]
    pub algorithm: Algorithm,
    /// Candidates per boosted recovery.
    #[serde(default)]
    pub boost_rounds: Option<usize>,
    #[serde(default)]
    pub coloring_order: ColoringOrder,
    #[serde(default)]
    pub symmetrize: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn base_seed(&self) -> RandomSeed {
        RandomSeed::new(self.seed, self.stream)
    }

    /// Checks everything that can be checked against the resolved pattern,
    /// before any query is issued.
    pub fn validate(&self, pattern: &SparsityPattern) -> Result<()> {
        if self.m_values.is_empty() {
            return Err(Error::invalid("m_values is empty"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        let s = pattern.max_row_nnz();
        if let Some(&m) = self.m_values.iter().find(|&&m| m < s.max(1)) {
            return Err(Error::invalid(format!(
                "m = {m} is below the largest row count s = {s}"
            )));
        }
        if self.symmetrize && !matches!(self.algorithm, Algorithm::Sketch | Algorithm::Boosted) {
            return Err(Error::invalid(
                "symmetrize applies to sketch and boosted only",
            ));
        }
        if self.symmetrize && !pattern.is_symmetric() {
            return Err(Error::invalid("symmetrize needs a symmetric pattern"));
        }
        match self.algorithm {
            Algorithm::Boosted if self.boost_rounds.unwrap_or(0) == 0 => {
                Err(Error::invalid("boosted sweeps need boost_rounds >= 1"))
            }
            Algorithm::BandedRademacher => {
                let (d, b) = self.pattern.as_band().ok_or_else(|| {
                    Error::invalid("banded-rademacher needs a `banded:` or `diagonal:` pattern")
                })?;
                if d % (2 * b + 1) != 0 {
                    return Err(Error::invalid(format!(
                        "banded-rademacher needs d = {d} divisible by {}",
                        2 * b + 1
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Stream for trial `trial` at sketch width `m`. Boosted candidates and
    /// Rademacher repetitions add their index to this, so trials are spaced 2^20 apart.
    pub fn trial_seed(&self, m: usize, trial: usize) -> RandomSeed {
        self.base_seed()
            .offset(((m as u64) << 40).wrapping_add((trial as u64) << 20))
    }
}

/// One `(m, trial)` row.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub m: usize,
    pub trial: usize,
    pub recovery_error: f64,
    pub approx_error: f64,
    pub off_mass: f64,
    pub bound_recovery: Option<f64>,
    pub bound_approx: Option<f64>,
    pub queries_used: u64,
    /// `None` on success, else the error code.
    pub failure: Option<String>,
}

impl TrialRecord {
    pub fn is_ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Per-`m` aggregates over successful trials.
#[derive(Debug, Clone, PartialEq)]
pub struct MSummary {
    pub m: usize,
    pub trials_ok: usize,
    pub rms_recovery: f64,
    pub q10_recovery: f64,
    pub q90_recovery: f64,
    pub rms_approx: f64,
    pub q10_approx: f64,
    pub q90_approx: f64,
    pub bound_recovery: Option<f64>,
    pub bound_approx: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub config: ExperimentConfig,
    /// Largest row count of the pattern.
    pub s: usize,
    pub off_mass: f64,
    pub rows: Vec<TrialRecord>,
    pub summary: Vec<MSummary>,
}

/// Quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

fn rms(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

fn run_trial(
    config: &ExperimentConfig,
    oracle: &DenseOracle,
    pattern: &Arc<SparsityPattern>,
    m: usize,
    trial: usize,
) -> (Result<RecoveryResult>, u64) {
    let counter = counting_oracle(oracle);
    let seed = config.trial_seed(m, trial);
    let result = match config.algorithm {
        Algorithm::Sketch => fixed_sparse_recover(&counter, pattern, m, seed, config.symmetrize),
        Algorithm::Boosted => {
            let r = config.boost_rounds.unwrap_or(1);
            boosted_recover(&counter, pattern, m, r, seed).and_then(|mut res| {
                if config.symmetrize {
                    res.approx = crate::recover::symmetrize(&res.approx)?;
                }
                Ok(res)
            })
        }
        Algorithm::Coloring => {
            let coloring =
                greedy_coloring(&column_intersection_graph(pattern), config.coloring_order);
            exact_recover_by_coloring(&counter, pattern, &coloring)
        }
        Algorithm::BandedRademacher => {
            let (d, b) = config.pattern.as_band().expect("validated");
            banded_rademacher_estimate(&counter, d, b, m / (2 * b + 1), seed)
        }
    };
    let used = counter.count();
    (result, used)
}

fn approximation_error(a: &DenseMatrix, approx: &SparseApprox) -> f64 {
    let pattern = approx.pattern();
    let mut diff = a.clone();
    for ((i, j), v) in pattern.entries().zip(approx.values()) {
        diff[(i, j)] -= v;
    }
    diff.frobenius_norm()
}

/// Runs every `(m, trial)` pair. Trials run in parallel; rows come back in
/// `(m, trial)` order. Numerical failures in a trial are recorded, not raised.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepReport> {
    let a = config.matrix.load()?;
    let pattern = Arc::new(config.pattern.build()?);
    if a.shape() != (pattern.n_rows(), pattern.n_cols()) {
        return Err(Error::invalid(format!(
            "matrix is {}x{} but pattern is {}x{}",
            a.n_rows(),
            a.n_cols(),
            pattern.n_rows(),
            pattern.n_cols()
        )));
    }
    config.validate(&pattern)?;
    let s = pattern.max_row_nnz();
    if matches!(config.algorithm, Algorithm::Sketch | Algorithm::Boosted) {
        for &m in config.m_values.iter().filter(|&&m| m < s + 2) {
            warn!(
                "m = {m} < s + 2 = {}: the expected-error bound does not apply",
                s + 2
            );
        }
    }

    let truth = hadamard_mask(&a, &pattern)?;
    let on_mass = truth.frobenius_norm();
    let total = a.frobenius_norm();
    // ‖A − S∘A‖² = ‖A‖² − ‖S∘A‖², computed directly to avoid cancellation
    let off_mass = {
        let mut off = a.clone();
        for (i, j) in pattern.entries() {
            off[(i, j)] = 0.0;
        }
        off.frobenius_norm()
    };
    debug_assert!(
        (total * total - on_mass * on_mass - off_mass * off_mass).abs()
            <= 1e-8 * total * total + 1e-300
    );

    let oracle = dense_oracle(a.clone());
    let jobs: Vec<(usize, usize)> = config
        .m_values
        .iter()
        .flat_map(|&m| (0..config.trials).map(move |t| (m, t)))
        .collect();
    let rows: Vec<TrialRecord> = jobs
        .par_iter()
        .map(|&(m, trial)| {
            let ratio = expected_error_ratio(s, m);
            let bound_recovery = ratio.map(|r| r.sqrt() * off_mass);
            let bound_approx = ratio.map(|r| (1.0 + r).sqrt() * off_mass);
            let (result, used) = run_trial(config, &oracle, &pattern, m, trial);
            match result {
                Ok(res) => {
                    let diff: Vec<f64> = res
                        .approx
                        .values()
                        .iter()
                        .zip(truth.values())
                        .map(|(x, y)| x - y)
                        .collect();
                    debug_assert_eq!(used, res.queries_used as u64);
                    TrialRecord {
                        m,
                        trial,
                        recovery_error: norm2(&diff),
                        approx_error: approximation_error(&a, &res.approx),
                        off_mass,
                        bound_recovery,
                        bound_approx,
                        queries_used: used,
                        failure: None,
                    }
                }
                Err(e) => TrialRecord {
                    m,
                    trial,
                    recovery_error: f64::NAN,
                    approx_error: f64::NAN,
                    off_mass,
                    bound_recovery,
                    bound_approx,
                    queries_used: used,
                    failure: Some(e.code().to_string()),
                },
            }
        })
        .collect();

    let summary = config
        .m_values
        .iter()
        .map(|&m| summarize(m, rows.iter().filter(|r| r.m == m && r.is_ok())))
        .collect();

    Ok(SweepReport {
        config: config.clone(),
        s,
        off_mass,
        rows,
        summary,
    })
}

fn summarize<'a>(m: usize, rows: impl Iterator<Item = &'a TrialRecord>) -> MSummary {
    let rows: Vec<&TrialRecord> = rows.collect();
    let mut rec: Vec<f64> = rows.iter().map(|r| r.recovery_error).collect();
    let mut app: Vec<f64> = rows.iter().map(|r| r.approx_error).collect();
    rec.sort_by(f64::total_cmp);
    app.sort_by(f64::total_cmp);
    MSummary {
        m,
        trials_ok: rows.len(),
        rms_recovery: rms(&rec),
        q10_recovery: quantile(&rec, 0.1),
        q90_recovery: quantile(&rec, 0.9),
        rms_approx: rms(&app),
        q10_approx: quantile(&app, 0.1),
        q90_approx: quantile(&app, 0.9),
        bound_recovery: rows.first().and_then(|r| r.bound_recovery),
        bound_approx: rows.first().and_then(|r| r.bound_approx),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:e}"))
}

impl SweepReport {
    fn header_comment(&self, kind: &str) -> String {
        let c = &self.config;
        format!(
            "# sparsefit-{kind} v{SCHEMA_VERSION} generator={GENERATOR_ID} matrix={} pattern={} \
             algorithm={} boost_rounds={} coloring_order={:?} symmetrize={} seed={} stream={} trials={} s={}",
            c.matrix,
            c.pattern,
            c.algorithm.name(),
            c.boost_rounds.map_or_else(|| "-".to_string(), |r| r.to_string()),
            c.coloring_order,
            c.symmetrize,
            c.seed,
            c.stream,
            c.trials,
            self.s
        )
    }

    pub fn write_rows_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = BufWriter::new(writer);
        writeln!(w, "{}", self.header_comment("sweep"))?;
        writeln!(
            w,
            "m,trial,recovery_error,approx_error,off_mass,bound_recovery,bound_approx,queries_used,status"
        )?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{:e},{:e},{:e},{},{},{},{}",
                r.m,
                r.trial,
                r.recovery_error,
                r.approx_error,
                r.off_mass,
                opt(r.bound_recovery),
                opt(r.bound_approx),
                r.queries_used,
                r.failure.as_deref().unwrap_or("ok")
            )?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_summary_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = BufWriter::new(writer);
        writeln!(w, "{}", self.header_comment("summary"))?;
        writeln!(
            w,
            "m,trials_ok,rms_recovery,q10_recovery,q90_recovery,rms_approx,q10_approx,q90_approx,bound_recovery,bound_approx"
        )?;
        for s in &self.summary {
            writeln!(
                w,
                "{},{},{:e},{:e},{:e},{:e},{:e},{:e},{},{}",
                s.m,
                s.trials_ok,
                s.rms_recovery,
                s.q10_recovery,
                s.q90_recovery,
                s.rms_approx,
                s.q10_approx,
                s.q90_approx,
                opt(s.bound_recovery),
                opt(s.bound_approx)
            )?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes the per-trial CSV to `path` and the aggregates next to it as
    /// `<stem>.summary.csv`. Returns the summary path.
    pub fn write_files(&self, path: &Path) -> Result<PathBuf> {
        self.write_rows_csv(File::create(path)?)?;
        let summary_path = summary_path_for(path);
        self.write_summary_csv(File::create(&summary_path)?)?;
        Ok(summary_path)
    }
}

pub fn summary_path_for(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    path.with_file_name(format!("{stem}.summary.csv"))
}
