use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use sparsefit::harness::{
    model_problem_matrix, run_sweep, summary_path_for, trefethen_matrix, ExperimentConfig,
    MatrixSource, PatternSource,
};
use sparsefit::{
    boosted_recover, column_intersection_graph, counting_oracle, dense_oracle,
    fixed_sparse_recover, greedy_coloring, hadamard_mask, mmio, recover, wishart_matrix,
    ColoringOrder, Error, RandomSeed, WishartSpec,
};

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "sparsefit",
    version,
    about = "Approximate a matrix on a fixed sparsity pattern from matrix-vector queries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recover S∘A from Gaussian queries and write it as Matrix Market coordinates.
    Recover {
        /// `model:<d>`, `trefethen:<d>`, `wishart:<r>,<d>[,<seed>]` or a Matrix Market file.
        #[arg(long)]
        matrix: MatrixSource,
        /// Pattern builder (`banded:<d>,<b>`, ...) or a Matrix Market pattern file.
        #[arg(long)]
        pattern: PatternSource,
        /// Queries per run.
        #[arg(long)]
        m: usize,
        /// Boost over this many independent runs.
        #[arg(long, value_name = "R")]
        boost: Option<usize>,
        /// Average the output with its transpose.
        #[arg(long)]
        symmetrize: bool,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an error-versus-m sweep described by a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Per-trial CSV; aggregates go to `<stem>.summary.csv`. Overrides `output` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy coloring of the column-intersection graph, as `column,color` CSV.
    Color {
        #[arg(long)]
        pattern: PatternSource,
        #[arg(long, value_enum, default_value_t = OrderArg::Natural)]
        order: OrderArg,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a test matrix or pattern in Matrix Market format.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
        /// Write here instead of stdout.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// A pattern from any builder.
    Pattern {
        #[arg(long)]
        pattern: PatternSource,
    },
    /// Inverse of tridiag(-1, 4, -1).
    Model {
        #[arg(long)]
        d: usize,
    },
    /// Inverse of the primes-plus-power-of-two-offsets matrix.
    Trefethen {
        #[arg(long)]
        d: usize,
    },
    /// `GᵀG` with `G` an `r x d` Gaussian matrix.
    Wishart {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Natural,
    Degree,
}

impl From<OrderArg> for ColoringOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Natural => ColoringOrder::Natural,
            OrderArg::Degree => ColoringOrder::LargestDegreeFirst,
        }
    }
}

fn output(path: Option<&Path>) -> sparsefit::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_recover(
    matrix: &MatrixSource,
    pattern: &PatternSource,
    m: usize,
    boost: Option<usize>,
    symmetrize: bool,
    seed: RandomSeed,
    out: &Path,
) -> sparsefit::Result<()> {
    let a = matrix.load()?;
    let pattern = Arc::new(pattern.build()?);
    let oracle = counting_oracle(dense_oracle(a.clone()));
    let result = match boost {
        Some(r) => {
            if symmetrize && !pattern.is_symmetric() {
                return Err(Error::InvalidArgument(
                    "symmetrize needs a symmetric pattern".into(),
                ));
            }
            let mut res = boosted_recover(&oracle, &pattern, m, r, seed)?;
            if symmetrize {
                res.approx = recover::symmetrize(&res.approx)?;
            }
            res
        }
        None => fixed_sparse_recover(&oracle, &pattern, m, seed, symmetrize)?,
    };
    mmio::write_sparse_file(&result.approx, out)?;
    let truth = hadamard_mask(&a, &pattern)?;
    eprintln!(
        "queries_used={} recovery_error={:e} relative={:e}",
        oracle.count(),
        result.approx.distance(&truth)?,
        result.approx.distance(&truth)? / truth.frobenius_norm().max(f64::MIN_POSITIVE)
    );
    Ok(())
}

fn cmd_sweep(config: &Path, out: Option<PathBuf>) -> sparsefit::Result<()> {
    let mut config = ExperimentConfig::from_json_file(config)?;
    if out.is_some() {
        config.output = out;
    }
    let path = config.output.clone().ok_or_else(|| {
        Error::InvalidArgument("no output path: pass --out or set `output`".into())
    })?;
    let report = run_sweep(&config)?;
    let summary_path = report.write_files(&path)?;
    info!("wrote {} and {}", path.display(), summary_path.display());
    let failed = report.rows.iter().filter(|r| !r.is_ok()).count();
    println!("m,trials_ok,rms_recovery,bound_recovery");
    for s in &report.summary {
        println!(
            "{},{},{:e},{}",
            s.m,
            s.trials_ok,
            s.rms_recovery,
            s.bound_recovery
                .map_or_else(String::new, |b| format!("{b:e}"))
        );
    }
    if failed > 0 {
        eprintln!(
            "{failed} trial(s) failed; see the status column of {}",
            path.display()
        );
    }
    debug_assert_eq!(summary_path, summary_path_for(&path));
    Ok(())
}

fn cmd_color(
    pattern: &PatternSource,
    order: OrderArg,
    out: Option<&Path>,
) -> sparsefit::Result<()> {
    let pattern = pattern.build()?;
    let coloring = greedy_coloring(&column_intersection_graph(&pattern), order.into());
    let mut w = output(out)?;
    writeln!(w, "# n_colors={}", coloring.n_colors())?;
    writeln!(w, "column,color")?;
    for (col, color) in coloring.assignment().iter().enumerate() {
        writeln!(w, "{col},{color}")?;
    }
    w.flush()?;
    eprintln!("n_colors={}", coloring.n_colors());
    Ok(())
}

fn cmd_gen(what: &GenCommand, out: Option<&Path>) -> sparsefit::Result<()> {
    let w = output(out)?;
    match what {
        GenCommand::Pattern { pattern } => mmio::write_pattern(&pattern.build()?, w),
        GenCommand::Model { d } => mmio::write_dense(&model_problem_matrix(*d)?, w),
        GenCommand::Trefethen { d } => mmio::write_dense(&trefethen_matrix(*d)?, w),
        GenCommand::Wishart { r, d, seed } => {
            let spec = WishartSpec::new(*r, *d, RandomSeed::new(*seed, 0))?;
            mmio::write_dense(&wishart_matrix(&spec)?, w)
        }
    }
}

fn run(cli: Cli) -> sparsefit::Result<()> {
    match cli.command {
        Command::Recover {
            matrix,
            pattern,
            m,
            boost,
            symmetrize,
            seed,
            stream,
            out,
        } => cmd_recover(
            &matrix,
            &pattern,
            m,
            boost,
            symmetrize,
            RandomSeed::new(seed, stream),
            &out,
        ),
        Command::Sweep { config, out } => cmd_sweep(&config, out),
        Command::Color {
            pattern,
            order,
            out,
        } => cmd_color(&pattern, order, out.as_deref()),
        Command::Gen { what, out } => cmd_gen(&what, out.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_VALIDATION
    }
}
