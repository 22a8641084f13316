//! Thin command-line front end: argument parsing and dispatch only, all
//! logic lives in the library's `cli` module.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::path::PathBuf;
use std::process::ExitCode;
use wmpinv::cli::{self, error_report, exit_code_for, resolve_tol, CorpusMode, Route};
use wmpinv::norms::NormKind;
use wmpinv::report::RunReport;

#[derive(Parser)]
#[command(
    name = "wmpinv",
    about = "Weighted Moore-Penrose inverses, group inverses and weighted-EP checks for dense complex matrices",
    after_help = "Matrix files are JSON ({\"rows\", \"cols\", \"data\": [[re, im], ...]} row-major) or CSV \
                  (cells a, a+bi, a-bi). Reports are JSON on stdout unless --out is given. \
                  WPINV_DEFAULT_TOL overrides the built-in default tolerance."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Verdict tolerance (default 1e-8, or WPINV_DEFAULT_TOL).
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WeightArgs {
    /// Weight matrix files: E (left) and F (right).
    #[arg(long, num_args = 2, value_names = ["E", "F"], required = true)]
    weights: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Moore-Penrose inverse with condition residuals.
    Pinv {
        matrix: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Weighted Moore-Penrose inverse with weights E and F.
    Wpinv {
        matrix: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
        /// Computation route.
        #[arg(long, default_value = "formula")]
        via: Route,
        /// Run both routes and fail if they disagree beyond the tolerance.
        #[arg(long)]
        check_unique: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Group inverse (existence and value).
    Group {
        matrix: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Weighted-EP verdict and the equivalence-clause battery.
    Ep {
        matrix: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
        /// Power parameter k >= 1.
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Power parameter l >= 1.
        #[arg(long, default_value_t = 2)]
        l: u32,
        /// Nonzero complex scalar as re,im.
        #[arg(long, value_parser = parse_complex, default_value = "1,1")]
        lambda: Complex64,
        #[command(flatten)]
        common: Common,
    },
    /// Hermiticity of a matrix as a Banach-algebra element (grid test).
    Hermitian {
        matrix: PathBuf,
        /// Operator norm: 1, 2 or inf.
        #[arg(long, default_value = "2")]
        norm: NormKind,
        /// Half-width of the t grid.
        #[arg(long, default_value_t = wmpinv::hermitian::DEFAULT_T_MAX)]
        t_max: f64,
        /// Number of grid points (bumped to odd so 0 is a node).
        #[arg(long, default_value_t = wmpinv::hermitian::DEFAULT_STEPS)]
        steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Left-multiplication lift compatibility check.
    LiftCheck {
        matrix: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Restriction/quotient compatibility for a leading invariant block.
    BlockCheck {
        matrix: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
        /// Leading invariant block size.
        #[arg(long, short)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded corpus runs of the invariant suites.
    Corpus {
        /// ep-battery, uniqueness, lift, blocks or hermitian.
        #[arg(long)]
        mode: CorpusMode,
        /// Fixed dimension (default: swept per instance).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where failing seeds are persisted for replay.
        #[arg(long, default_value = "wmpinv-corpus-manifest.json")]
        manifest: PathBuf,
        /// Re-run the seeds from a previously written manifest.
        #[arg(long)]
        replay: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| "expected re,im".to_string())?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|_| format!("bad real part {re:?}"))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|_| format!("bad imaginary part {im:?}"))?;
    Ok(Complex64::new(re, im))
}

fn emit(report: &RunReport, out: Option<&PathBuf>) -> i32 {
    let json = report.to_json();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("cannot write report to {}: {e}", path.display());
                return 2;
            }
        }
        None => println!("{json}"),
    }
    report.exit_status
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, common): (wmpinv::Result<RunReport>, Common) = match cli.command {
        Command::Pinv { matrix, common } => {
            let tol = resolve_tol(common.tol);
            (cli::run_pinv(&matrix, tol), common)
        }
        Command::Wpinv {
            matrix,
            weights,
            via,
            check_unique,
            common,
        } => {
            let tol = resolve_tol(common.tol);
            (
                cli::run_wpinv(
                    &matrix,
                    &weights.weights[0],
                    &weights.weights[1],
                    tol,
                    via,
                    check_unique,
                ),
                common,
            )
        }
        Command::Group { matrix, common } => {
            let tol = resolve_tol(common.tol);
            (cli::run_group(&matrix, tol), common)
        }
        Command::Ep {
            matrix,
            weights,
            k,
            l,
            lambda,
            common,
        } => {
            let tol = resolve_tol(common.tol);
            (
                cli::run_ep(
                    &matrix,
                    &weights.weights[0],
                    &weights.weights[1],
                    k,
                    l,
                    lambda,
                    tol,
                ),
                common,
            )
        }
        Command::Hermitian {
            matrix,
            norm,
            t_max,
            steps,
            common,
        } => {
            let tol = resolve_tol(common.tol);
            (cli::run_hermitian(&matrix, norm, t_max, steps, tol), common)
        }
        Command::LiftCheck {
            matrix,
            weights,
            common,
        } => {
            let tol = resolve_tol(common.tol);
            (
                cli::run_lift_check(&matrix, &weights.weights[0], &weights.weights[1], tol),
                common,
            )
        }
        Command::BlockCheck {
            matrix,
            weights,
            k,
            common,
        } => {
            let tol = resolve_tol(common.tol);
            (
                cli::run_block_check(&matrix, &weights.weights[0], &weights.weights[1], k, tol),
                common,
            )
        }
        Command::Corpus {
            mode,
            n,
            count,
            seed,
            manifest,
            replay,
            common,
        } => {
            let tol = resolve_tol(common.tol);
            (
                cli::run_corpus(mode, n, count, seed, tol, &manifest, replay.as_deref()),
                common,
            )
        }
    };

    let code = match result {
        Ok(report) => emit(&report, common.out.as_ref()),
        Err(err) => {
            let tol = resolve_tol(common.tol);
            let report = error_report("(failed)".into(), vec![], tol, &err);
            emit(&report, common.out.as_ref());
            exit_code_for(&err)
        }
    };
    ExitCode::from(code.clamp(0, 255) as u8)
}
