mod config;
mod run;

use clap::{Args, Parser, Subcommand};
use config::Size;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::process::ExitCode;

/// Certified Dirichlet eigenvalues of star-shaped planar drums.
#[derive(Parser)]
#[command(name = "drumcert", version)]
struct Cli {
    /// JSON file with flat keys named like the long flags; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for scans (default: available cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the tension curve over an energy window.
    Scan(ScanArgs),
    /// Refine a tension minimum near a guess and certify it.
    Solve(SolveArgs),
    /// Certify a given (E, t, t_s) triple.
    Certify(CertifyArgs),
    /// Audit Rellich, quasi-orthogonality and Weyl identities on the disk.
    Verify(VerifyArgs),
    /// Evaluate a stored trial function on a square grid.
    EvalMode(EvalModeArgs),
}

#[derive(Args, Serialize, Deserialize, Clone, Default)]
pub struct SolverArgs {
    /// disk | smooth3 | smooth3-cos | fourier:a0,c1,s1,c2,s2,...
    #[arg(long)]
    pub domain: Option<String>,
    /// Basis size, or "auto".
    #[arg(long)]
    pub n: Option<Size>,
    /// Boundary quadrature nodes, or "auto".
    #[arg(long)]
    pub m: Option<Size>,
    /// Charge offset below the real parameter axis.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Re-select the charge offset at each refined minimum.
    #[arg(long)]
    #[serde(default)]
    pub auto_delta: bool,
    /// Relative singular value cutoff for the trial subspace.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// gevp | gsvd | auto
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Args, Serialize, Deserialize, Clone, Default)]
pub struct ScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
    /// Energy window lo:hi.
    #[arg(long)]
    pub e_range: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Tension curve CSV (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Located minima as JSON.
    #[arg(long)]
    pub minima_out: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Default)]
pub struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub e_guess: Option<f64>,
    /// Initial parabola half-width (default 1e-4·E).
    #[arg(long)]
    pub h0: Option<f64>,
    /// Shorthand for --method gsvd.
    #[arg(long)]
    #[serde(default)]
    pub gsvd: bool,
    /// Guess for the neighbouring eigenvalue, enabling the eigenfunction bound.
    #[arg(long)]
    pub e_k: Option<f64>,
    /// User constants for the uncertified full weighted bound.
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    /// Certification report JSON (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Coefficient file for eval-mode.
    #[arg(long)]
    pub coeffs_out: Option<PathBuf>,
    /// Mode values on a square grid as CSV.
    #[arg(long)]
    pub grid_out: Option<PathBuf>,
    #[arg(long)]
    pub grid_h: Option<f64>,
}

#[derive(Args, Serialize, Deserialize, Clone, Default)]
pub struct CertifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub e: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub t_s: Option<f64>,
    /// Ground state; computed when omitted.
    #[arg(long)]
    pub e1: Option<f64>,
    #[arg(long)]
    pub e1_radius: Option<f64>,
    /// Neighbouring eigenvalue and its radius for the eigenfunction bound.
    #[arg(long)]
    pub e_k: Option<f64>,
    #[arg(long)]
    pub radius_k: Option<f64>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Default)]
pub struct VerifyArgs {
    /// rellich | pairwise | window | weyl | quasimode | all
    #[arg(long)]
    pub suite: Option<String>,
    /// Largest mode energy for pairwise and Weyl audits.
    #[arg(long)]
    pub e_max: Option<f64>,
    /// Window centre.
    #[arg(long)]
    pub e: Option<f64>,
    /// Window half-width in units of √E.
    #[arg(long)]
    pub width: Option<f64>,
    /// Number of modes in the Rellich audit.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Random coefficient vectors in the quasimode audit.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON lines report (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Default)]
pub struct EvalModeArgs {
    /// Coefficient file written by `solve --coeffs-out`.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    #[arg(long)]
    pub grid_h: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if j == 0 || rayon::ThreadPoolBuilder::new().num_threads(j).build_global().is_err() {
            eprintln!("error: --jobs must be a positive integer");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Scan(a) => with_config(a, &cli.config).and_then(|a| run::scan(&a)),
        Command::Solve(a) => with_config(a, &cli.config).and_then(|a| run::solve(&a)),
        Command::Certify(a) => with_config(a, &cli.config).and_then(|a| run::certify(&a)),
        Command::Verify(a) => with_config(a, &cli.config).and_then(|a| run::verify(&a)),
        Command::EvalMode(a) => with_config(a, &cli.config).and_then(|a| run::eval_mode(&a)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn with_config<T>(args: T, path: &Option<PathBuf>) -> Result<T, run::CliError>
where
    T: Serialize + serde::de::DeserializeOwned,
{
    match path {
        Some(p) => config::merge_file(args, p).map_err(run::CliError::Config),
        None => Ok(args),
    }
}
