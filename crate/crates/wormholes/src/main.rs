//! Thin command-line front-end; all logic lives in [`wormholes::cli`].

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use wormholes::cli::{
    self, cmd_constants, cmd_delta, cmd_region, cmd_regime, cmd_sweep, cmd_verify, to_json,
    CliError, ExperimentConfig,
};
use wormholes::constants::{ManifoldConstants, DEFAULT_ETA_M};
use wormholes::regimes::{parse_rational, Figure, ReportOptions, Scale};

#[derive(Parser)]
#[command(
    name = "wormholes",
    about = "Spectral convergence toolkit for Laplacians on manifolds with many small handles",
    version
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct ManifoldArgs {
    /// Uniform cover number N.
    #[arg(long, default_value_t = 1)]
    n_cover: u32,
    /// Metric distortion K >= 1.
    #[arg(long, default_value_t = 1.0)]
    k_distortion: f64,
    /// Harmonic radius r0 in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    r0: f64,
    /// Tubular radius r1 in (0, r0).
    #[arg(long, default_value_t = 0.5)]
    r1: f64,
    /// Ricci lower bound kappa0.
    #[arg(long, default_value_t = 0.0)]
    kappa0: f64,
    /// Harmonic-extension bound C_ext >= 1.
    #[arg(long, default_value_t = 1.0)]
    c_ext: f64,
    /// Tubular-neighbourhood constant C_nbhd > 0.
    #[arg(long, default_value_t = 1.0)]
    c_nbhd: f64,
}

impl ManifoldArgs {
    fn build(&self) -> Result<ManifoldConstants, CliError> {
        ManifoldConstants::new(
            self.n_cover,
            self.k_distortion,
            self.r0,
            self.r1,
            self.kappa0,
            self.c_ext,
            self.c_nbhd,
        )
        .map_err(CliError::from)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Optimal trace and non-concentration constants at (m, r, eta).
    Constants {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        eta: f64,
        /// Asymptotic validity threshold eta_m.
        #[arg(long, default_value_t = DEFAULT_ETA_M)]
        eta_m: f64,
        /// Run the ODE shooting cross-check.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classify a parameter point (m, alpha, lambda).
    Regime {
        #[arg(long)]
        m: u32,
        /// Rational like 4/5 or decimal.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        lambda: String,
        /// Cover-distance scale: power (default) or log (m = 2 fading I).
        #[arg(long, default_value = "power")]
        scale: String,
        /// Free parameter alpha_4 in (0, 1/2).
        #[arg(long)]
        alpha4: Option<String>,
        /// Use the proof's gamma_m in the fading-I exponent.
        #[arg(long)]
        proof_gamma: bool,
        /// Evaluate the error formulas at this handle radius.
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        manifold: ManifoldArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Named region vertices and the rasterized applicability grid.
    Region {
        #[arg(long)]
        m: u32,
        /// fading1 | fading_compare | adhering | adhering_simple | delta_ranges
        #[arg(long)]
        figure: String,
        #[arg(long, default_value_t = 200)]
        resolution: i64,
        /// Write raster CSV and JSON here (else $WORMHOLES_OUT_DIR or cwd).
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Delta-bundle along an eps grid with asymptotic orders and slopes.
    Delta {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        lambda: String,
        /// Comma-separated decreasing eps values.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        #[command(flatten)]
        manifold: ManifoldArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a spectral sweep from a key = value config file.
    Sweep {
        /// Path of the experiment config.
        config: PathBuf,
        /// Override the output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run a named verification suite (bessel, bounds, regimes, constants, all).
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(args: Args) -> Result<(), CliError> {
    match args.command {
        Command::Constants { m, r, eta, eta_m, oracle, seed } => {
            let rec = cmd_constants(m, r, eta, eta_m, oracle, seed)?;
            println!("{}", to_json(&rec));
        }
        Command::Regime { m, alpha, lambda, scale, alpha4, proof_gamma, eps, manifold, seed } => {
            let scale = match scale.as_str() {
                "power" => Scale::Power,
                "log" => Scale::Log,
                other => {
                    return Err(CliError::Validation(format!(
                        "scale must be power or log, got {other:?}"
                    )))
                }
            };
            let alpha4 = alpha4.as_deref().map(parse_rational).transpose()?;
            let opts = ReportOptions { alpha4_choice: alpha4, use_proof_gamma: proof_gamma };
            let mc = manifold.build()?;
            let rec = cmd_regime(m, &alpha, &lambda, scale, &opts, eps, &mc, seed)?;
            println!("{}", to_json(&rec));
        }
        Command::Region { m, figure, resolution, out_dir, seed } => {
            let fig = Figure::parse(&figure).ok_or_else(|| {
                CliError::Validation(format!("unknown figure {figure:?}"))
            })?;
            let (rec, csv) = cmd_region(m, fig, resolution, None, seed)?;
            let dir = cli::out_dir(out_dir.as_deref());
            std::fs::create_dir_all(&dir)?;
            let json_path = dir.join(format!("region_m{m}_{figure}.json"));
            let csv_path = dir.join(format!("region_m{m}_{figure}.csv"));
            std::fs::write(&json_path, to_json(&rec))?;
            std::fs::write(&csv_path, csv)?;
            println!("{}", to_json(&rec));
            eprintln!("wrote {} and {}", json_path.display(), csv_path.display());
        }
        Command::Delta { m, alpha, lambda, eps, manifold, seed } => {
            let alpha = wormholes::regimes::q_f64(parse_rational(&alpha)?);
            let lambda = wormholes::regimes::q_f64(parse_rational(&lambda)?);
            let mc = manifold.build()?;
            let rec = cmd_delta(m, alpha, lambda, &eps, &mc, seed)?;
            println!("{}", to_json(&rec));
        }
        Command::Sweep { config, out_dir } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = ExperimentConfig::parse(&text)?;
            let (rec, csv) = cmd_sweep(&cfg)?;
            let dir = cli::out_dir(out_dir.as_deref().or(cfg.out_dir.as_deref()));
            std::fs::create_dir_all(&dir)?;
            let stem = config
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "sweep".into());
            let json_path = dir.join(format!("{stem}_summary.json"));
            let csv_path = dir.join(format!("{stem}_eigenvalues.csv"));
            std::fs::write(&json_path, to_json(&rec))?;
            std::fs::write(&csv_path, csv)?;
            println!("{}", to_json(&rec));
            eprintln!("wrote {} and {}", json_path.display(), csv_path.display());
        }
        Command::Verify { suite, seed } => {
            let rep = cmd_verify(&suite, seed)?;
            println!("{}", to_json(&rep));
            if !rep.passed {
                return Err(CliError::Numerical(format!("suite {suite} failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
