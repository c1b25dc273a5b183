//! `polardeg`: polar degrees of projective hypersurfaces from singularity
//! data or by numerically counting a generic fibre of the gradient map.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polardeg_core::Suite;

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "polardeg", version, about = "Polar degrees of singular projective hypersurfaces")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice of the numerical oracle.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Worker threads for path tracking (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OracleOpts {
    /// Independent random targets; must be odd.
    #[arg(long, default_value_t = 5)]
    trials: u32,
    /// Newton residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    dedup_tol: Option<f64>,
    #[arg(long)]
    divergence_bound: Option<f64>,
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long)]
    min_step: Option<f64>,
    #[arg(long)]
    singular_grad_tol: Option<f64>,
    #[arg(long)]
    max_condition: Option<f64>,
}

#[derive(Debug, Args)]
struct PolyArg {
    /// Homogeneous polynomial in x0..xn, e.g. "x0^2*x2 + x1^2*x3".
    #[arg(long)]
    poly: String,
    /// Dimension of the ambient projective space.
    #[arg(long)]
    n: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Polar degree from a singularity profile (JSON file, `-` for stdin).
    Formula { profile: PathBuf },
    /// Numerical polar degree of a hypersurface.
    Oracle {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        opts: OracleOpts,
    },
    /// Compare the formula on a profile with the oracle on an equation.
    Verify {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        opts: OracleOpts,
    },
    /// Run a suite of the built-in regression catalog.
    Catalog {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[command(flatten)]
        opts: OracleOpts,
    },
    /// Check that f + s l^d never has smaller polar degree than f.
    Deform {
        #[command(flatten)]
        poly: PolyArg,
        /// Linear forms l (repeatable); random generic forms when omitted.
        #[arg(long = "l")]
        forms: Vec<String>,
        /// Number of random forms used when no --l is given.
        #[arg(long, default_value_t = 3)]
        random_forms: u32,
        /// Comma-separated deformation parameters.
        #[arg(long, value_delimiter = ',', default_value = "1e-3,1e-2,1e-1")]
        s_values: Vec<String>,
        /// Exponent of l; must equal the degree of f.
        #[arg(long)]
        d: Option<u32>,
        #[command(flatten)]
        opts: OracleOpts,
    },
    /// Check pol(f + s l^d) = (d-1) pol(f restricted to l = 0).
    SliceYomdin {
        #[command(flatten)]
        poly: PolyArg,
        /// Linear form l; a random generic one when omitted.
        #[arg(long = "l")]
        form: Option<String>,
        #[arg(long, default_value = "1/100")]
        s: String,
        #[command(flatten)]
        opts: OracleOpts,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::input("--workers must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::input(format!("cannot start worker pool: {e}")))?;
    }
    let out = commands::Output { json: cli.json };
    let seed = cli.seed;
    match cli.command {
        Command::Formula { profile } => commands::formula(&out, &profile),
        Command::Oracle { poly, opts } => commands::oracle(&out, &poly.poly, poly.n, &opts.config(seed)?),
        Command::Verify { poly, profile, opts } => commands::verify(&out, &poly, &profile, &opts.config(seed)?),
        Command::Catalog { suite, opts } => commands::catalog(&out, suite, &opts.config(seed)?),
        Command::Deform { poly, forms, random_forms, s_values, d, opts } => commands::deform(
            &out,
            &commands::DeformArgs { poly: &poly.poly, n: poly.n, forms, random_forms, s_values, d },
            &opts.config(seed)?,
        ),
        Command::SliceYomdin { poly, form, s, opts } => {
            commands::slice_yomdin(&out, &poly.poly, poly.n, form.as_deref(), &s, &opts.config(seed)?)
        }
    }
}

impl OracleOpts {
    fn config(&self, seed: u64) -> Result<polardeg_core::TrackerConfig, CliError> {
        let d = polardeg_core::TrackerConfig::with_seed(seed);
        let cfg = polardeg_core::TrackerConfig {
            trials: self.trials,
            newton_tol: self.tol.unwrap_or(d.newton_tol),
            dedup_tol: self.dedup_tol.unwrap_or(d.dedup_tol),
            divergence_bound: self.divergence_bound.unwrap_or(d.divergence_bound),
            max_steps: self.max_steps.unwrap_or(d.max_steps),
            min_step: self.min_step.unwrap_or(d.min_step),
            singular_grad_tol: self.singular_grad_tol.unwrap_or(d.singular_grad_tol),
            max_condition: self.max_condition.unwrap_or(d.max_condition),
            ..d
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the input-error code; help and version are not errors
            return if e.use_stderr() { ExitCode::from(error::EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
