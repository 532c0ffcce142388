//! `logmono`: exact Bernoulli and tangent tables, zeta enclosures, sign
//! certificates for `log theta`, and log-monotonicity scans.
//!
//! Exit codes: 0 everything certified or holding, 1 a check failed,
//! 2 something stayed undecided, 3 usage or configuration error.

mod commands;
mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use logmono_core::Error;

use commands::{KthVariant, Report};
use config::{read_config_file, Format, Overrides, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot serialize report: {0}")]
    Json(serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Core(Error::DomainViolation(_) | Error::InsufficientRange { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Json(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "logmono", version, about = "Rigorous numerics for Bernoulli and tangent numbers")]
#[command(after_help = "CSV columns:\n  \
    bernoulli     n,B_n\n  \
    tangent       n,T_n,oracle\n  \
    zeta          x,deriv,mid,radius\n  \
    verify-theta  lo,hi,upper_bound,precision_bits\n  \
    verify-kth    x,mid,radius,sign\n  \
    logmono       r,shape,n,verdict  (with --sun: part,n,verdict)\n  \
    bounds        name,printed,mid,radius,status\n\
Balls print as midpoint and radius; the radius absorbs decimal rounding.\n\
LOGMONO_PREC_CAP overrides the precision ceiling (default 4096).\n\
Exit codes: 0 ok, 1 a check failed, 2 undecided, 3 usage error.")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in bits, 64..=65536.
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// Largest index (bernoulli, tangent, logmono) or grid size (verify-kth).
    #[arg(long = "n-max", global = true)]
    n_max: Option<u64>,
    /// LO:HI
    #[arg(long, global = true)]
    range: Option<String>,
    /// Scan depth (logmono), subdivision depth (verify-theta) or k_max (bounds).
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Strict comparisons; `--strict false` for the non-strict versions.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    strict: Option<bool>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Flat key=value file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact B_0..=B_{n-max}.
    Bernoulli,
    /// T(1..=n-max), cross-checked against the boustrophedon triangle up to 200.
    Tangent,
    /// Enclosure of zeta or one of its derivatives.
    Zeta {
        /// Decimal, > 1.
        x: String,
        #[arg(long, default_value_t = 0)]
        deriv: u32,
    },
    /// Certify (log theta)'' < 0 on --range (default 6.001:100) plus the tail bound.
    VerifyTheta,
    /// Signs of k-th log derivatives on a grid over --range.
    VerifyKth {
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, value_enum, default_value = "theta")]
        variant: KthVariant,
    },
    /// Log-monotonicity scan of a named sequence.
    Logmono {
        /// abs_bernoulli, root_abs_bernoulli, inv_root_abs_bernoulli, tangent,
        /// root_tangent or inv_root_tangent
        sequence: Option<String>,
        /// Check both parts of the conjecture on |B_2n|^(1/n) instead.
        #[arg(long)]
        sun: bool,
    },
    /// Printed constants next to their recomputed enclosures.
    Bounds,
}

fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply(read_config_file(path)?)?;
    }
    cfg.apply(Overrides {
        precision: cli.prec,
        n_max: cli.n_max,
        range: cli.range.clone(),
        depth: cli.depth,
        format: cli.format,
        out_path: cli.out.clone(),
        strict: cli.strict,
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(RunConfig, Report), CliError> {
    let cfg = resolve(cli)?;
    let report = match &cli.command {
        Command::Bernoulli => commands::bernoulli(&cfg)?,
        Command::Tangent => commands::tangent_cmd(&cfg)?,
        Command::Zeta { x, deriv } => commands::zeta(&cfg, x, *deriv)?,
        Command::VerifyTheta => commands::verify_theta(&cfg)?,
        Command::VerifyKth { k, variant } => commands::verify_kth(&cfg, *k, *variant)?,
        Command::Logmono { sequence, sun } => match (sequence, sun) {
            (None, true) => commands::sun(&cfg)?,
            (Some(name), false) => commands::logmono(&cfg, name)?,
            _ => return Err(CliError::Usage("give a sequence name or --sun".into())),
        },
        Command::Bounds => commands::bounds(&cfg)?,
    };
    Ok((cfg, report))
}

fn emit(cfg: &RunConfig, report: &Report) -> Result<(), CliError> {
    let body = match cfg.format {
        Format::Text => report.text.clone(),
        Format::Csv => report.csv.clone(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).map_err(CliError::Json)?;
            s.push('\n');
            s
        }
    };
    match &cfg.out_path {
        Some(p) => fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli).and_then(|(cfg, report)| emit(&cfg, &report).map(|_| report.outcome)) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
