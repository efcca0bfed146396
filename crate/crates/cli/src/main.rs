use casimir_cli::config::Units;
use casimir_cli::{exit, parse_config};
use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

/// Casimir energies, forces and lateral effects from a configuration file.
#[derive(Debug, Parser)]
#[command(name = "casimir", version)]
struct Args {
    /// INI configuration file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// CSV output file (default: stdout).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output units.
    #[arg(long, value_parser = ["natural", "si"])]
    units: Option<String>,
    /// Relative quadrature tolerance.
    #[arg(long, value_name = "X")]
    tolerance: Option<f64>,
    /// Multipole cutoff for plane-sphere runs.
    #[arg(long = "ellmax", value_name = "N")]
    ell_max: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = match real_main(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                casimir_cli::CliError::Model(_) => exit::CONVERGENCE,
                _ => exit::CONFIG,
            }
        }
    };
    ExitCode::from(code as u8)
}

fn real_main(args: Args) -> Result<i32, casimir_cli::CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| casimir_cli::CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(n) = args.workers {
        if n == 0 {
            return Err(casimir_cli::CliError::Config("--workers must be ≥ 1".into()));
        }
        cfg.workers = Some(n);
    }
    if let Some(p) = args.out {
        cfg.output = Some(p);
    }
    if let Some(u) = args.units {
        cfg.units = u.parse::<Units>().map_err(casimir_cli::CliError::Config)?;
    }
    if let Some(t) = args.tolerance {
        if !(t > 0.0 && t < 1.0) {
            return Err(casimir_cli::CliError::Config(format!("--tolerance must be in (0, 1), got {t}")));
        }
        cfg.tolerance = Some(t);
    }
    if let Some(l) = args.ell_max {
        cfg.ell_max = Some(l);
    }
    casimir_cli::execute(&cfg)
}
