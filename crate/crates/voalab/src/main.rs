//! Command-line front end for the verification suites.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use voalab::config::{parse_config, parse_scalar, ReportFormat};
use voalab::fockspace::{enumerate_basis, graded_dimension, LatticeContext, SpaceSpec};
use voalab::suites::{list_suites, run_suites};
use voalab::VoalabError;

#[derive(Parser)]
#[command(name = "voalab", version, about = "Exact verification suites for rank-one lattice vertex algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites from a configuration file.
    Run {
        /// Path to a key=value configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report format: json (full report) or csv (dimension tables only).
        #[arg(long)]
        format: Option<ReportFormat>,
    },
    /// List the suite catalog.
    Suites,
    /// Print the graded dimensions of one lattice coset as CSV.
    Char {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        pprime: Option<u32>,
        /// Coset representative as a rational multiple of alpha, e.g. 1/2 or -3/4.
        #[arg(long)]
        coset: String,
        /// Largest conformal weight to enumerate, e.g. 6 or 13/2.
        #[arg(long)]
        max_weight: String,
    },
}

fn config_error(err: impl std::fmt::Display) -> ExitCode {
    eprintln!("configuration error: {err}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, out, format } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => return config_error(format!("{}: {e}", config.display())),
            };
            let mut cfg = match parse_config(&text) {
                Ok(c) => c,
                Err(e) => return config_error(e),
            };
            if let Some(f) = format {
                cfg.format = f;
            }
            if let Some(o) = out {
                cfg.output = Some(o);
            }
            let report = match run_suites(&cfg) {
                Ok(r) => r,
                Err(e @ VoalabError::UnknownSuite(_)) => return config_error(e),
                Err(e) => return config_error(e),
            };
            let rendered = match cfg.format {
                ReportFormat::Json => report.full_json(),
                ReportFormat::Csv => report.to_csv(),
            };
            match &cfg.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &rendered) {
                        return config_error(format!("{}: {e}", path.display()));
                    }
                }
                None => print!("{rendered}"),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Suites => {
            for info in list_suites() {
                println!("{}\n    identity: {}\n    scope: {}", info.name, info.anchor, info.defaults);
            }
            ExitCode::SUCCESS
        }
        Command::Char { p, pprime, coset, max_weight } => {
            if p < 1 {
                return config_error("p must be positive");
            }
            if let Some(pp) = pprime {
                if pp < 2 || p < 2 || num_integer::gcd(p, pp) != 1 {
                    return config_error("pprime requires p, pprime >= 2 and coprime");
                }
            }
            let ctx = match pprime {
                Some(pp) => LatticeContext::rank_one_minimal(p, pp),
                None => LatticeContext::rank_one_triplet(p),
            };
            let coset = match parse_scalar(&coset) {
                Ok(c) => c,
                Err(e) => return config_error(e),
            };
            let max_weight = match parse_scalar(&max_weight) {
                Ok(w) => w,
                Err(e) => return config_error(e),
            };
            let basis = enumerate_basis(&ctx, &SpaceSpec::Coset(ctx.alpha_times(coset)), &max_weight);
            println!("weight,dim");
            for (w, d) in graded_dimension(&basis) {
                println!("{w},{d}");
            }
            ExitCode::SUCCESS
        }
    }
}
