use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use telewit::analysis::analyze;
use telewit::decomp::{decompose, measurement_count, tomography_parameter_count};
use telewit::error::Error;
use telewit::fef::FefConfig;
use telewit::io::{decomposition_csv, parse_state, scan_csv, witness_to_json};
use telewit::scan::scan_isotropic;
use telewit::suite::{render_table, run_all, Fault, SuiteOptions};
use telewit::witness::witness_tw_from_overlap;

const EXIT_INTERNAL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Parser)]
#[command(name = "telewit", version, about = "Teleportation witnesses for bipartite d x d states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a state file: diagnostics, FEF, entanglement criteria, witness values.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = FefConfig::default().restarts)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Sweep the isotropic family and write a CSV table.
    ScanIsotropic {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_parser = parse_real)]
        f0: f64,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        beta_min: f64,
        #[arg(long, value_parser = parse_real, default_value = "1")]
        beta_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export T_W as JSON plus its local decomposition as CSV (same stem, `.csv`).
    Witness {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_parser = parse_real)]
        f0: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the oracle and property checks.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

/// Accepts decimals and fractions such as `2/3`.
fn parse_real(s: &str) -> Result<f64, String> {
    let bad = || format!("not a number: {s:?}");
    match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            Ok(n / d)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::Invariant { .. }
            | Error::OutOfRange { .. }
            | Error::NonSquareBipartition { .. }
            | Error::NonFactoring { .. }
            | Error::DimensionMismatch(_)
            | Error::NotHermitian(_)
            | Error::NotUnitary(_) => EXIT_VALIDATION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self {
            code: EXIT_INTERNAL,
            message: format!("{e:#}"),
        }
    }
}

fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot write to {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze {
            file,
            restarts,
            seed,
            json,
        } => {
            let text = fs::read_to_string(&file).with_context(|| format!("cannot read {}", file.display()))?;
            let rho = parse_state(&text)?;
            let cfg = FefConfig {
                restarts,
                seed,
                ..FefConfig::default()
            };
            let report = analyze(&rho, &cfg)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).context("serializing report")?);
            } else {
                print!("{}", report.to_text());
            }
            Ok(0)
        }
        Command::ScanIsotropic {
            dim,
            f0,
            beta_min,
            beta_max,
            steps,
            out,
        } => {
            let rows = scan_isotropic(dim, f0, beta_min, beta_max, steps)?;
            write_atomic(&out, &scan_csv(&rows))?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(0)
        }
        Command::Witness { dim, f0, out } => {
            let w = witness_tw_from_overlap(dim, f0)?;
            let report = decompose(&w)?;
            let csv_path = out.with_extension("csv");
            write_atomic(&out, &witness_to_json(&w))?;
            write_atomic(&csv_path, &decomposition_csv(&report))?;
            println!("witness        {}", out.display());
            println!("decomposition  {}", csv_path.display());
            println!("measurement settings: {}", measurement_count(&report));
            println!("tomography parameters: {}", tomography_parameter_count(dim));
            Ok(0)
        }
        Command::Verify { seed, inject_fault } => {
            let fault = match inject_fault.as_deref() {
                None => None,
                Some("eq18-sign") => Some(Fault::Eq18Sign),
                Some(other) => {
                    return Err(Failure {
                        code: EXIT_VALIDATION,
                        message: format!("unknown fault {other:?}"),
                    })
                }
            };
            let outcomes = run_all(&SuiteOptions { seed, fault });
            print!("{}", render_table(&outcomes));
            let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
            if failed.is_empty() {
                println!("all {} checks passed", outcomes.len());
                Ok(0)
            } else {
                eprintln!("failed checks: {}", failed.join(", "));
                Ok(EXIT_INTERNAL)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
