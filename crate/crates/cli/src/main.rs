//! `oscinv`: batch driver for the oscillator-invariant verification
//! suites.
//!
//! Exit status: 0 when every check passes, 1 when a check fails or a
//! suite aborts (the failing record is still serialized), 2 for config
//! or usage errors (no outputs are written).

mod config;
mod report;
mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use config::RunConfig;
use report::{print_summary, write_report, ReportRecord};

#[derive(Parser)]
#[command(name = "oscinv", version, about = "Invariants, action-phase variables, squeezing, and phase operators of time-dependent quadratic oscillators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the suites selected in a TOML run configuration.
    Run {
        /// Path to the run configuration.
        config: PathBuf,
    },
    /// Build all phase-operator schemes at one dimension and emit a JSON
    /// report (stdout or --out).
    PhaseOps {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0.0)]
        theta0: f64,
        /// Restrict to one registered scheme.
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the phase distribution of number state N.
        #[arg(long)]
        dist_state: Option<usize>,
        /// Where the distribution CSV goes (default pegg_dist.csv).
        #[arg(long)]
        dist_csv: Option<PathBuf>,
    },
    /// Squeeze parameters and reduced coefficient for one (A, B) pair,
    /// with the canonical-form residual and both coefficient variants.
    Squeeze {
        #[arg(long = "A-re", alias = "a-re")]
        a_re: f64,
        #[arg(long = "A-im", alias = "a-im")]
        a_im: f64,
        #[arg(long = "B", alias = "b")]
        b: f64,
        #[arg(long, default_value_t = 60)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the registered coefficient profiles and phase schemes.
    Profiles,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => run_command(&config),
        Command::PhaseOps {
            dim,
            theta0,
            scheme,
            out,
            dist_state,
            dist_csv,
        } => tool_exit(phase_ops_command(
            dim,
            theta0,
            scheme.as_deref(),
            out,
            dist_state,
            dist_csv,
        )),
        Command::Squeeze {
            a_re,
            a_im,
            b,
            dim,
            out,
        } => tool_exit(squeeze_command(a_re, a_im, b, dim, out)),
        Command::Profiles => tool_exit(profiles_command()),
    }
}

fn tool_exit(result: anyhow::Result<()>) -> ExitCode {
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run_command(path: &std::path::Path) -> ExitCode {
    // config problems: status 2, nothing written
    let config = match RunConfig::load(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = std::fs::create_dir_all(&config.output_dir) {
        eprintln!("output dir error: {e}");
        return ExitCode::from(2);
    }

    let mut records: Vec<ReportRecord> = Vec::new();
    let mut aborted = false;
    for command in config.commands.clone() {
        let result = match command.as_str() {
            "simulate" => suites::suite_simulate(&config, &config.output_dir),
            "invariants-check" => suites::suite_invariants(&config, &config.output_dir),
            "quantum-check" => suites::suite_quantum(&config, &config.output_dir),
            "squeeze" => suites::suite_squeeze(&config, &config.output_dir),
            "phase-ops" => suites::suite_phase_ops(&config, &config.output_dir),
            "report" => Ok(Vec::new()),
            other => unreachable!("validated command {other}"),
        };
        match result {
            Ok(mut recs) => records.append(&mut recs),
            Err(e) => {
                // suite contract error: serialize the failing record and
                // stop with status 1
                records.push(
                    ReportRecord::new(&command, "suite_aborted", f64::MAX, 0.0)
                        .with_meta("error", format!("{e:#}")),
                );
                eprintln!("suite `{command}` aborted: {e:#}");
                aborted = true;
                break;
            }
        }
    }

    let report_path = config.output_dir.join("report.json");
    if let Err(e) = write_report(&report_path, &records) {
        eprintln!("report error: {e:#}");
        return ExitCode::from(1);
    }
    if config.commands.iter().any(|c| c == "report") {
        print_summary(&records);
    }
    let all_pass = records.iter().all(|r| r.pass);
    if aborted || !all_pass {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn phase_ops_command(
    dim: usize,
    theta0: f64,
    scheme: Option<&str>,
    out: Option<PathBuf>,
    dist_state: Option<usize>,
    dist_csv: Option<PathBuf>,
) -> anyhow::Result<()> {
    anyhow::ensure!(dim >= 2, "dim must be at least 2");
    let report = suites::phase_ops_report(dim, theta0, scheme)?;
    let json = serde_json::to_string_pretty(&report)?;
    match out {
        Some(path) => std::fs::write(&path, json + "\n")?,
        None => println!("{json}"),
    }
    if let Some(n) = dist_state {
        anyhow::ensure!(n < dim, "number state {n} outside dimension {dim}");
        let (_, basis) = oscinv_core::phase::pegg_barnett(dim, theta0);
        let mut state = vec![Complex64::new(0.0, 0.0); dim];
        state[n] = Complex64::new(1.0, 0.0);
        let dist = oscinv_core::phase::phase_distribution(&state, &basis)?;
        let total: f64 = dist.probabilities.iter().sum();
        anyhow::ensure!((total - 1.0).abs() <= 1e-12, "distribution sums to {total}");
        let path = dist_csv.unwrap_or_else(|| PathBuf::from("pegg_dist.csv"));
        let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        writeln!(file, "theta,probability")?;
        for (theta, p) in dist.angles.iter().zip(&dist.probabilities) {
            writeln!(file, "{theta:.16e},{p:.16e}")?;
        }
    }
    Ok(())
}

fn squeeze_command(
    a_re: f64,
    a_im: f64,
    b: f64,
    dim: usize,
    out: Option<PathBuf>,
) -> anyhow::Result<()> {
    let record = suites::squeeze_record(Complex64::new(a_re, a_im), b, dim)?;
    let json = serde_json::to_string_pretty(&record)?;
    match out {
        Some(path) => std::fs::write(&path, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(())
}

fn profiles_command() -> anyhow::Result<()> {
    let catalog = oscinv_core::coefficients::ProfileCatalog::default();
    println!("coefficient profiles:");
    for name in catalog.names() {
        println!("  {name}");
    }
    println!("phase schemes:");
    for scheme in oscinv_core::phase::registry() {
        println!("  {} - {}", scheme.name(), scheme.summary());
    }
    Ok(())
}
