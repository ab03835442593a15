//! `kummer`: verification suites, Monge–Ampère solves and topology tables.

mod output;
mod tables;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::SystemTime;

use clap::{Parser, Subcommand};
use kummer_core::error::Error;
use kummer_core::exec::Exec;
use kummer_core::solver::SolverConfig;
use kummer_core::verify::run_suite;

use output::OutDir;

#[derive(Parser)]
#[command(name = "kummer", version, about = "Glued Ricci-flat Kähler metrics on Kummer-type quotients")]
struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, default_value = "kummer-out")]
    out: PathBuf,
    /// Seed for random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite; exits 2 if a check fails.
    Verify { model: String, suite: String },
    /// Solve the Monge–Ampère problem of a JSON config; exits 3 on a no-go or non-convergence.
    Solve { config: PathBuf },
    /// Write a topology table: catalogue, family A, family D, fillability or flat3.
    Topology {
        #[arg(required = true, num_args = 1..=2)]
        selector: Vec<String>,
        /// Largest index in family and fillability tables.
        #[arg(long, default_value_t = 12)]
        max_k: i64,
        /// Index of the Taub-NUT quotients in the catalogue.
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
}

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Checks(usize),
    Solver(String),
}

impl Failure {
    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::Config(format!("{}: {e}", path.display()))
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Checks(_) => 2,
            Failure::Solver(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Checks(n) => write!(f, "{n} check(s) failed"),
            Failure::Solver(m) => write!(f, "solver stopped: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn executor(threads: Option<usize>) -> Result<Exec, Failure> {
    match threads {
        Some(0) => Err(Failure::Config("--threads must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Config(e.to_string()))?;
            Ok(Exec::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Err(Failure::Config("built without the parallel feature; use --threads 1".into())),
        None => Ok(Exec::default()),
    }
}

fn verify(out: &mut OutDir, model: &str, suite: &str, seed: u64, exec: Exec) -> Result<(), Failure> {
    let rep = run_suite(model, suite, seed, exec)?;
    let csv = rep.to_csv();
    print!("{csv}");
    out.bytes(&format!("verify-{model}-{suite}.csv"), csv.as_bytes())?;
    out.json(&format!("verify-{model}-{suite}.json"), &rep)?;
    match rep.checks.iter().filter(|c| !c.pass).count() {
        0 => Ok(()),
        n => Err(Failure::Checks(n)),
    }
}

fn solve(out: &mut OutDir, config: &Path, seed: u64, exec: Exec) -> Result<(), Failure> {
    let text = std::fs::read_to_string(config).map_err(|e| Failure::io(config, e))?;
    let cfg = SolverConfig::from_json(&text)?;
    let run = cfg.run(seed, exec)?;
    let report = &run.outcome.report;
    out.json("solve-report.json", report)?;
    let rows: Vec<Vec<String>> = report
        .residual_history
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let k = i.checked_sub(1).and_then(|j| report.contraction_history.get(j));
            vec![i.to_string(), format!("{r:e}"), k.map_or(String::new(), |k| format!("{k:e}"))]
        })
        .collect();
    out.csv("residuals.csv", &["iteration", "residual", "contraction"], &rows)?;
    if let Some(row) = &run.recovery {
        out.json("recovery.json", row)?;
    }
    if let Some(psi) = &run.outcome.psi {
        out.field("psi.f64", psi)?;
    }
    println!(
        "converged={} iterations={} residual={:e} min_eigenvalue={:e} margin={:e}",
        report.converged, report.iterations, report.final_residual, report.min_eigenvalue, report.smallness.margin
    );
    match (&run.outcome.error, report.converged) {
        (None, true) => Ok(()),
        (err, _) => {
            let why = report.diagnosis.clone().or_else(|| err.as_ref().map(|e| e.to_string()));
            Err(Failure::Solver(why.unwrap_or_else(|| "did not converge".into())))
        }
    }
}

fn topology(out: &mut OutDir, t: &tables::Table) -> Result<(), Failure> {
    out.csv(&format!("topology-{}.csv", t.stem), &t.header, &t.rows)?;
    out.json(&format!("topology-{}.json", t.stem), &t.json)?;
    println!("{}", t.header.join(","));
    for r in &t.rows {
        println!("{}", r.join(","));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let started = SystemTime::now();
    let exec = executor(cli.threads)?;
    // Unknown selectors are rejected before the output directory is created.
    let table = match &cli.command {
        Command::Topology { selector, max_k, k } => Some(tables::build(selector, *max_k, *k)?),
        _ => None,
    };
    let mut out = OutDir::create(&cli.out)?;
    let result = match &cli.command {
        Command::Verify { model, suite } => verify(&mut out, model, suite, cli.seed, exec),
        Command::Solve { config } => solve(&mut out, config, cli.seed, exec),
        Command::Topology { .. } => topology(&mut out, table.as_ref().expect("built above")),
    };
    let args: Vec<String> = std::env::args().collect();
    out.sidecar(&args, cli.seed, cli.threads, started)?;
    result
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are configuration errors; help and version are not errors.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("kummer: {f}");
            ExitCode::from(f.code())
        }
    }
}
