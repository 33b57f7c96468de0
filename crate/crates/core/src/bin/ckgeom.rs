//! `ckgeom run <scenario.json>`, `ckgeom census <tag> <n>`,
//! `ckgeom verify <report.json> [--order k]`.
//!
//! Exit codes: 0 ok, 1 malformed input, 2 precondition rejection or
//! unsupported construction, 3 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use ckgeom::constructions::{census, run_checks, verify, BuildReport, Construction};
use ckgeom::scenario::{run_scenario, Scenario};
use ckgeom::Error;

#[derive(Parser)]
#[command(
    name = "ckgeom",
    version,
    about = "Jet-level Cauchy-Kowalevski geometric constructions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its verified report.
    Run {
        scenario: PathBuf,
        /// Report path; overrides the scenario's own output field.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the free-data census of a construction.
    Census {
        tag: String,
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Recompute the checks of a report.
    Verify {
        report: PathBuf,
        /// Run every check at this order instead of the advertised ones.
        #[arg(long)]
        order: Option<usize>,
    },
}

const OK: u8 = 0;
const MALFORMED: u8 = 1;
const REJECTED: u8 = 2;
const FAILED: u8 = 3;

fn fail(e: &Error) -> ExitCode {
    let (status, code) = if e.is_precondition() || matches!(e, Error::Unsupported { .. }) {
        ("rejected", REJECTED)
    } else {
        ("malformed", MALFORMED)
    };
    println!(
        "{}",
        json!({ "status": status, "reason": e.reason(), "message": e.to_string() })
    );
    eprintln!("ckgeom: {e}");
    ExitCode::from(code)
}

fn read(path: &Path) -> Result<String, Error> {
    Ok(std::fs::read_to_string(path)?)
}

fn run(path: &Path, output: Option<PathBuf>) -> Result<u8, Error> {
    let sc = Scenario::from_json(&read(path)?)?;
    let rep = run_scenario(&sc)?;
    let text = rep.to_json()? + "\n";
    let target = output.or_else(|| {
        sc.output
            .as_ref()
            .map(|o| path.parent().unwrap_or_else(|| Path::new(".")).join(o))
    });
    match &target {
        Some(p) => std::fs::write(p, &text)?,
        None => print!("{text}"),
    }
    let passed = verify(&rep, None);
    for c in &rep.checks {
        eprintln!(
            "{:<24} order {:>2}  {}",
            c.name,
            c.zero_to_order,
            if c.passed { "ok" } else { "FAILED" }
        );
    }
    if let Some(p) = &target {
        eprintln!("report written to {}", p.display());
    }
    Ok(if passed { OK } else { FAILED })
}

fn print_census(tag: &str, n: usize, as_json: bool) -> Result<u8, Error> {
    let construction: Construction = tag.parse()?;
    let c = census(construction, n)?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&c)?);
        return Ok(OK);
    }
    println!("{} n={}", c.construction, c.n);
    println!("free functions: {}", c.free_functions.len());
    for s in &c.free_functions {
        println!("  {s}");
    }
    println!("initial slices: {}", c.initial_slices.len());
    for s in &c.initial_slices {
        println!("  {s}");
    }
    if !c.unknowns.is_empty() {
        println!("unknowns: {}", c.unknowns.join(" "));
    }
    if !c.determined.is_empty() {
        println!("determined: {}", c.determined.join(" "));
    }
    Ok(OK)
}

fn verify_file(path: &Path, order: Option<usize>) -> Result<u8, Error> {
    let rep = BuildReport::from_json(&read(path)?)?;
    let checks = run_checks(&rep, order)?;
    for c in &checks {
        println!(
            "{:<24} order {:>2}  {}",
            c.name,
            c.zero_to_order,
            if c.passed { "ok" } else { "FAILED" }
        );
    }
    let passed = verify(&rep, order);
    println!(
        "{}",
        if passed {
            "verified"
        } else {
            "verification failed"
        }
    );
    Ok(if passed { OK } else { FAILED })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { MALFORMED } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run { scenario, output } => run(&scenario, output),
        Command::Census { tag, n, json } => print_census(&tag, n, json),
        Command::Verify { report, order } => verify_file(&report, order),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => fail(&e),
    }
}
