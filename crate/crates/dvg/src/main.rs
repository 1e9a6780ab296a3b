use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dvg::{analyze, recheck_text, text, Overrides, ProblemSpec};

#[derive(Parser)]
#[command(name = "dvg", version, about = "Non-integrability certificates from discrete variational equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a problem file and emit a report.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        degree_bound: Option<u32>,
        #[arg(long)]
        ziglin_budget: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify the witnesses of a JSON report.
    Recheck { report: PathBuf },
}

fn run_analyze(file: PathBuf, format: Format, overrides: Overrides, out: Option<PathBuf>) -> ExitCode {
    let text_in = match fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let spec = match ProblemSpec::from_json(&text_in) {
        Ok(s) => overrides.apply(&s),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match std::panic::catch_unwind(|| analyze(&spec)) {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(_) => {
            eprintln!("internal error during analysis");
            return ExitCode::from(3);
        }
    };
    let rendered = match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => text::render(&report),
    };
    match out {
        Some(path) => {
            if let Err(e) = fs::write(&path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::SUCCESS
}

fn run_recheck(path: PathBuf) -> ExitCode {
    let text_in = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    match recheck_text(&text_in) {
        Ok(outcome) => {
            for c in &outcome.checks {
                println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
            }
            println!("{}", if outcome.ok() { "recheck passed" } else { "recheck FAILED" });
            if outcome.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Analyze { file, format, seed, degree_bound, ziglin_budget, out } => {
            run_analyze(file, format, Overrides { seed, degree_bound, ziglin_budget }, out)
        }
        Command::Recheck { report } => run_recheck(report),
    }
}
