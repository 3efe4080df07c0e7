use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use superpv::cli::{emit_report, exit_code, run, Problem, TaskConfig};
use superpv::Error;

#[derive(Parser)]
#[command(name = "superpv", version, about = "Checks and solves linear differential systems over superrings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task in a problem file and write a JSONL report.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run tasks on a thread pool; output order is unchanged.
        #[arg(long)]
        parallel: bool,
    },
    /// Run only the consistency checks of a problem file.
    Verify {
        config: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u32,
    },
    /// Truncated fundamental matrix of the module.
    Solve {
        config: PathBuf,
        #[arg(long)]
        order: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &PathBuf) -> Result<Problem, String> {
    let src = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Problem::from_toml(&src).map_err(|e| match e {
        Error::Parse { .. } => format!("{}: {e}", path.display()),
        other => format!("{}: invalid problem: {other}", path.display()),
    })
}

fn with_tasks(mut p: Problem, tasks: Vec<TaskConfig>) -> Result<Problem, String> {
    let mut config = p.config.clone();
    config.tasks = tasks;
    config.output = None;
    p = Problem::build(&config).map_err(|e| format!("invalid problem: {e}"))?;
    Ok(p)
}

fn execute(cmd: Command) -> Result<i32, String> {
    let (problem, out, parallel) = match cmd {
        Command::Run { config, out, parallel } => {
            let p = load(&config)?;
            let out = out.or_else(|| p.config.output.as_ref().map(PathBuf::from));
            (p, out, parallel)
        }
        Command::Verify { config, samples, seed } => {
            (with_tasks(load(&config)?, vec![TaskConfig::Check { samples, seed }])?, None, false)
        }
        Command::Solve { config, order, out } => (with_tasks(load(&config)?, vec![TaskConfig::Solve { order }])?, out, false),
    };
    let records = run(&problem, parallel);
    let mut sink: Box<dyn Write> = match &out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| format!("{}: {e}", path.display()))?)),
        None => Box::new(io::stdout().lock()),
    };
    emit_report(&records, &mut sink).map_err(|e| e.to_string())?;
    for r in &records {
        if let Some(err) = r.witness.get("error") {
            eprintln!("task {} ({}): {}", r.index + 1, r.task, err.as_str().unwrap_or_default());
        }
    }
    Ok(exit_code(&records))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
