use std::path::{Path, PathBuf};
use std::sync::Mutex;

use clap::{Parser, Subcommand};

use airy_evolve_cli::{parse_scenario, run_scenario, runner, ScenarioError};

/// Airy-packet evolution scenarios: run, verify, batch.
#[derive(Parser)]
#[command(name = "airy-evolve", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and write its artifacts.
    Run {
        /// Scenario document (flat dotted-key TOML).
        scenario: PathBuf,
        /// Output directory (default: scenario `output.dir`, then
        /// $AIRY_EVOLVE_OUT, then the current directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also dump every snapshot field as CSV.
        #[arg(long)]
        dump_fields: bool,
    },
    /// Run the built-in verification battery.
    Selfcheck,
    /// Run every `*.toml` scenario in a directory.
    Batch {
        /// Directory of scenario files.
        dir: PathBuf,
        /// Number of scenarios to run concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Output root; each scenario writes to a subdirectory named after
        /// its file stem.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep the exit-status contract: usage problems are configuration
            // errors unless clap is just printing help/version
            let _ = e.print();
            let code = if e.use_stderr() { runner::EXIT_IO_CONFIG } else { runner::EXIT_OK };
            std::process::exit(code);
        }
    };
    let code = match cli.command {
        Command::Run { scenario, out, dump_fields } => {
            run_one(&scenario, out.as_deref(), dump_fields)
        }
        Command::Selfcheck => airy_evolve_cli::selfcheck::run(),
        Command::Batch { dir, jobs, out } => batch(&dir, jobs.max(1), out.as_deref()),
    };
    std::process::exit(code);
}

fn default_out_dir() -> PathBuf {
    std::env::var_os("AIRY_EVOLVE_OUT").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

fn run_one(path: &Path, out: Option<&Path>, dump_fields: bool) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", path.display());
            return runner::EXIT_IO_CONFIG;
        }
    };
    let scenario = match parse_scenario(&text) {
        Ok(s) => s,
        Err(e @ ScenarioError::Parse(_))
        | Err(e @ ScenarioError::MissingKey(_))
        | Err(e @ ScenarioError::Validation(_)) => {
            eprintln!("{}: {e}", path.display());
            return runner::EXIT_IO_CONFIG;
        }
    };
    let out_dir = out
        .map(Path::to_path_buf)
        .or_else(|| scenario.output_dir.clone())
        .unwrap_or_else(default_out_dir);
    let code = run_scenario(&scenario, &out_dir, dump_fields);
    println!("{}: exit status {code} (artifacts in {})", path.display(), out_dir.display());
    code
}

fn batch(dir: &Path, jobs: usize, out: Option<&Path>) -> i32 {
    let mut scenarios: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "toml"))
            .collect(),
        Err(e) => {
            eprintln!("cannot read directory {}: {e}", dir.display());
            return runner::EXIT_IO_CONFIG;
        }
    };
    scenarios.sort();
    if scenarios.is_empty() {
        eprintln!("no *.toml scenarios in {}", dir.display());
        return runner::EXIT_IO_CONFIG;
    }
    let out_root = out.map(Path::to_path_buf).unwrap_or_else(default_out_dir);

    let queue = Mutex::new(scenarios);
    let worst = Mutex::new(runner::EXIT_OK);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let Some(path) = queue.lock().unwrap().pop() else { break };
                let stem = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                let code = run_one(&path, Some(&out_root.join(stem)), false);
                let mut worst = worst.lock().unwrap();
                *worst = (*worst).max(code);
            });
        }
    });
    worst.into_inner().unwrap()
}
