use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use entswitch_cli::{parse_config, run, CliError, Experiment};

/// Thread count for parallel sweeps and correlation integrals.
const THREADS_VAR: &str = "ENTSWITCH_THREADS";

#[derive(Debug, Parser)]
#[command(name = "entswitch", version, about = "Entanglement sweeps and switching protocols for a driven four-level emitter in a cavity")]
struct Args {
    /// Run configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the experiment named in the configuration.
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
    /// Overrides the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Environment(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Environment(e.to_string()))
}

fn execute(args: Args) -> Result<(), CliError> {
    init_threads()?;
    let text = std::fs::read_to_string(&args.config).map_err(|source| CliError::Io {
        path: args.config.clone(),
        source,
    })?;
    let mut cfg = parse_config(&text)?;
    if let Some(e) = args.experiment {
        cfg.experiment = e;
    }
    if let Some(out) = args.out {
        cfg.out_dir = out;
    }
    let summary = run(&cfg)?;
    for f in &summary.files {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
