use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use siec_cli::{parse_config, run, CliError, Command, EXIT_VALIDATION};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Gbz,
    Entropy,
    DipScan,
    Sweep,
    Baselines,
    VerifyMeasurement,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Gbz => Command::Gbz,
            Cmd::Entropy => Command::Entropy,
            Cmd::DipScan => Command::DipScan,
            Cmd::Sweep => Command::Sweep,
            Cmd::Baselines => Command::Baselines,
            Cmd::VerifyMeasurement => Command::VerifyMeasurement,
        }
    }
}

/// Entanglement dips in coupled non-Hermitian chains.
///
/// Exit status: 0 on success, 2 on a rejected configuration, 1 on a failed computation.
/// SIEC_THREADS bounds the worker threads when the config sets none.
#[derive(Debug, Parser)]
#[command(name = "siec", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Run directory; overrides `output_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write per-size spectra JSON files.
    #[arg(long)]
    emit_spectra: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("siec: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: Args) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.config.display())))?;
    let mut config = parse_config(&text, args.command.into())?;
    if let Some(out) = args.out {
        config.output_dir = out;
    }
    config.emit_spectra |= args.emit_spectra;
    let outcome = run(&config)?;
    println!("{}", outcome.summary);
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
