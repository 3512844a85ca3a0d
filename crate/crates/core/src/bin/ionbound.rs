//! `ionbound`: ionization-probability bounds from the command line.
//!
//! Exit codes: 0 success, 1 configuration or I/O error, 2 numeric failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ionbound::bounds::{BoundOptions, ShiftMode};
use ionbound::cli::{self, CliError, RunSettings, SweepConfig, OUT_DIR_ENV};
use ionbound::hydrogen::HydrogenState;
use ionbound::parallel::Execution;

#[derive(Debug, Parser)]
#[command(
    name = "ionbound",
    version,
    about = "Rigorous bounds on strong-field ionization probabilities"
)]
struct Args {
    /// Pulse description (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pulse: Option<PathBuf>,

    /// Bound state as `n,l,m`.
    #[arg(long, global = true, default_value = "1,0,0", value_parser = parse_state)]
    state: HydrogenState,

    /// Drop the field-independent spreading term from the first bound term.
    #[arg(long, global = true)]
    drop_spreading: bool,

    /// How the shifted-potential norm is evaluated.
    #[arg(long, global = true, default_value = "estimate", value_parser = parse_mode)]
    shift_mode: ShiftMode,

    /// Output file. Defaults to a file in $IONBOUND_OUT_DIR, else stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Default output directory.
    #[arg(long, global = true, env = OUT_DIR_ENV, value_name = "DIR", hide_env_values = true)]
    out_dir: Option<PathBuf>,

    /// Run every scan on the current thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// All bounds for one pulse (`--pulse` required): text table, plus CSV
    /// when an output location is set.
    Report,
    /// One cycle at ω = 1.5 for E₀ = 5, 10, 20: upper and lower bounds.
    Figure1,
    /// Four cycles at ω = 50, E₀ = 10: upper bound.
    Figure2,
    /// Every bound over a grid of cosine pulses read from a TOML file.
    Sweep {
        #[arg(value_name = "CONFIG")]
        config: PathBuf,
    },
    /// Resolvent constant, K(n,l) table and ground-state shift norms.
    Constants,
}

fn parse_state(s: &str) -> Result<HydrogenState, String> {
    s.parse()
        .map_err(|e: ionbound::hydrogen::HydrogenError| e.to_string())
}

fn parse_mode(s: &str) -> Result<ShiftMode, String> {
    s.parse()
}

fn emit(args: &Args, default_name: &str, contents: &str) -> Result<(), CliError> {
    match cli::resolve_output(args.out.as_deref(), args.out_dir.as_deref(), default_name) {
        Some(path) => cli::write_output(&path, contents),
        None => to_stdout(contents),
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn to_stdout(contents: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match out
        .write_all(contents.as_bytes())
        .and_then(|()| out.flush())
    {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let settings = RunSettings {
        state: args.state,
        options: BoundOptions::default()
            .drop_spreading(args.drop_spreading)
            .shift_mode(args.shift_mode),
        execution: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    match &args.command {
        Command::Report => {
            let path = args
                .pulse
                .as_deref()
                .ok_or_else(|| CliError::Config("`report` needs --pulse <path>".into()))?;
            let pulse = cli::load_pulse(path)?;
            let reports = cli::report(&pulse, &settings)?;
            to_stdout(&cli::report_text(&pulse, &settings, &reports))?;
            if let Some(out) =
                cli::resolve_output(args.out.as_deref(), args.out_dir.as_deref(), "report.csv")
            {
                cli::write_output(&out, &cli::report_csv(&reports))?;
            }
            Ok(())
        }
        Command::Figure1 => emit(args, "figure1.csv", &cli::figure1(&settings)?.to_csv()),
        Command::Figure2 => emit(args, "figure2.csv", &cli::figure2(&settings)?.to_csv()),
        Command::Sweep { config } => {
            let text = std::fs::read_to_string(config)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config.display())))?;
            let cfg = SweepConfig::parse(&text)?;
            let rows = cli::sweep(&cfg, &settings)?;
            emit(args, "sweep.csv", &cli::sweep_csv(&rows))
        }
        Command::Constants => emit(
            args,
            "constants.txt",
            &cli::constants_report(settings.execution)?,
        ),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ionbound: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
