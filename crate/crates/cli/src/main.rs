use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pmdyn::oracle::OracleMode;
use pmdyn_cli::config::{parse_config, Scenario};
use pmdyn_cli::run::{run_asymptotic, run_evolve, run_validate, sweep_values, Axis};
use pmdyn_cli::{presets, CliError};

#[derive(Parser)]
#[command(
    name = "pmdyn",
    version,
    about = "Post-Markovian two-qubit dynamics and correlations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Scenario file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Built-in scenario instead of a file.
    #[arg(long)]
    preset: Option<String>,
    /// Override a key, e.g. `--set D=1.7`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Time evolution: one CSV row per time point.
    Evolve {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Steady-state correlations along a sweep axis.
    Asymptotic {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        axis: AxisArg,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks the closed forms against the numerical oracles.
    Validate {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "inside")]
        mode: ModeArg,
    },
    /// Built-in scenarios.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
    /// Print a preset as a config file.
    Show {
        name: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    #[value(name = "T")]
    T,
    #[value(name = "b")]
    B,
    #[value(name = "dT")]
    DT,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Inside,
    Outside,
}

fn load(source: &Source) -> Result<Scenario, CliError> {
    let text = match (&source.config, &source.preset) {
        (Some(path), _) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(name)) => preset_text(name)?.to_string(),
        (None, None) => return Err(CliError::Config("need --config or --preset".into())),
    };
    parse_config(&text, &source.overrides)
}

fn preset_text(name: &str) -> Result<&'static str, CliError> {
    presets::find(name)
        .map(|p| p.config)
        .ok_or_else(|| CliError::Config(format!("unknown preset `{name}` (see `pmdyn preset list`)")))
}

fn with_output(path: &Option<PathBuf>, f: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    let io_err = |e: io::Error| CliError::Io(e.to_string());
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::Io(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
            lock.flush().map_err(io_err)
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evolve { source, out } => {
            let s = load(&source)?;
            with_output(&out, |w| run_evolve(&s, w))
        }
        Command::Asymptotic {
            source,
            axis,
            from,
            to,
            points,
            out,
        } => {
            let s = load(&source)?;
            let axis = match axis {
                AxisArg::T => Axis::T,
                AxisArg::B => Axis::B,
                AxisArg::DT => Axis::DT,
            };
            let values = sweep_values(from, to, points)?;
            with_output(&out, |w| run_asymptotic(&s, axis, &values, w))
        }
        Command::Validate { source, mode } => {
            let s = load(&source)?;
            let mode = match mode {
                ModeArg::Inside => OracleMode::HamiltonianInside,
                ModeArg::Outside => OracleMode::HamiltonianOutside,
            };
            let mut ok = true;
            with_output(&None, |w| {
                ok = run_validate(&s, mode, w)?;
                Ok(())
            })?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Validation)
            }
        }
        Command::Preset { action } => match action {
            PresetAction::List => {
                for p in &presets::PRESETS {
                    println!("{:<18} {}", p.name, p.summary);
                }
                Ok(())
            }
            PresetAction::Show { name } => {
                print!("{}", preset_text(&name)?);
                Ok(())
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pmdyn: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
