use clap::{Args, Parser, Subcommand, ValueEnum};
use qreact_cli::commands::{self, CliError, Format, SimMode, SpeedAxis, WindowsKind};
use qreact_cli::config;
use std::path::PathBuf;

/// Reaction-time and resource modeling for surface-code architectures.
#[derive(Parser)]
#[command(name = "qreact", version, about)]
struct Cli {
    /// TOML configuration file (also honors QREACT_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Assemble a microarchitecture for the configured circuit and report it.
    Estimate(EstimateArgs),
    /// Assemble one architecture per reaction-time value (core logical cycles).
    SweepReaction(SweepArgs),
    /// Required decoding speed of a square memory patch versus T or d.
    DecoderSpeed(SpeedArgs),
    /// Size the decoder fleet for a QPU-scale scenario.
    Decoders(DecodersArgs),
    /// Run the decode/control pipeline simulator.
    Simulate(SimulateArgs),
    /// Emit a decoding-window set as JSON lines.
    Windows(WindowsArgs),
}

#[derive(Args)]
struct EstimateArgs {
    /// Pin the reaction time in core logical cycles instead of deriving it
    /// from the configured decoder.
    #[arg(long)]
    gamma_cycles: Option<f64>,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    gamma_min: f64,
    #[arg(long)]
    gamma_max: f64,
    #[arg(long, default_value_t = 25)]
    points: usize,
    /// Worker threads for independent sweep points.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct SpeedArgs {
    /// Circuit execution times in seconds (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "3600,2592000")]
    t_circuit_s: Vec<f64>,
    /// Sweep axis: injection count (t) or code distance (d).
    #[arg(long, default_value = "t")]
    sweep: String,
    /// Core distance for the t sweep.
    #[arg(long, default_value_t = 31)]
    distance: u32,
    #[arg(long, default_value_t = 1e4)]
    t_min: f64,
    #[arg(long, default_value_t = 1e12)]
    t_max: f64,
    #[arg(long, default_value_t = 81)]
    points: usize,
    /// Fixed injection count for the d sweep.
    #[arg(long, default_value_t = 100_000_000)]
    t_count: u64,
    #[arg(long, default_value_t = 13)]
    d_min: u32,
    #[arg(long, default_value_t = 61)]
    d_max: u32,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct DecodersArgs {
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
}

#[derive(Args)]
struct SimulateArgs {
    /// Simulate one 15-to-1 distillation unit instead of the core chain.
    #[arg(long)]
    msf: bool,
    /// Logical cycles of background memory-decode load (core mode).
    #[arg(long, default_value_t = 0)]
    background_cycles: u32,
    /// Write a JSON-lines event trace to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct WindowsArgs {
    /// "memory" or "surgery".
    #[arg(long, default_value = "memory")]
    kind: String,
    #[arg(long, default_value_t = 31)]
    distance: u32,
    /// Logical cycles covered (memory stream).
    #[arg(long, default_value_t = 32)]
    cycles: u32,
    /// Surgery cross-section in d x d patches.
    #[arg(long, default_value_t = 4)]
    nx: u32,
    #[arg(long, default_value_t = 1)]
    nz: u32,
    /// The surgery Pauli has a Y term (three decode layers).
    #[arg(long)]
    has_y: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let resolved = config::load(cli.config.as_deref()).map_err(|e| CliError::Config(e.to_string()))?;
    match cli.command {
        Command::Estimate(a) => {
            print!("{}", commands::cmd_estimate(&resolved, a.gamma_cycles, a.format.into())?);
        }
        Command::SweepReaction(a) => {
            let (out, notes) = commands::cmd_sweep_reaction(
                &resolved,
                a.gamma_min,
                a.gamma_max,
                a.points,
                a.jobs,
                a.format.into(),
            )?;
            for n in notes {
                eprintln!("note: {n}");
            }
            print!("{out}");
        }
        Command::DecoderSpeed(a) => {
            let axis = match a.sweep.as_str() {
                "t" | "T" => SpeedAxis::TCount { t_min: a.t_min, t_max: a.t_max, points: a.points },
                "d" | "D" => SpeedAxis::Distance { d_min: a.d_min, d_max: a.d_max },
                other => {
                    return Err(CliError::Config(format!("unknown sweep axis {other:?} (use t or d)")))
                }
            };
            print!(
                "{}",
                commands::cmd_decoder_speed(
                    &resolved,
                    &a.t_circuit_s,
                    axis,
                    a.distance,
                    a.t_count,
                    a.format.into()
                )?
            );
        }
        Command::Decoders(a) => {
            print!("{}", commands::cmd_decoders(&resolved, a.format.into())?);
        }
        Command::Simulate(a) => {
            let mode = if a.msf { SimMode::MsfUnit } else { SimMode::Core };
            print!(
                "{}",
                commands::cmd_simulate(
                    &resolved,
                    mode,
                    a.background_cycles,
                    a.trace.as_deref(),
                    a.format.into()
                )?
            );
            println!();
        }
        Command::Windows(a) => {
            let kind = match a.kind.as_str() {
                "memory" => WindowsKind::Memory { cycles: a.cycles },
                "surgery" => WindowsKind::Surgery { n_x: a.nx, n_z: a.nz, has_y: a.has_y },
                other => return Err(CliError::Config(format!("unknown window kind {other:?}"))),
            };
            print!("{}", commands::cmd_windows(a.distance, kind)?);
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
