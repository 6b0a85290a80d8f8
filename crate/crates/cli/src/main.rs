use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hetnet_cli::commands::{self, SweepRange};
use hetnet_cli::config::parse_scenario_with;
use hetnet_cli::output::write_json;
use hetnet_cli::presets::{self, PresetOptions};
use hetnet_cli::CliError;
use hetnet_core::engine::build_topologies;

#[derive(Parser)]
#[command(name = "hetnet", version, about = "Macro/pico network simulator with pico sleep control")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// Override a key, e.g. `--set policy.t_activate=12`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Write per-slot user positions and serving cells (realization 0).
        #[arg(long)]
        trace_users: bool,
        /// Write per-slot pico modes (realization 0).
        #[arg(long)]
        trace_picos: bool,
    },
    /// Run a scenario for every value of one key.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long, default_value = "policy.t_activate")]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a named experiment family.
    Preset {
        /// One of: table5, fig12_threshold_sweep, fig18_22_sleep_sweep,
        /// fig23_26_hotspot_sweep, fig27_28_timeseries, fig29_30_occupancy,
        /// fig35_42_policy_compare.
        name: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(0..=i64::MAX as u64))]
        seed: u64,
        #[arg(long)]
        realizations: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run a preset from its manifest.
    Replay {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the cell layout of a scenario as JSON.
    DumpTopology {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path, overrides: &[String]) -> Result<hetnet_core::Scenario, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(parse_scenario_with(&text, overrides)?)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            scenario,
            overrides,
            out,
            trace_users,
            trace_picos,
        } => {
            let s = load(&scenario, &overrides)?;
            let summary = commands::run(&s, &out, trace_users, trace_picos)?;
            println!(
                "ee_mean={:.1} bits/J capacity_mean={:.4e} b/s power_mean={:.2} W active_picos_mean={:.2}",
                summary.ee_mean, summary.capacity_mean, summary.power_mean, summary.active_picos_mean
            );
        }
        Command::Sweep {
            scenario,
            overrides,
            param,
            from,
            to,
            step,
            out,
        } => {
            let text = fs::read_to_string(&scenario)?;
            let range = SweepRange { param, from, to, step };
            let rows = commands::sweep(&text, &overrides, &range)?;
            commands::write_sweep(&out, &rows)?;
            println!("{} points written to {}", rows.len(), out.join("sweep.csv").display());
        }
        Command::Preset {
            name,
            seed,
            realizations,
            out,
        } => {
            let out = out.unwrap_or_else(|| PathBuf::from("out").join(&name));
            presets::run_preset(&name, PresetOptions { seed, realizations }, &out)?;
            println!("preset {name} written to {}", out.display());
        }
        Command::Replay { manifest, out } => {
            let m = presets::replay(&manifest, &out)?;
            println!("preset {} replayed into {}", m.preset, out.display());
        }
        Command::DumpTopology {
            scenario,
            overrides,
            out,
        } => {
            let s = load(&scenario, &overrides)?;
            let (serving, _) = build_topologies(&s).map_err(hetnet_core::EngineError::from)?;
            match out {
                Some(path) => write_json(&path, &serving.export())?,
                None => println!("{}", serde_json::to_string_pretty(&serving.export())?),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
