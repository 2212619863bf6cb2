use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use seehp::harness::{emit_csv, emit_trace, parse_config_str, parse_schemes, preset, run_sweep, PRESETS};

/// Run a parameter sweep and write the results as CSV.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Args {
    /// Scenario file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Named sweep (fig2 ... fig7m), or `config` for the sweep in the file.
    #[arg(long)]
    sweep: String,
    /// Trials per point; overrides the config.
    #[arg(long)]
    trials: Option<usize>,
    /// Root seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    output: PathBuf,
    /// Comma-separated schemes, e.g. SEEHP,SCM.
    #[arg(long)]
    schemes: Option<String>,
    /// Also write the per-iteration solver trace.
    #[arg(long)]
    emit_trace: bool,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

fn main() -> ExitCode {
    let args = Args::parse();
    let config_error = |msg: String| {
        eprintln!("error: {msg}");
        ExitCode::from(EXIT_CONFIG)
    };

    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => return config_error(format!("{}: {e}", args.config.display())),
    };
    let config = match parse_config_str(&text) {
        Ok(c) => c,
        Err(e) => return config_error(e.to_string()),
    };
    let (mut spec, scenario) = if args.sweep == "config" {
        (config.sweep.clone(), config.scenario.clone())
    } else {
        match preset(&args.sweep) {
            Some(p) => (p.sweep(&config.sweep), p.scenario(&config.scenario)),
            None => {
                let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
                return config_error(format!("unknown sweep `{}` (expected config, {})", args.sweep, names.join(", ")));
            }
        }
    };
    if let Some(t) = args.trials {
        spec.trials = t;
    }
    if let Some(s) = args.seed {
        spec.root_seed = s;
    }
    if let Some(list) = &args.schemes {
        match parse_schemes(list) {
            Ok(s) => spec.schemes = s,
            Err(e) => return config_error(e.to_string()),
        }
    }

    let result = match run_sweep(&spec, &scenario) {
        Ok(r) => r,
        Err(
            e @ (seehp::Error::InvalidGeometry(_) | seehp::Error::InvalidHardware(_) | seehp::Error::InvalidParams(_)),
        ) => return config_error(e.to_string()),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };

    let written = std::fs::create_dir_all(&args.output)
        .map_err(seehp::Error::from)
        .and_then(|()| emit_csv(&result, args.output.join(format!("{}.csv", args.sweep))))
        .and_then(|()| {
            if args.emit_trace {
                emit_trace(&result, args.output.join(format!("{}_trace.tsv", args.sweep)))
            } else {
                Ok(())
            }
        });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }

    if result.all_infeasible() {
        eprintln!("every point of the sweep is infeasible");
        return ExitCode::from(EXIT_INFEASIBLE);
    }
    ExitCode::SUCCESS
}
