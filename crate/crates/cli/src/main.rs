use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use qheat_cli::{emit, parse_config, preset, run_scenario, Format, RunOptions, PRESET_NAMES};

/// Heat-engine simulations: local and global Lindblad descriptions
/// cross-validated against exact finite-bath dynamics.
#[derive(Parser)]
#[command(name = "qheat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in preset or a TOML scenario file.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Preset name (fig2, fig3, fig4, fig5, fig6a, fig6b, fig6a_inset,
    /// fig6b_inset, fig7, fig8, figA1) or path to a scenario .toml.
    scenario: String,

    /// Output format.
    #[arg(long, default_value = "csv")]
    format: Format,

    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads (0 = number of CPUs).
    #[arg(long, default_value_t = 0)]
    jobs: usize,

    /// Override the bath discretization index n of the exact method.
    #[arg(long)]
    n: Option<usize>,

    /// Override the bath cutoff ω_cut of the exact method.
    #[arg(long)]
    omega_cut: Option<f64>,

    /// Override the horizon factor (t = factor / max κ).
    #[arg(long)]
    horizon_factor: Option<f64>,

    /// Override the trailing window fraction used for steady averages.
    #[arg(long)]
    window_fraction: Option<f64>,

    /// Memory budget bounding concurrent exact evaluations.
    #[arg(long, default_value_t = 2048)]
    exact_memory_mb: usize,
}

fn run(args: &RunArgs) -> anyhow::Result<usize> {
    let mut scenario = match preset(&args.scenario) {
        Some(s) => s,
        None => {
            let text = fs::read_to_string(&args.scenario).with_context(|| {
                format!(
                    "{:?} is neither a preset ({}) nor a readable config file",
                    args.scenario,
                    PRESET_NAMES.join(", ")
                )
            })?;
            parse_config(&text)?
        }
    };
    if let Some(n) = args.n {
        scenario.exact.n = n;
    }
    if let Some(w) = args.omega_cut {
        scenario.exact.omega_cut = w;
    }
    if let Some(h) = args.horizon_factor {
        scenario.exact.horizon_factor = h;
    }
    if let Some(f) = args.window_fraction {
        scenario.exact.window_fraction = f;
    }
    let table = run_scenario(
        &scenario,
        &RunOptions {
            jobs: args.jobs,
            exact_memory_mb: args.exact_memory_mb,
        },
    )?;
    match &args.out {
        Some(path) => {
            let mut file = fs::File::create(path)
                .with_context(|| format!("creating output file {}", path.display()))?;
            emit(&table, args.format, &mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            emit(&table, args.format, stdout.lock())?;
        }
    }
    Ok(table.error_rows())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => match run(&args) {
            Ok(0) => ExitCode::SUCCESS,
            Ok(error_rows) => {
                eprintln!("{error_rows} point(s) failed; see the error column");
                ExitCode::from(2)
            }
            Err(err) => {
                eprintln!("error: {err:#}");
                ExitCode::from(1)
            }
        },
    }
}
