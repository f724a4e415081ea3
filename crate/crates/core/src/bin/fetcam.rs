use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fetcam::commands::{self, CommandResult, Overrides, WaveScenario};
use fetcam::{CellDesign, RunConfig};

#[derive(Parser)]
#[command(name = "fetcam", version, about = "FeFET TCAM behavioral simulator and design-space explorer")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// JSON configuration layered over the built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    no_early_termination: bool,
    /// Restrict to a design; repeatable.
    #[arg(long = "design", global = true)]
    designs: Vec<CellDesign>,
}

#[derive(Subcommand)]
enum Command {
    /// Check device, divider and array constraints.
    Validate,
    /// Functional search over stored contents.
    Search {
        /// Grid of {0,1,X}, one word per line (random contents if omitted).
        #[arg(long, requires = "queries")]
        contents: Option<PathBuf>,
        /// Lines of {0,1}.
        #[arg(long, requires = "contents")]
        queries: Option<PathBuf>,
    },
    /// Latency and energy over the configured word lengths.
    Sweep,
    /// Figure-of-merit table at 64x64.
    Fom,
    /// Match-line trace of a one-row 1.5T1Fe array.
    Waveform {
        #[arg(long, default_value = "step2_miss")]
        scenario: WaveScenario,
        #[arg(long, default_value_t = 1.0)]
        time_step_ps: f64,
    },
}

fn run(cli: Cli) -> fetcam::Result<CommandResult> {
    let g = &cli.global;
    if let Some(n) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| fetcam::TcamError::InvalidInput(e.to_string()))?;
    }
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    Overrides {
        out_dir: g.out.clone(),
        seed: g.seed,
        no_early_termination: g.no_early_termination,
        designs: g.designs.clone(),
    }
    .apply(&mut cfg);
    cfg.validate()?;
    match cli.command {
        Command::Validate => commands::cmd_validate(&cfg),
        Command::Search { contents, queries } => commands::cmd_search(&cfg, contents.as_deref(), queries.as_deref()),
        Command::Sweep => commands::cmd_sweep(&cfg),
        Command::Fom => commands::cmd_fom(&cfg),
        Command::Waveform { scenario, time_step_ps } => {
            commands::cmd_waveform(&cfg, scenario, time_step_ps * 1e-12, !g.designs.is_empty())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(r) => {
            print!("{}", r.summary);
            for f in &r.files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::from(r.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}
