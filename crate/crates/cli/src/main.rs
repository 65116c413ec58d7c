use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use ghostscan::sim::BUILTIN_SCENE_NAMES;
use ghostscan_io::commands::{self, ClassifyArgs, SimulateArgs};
use ghostscan_io::csv_import::{import_csv, CsvOptions};
use ghostscan_io::Config;

#[derive(Parser)]
#[command(name = "ghostscan", version, about = "Multipath clutter classification for radar detections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled detection sequence from a scene.
    Simulate {
        /// Builtin scene name or scene JSON file.
        #[arg(long)]
        scene: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Override the scene's frame count.
        #[arg(long)]
        frames: Option<usize>,
        /// Also write the true surface geometry per frame.
        #[arg(long)]
        surfaces_out: Option<PathBuf>,
    },
    /// Label every detection of a frame sequence.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Surface file: a JSON array or per-frame JSONL.
        #[arg(long)]
        surfaces: Option<PathBuf>,
        /// Estimate surfaces from stationary detections.
        #[arg(long)]
        extract_surfaces: bool,
    },
    /// Compare verdicts with ground truth.
    Eval {
        #[arg(long)]
        verdicts: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Time per-frame classification.
    Bench {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        surfaces: Option<PathBuf>,
    },
    /// Convert a CSV detection export to frames.
    ImportCsv {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Angle columns are in degrees.
        #[arg(long)]
        degrees: bool,
    },
    /// Estimate surfaces for each frame.
    Extract {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// List builtin scenes, or print one as JSON.
    Scenes {
        #[arg(long)]
        dump: Option<String>,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { scene, out, truth, seed, frames, surfaces_out } => {
            let n = commands::run_simulate(&SimulateArgs { scene, out, truth, seed, frames, surfaces_out })?;
            eprintln!("wrote {n} frames");
        }
        Command::Classify { input, out, config, surfaces, extract_surfaces } => {
            let n = commands::run_classify(&ClassifyArgs { input, out, config, surfaces, extract_surfaces })?;
            eprintln!("classified {n} frames");
        }
        Command::Eval { verdicts, truth, report } => {
            let r = commands::evaluate_files(&verdicts, &truth)?;
            print!("{}", r.summary());
            if let Some(path) = report {
                commands::write_report(&r, &path)?;
            }
        }
        Command::Bench { input, config, surfaces } => {
            let frames = commands::read_frame_file(&input)?;
            let cfg = Config::load(config.as_deref())?;
            let surfaces = surfaces.as_deref().map(commands::load_surfaces).transpose()?;
            let s = commands::bench_frames(frames, cfg, surfaces)?;
            println!(
                "frames {} detections/frame {:.1} mean {:.3} ms p95 {:.3} ms max {:.3} ms",
                s.frames, s.mean_detections, s.mean_ms, s.p95_ms, s.max_ms
            );
        }
        Command::ImportCsv { input, out, degrees } => {
            let file = std::fs::File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let frames = import_csv(file, CsvOptions { degrees }).with_context(|| format!("{}", input.display()))?;
            commands::write_frames(&frames, &out)?;
            eprintln!("wrote {} frames", frames.len());
        }
        Command::Extract { input, out, config } => {
            let n = commands::run_extract(&input, &out, config.as_deref())?;
            eprintln!("wrote surfaces for {n} frames");
        }
        Command::Scenes { dump } => match dump {
            Some(name) => println!("{}", serde_json::to_string_pretty(&commands::load_scene(&name)?)?),
            None => BUILTIN_SCENE_NAMES.iter().for_each(|n| println!("{n}")),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
