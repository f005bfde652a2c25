use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use sweepslide::scenario::{
    build_world, builtin_scenario, load_obj_mesh, run_scenario_in, summarize, write_records,
    Algorithm, BuiltinMesh, MeshParams, MeshSource, OutputFormat, Scenario,
};
use sweepslide::verify::{self, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "sweepslide",
    version,
    about = "Swept-sphere collide-and-slide scenarios and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (TOML).
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the default scenario for a builtin mesh.
    Builtin {
        /// floor, obtuse_corner, acute_corner, crease, box_room or random_soup
        id: BuiltinMesh,
        /// Dihedral angle in degrees (corners and creases).
        #[arg(long)]
        angle: Option<f64>,
        #[arg(long)]
        frames: Option<usize>,
        #[arg(long, default_value = "improved")]
        algo: Algorithm,
        /// Stand-off distance in unit-sphere space.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Recursion cap for the legacy algorithm.
        #[arg(long)]
        max_recursion: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the acceptance checks; exits nonzero if any fails.
    Verify {
        /// Random cases per operation-level check.
        #[arg(long, default_value_t = VerifyOptions::default().trials)]
        trials: usize,
        /// Frames in the fuzz corpus.
        #[arg(long, default_value_t = VerifyOptions::default().fuzz_frames)]
        fuzz_frames: usize,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
    },
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Output file. With `--algo both` this is a template: `a.csv` becomes
    /// `a.improved.csv` and `a.legacy.csv`. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json; inferred from the `--out` extension when omitted.
    #[arg(long)]
    format: Option<OutputFormat>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { scenario, output } => {
            let s = Scenario::from_file(&scenario)
                .with_context(|| format!("loading {}", scenario.display()))?;
            simulate(&s, &output)?;
        }
        Command::Builtin {
            id,
            angle,
            frames,
            algo,
            epsilon,
            seed,
            max_recursion,
            output,
        } => {
            let params = MeshParams {
                angle,
                seed,
                ..Default::default()
            };
            let mut s = builtin_scenario(id, params)?;
            s.algorithm = algo;
            if let Some(f) = frames {
                s.frames = f;
            }
            if let Some(e) = epsilon {
                s.epsilon = e;
            }
            if let Some(m) = max_recursion {
                s.max_recursion = m;
            }
            s.validate()?;
            simulate(&s, &output)?;
        }
        Command::Verify {
            trials,
            fuzz_frames,
            seed,
        } => {
            let opts = VerifyOptions {
                fuzz_frames,
                trials,
                seed,
            };
            let outcomes = verify::run_all(&opts);
            for o in &outcomes {
                println!("{o}");
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!(
                "{} of {} checks passed",
                outcomes.len() - failed,
                outcomes.len()
            );
            if failed > 0 {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn simulate(s: &Scenario, output: &OutputArgs) -> Result<()> {
    if let MeshSource::File(path) = &s.mesh {
        let mesh = load_obj_mesh(path)?;
        if mesh.degenerate_skipped > 0 {
            eprintln!(
                "warning: skipped {} degenerate triangle(s) in {}",
                mesh.degenerate_skipped,
                path.display()
            );
        }
    }
    let world = build_world(s)?;
    let run = run_scenario_in(s, &world)?;

    let format = match (output.format, &output.out) {
        (Some(f), _) => f,
        (None, Some(p)) if p.extension().is_some_and(|e| e == "json") => OutputFormat::Json,
        _ => OutputFormat::Csv,
    };
    if run.streams.len() > 1 && output.out.is_none() {
        bail!("`--algo both` writes two streams; give --out");
    }
    let threshold = s.epsilon * s.radii.min_radius();
    let commanded = s.commanded_speeds();
    for (algorithm, records) in &run.streams {
        match &output.out {
            Some(out) => {
                let path = if run.streams.len() > 1 {
                    stream_path(out, algorithm.name(), format)
                } else {
                    out.clone()
                };
                let file =
                    File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                let mut w = BufWriter::new(file);
                write_records(records, format, &mut w)?;
                w.flush()
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            None => write_records(records, format, io::stdout().lock())?,
        }
        eprintln!("[{}] {}", algorithm.name(), s.name);
        eprintln!("{}", summarize(records, &commanded, threshold));
    }
    Ok(())
}

/// `dir/run.csv` → `dir/run.<tag>.csv`; keeps the user's extension if any.
fn stream_path(out: &Path, tag: &str, format: OutputFormat) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = out
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| format.extension().to_string());
    out.with_file_name(format!("{stem}.{tag}.{ext}"))
}
