//! `pwc`: batch front end for piecewise-contracting map studies.
//!
//! Exit status: 0 on success, 2 when a check fails, 1 on usage or I/O errors.

mod commands;
mod config;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{Ctx, RenderKind};
use config::{Flags, RunConfig};
use pwcmap::map_model::Side1D;
use std::path::Path;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs; the message names the flag.
    Usage(String),
    /// A computation could not be carried out (not a failed check).
    Failed(String),
    Io(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failed(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "pwc", version, about = "Attractors of piecewise contracting maps")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Start {
    Left,
    Right,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check contraction, partition and ranges of a map.
    Validate {
        #[arg(long, default_value_t = 4096)]
        samples: usize,
    },
    /// Iterate one orbit; writes orbit.json and orbit.csv.
    Simulate {
        #[arg(long, value_parser = parse_point)]
        x0: [f64; 2],
    },
    /// ω-limit of one orbit (`--x0`), a non-wandering probe (`--probe`), or
    /// the limit set over `--seeds` random seeds.
    Omega {
        #[arg(long, value_parser = parse_point, conflicts_with = "probe")]
        x0: Option<[f64; 2]>,
        /// Ball centre; `--eps` is the radius, `--steps` the horizon.
        #[arg(long, value_parser = parse_point)]
        probe: Option<[f64; 2]>,
    },
    /// Atom covers for generations 1..=gens, or one atom with `--word`.
    Atoms {
        #[arg(long, value_parser = parse_word)]
        word: Option<::std::vec::Vec<u8>>,
    },
    /// Separation test at generation `--gens`, then periodic orbits.
    Certify,
    /// Per-generation atom statistics and component counts.
    Diagnose,
    /// Orbit of the threshold under the two-branch interval map.
    Cantor {
        /// Iterate in f64 instead of exact arithmetic.
        #[arg(long)]
        float: bool,
        /// Also write cantor.csv.
        #[arg(long)]
        csv: bool,
        #[arg(long, value_enum, default_value = "left")]
        start: Start,
    },
    /// Built-in example maps.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
    /// PGM rasters of covers or an atom, or an SVG figure.
    Render {
        #[arg(long, value_enum, default_value = "covers")]
        kind: RenderKind,
        /// Generations to layer, e.g. `1,4,8` (default: every generation).
        #[arg(long, value_delimiter = ',')]
        levels: Vec<usize>,
        #[arg(long, value_parser = parse_word)]
        word: Option<::std::vec::Vec<u8>>,
    },
    /// Run the acceptance checks; writes repro.json.
    Repro {
        /// Subset of check ids, e.g. `1,4`.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum GalleryAction {
    List,
    /// Write NAME.json as a map-definition file.
    Emit { name: String },
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let x: f64 = a.trim().parse().map_err(|_| format!("bad x in `{s}`"))?;
    let y: f64 = b.trim().parse().map_err(|_| format!("bad y in `{s}`"))?;
    if !(x.is_finite() && y.is_finite()) {
        return Err(format!("non-finite point `{s}`"));
    }
    Ok([x, y])
}

fn parse_word(s: &str) -> Result<Vec<u8>, String> {
    let w: Vec<u8> = s
        .split(',')
        .map(|t| t.trim().parse::<u8>().map_err(|_| format!("bad label `{t}` in `{s}`")))
        .collect::<Result<_, _>>()?;
    if w.is_empty() {
        return Err("empty word".into());
    }
    Ok(w)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let cfg = RunConfig::resolve(&cli.flags)?;
    if let Some(n) = cfg.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failed(format!("--workers: {e}")))?;
    }
    let ctx = Ctx { cfg };
    match cli.command {
        Command::Validate { samples } => ctx.validate(samples),
        Command::Simulate { x0 } => ctx.simulate(x0),
        Command::Omega { probe: Some(c), .. } => ctx.probe(c),
        Command::Omega { x0, probe: None } => ctx.omega(x0),
        Command::Atoms { word } => ctx.atoms(word),
        Command::Certify => ctx.certify(),
        Command::Diagnose => ctx.diagnose(),
        Command::Cantor { float, csv, start } => {
            let side = match start {
                Start::Left => Side1D::Left,
                Start::Right => Side1D::Right,
            };
            ctx.cantor(float, csv, side)
        }
        Command::Gallery { action: GalleryAction::List } => ctx.gallery_list(),
        Command::Gallery { action: GalleryAction::Emit { name } } => ctx.gallery_emit(&name),
        Command::Render { kind, levels, word } => {
            let levels = if levels.is_empty() { (1..=ctx.cfg.gens).collect() } else { levels };
            ctx.render(kind, &levels, word)
        }
        Command::Repro { only } => ctx.repro((!only.is_empty()).then_some(only)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
