use crate::CliError;
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Which scalar the orbit commands iterate in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Arith {
    /// Exact dyadic arithmetic with zero tolerance when every boundary is
    /// algebraic, floats otherwise.
    Auto,
    Float,
    Exact,
}

/// Flags shared by every command. All are optional so that a `--config` file
/// can supply them; flags win over the file.
#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// Gallery name or path to a map-definition JSON file.
    #[arg(long, global = true)]
    pub map: Option<String>,
    /// Grid resolution `nx,ny`.
    #[arg(long, global = true, value_parser = parse_grid)]
    pub grid: Option<[u32; 2]>,
    #[arg(long, global = true)]
    pub gens: Option<usize>,
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long = "burn-in", global = true)]
    pub burn_in: Option<usize>,
    /// Cluster radius (orbit commands) or ball radius (`omega --probe`).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Boundary tolerance for float orbits.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of random seeds for aggregate orbit studies.
    #[arg(long, global = true)]
    pub seeds: Option<usize>,
    /// Worker threads; never changes output bytes.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output directory (default: `$PWC_OUT`, else `pwc_out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub arith: Option<Arith>,
    /// JSON file with any of the flag fields; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Example parameter override `key=value` (repeatable).
    #[arg(long = "param", global = true, value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
}

fn parse_grid(s: &str) -> Result<[u32; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => {
            let nx = a.trim().parse().map_err(|_| format!("bad nx in `{s}`"))?;
            let ny = b.trim().parse().map_err(|_| format!("bad ny in `{s}`"))?;
            Ok([nx, ny])
        }
        _ => Err(format!("expected `nx,ny`, got `{s}`")),
    }
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected `key=value`, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("value of `{k}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

/// Config file layout; same names as the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    map: Option<String>,
    grid: Option<[u32; 2]>,
    gens: Option<usize>,
    steps: Option<usize>,
    burn_in: Option<usize>,
    eps: Option<f64>,
    tol: Option<f64>,
    seed: Option<u64>,
    seeds: Option<usize>,
    workers: Option<usize>,
    out: Option<PathBuf>,
    arith: Option<Arith>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

/// Fully resolved configuration, recorded in every report.
///
/// Worker count and output directory are left out: they must not change
/// output bytes.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub map: Option<String>,
    pub params: BTreeMap<String, f64>,
    pub grid: [u32; 2],
    pub gens: usize,
    pub steps: usize,
    pub burn_in: usize,
    pub eps: f64,
    pub tol: f64,
    pub seed: u64,
    pub seeds: usize,
    pub arith: Arith,
    #[serde(skip)]
    pub workers: Option<usize>,
    #[serde(skip)]
    pub out: PathBuf,
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => read_config(p)?,
            None => FileConfig::default(),
        };
        let mut params = file.params;
        params.extend(flags.params.iter().cloned());
        let out = flags
            .out
            .clone()
            .or(file.out)
            .or_else(|| std::env::var_os("PWC_OUT").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("pwc_out"));
        let cfg = RunConfig {
            map: flags.map.clone().or(file.map),
            params,
            grid: flags.grid.or(file.grid).unwrap_or([256, 256]),
            gens: flags.gens.or(file.gens).unwrap_or(8),
            steps: flags.steps.or(file.steps).unwrap_or(10_000),
            burn_in: flags.burn_in.or(file.burn_in).unwrap_or(1000),
            eps: flags.eps.or(file.eps).unwrap_or(1e-4),
            tol: flags.tol.or(file.tol).unwrap_or(pwcmap::map_model::DEFAULT_TOL),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            seeds: flags.seeds.or(file.seeds).unwrap_or(100),
            arith: flags.arith.or(file.arith).unwrap_or(Arith::Auto),
            workers: flags.workers.or(file.workers),
            out,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), CliError> {
        let bad = |flag: &str, why: &str| Err(CliError::Usage(format!("--{flag}: {why}")));
        if self.grid[0] == 0 || self.grid[1] == 0 {
            return bad("grid", "both resolutions must be positive");
        }
        if self.gens == 0 {
            return bad("gens", "must be positive");
        }
        if self.steps == 0 {
            return bad("steps", "must be positive");
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad("eps", "must be a positive number");
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return bad("tol", "must be a non-negative number");
        }
        if self.seeds == 0 {
            return bad("seeds", "must be positive");
        }
        if self.workers == Some(0) {
            return bad("workers", "must be positive");
        }
        Ok(())
    }

    pub fn map_name(&self) -> Result<&str, CliError> {
        self.map.as_deref().ok_or_else(|| CliError::Usage("--map is required for this command".into()))
    }
}

fn read_config(p: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(p)
        .map_err(|e| CliError::Usage(format!("--config: cannot read {}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("--config: {e}")))
}
