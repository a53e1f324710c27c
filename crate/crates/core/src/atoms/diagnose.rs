use super::{generate_atoms, AtomConfig, AtomError, AtomTower, LambdaCover, Word};
use crate::geometry::{Cell, CellSet, Grid};
use crate::map_model::PwcMap2;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

/// Comparison of two covers of the same generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AtomicVerdict {
    Disjoint,
    Coincide,
    /// Partial overlap: covers cannot tell near-tangent atoms apart.
    Inconclusive,
}

pub fn atomic_probe(a: &CellSet, b: &CellSet) -> AtomicVerdict {
    if a == b {
        AtomicVerdict::Coincide
    } else if a.overlaps(b) {
        AtomicVerdict::Inconclusive
    } else {
        AtomicVerdict::Disjoint
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisconnectionLevel {
    pub generation: usize,
    pub words: usize,
    /// `#words · λⁿ`.
    pub product: f64,
    pub distinct_covers: usize,
    pub disjoint_pairs: usize,
    pub coinciding_pairs: usize,
    pub inconclusive_pairs: usize,
    /// `Disjoint` when every pair is disjoint or coincides, else `Inconclusive`.
    pub verdict: AtomicVerdict,
}

/// Evidence only: the conditions this tabulates are hypotheses about the
/// map, and no disconnection certificate is derived from them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisconnectionReport {
    pub lambda: f64,
    pub levels: Vec<DisconnectionLevel>,
}

fn level_stats(level: &LambdaCover, lambda: f64) -> DisconnectionLevel {
    let atoms = &level.atoms;
    let mut by_cell: HashMap<Cell, Vec<usize>> = HashMap::new();
    for (i, a) in atoms.iter().enumerate() {
        for c in a.cells.iter() {
            by_cell.entry(c).or_default().push(i);
        }
    }
    let mut shared: HashMap<(usize, usize), usize> = HashMap::new();
    for owners in by_cell.values() {
        for (x, &i) in owners.iter().enumerate() {
            for &j in &owners[x + 1..] {
                *shared.entry((i, j)).or_default() += 1;
            }
        }
    }
    let (mut coinciding, mut inconclusive) = (0, 0);
    for (&(i, j), &s) in &shared {
        if s == atoms[i].cells.len() && s == atoms[j].cells.len() {
            coinciding += 1;
        } else {
            inconclusive += 1;
        }
    }
    let n = atoms.len();
    let distinct: HashSet<&CellSet> = atoms.iter().map(|a| &a.cells).collect();
    DisconnectionLevel {
        generation: level.generation,
        words: n,
        product: n as f64 * lambda.powi(level.generation as i32),
        distinct_covers: distinct.len(),
        disjoint_pairs: n * n.saturating_sub(1) / 2 - shared.len(),
        coinciding_pairs: coinciding,
        inconclusive_pairs: inconclusive,
        verdict: if inconclusive == 0 { AtomicVerdict::Disjoint } else { AtomicVerdict::Inconclusive },
    }
}

impl DisconnectionReport {
    pub fn from_tower(t: &AtomTower) -> Self {
        Self { lambda: t.lambda, levels: t.levels.iter().map(|l| level_stats(l, t.lambda)).collect() }
    }
}

pub fn disconnection_series(m: &PwcMap2<f64>, grid: &Grid, n_max: usize) -> Result<DisconnectionReport, AtomError> {
    Ok(DisconnectionReport::from_tower(&generate_atoms(m, grid, &AtomConfig::new(n_max))?))
}

/// 4-connected component count of each cover.
pub fn atom_component_counts(level: &LambdaCover) -> Vec<(Word, usize)> {
    level.atoms.iter().map(|a| (a.word.clone(), a.cells.component_count())).collect()
}
