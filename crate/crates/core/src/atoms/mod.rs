//! Outer approximations of atoms and of the nested sets `Λ_n` on a grid.
//!
//! The engine follows source tiles rather than image cells: each tile of the
//! domain is pushed through the composed affine map of its word, split where
//! an image straddles a boundary or grows larger than a cell, and its image
//! box is rasterized at every generation. Raster slack is therefore paid once
//! per generation instead of compounding through repeated rasterization.

mod certify;
mod diagnose;

pub use certify::{
    certify_periodicity, separation_test, CertifyError, GraphEdge, PeriodicOrbit, PeriodicityReport,
    SeparationCertificate, SeparationOutcome,
};
pub use diagnose::{
    atom_component_counts, atomic_probe, disconnection_series, AtomicVerdict, DisconnectionLevel,
    DisconnectionReport,
};

use crate::geometry::{Box2, Cell, CellSet, GeometryError, Grid};
use crate::map_model::{AffineMap2, PwcMap2, RegionVerdict};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap, HashSet};
use thiserror::Error;

/// Piece labels in application order: `word[0]` is the piece of the source point.
pub type Word = Vec<u8>;

pub fn format_word(w: &[u8]) -> String {
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtomError {
    #[error("generation must be at least 1")]
    NoGenerations,
    #[error("grid domain does not match the map domain")]
    GridMismatch,
    #[error("generation-1 cover of piece {label} is empty; the grid is too coarse")]
    GridTooCoarse { label: usize },
    #[error("generation {generation} has {count} admissible words, above the limit of {limit}")]
    TooManyWords { generation: usize, count: usize, limit: usize },
    #[error("at most 255 pieces are supported")]
    TooManyPieces,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Debug)]
pub struct AtomConfig {
    pub generations: usize,
    /// Straddling images are bisected until they are `2^-refine` of a cell.
    pub refine: u32,
    pub max_words: usize,
    /// Root tiles per axis, the unit of parallel work.
    pub roots: u32,
}

impl AtomConfig {
    pub fn new(generations: usize) -> Self {
        Self { generations, refine: 3, max_words: 1 << 16, roots: 8 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomCover {
    pub word: Word,
    pub generation: usize,
    pub cells: CellSet,
}

/// Generation `n` of the tower: the admissible words' covers and their union.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaCover {
    pub generation: usize,
    pub union: CellSet,
    /// Sorted by word.
    pub atoms: Vec<AtomCover>,
}

impl LambdaCover {
    pub fn words(&self) -> Vec<Word> {
        self.atoms.iter().map(|a| a.word.clone()).collect()
    }

    pub fn cover(&self, word: &[u8]) -> Option<&AtomCover> {
        self.atoms
            .binary_search_by(|a| a.word.as_slice().cmp(word))
            .ok()
            .map(|i| &self.atoms[i])
    }
}

/// Covers for generations `1..=n`.
#[derive(Clone, Debug)]
pub struct AtomTower {
    pub grid: Grid,
    pub lambda: f64,
    pub levels: Vec<LambdaCover>,
}

impl AtomTower {
    /// Generation `n` (1-based).
    pub fn level(&self, n: usize) -> Option<&LambdaCover> {
        n.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    pub fn last(&self) -> &LambdaCover {
        self.levels.last().expect("at least one generation")
    }
}

/// Relative padding applied to every image box before rasterization.
const PAD: f64 = 1e-12;

struct Ctx<'a> {
    m: &'a PwcMap2<f64>,
    grid: &'a Grid,
    labels: Vec<usize>,
    gens: usize,
    /// Restricts the search to extensions of this word.
    prefix: Option<&'a [u8]>,
    cell: (f64, f64),
    min: (f64, f64),
    pad: f64,
}

type Acc = Vec<HashMap<Word, HashSet<Cell>>>;

fn clamp_to(b: &Box2<f64>, d: &Box2<f64>) -> Box2<f64> {
    let c = |v: f64, lo: f64, hi: f64| v.max(lo).min(hi);
    Box2 {
        xlo: c(b.xlo, d.xlo, d.xhi),
        xhi: c(b.xhi, d.xlo, d.xhi),
        ylo: c(b.ylo, d.ylo, d.yhi),
        yhi: c(b.yhi, d.ylo, d.yhi),
    }
}

impl Ctx<'_> {
    /// Halves the tile along the side contributing most to its image size,
    /// measured in cells.
    fn split(&self, tile: &Box2<f64>, f: &AffineMap2<f64>) -> [Box2<f64>; 2] {
        let a = f.matrix_f64();
        let (cw, ch) = self.cell;
        let cx = tile.width() * (a[0][0].abs() / cw).max(a[1][0].abs() / ch);
        let cy = tile.height() * (a[0][1].abs() / cw).max(a[1][1].abs() / ch);
        if cx >= cy {
            tile.split_x()
        } else {
            tile.split_y()
        }
    }

    fn image(&self, tile: &Box2<f64>, f: &AffineMap2<f64>) -> Box2<f64> {
        clamp_to(&f.image_box(tile).inflate(self.pad), &self.grid.domain)
    }

    /// Rasterizes the tile's image under `f` for `word`, then extends.
    fn visit(&self, tile: Box2<f64>, word: &mut Word, f: &AffineMap2<f64>, acc: &mut Acc) {
        let img = self.image(&tile, f);
        if img.width() > self.cell.0 || img.height() > self.cell.1 {
            for child in self.split(&tile, f) {
                self.visit(child, word, f, acc);
            }
            return;
        }
        let k = word.len();
        acc[k - 1].entry(word.clone()).or_default().extend(self.grid.cells_touching(&img));
        self.extend(tile, word, f, &self.labels, acc);
    }

    /// Appends every piece the tile's image may meet.
    fn extend(&self, tile: Box2<f64>, word: &mut Word, f: &AffineMap2<f64>, labels: &[usize], acc: &mut Acc) {
        let k = word.len();
        if k == self.gens {
            return;
        }
        let img = self.image(&tile, f);
        let can_split = img.width() > self.min.0 || img.height() > self.min.1;
        let mut straddle = vec![];
        for &label in labels {
            if let Some(p) = self.prefix {
                if k < p.len() && p[k] as usize != label {
                    continue;
                }
            }
            match self.m.piece_verdict(label, &img) {
                RegionVerdict::Outside => {}
                RegionVerdict::Straddle if can_split => straddle.push(label),
                _ => {
                    word.push(label as u8);
                    let g = self.m.map_of(label).compose(f);
                    self.visit(tile.clone(), word, &g, acc);
                    word.pop();
                }
            }
        }
        if !straddle.is_empty() {
            for child in self.split(&tile, f) {
                self.extend(child, word, f, &straddle, acc);
            }
        }
    }
}

fn check(m: &PwcMap2<f64>, grid: &Grid, cfg: &AtomConfig) -> Result<(), AtomError> {
    if cfg.generations == 0 {
        return Err(AtomError::NoGenerations);
    }
    if &grid.domain != m.domain_f64() {
        return Err(AtomError::GridMismatch);
    }
    if m.n_pieces() > 255 {
        return Err(AtomError::TooManyPieces);
    }
    Ok(())
}

fn search(m: &PwcMap2<f64>, grid: &Grid, cfg: &AtomConfig, prefix: Option<&[u8]>) -> Vec<BTreeMap<Word, CellSet>> {
    let d = grid.domain.clone();
    let cell = (grid.cell_width(), grid.cell_height());
    let scale = 2f64.powi(-(cfg.refine as i32));
    let ctx = Ctx {
        m,
        grid,
        labels: (1..=m.n_pieces()).collect(),
        gens: cfg.generations,
        prefix,
        cell,
        min: (cell.0 * scale, cell.1 * scale),
        pad: PAD * d.width().max(d.height()),
    };
    let r = cfg.roots.max(1);
    let roots: Vec<Box2<f64>> = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .map(|(i, j)| {
            let x = |k: u32| if k == r { d.xhi } else { d.xlo + d.width() * k as f64 / r as f64 };
            let y = |k: u32| if k == r { d.yhi } else { d.ylo + d.height() * k as f64 / r as f64 };
            Box2 { xlo: x(i), xhi: x(i + 1), ylo: y(j), yhi: y(j + 1) }
        })
        .collect();
    let empty = || -> Acc { vec![HashMap::new(); cfg.generations] };
    let acc = roots
        .into_par_iter()
        .fold(empty, |mut acc, tile| {
            ctx.extend(tile, &mut vec![], &AffineMap2::identity(), &ctx.labels, &mut acc);
            acc
        })
        .reduce(empty, |mut a, b| {
            for (ga, gb) in a.iter_mut().zip(b) {
                for (w, cells) in gb {
                    ga.entry(w).or_default().extend(cells);
                }
            }
            a
        });
    acc.into_iter()
        .map(|g| {
            g.into_iter()
                .map(|(w, cells)| (w, CellSet::from_unsorted(cells.into_iter().collect())))
                .collect()
        })
        .collect()
}

/// Assembles the tower, intersecting each generation with the previous union
/// when `intersect` is set (sound only when every word was searched).
fn nest(
    m: &PwcMap2<f64>,
    grid: &Grid,
    raw: Vec<BTreeMap<Word, CellSet>>,
    max_words: usize,
    intersect: bool,
) -> Result<AtomTower, AtomError> {
    let mut levels: Vec<LambdaCover> = Vec::with_capacity(raw.len());
    for (i, covers) in raw.into_iter().enumerate() {
        let generation = i + 1;
        let prev = levels.last().map(|l| &l.union).filter(|_| intersect);
        let mut atoms = vec![];
        let mut all = vec![];
        for (word, cells) in covers {
            let cells = match prev {
                Some(u) => cells.intersection(u),
                None => cells,
            };
            if cells.is_empty() {
                continue;
            }
            all.extend(cells.iter());
            atoms.push(AtomCover { word, generation, cells });
        }
        if atoms.len() > max_words {
            return Err(AtomError::TooManyWords { generation, count: atoms.len(), limit: max_words });
        }
        levels.push(LambdaCover { generation, union: CellSet::from_unsorted(all), atoms });
    }
    Ok(AtomTower { grid: grid.clone(), lambda: m.lambda(), levels })
}

/// Covers of every admissible word for generations `1..=cfg.generations`.
///
/// A word is admissible when its cover is non-empty, which over-reports:
/// boundary-straddling material is kept on both sides.
pub fn generate_atoms(m: &PwcMap2<f64>, grid: &Grid, cfg: &AtomConfig) -> Result<AtomTower, AtomError> {
    check(m, grid, cfg)?;
    let raw = search(m, grid, cfg, None);
    if let Some(label) = (1..=m.n_pieces()).find(|&l| !raw[0].contains_key(&vec![l as u8])) {
        return Err(AtomError::GridTooCoarse { label });
    }
    for (i, g) in raw.iter().enumerate() {
        if g.len() > cfg.max_words {
            return Err(AtomError::TooManyWords { generation: i + 1, count: g.len(), limit: cfg.max_words });
        }
    }
    nest(m, grid, raw, cfg.max_words, true)
}

/// Cover of `word` alone, searching only that itinerary.
///
/// Suited to fine grids where the full tower would be too large. The result
/// is an outer approximation of the atom, though possibly coarser than the
/// tower's, which also intersects with the previous generation's union.
pub fn atom_for_word(m: &PwcMap2<f64>, grid: &Grid, word: &[u8], cfg: &AtomConfig) -> Result<AtomCover, AtomError> {
    let cfg = AtomConfig { generations: word.len(), ..cfg.clone() };
    check(m, grid, &cfg)?;
    let raw = search(m, grid, &cfg, Some(word));
    let tower = nest(m, grid, raw, usize::MAX, false)?;
    Ok(tower
        .last()
        .cover(word)
        .cloned()
        .unwrap_or(AtomCover { word: word.to_vec(), generation: word.len(), cells: CellSet::new() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{build_example, Params};
    use crate::geometry::Point2;

    fn planar(name: &str) -> PwcMap2<f64> {
        build_example(name, &Params::new()).unwrap().planar().unwrap().clone()
    }

    fn grid_for(m: &PwcMap2<f64>, n: u32) -> Grid {
        Grid::new(m.domain_f64().clone(), n, n).unwrap()
    }

    #[test]
    fn two_piece_covers_shrink_to_fixed_points() {
        let m = planar("two_piece_demo");
        let g = grid_for(&m, 64);
        let t = generate_atoms(&m, &g, &AtomConfig::new(6)).unwrap();
        assert_eq!(t.level(1).unwrap().words(), vec![vec![1], vec![2]]);
        assert_eq!(t.last().words(), vec![vec![1; 6], vec![2; 6]]);
        let c = t.last().cover(&[1; 6]).unwrap();
        assert!(c.cells.contains((0, 0)));
        // F₁⁶(X̄₁) = [0, 2^-7] × [0, 2^-6]: two cells wide with the edge cell, plus one
        assert!(c.cells.iter().all(|(x, y)| x <= 1 && y <= 2));
    }

    #[test]
    fn nesting_and_soundness_on_a_point() {
        let m = planar("example_countable_B");
        let g = grid_for(&m, 128);
        let t = generate_atoms(&m, &g, &AtomConfig::new(5)).unwrap();
        for w in t.levels.windows(2) {
            assert!(w[1].union.is_subset(&w[0].union));
        }
        // orbit of (0.1, 0.9) stays in X₂; its n-th iterate lies in the cover of 2ⁿ
        let mut p = Point2::new(0.1, 0.9);
        for n in 1..=5 {
            p = m.apply(&p, 1e-12).unwrap();
            let cell = g.cell_of(&p).unwrap();
            assert!(t.level(n).unwrap().cover(&vec![2; n]).unwrap().cells.contains(cell));
        }
    }

    #[test]
    fn prefix_search_matches_tower() {
        let m = planar("example_countable_B");
        let g = grid_for(&m, 128);
        let t = generate_atoms(&m, &g, &AtomConfig::new(3)).unwrap();
        let single = atom_for_word(&m, &g, &[1, 1, 2], &AtomConfig::new(3)).unwrap();
        let full = t.last().cover(&[1, 1, 2]).unwrap();
        assert!(full.cells.is_subset(&single.cells));
        assert!(!single.cells.is_empty());
    }

    #[test]
    fn rejects_bad_config() {
        let m = planar("two_piece_demo");
        let g = grid_for(&m, 8);
        assert_eq!(generate_atoms(&m, &g, &AtomConfig::new(0)).unwrap_err(), AtomError::NoGenerations);
        let other = Grid::new(Box2::checked(0.0, 2.0, 0.0, 1.0).unwrap(), 8, 8).unwrap();
        assert_eq!(generate_atoms(&m, &other, &AtomConfig::new(1)).unwrap_err(), AtomError::GridMismatch);
        let cfg = AtomConfig { max_words: 1, ..AtomConfig::new(2) };
        assert!(matches!(generate_atoms(&m, &g, &cfg), Err(AtomError::TooManyWords { .. })));
    }
}
