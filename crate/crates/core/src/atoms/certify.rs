use super::{format_word, AtomTower, Word};
use crate::geometry::{CellSet, Point2};
use crate::map_model::{CellClass, Classification, PwcMap2};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("generation {0} is not in the tower")]
    MissingLevel(usize),
    #[error("word {0} has no successor among the certified words")]
    MissingSuccessor(String),
    #[error("periodic iteration from word {word} left piece {expected} at step {step}")]
    CycleEscape { word: String, expected: usize, step: usize },
    #[error("periodic iteration from word {0} did not reach the tolerance")]
    NoConvergence(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub word: Word,
    pub piece: usize,
    /// Certified lower bound on the cover's distance to the piece's boundaries.
    pub clearance: f64,
}

/// Every generation-`n0` cover lies in a single piece, at distance at least
/// `delta` from that piece's boundaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationCertificate {
    pub n0: usize,
    pub delta: f64,
    /// Sorted by word.
    pub assignment: Vec<Assignment>,
}

impl SeparationCertificate {
    pub fn piece_of(&self, word: &[u8]) -> Option<usize> {
        self.assignment
            .binary_search_by(|a| a.word.as_slice().cmp(word))
            .ok()
            .map(|i| self.assignment[i].piece)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SeparationOutcome {
    Certified(SeparationCertificate),
    /// Says nothing about the attractor; a finer grid or later generation may succeed.
    NotSeparatedAtThisResolution { n0: usize, word: Word, reason: String },
}

/// Checks that every cover at generation `n0` classifies wholly into one piece
/// with positive clearance.
pub fn separation_test(tower: &AtomTower, m: &PwcMap2<f64>, n0: usize) -> Result<SeparationOutcome, CertifyError> {
    let level = tower.level(n0).ok_or(CertifyError::MissingLevel(n0))?;
    let grid = &tower.grid;
    let mut assignment = Vec::with_capacity(level.atoms.len());
    for atom in &level.atoms {
        let fail = |reason: String| SeparationOutcome::NotSeparatedAtThisResolution {
            n0,
            word: atom.word.clone(),
            reason,
        };
        let mut piece = None;
        let mut clearance = f64::INFINITY;
        for c in atom.cells.iter() {
            let label = match m.classify_cell(grid, c) {
                CellClass::Piece(l) => l,
                CellClass::Straddle => return Ok(fail(format!("cell {c:?} meets a boundary"))),
            };
            if *piece.get_or_insert(label) != label {
                return Ok(fail(format!("cover spans pieces {} and {label}", piece.unwrap_or(0))));
            }
            clearance = clearance.min(m.piece_clearance(label, &grid.cell_box(c)));
        }
        let Some(piece) = piece else { continue };
        if !(clearance > 0.0) {
            return Ok(fail("no positive clearance".into()));
        }
        assignment.push(Assignment { word: atom.word.clone(), piece, clearance });
    }
    let delta = assignment.iter().map(|a| a.clearance).fold(f64::INFINITY, f64::min);
    Ok(SeparationOutcome::Certified(SeparationCertificate { n0, delta, assignment }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: Word,
    pub to: Word,
    pub piece: usize,
    /// Whether the rasterized image of the source cover lies inside the target cover.
    pub image_inside: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    /// The cycle of words, starting from the smallest.
    pub words: Vec<Word>,
    pub period: usize,
    /// `y, f(y), …, f^{p−1}(y)`.
    pub points: Vec<Point2<f64>>,
    /// `|f^p(y) − y|` at the reported `y`.
    pub residual: f64,
    /// Bound on the distance to the true periodic point, `residual / (1 − λ^p)`.
    pub error_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityReport {
    pub n0: usize,
    pub tol: f64,
    pub edges: Vec<GraphEdge>,
    pub orbits: Vec<PeriodicOrbit>,
    /// Number of generation-`n0` atoms.
    pub m0: usize,
    /// Least common multiple of the periods.
    pub p0: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Builds the atom graph `G(w) = shift(w)·piece(w)` from a certificate, finds
/// its cycles and extracts one periodic orbit per cycle by iterating `f^p`.
pub fn certify_periodicity(
    cert: &SeparationCertificate,
    tower: &AtomTower,
    m: &PwcMap2<f64>,
    tol: f64,
) -> Result<PeriodicityReport, CertifyError> {
    let level = tower.level(cert.n0).ok_or(CertifyError::MissingLevel(cert.n0))?;
    let grid = &tower.grid;
    let index: BTreeMap<&[u8], usize> =
        cert.assignment.iter().enumerate().map(|(i, a)| (a.word.as_slice(), i)).collect();

    let mut next = Vec::with_capacity(cert.assignment.len());
    let mut edges = Vec::with_capacity(cert.assignment.len());
    for a in &cert.assignment {
        let mut to = a.word[1..].to_vec();
        to.push(a.piece as u8);
        let j = *index
            .get(to.as_slice())
            .ok_or_else(|| CertifyError::MissingSuccessor(format_word(&a.word)))?;
        let f = m.map_of(a.piece);
        let src = level.cover(&a.word).map(|c| &c.cells);
        let dst = level.cover(&to).map(|c| &c.cells);
        let image_inside = match (src, dst) {
            (Some(src), Some(dst)) => {
                let img: CellSet = src.iter().flat_map(|c| grid.cells_touching(&f.image_box(&grid.cell_box(c)))).collect();
                img.is_subset(dst)
            }
            _ => false,
        };
        edges.push(GraphEdge { from: a.word.clone(), to, piece: a.piece, image_inside });
        next.push(j);
    }

    // cycles of the functional graph, each found once from its smallest word
    let n = next.len();
    let mut state = vec![0u8; n]; // 0 new, 1 on stack, 2 done
    let mut cycles = vec![];
    for s in 0..n {
        let mut path = vec![];
        let mut v = s;
        while state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = next[v];
        }
        if state[v] == 1 {
            let start = path.iter().position(|&u| u == v).expect("on the current path");
            let mut cyc = path[start..].to_vec();
            let k = (0..cyc.len()).min_by_key(|&i| cyc[i]).expect("non-empty");
            cyc.rotate_left(k);
            cycles.push(cyc);
        }
        for u in path {
            state[u] = 2;
        }
    }
    cycles.sort();

    let mut orbits: Vec<PeriodicOrbit> = vec![];
    for cyc in cycles {
        let p = cyc.len();
        let words: Vec<Word> = cyc.iter().map(|&i| cert.assignment[i].word.clone()).collect();
        let pieces: Vec<usize> = cyc.iter().map(|&i| cert.assignment[i].piece).collect();
        let first = level
            .cover(&words[0])
            .and_then(|c| c.cells.iter().next())
            .ok_or_else(|| CertifyError::MissingSuccessor(format_word(&words[0])))?;
        let run = |y: &Point2<f64>| -> Result<Vec<Point2<f64>>, CertifyError> {
            let mut pts = Vec::with_capacity(p + 1);
            let mut z = y.clone();
            for (step, &piece) in pieces.iter().enumerate() {
                match m.classify_point(&z, 0.0) {
                    Ok(Classification::Piece(l)) if l == piece => {}
                    _ => {
                        return Err(CertifyError::CycleEscape {
                            word: format_word(&words[step]),
                            expected: piece,
                            step,
                        })
                    }
                }
                pts.push(z.clone());
                z = m.map_of(piece).apply(&z);
            }
            pts.push(z);
            Ok(pts)
        };
        let mut y = grid.cell_center(first);
        let mut pts = run(&y)?;
        let mut converged = false;
        for _ in 0..100_000 {
            let z = pts[p].clone();
            let moved = z.dist(&y);
            y = z;
            pts = run(&y)?;
            if moved <= tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(CertifyError::NoConvergence(format_word(&words[0])));
        }
        let residual = pts[p].dist(&y);
        pts.truncate(p);
        let dup = orbits.iter().any(|o| o.points.iter().any(|q| q.dist(&pts[0]) <= 10.0 * tol));
        if !dup {
            orbits.push(PeriodicOrbit {
                words,
                period: p,
                points: pts,
                residual,
                error_bound: residual / (1.0 - m.lambda().powi(p as i32)),
            });
        }
    }
    let p0 = orbits.iter().fold(1, |acc, o| acc / gcd(acc, o.period) * o.period);
    Ok(PeriodicityReport { n0: cert.n0, tol, edges, orbits, m0: cert.assignment.len(), p0 })
}
