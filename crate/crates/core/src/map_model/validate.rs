use super::{Classification, PwcMap2, RegionVerdict};
use crate::geometry::{Grid, Point2};
use crate::scalar::{Dyadic, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationCondition {
    Contraction,
    EmptyPiece,
    Disjointness,
    Coverage,
    RangeContainment,
    Witness,
}

impl fmt::Display for ValidationCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ValidationCondition::Contraction => "contraction",
            ValidationCondition::EmptyPiece => "empty_piece",
            ValidationCondition::Disjointness => "disjointness",
            ValidationCondition::Coverage => "coverage",
            ValidationCondition::RangeContainment => "range_containment",
            ValidationCondition::Witness => "witness",
        };
        f.write_str(s)
    }
}

/// An orbit that never met the discontinuity set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessInfo {
    pub start: [f64; 2],
    pub steps: usize,
    /// Whether the orbit was iterated in exact arithmetic with zero tolerance.
    pub exact: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub factors: Vec<f64>,
    pub lambda: f64,
    pub samples: usize,
    pub seed: u64,
    /// Sample hits per piece.
    pub piece_hits: Vec<usize>,
    /// Samples within tolerance of a boundary.
    pub boundary_hits: usize,
    pub disjoint: Option<bool>,
    pub covered: Option<bool>,
    pub range_ok: Vec<bool>,
    pub witness: Option<WitnessInfo>,
}

#[derive(Clone, Debug, Error, PartialEq)]
#[error("validation failed ({condition}): {detail}")]
pub struct ValidationFailure {
    pub condition: ValidationCondition,
    pub detail: String,
    pub report: Box<ValidationReport>,
}

/// Sampled checks of the partition, contraction, ranges, and a surviving orbit.
#[derive(Clone, Debug)]
pub struct Validator {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    /// Resolution of the grid used for range containment.
    pub range_grid: u32,
    pub witness_steps: usize,
    pub witness_attempts: usize,
}

impl Validator {
    pub fn new(samples: usize, tol: f64) -> Self {
        Self {
            samples,
            tol,
            seed: 0x5eed,
            range_grid: 128,
            witness_steps: 1000,
            witness_attempts: 200,
        }
    }

    pub fn run(&self, m: &PwcMap2<f64>) -> Result<ValidationReport, ValidationFailure> {
        let mut rep = ValidationReport {
            factors: m.maps().iter().map(|a| a.factor).collect(),
            lambda: m.lambda(),
            samples: self.samples,
            seed: self.seed,
            piece_hits: vec![0; m.n_pieces()],
            ..Default::default()
        };
        let fail = |condition, detail: String, rep: &ValidationReport| ValidationFailure {
            condition,
            detail,
            report: Box::new(rep.clone()),
        };

        if let Some((i, f)) = rep.factors.iter().enumerate().find(|(_, f)| !(**f < 1.0)) {
            return Err(fail(ValidationCondition::Contraction, format!("piece {} has factor {f}", i + 1), &rep));
        }

        let d = m.domain_f64().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut overlap = None;
        let mut uncovered = None;
        for _ in 0..self.samples {
            let p = Point2::new(rng.gen_range(d.xlo..=d.xhi), rng.gen_range(d.ylo..=d.yhi));
            let mut labels = vec![];
            for (r, piece) in m.pieces().iter().enumerate() {
                let inside = piece.conjuncts.iter().zip(&m.boundaries_f64()[r]).all(|(c, (g, lip))| {
                    let v = g.eval(&p);
                    match c.sign {
                        super::Side::Pos => v > self.tol * lip,
                        super::Side::Neg => v < -self.tol * lip,
                    }
                });
                if inside && !labels.contains(&piece.label) {
                    labels.push(piece.label);
                }
            }
            match labels.len() {
                0 => {
                    rep.boundary_hits += 1;
                    let near = m
                        .boundaries_f64()
                        .iter()
                        .flatten()
                        .any(|(g, lip)| g.eval(&p).abs() <= self.tol * lip);
                    if !near && uncovered.is_none() {
                        uncovered = Some(p);
                    }
                }
                1 => rep.piece_hits[labels[0] - 1] += 1,
                _ => {
                    if overlap.is_none() {
                        overlap = Some((p, labels));
                    }
                }
            }
        }
        rep.disjoint = Some(overlap.is_none());
        rep.covered = Some(uncovered.is_none());
        if let Some(i) = rep.piece_hits.iter().position(|&h| h == 0) {
            return Err(fail(ValidationCondition::EmptyPiece, format!("no sample fell in piece {}", i + 1), &rep));
        }
        if let Some((p, labels)) = overlap {
            return Err(fail(
                ValidationCondition::Disjointness,
                format!("({}, {}) lies in pieces {labels:?}", p.x, p.y),
                &rep,
            ));
        }
        if let Some(p) = uncovered {
            return Err(fail(ValidationCondition::Coverage, format!("({}, {}) lies in no piece", p.x, p.y), &rep));
        }

        rep.range_ok = self.range_check(m);
        if let Some(i) = rep.range_ok.iter().position(|ok| !ok) {
            return Err(fail(
                ValidationCondition::RangeContainment,
                format!("image of piece {} leaves the domain", i + 1),
                &rep,
            ));
        }

        match self.witness(m) {
            Some(w) => rep.witness = Some(w),
            None => {
                return Err(fail(
                    ValidationCondition::Witness,
                    format!(
                        "no sampled orbit survived {} steps in {} attempts",
                        self.witness_steps, self.witness_attempts
                    ),
                    &rep,
                ))
            }
        }
        Ok(rep)
    }

    /// `f_i(X̄_i) ⊆ X`, checked on box images of the cells meeting each piece.
    /// Cells cut by a boundary get slack `λ_i · diag`, since every point of
    /// such a cell is within one diagonal of the piece's closure.
    fn range_check(&self, m: &PwcMap2<f64>) -> Vec<bool> {
        let d = m.domain_f64();
        let grid = Grid::new(d.clone(), self.range_grid, self.range_grid).expect("domain checked at construction");
        let eps = 1e-12 * d.width().max(d.height());
        let mut ok = vec![true; m.n_pieces()];
        for ix in 0..grid.nx {
            for iy in 0..grid.ny {
                let b = grid.cell_box((ix, iy));
                for (r, piece) in m.pieces().iter().enumerate() {
                    let slack = match m.region_verdict(r, &b) {
                        RegionVerdict::Outside => continue,
                        RegionVerdict::Inside => eps,
                        RegionVerdict::Straddle => {
                            m.map_of(piece.label).factor * grid.cell_diagonal() + eps
                        }
                    };
                    let img = m.map_of(piece.label).image_box(&b);
                    if !d.contains_box(&img, slack) {
                        ok[piece.label - 1] = false;
                    }
                }
            }
        }
        ok
    }

    fn witness(&self, m: &PwcMap2<f64>) -> Option<WitnessInfo> {
        let d = m.domain_f64().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x77);
        let exact: Option<PwcMap2<Dyadic>> = m.convert();
        for _ in 0..self.witness_attempts {
            let p = Point2::new(rng.gen_range(d.xlo..=d.xhi), rng.gen_range(d.ylo..=d.yhi));
            let survived = match &exact {
                Some(e) => survives(e, Point2::from_f64(&p)?, self.witness_steps, 0.0),
                None => survives(m, p.clone(), self.witness_steps, self.tol),
            };
            if survived {
                return Some(WitnessInfo { start: [p.x, p.y], steps: self.witness_steps, exact: exact.is_some() });
            }
        }
        None
    }
}

fn survives<T: Scalar>(m: &PwcMap2<T>, mut p: Point2<T>, steps: usize, tol: f64) -> bool {
    for _ in 0..steps {
        match m.classify_point(&p, tol) {
            Ok(Classification::Piece(i)) => p = m.map_of(i).apply(&p),
            _ => return false,
        }
    }
    true
}
