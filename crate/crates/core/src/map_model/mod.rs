//! Piecewise contracting maps: pieces cut out by sign conditions on
//! boundary functions, one affine contraction per piece.

mod io;
mod map1d;
mod validate;

pub use io::{MapFile, MapFileError, MapSpec, PieceFile};
pub use map1d::{Map1D, Side1D};
pub use validate::{ValidationCondition, ValidationFailure, ValidationReport, Validator, WitnessInfo};

use crate::geometry::{box_image, box_sign, BoundaryFn, Box2, Cell, Grid, Point2, Sign};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default boundary-proximity tolerance, absolute in domain units.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("point ({x}, {y}) outside the domain")]
    PointOutsideDomain { x: f64, y: f64 },
    #[error("point lies on (or within tolerance of) the discontinuity set; distance bound {distance}")]
    OnBoundary { distance: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid map definition: {0}")]
    Invalid(String),
}

/// Sign a piece requires of one boundary function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Pos,
    Neg,
}

impl Side {
    pub fn sign(self) -> Sign {
        match self {
            Side::Pos => Sign::Pos,
            Side::Neg => Sign::Neg,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Conjunct<T> {
    pub boundary: BoundaryFn<T>,
    pub sign: Side,
}

impl<T: Scalar> Conjunct<T> {
    pub fn new(boundary: BoundaryFn<T>, sign: Side) -> Self {
        Self { boundary, sign }
    }
}

/// One open region `{g_k ⋚ 0 for all k}` belonging to piece `label` (1-based).
///
/// A piece that is not a single such region is given as several specs
/// sharing a label; the piece is their union.
#[derive(Clone, Debug, PartialEq)]
pub struct PieceSpec<T> {
    pub label: usize,
    pub conjuncts: Vec<Conjunct<T>>,
}

impl<T: Scalar> PieceSpec<T> {
    pub fn new(label: usize, conjuncts: Vec<Conjunct<T>>) -> Self {
        Self { label, conjuncts }
    }
}

/// `p ↦ A·p + t`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap2<T> {
    pub a: [[T; 2]; 2],
    pub t: [T; 2],
    /// Spectral norm of `A`.
    pub factor: f64,
}

/// Largest singular value of a 2×2 matrix, in closed form.
pub fn spectral_norm(a: &[[f64; 2]; 2]) -> f64 {
    let [[p, q], [r, s]] = *a;
    0.5 * ((p + s).hypot(r - q) + (p - s).hypot(r + q))
}

impl<T: Scalar> AffineMap2<T> {
    pub fn new(a: [[T; 2]; 2], t: [T; 2]) -> Self {
        let af = [
            [a[0][0].to_f64(), a[0][1].to_f64()],
            [a[1][0].to_f64(), a[1][1].to_f64()],
        ];
        Self { factor: spectral_norm(&af), a, t }
    }

    pub fn apply(&self, p: &Point2<T>) -> Point2<T> {
        let [[a, b], [c, d]] = &self.a;
        Point2::new(
            a.clone() * p.x.clone() + b.clone() * p.y.clone() + self.t[0].clone(),
            c.clone() * p.x.clone() + d.clone() * p.y.clone() + self.t[1].clone(),
        )
    }

    pub fn matrix_f64(&self) -> [[f64; 2]; 2] {
        [
            [self.a[0][0].to_f64(), self.a[0][1].to_f64()],
            [self.a[1][0].to_f64(), self.a[1][1].to_f64()],
        ]
    }

    pub fn offset_f64(&self) -> [f64; 2] {
        [self.t[0].to_f64(), self.t[1].to_f64()]
    }

    pub fn convert<U: Scalar>(&self) -> Option<AffineMap2<U>> {
        let c = |v: &T| U::from_f64(v.to_f64());
        Some(AffineMap2::new(
            [[c(&self.a[0][0])?, c(&self.a[0][1])?], [c(&self.a[1][0])?, c(&self.a[1][1])?]],
            [c(&self.t[0])?, c(&self.t[1])?],
        ))
    }
}

impl AffineMap2<f64> {
    /// Composition `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap2<f64>) -> AffineMap2<f64> {
        let (a, b) = (&self.a, &inner.a);
        let m = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        let t = [
            a[0][0] * inner.t[0] + a[0][1] * inner.t[1] + self.t[0],
            a[1][0] * inner.t[0] + a[1][1] * inner.t[1] + self.t[1],
        ];
        AffineMap2::new(m, t)
    }

    pub fn identity() -> Self {
        AffineMap2::new([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0])
    }

    pub fn image_box(&self, b: &Box2<f64>) -> Box2<f64> {
        box_image(&self.a, &self.t, b)
    }
}

/// Result of classifying a point against the pieces.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Strictly inside piece `i` (1-based), clear of its boundaries by more than `tol`.
    Piece(usize),
    /// Not certifiably inside any piece; carries a lower bound on the distance
    /// to the nearest boundary zero set (possibly 0).
    Boundary(f64),
}

/// Verdict of one region (or piece) on a closed box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionVerdict {
    Inside,
    Outside,
    Straddle,
}

/// Cell-level classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellClass {
    Piece(usize),
    Straddle,
}

/// Piecewise contracting map on a planar box.
#[derive(Clone, Debug)]
pub struct PwcMap2<T> {
    domain: Box2<T>,
    pieces: Vec<PieceSpec<T>>,
    maps: Vec<AffineMap2<T>>,
    lambda: f64,
    /// Float copies of the boundaries and their Lipschitz bounds on the domain, per region.
    bounds: Vec<Vec<(BoundaryFn<f64>, f64)>>,
    domain_f64: Box2<f64>,
}

impl<T: Scalar> PwcMap2<T> {
    /// Builds a map; piece `i` (label `i`, 1-based) uses `maps[i - 1]`.
    ///
    /// Structural checks only; contraction and the partition are checked by
    /// [`PwcMap2::validate`].
    pub fn new(domain: Box2<T>, pieces: Vec<PieceSpec<T>>, maps: Vec<AffineMap2<T>>) -> Result<Self, MapError> {
        let n = maps.len();
        if n < 2 {
            return Err(MapError::Invalid(format!("need at least 2 pieces, got {n}")));
        }
        for (k, p) in pieces.iter().enumerate() {
            if p.label == 0 || p.label > n {
                return Err(MapError::Invalid(format!("region {k} has label {} outside 1..={n}", p.label)));
            }
            if p.conjuncts.is_empty() {
                return Err(MapError::Invalid(format!("region {k} has no conjuncts")));
            }
        }
        for label in 1..=n {
            if !pieces.iter().any(|p| p.label == label) {
                return Err(MapError::Invalid(format!("no region for piece {label}")));
            }
        }
        let domain_f64 = domain.to_f64();
        if !(domain_f64.width() > 0.0 && domain_f64.height() > 0.0) {
            return Err(MapError::Invalid("domain has empty interior".into()));
        }
        let bounds = pieces
            .iter()
            .map(|p| {
                p.conjuncts
                    .iter()
                    .map(|c| {
                        let g = c.boundary.to_f64();
                        let lip = g.lipschitz_bound(&domain_f64);
                        (g, lip)
                    })
                    .collect()
            })
            .collect();
        let lambda = maps.iter().map(|m| m.factor).fold(0.0, f64::max);
        Ok(Self { domain, pieces, maps, lambda, bounds, domain_f64 })
    }

    pub fn domain(&self) -> &Box2<T> {
        &self.domain
    }

    pub fn domain_f64(&self) -> &Box2<f64> {
        &self.domain_f64
    }

    /// Regions; several may share a label.
    pub fn pieces(&self) -> &[PieceSpec<T>] {
        &self.pieces
    }

    pub fn maps(&self) -> &[AffineMap2<T>] {
        &self.maps
    }

    /// Number of pieces `N`.
    pub fn n_pieces(&self) -> usize {
        self.maps.len()
    }

    /// Contraction rate: the largest piece factor.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn map_of(&self, label: usize) -> &AffineMap2<T> {
        &self.maps[label - 1]
    }

    /// Whether the map uses only boundaries an exact scalar can evaluate.
    pub fn is_algebraic(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| p.conjuncts.iter().all(|c| !matches!(c.boundary, BoundaryFn::OscLog)))
    }

    pub fn convert<U: Scalar>(&self) -> Option<PwcMap2<U>> {
        if U::EXACT && !self.is_algebraic() {
            return None;
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                Some(PieceSpec::new(
                    p.label,
                    p.conjuncts
                        .iter()
                        .map(|c| Some(Conjunct::new(c.boundary.convert()?, c.sign)))
                        .collect::<Option<Vec<_>>>()?,
                ))
            })
            .collect::<Option<Vec<_>>>()?;
        let maps = self.maps.iter().map(|m| m.convert()).collect::<Option<Vec<_>>>()?;
        PwcMap2::new(self.domain.convert()?, pieces, maps).ok()
    }

    /// Classifies `p`.
    ///
    /// `Piece(i)` when `p` lies in some region of piece `i` with every
    /// conjunct of that region satisfied with margin `|g(p)| > tol·L_g`.
    /// Only the region's own boundaries count: a boundary function of a
    /// different region may vanish inside a piece (e.g. a dividing line
    /// internal to a union of regions).
    pub fn classify_point(&self, p: &Point2<T>, tol: f64) -> Result<Classification, MapError> {
        Ok(self.classify_with_distance(p, tol)?.0)
    }

    /// [`classify_point`](Self::classify_point) together with the estimate
    /// `min |g(p)| / L_g` of the distance to the nearest boundary zero set.
    pub fn classify_with_distance(&self, p: &Point2<T>, tol: f64) -> Result<(Classification, f64), MapError> {
        if !self.domain.contains(p) {
            let q = p.to_f64();
            return Err(MapError::PointOutsideDomain { x: q.x, y: q.y });
        }
        let mut min_dist = f64::INFINITY;
        let mut found = None;
        for (r, piece) in self.pieces.iter().enumerate() {
            let mut inside = true;
            for (c, (_, lip)) in piece.conjuncts.iter().zip(&self.bounds[r]) {
                let v = c.boundary.try_eval(p).ok_or_else(|| {
                    MapError::Unsupported("boundary function not evaluable in this scalar type".into())
                })?;
                min_dist = min_dist.min(v.to_f64().abs() / lip);
                if !inside {
                    continue;
                }
                let margin = T::from_f64(tol * lip).unwrap_or_else(T::zero);
                inside = match c.sign {
                    Side::Pos => v > margin,
                    Side::Neg => v < -margin,
                };
            }
            if inside && found.is_none() {
                found = Some(piece.label);
            }
        }
        Ok(match found {
            Some(l) => (Classification::Piece(l), min_dist),
            None => (Classification::Boundary(min_dist), min_dist),
        })
    }

    /// `f(p)`, defined only off the discontinuity set.
    pub fn apply(&self, p: &Point2<T>, tol: f64) -> Result<Point2<T>, MapError> {
        match self.classify_point(p, tol)? {
            Classification::Piece(i) => Ok(self.maps[i - 1].apply(p)),
            Classification::Boundary(distance) => Err(MapError::OnBoundary { distance }),
        }
    }

    /// Region verdicts against a box, using the float boundary copies.
    pub fn region_verdict(&self, region: usize, b: &Box2<f64>) -> RegionVerdict {
        let mut all_inside = true;
        for ((g, lip), c) in self.bounds[region].iter().zip(&self.pieces[region].conjuncts) {
            match box_sign(g, b, *lip) {
                Sign::Straddle => all_inside = false,
                s if s == c.sign.sign() => {}
                _ => return RegionVerdict::Outside,
            }
        }
        if all_inside {
            RegionVerdict::Inside
        } else {
            RegionVerdict::Straddle
        }
    }

    /// Verdict of piece `label` (union of its regions) on a box.
    pub fn piece_verdict(&self, label: usize, b: &Box2<f64>) -> RegionVerdict {
        let mut any_straddle = false;
        for (r, p) in self.pieces.iter().enumerate() {
            if p.label != label {
                continue;
            }
            match self.region_verdict(r, b) {
                RegionVerdict::Inside => return RegionVerdict::Inside,
                RegionVerdict::Straddle => any_straddle = true,
                RegionVerdict::Outside => {}
            }
        }
        if any_straddle {
            RegionVerdict::Straddle
        } else {
            RegionVerdict::Outside
        }
    }

    pub fn classify_box(&self, b: &Box2<f64>) -> CellClass {
        for (r, p) in self.pieces.iter().enumerate() {
            if self.region_verdict(r, b) == RegionVerdict::Inside {
                return CellClass::Piece(p.label);
            }
        }
        CellClass::Straddle
    }

    /// `Piece(i)` only if every conjunct of some region of piece `i` has the
    /// required sign on the whole closed cell.
    pub fn classify_cell(&self, grid: &Grid, cell: Cell) -> CellClass {
        self.classify_box(&grid.cell_box(cell))
    }

    /// Lower bound on the distance from a box to every boundary zero set
    /// of piece `label`'s regions; 0 if the box is not inside the piece.
    pub fn piece_clearance(&self, label: usize, b: &Box2<f64>) -> f64 {
        let mut best = 0.0f64;
        for (r, p) in self.pieces.iter().enumerate() {
            if p.label != label || self.region_verdict(r, b) != RegionVerdict::Inside {
                continue;
            }
            let d = self.bounds[r]
                .iter()
                .map(|(g, lip)| crate::geometry::distance_lower_bound(g, b, *lip))
                .fold(f64::INFINITY, f64::min);
            best = best.max(d);
        }
        best
    }

    /// Float boundaries with their Lipschitz bounds, per region.
    pub fn boundaries_f64(&self) -> &[Vec<(BoundaryFn<f64>, f64)>] {
        &self.bounds
    }
}

impl PwcMap2<f64> {
    pub fn validate(&self, samples: usize, tol: f64) -> Result<ValidationReport, ValidationFailure> {
        Validator::new(samples, tol).run(self)
    }
}
