//! Planar primitives: points, boxes, grids, sparse cell sets and the
//! boundary functions whose zero sets carry the discontinuities.

mod boundary;
mod cellset;
mod grid;

pub use boundary::{box_sign, distance_lower_bound, BoundaryFn, Sign};
pub use cellset::{CellSet, CellSetParseError};
pub use grid::{Cell, Grid};

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("box bounds out of order or not finite: x [{xlo}, {xhi}], y [{ylo}, {yhi}]")]
    InvalidBox { xlo: f64, xhi: f64, ylo: f64, yhi: f64 },
    #[error("grid resolution must be positive (got {nx} x {ny})")]
    EmptyGrid { nx: u32, ny: u32 },
    #[error("grid domain has zero width or height")]
    DegenerateDomain,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn to_f64(&self) -> Point2<f64> {
        Point2::new(self.x.to_f64(), self.y.to_f64())
    }

    pub fn from_f64(p: &Point2<f64>) -> Option<Self> {
        Some(Self::new(T::from_f64(p.x)?, T::from_f64(p.y)?))
    }
}

impl Point2<f64> {
    pub fn dist(&self, other: &Point2<f64>) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Closed axis-aligned rectangle `[xlo, xhi] × [ylo, yhi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Box2<T> {
    pub xlo: T,
    pub xhi: T,
    pub ylo: T,
    pub yhi: T,
}

impl<T: Scalar> Box2<T> {
    pub fn new(xlo: T, xhi: T, ylo: T, yhi: T) -> Result<Self, GeometryError> {
        if xlo <= xhi && ylo <= yhi {
            Ok(Self { xlo, xhi, ylo, yhi })
        } else {
            Err(GeometryError::InvalidBox {
                xlo: xlo.to_f64(),
                xhi: xhi.to_f64(),
                ylo: ylo.to_f64(),
                yhi: yhi.to_f64(),
            })
        }
    }

    pub fn contains(&self, p: &Point2<T>) -> bool {
        self.xlo <= p.x && p.x <= self.xhi && self.ylo <= p.y && p.y <= self.yhi
    }

    pub fn to_f64(&self) -> Box2<f64> {
        Box2 {
            xlo: self.xlo.to_f64(),
            xhi: self.xhi.to_f64(),
            ylo: self.ylo.to_f64(),
            yhi: self.yhi.to_f64(),
        }
    }

    pub fn convert<U: Scalar>(&self) -> Option<Box2<U>> {
        Some(Box2 {
            xlo: U::from_f64(self.xlo.to_f64())?,
            xhi: U::from_f64(self.xhi.to_f64())?,
            ylo: U::from_f64(self.ylo.to_f64())?,
            yhi: U::from_f64(self.yhi.to_f64())?,
        })
    }
}

impl Box2<f64> {
    pub fn unit() -> Self {
        Box2 { xlo: 0.0, xhi: 1.0, ylo: 0.0, yhi: 1.0 }
    }

    pub fn checked(xlo: f64, xhi: f64, ylo: f64, yhi: f64) -> Result<Self, GeometryError> {
        if [xlo, xhi, ylo, yhi].iter().all(|v| v.is_finite()) {
            Self::new(xlo, xhi, ylo, yhi)
        } else {
            Err(GeometryError::InvalidBox { xlo, xhi, ylo, yhi })
        }
    }

    pub fn width(&self) -> f64 {
        self.xhi - self.xlo
    }

    pub fn height(&self) -> f64 {
        self.yhi - self.ylo
    }

    pub fn center(&self) -> Point2<f64> {
        Point2::new(0.5 * (self.xlo + self.xhi), 0.5 * (self.ylo + self.yhi))
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn half_diagonal(&self) -> f64 {
        0.5 * self.diameter()
    }

    pub fn corners(&self) -> [Point2<f64>; 4] {
        [
            Point2::new(self.xlo, self.ylo),
            Point2::new(self.xhi, self.ylo),
            Point2::new(self.xlo, self.yhi),
            Point2::new(self.xhi, self.yhi),
        ]
    }

    pub fn inflate(&self, pad: f64) -> Self {
        Box2 {
            xlo: self.xlo - pad,
            xhi: self.xhi + pad,
            ylo: self.ylo - pad,
            yhi: self.yhi + pad,
        }
    }

    /// Whether `other` lies inside `self` grown by `slack` on every side.
    pub fn contains_box(&self, other: &Box2<f64>, slack: f64) -> bool {
        other.xlo >= self.xlo - slack
            && other.xhi <= self.xhi + slack
            && other.ylo >= self.ylo - slack
            && other.yhi <= self.yhi + slack
    }

    pub fn split_x(&self) -> [Box2<f64>; 2] {
        let mid = 0.5 * (self.xlo + self.xhi);
        [
            Box2 { xhi: mid, ..self.clone() },
            Box2 { xlo: mid, ..self.clone() },
        ]
    }

    pub fn split_y(&self) -> [Box2<f64>; 2] {
        let mid = 0.5 * (self.ylo + self.yhi);
        [
            Box2 { yhi: mid, ..self.clone() },
            Box2 { ylo: mid, ..self.clone() },
        ]
    }

    /// Smallest box containing every point.
    pub fn bounding(points: &[Point2<f64>]) -> Option<Self> {
        let first = points.first()?;
        let mut b = Box2 { xlo: first.x, xhi: first.x, ylo: first.y, yhi: first.y };
        for p in &points[1..] {
            b.xlo = b.xlo.min(p.x);
            b.xhi = b.xhi.max(p.x);
            b.ylo = b.ylo.min(p.y);
            b.yhi = b.yhi.max(p.y);
        }
        Some(b)
    }
}

/// Tight bounding box of `{A·p + t : p ∈ b}`.
///
/// The image of a box under an affine map is a parallelogram, so the four
/// corner images determine the bounding box exactly.
pub fn box_image(a: &[[f64; 2]; 2], t: &[f64; 2], b: &Box2<f64>) -> Box2<f64> {
    let imgs = b.corners().map(|c| {
        Point2::new(
            a[0][0] * c.x + a[0][1] * c.y + t[0],
            a[1][0] * c.x + a[1][1] * c.y + t[1],
        )
    });
    Box2::bounding(&imgs).expect("four corners")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn box_image_examples() {
        let id = [[1.0, 0.0], [0.0, 1.0]];
        assert_eq!(box_image(&id, &[0.0, 0.0], &Box2::unit()), Box2::unit());

        let half = [[0.5, 0.0], [0.0, 0.5]];
        let b = box_image(&half, &[0.0, 0.0], &Box2::unit());
        assert_eq!(b, Box2::checked(0.0, 0.5, 0.0, 0.5).unwrap());

        // reflection in x, as in the second map of the countable example
        let refl = [[-0.5, 0.0], [0.0, 0.5]];
        let b = box_image(&refl, &[1.0, 0.0], &Box2::unit());
        assert_eq!(b, Box2::checked(0.5, 1.0, 0.0, 0.5).unwrap());
    }

    #[test]
    fn invalid_boxes_rejected() {
        assert!(Box2::checked(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(Box2::checked(0.0, f64::NAN, 0.0, 1.0).is_err());
        assert!(Box2::checked(0.0, 0.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn box_image_contains_sampled_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = [[0.3, -0.7], [0.45, 0.2]];
        let t = [0.1, -0.4];
        let b = Box2::checked(-0.3, 0.8, 0.1, 0.25).unwrap();
        let img = box_image(&a, &t, &b);
        for _ in 0..10_000 {
            let p = Point2::new(rng.gen_range(b.xlo..=b.xhi), rng.gen_range(b.ylo..=b.yhi));
            let q = Point2::new(
                a[0][0] * p.x + a[0][1] * p.y + t[0],
                a[1][0] * p.x + a[1][1] * p.y + t[1],
            );
            assert!(img.inflate(1e-15).contains(&q));
        }
    }

    proptest! {
        #[test]
        fn box_image_contains_image_of_every_sampled_point(
            a in prop::array::uniform4(-2.0f64..2.0), t in prop::array::uniform2(-1.0f64..1.0),
            lo in prop::array::uniform2(-1.0f64..1.0), ext in prop::array::uniform2(0.0f64..1.0),
            u in prop::array::uniform2(0.0f64..=1.0),
        ) {
            let m = [[a[0], a[1]], [a[2], a[3]]];
            let b = Box2::checked(lo[0], lo[0] + ext[0], lo[1], lo[1] + ext[1]).unwrap();
            let p = Point2::new(b.xlo + u[0] * b.width(), b.ylo + u[1] * b.height());
            let q = Point2::new(m[0][0] * p.x + m[0][1] * p.y + t[0], m[1][0] * p.x + m[1][1] * p.y + t[1]);
            let img = box_image(&m, &t, &b);
            let ulp = 4.0 * f64::EPSILON * (1.0 + q.x.abs().max(q.y.abs()) + 8.0);
            prop_assert!(img.inflate(ulp).contains(&q));
        }
    }
}
