use super::MapError;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Which branch of a [`Map1D`] a point falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side1D {
    /// `[0, τ)`, mapped by `αx + (1 − α)`.
    Left,
    /// `(τ, 1]`, mapped by `αx`.
    Right,
}

/// Two-branch affine interval map on `[0, 1]` with a single discontinuity at `τ`.
///
/// Left of `τ` the map is `αx + (1 − α)`, right of it `αx`; it is undefined at `τ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Map1D<T> {
    pub alpha: T,
    pub tau: T,
    one_minus_alpha: T,
}

impl<T: Scalar> Map1D<T> {
    pub fn new(alpha: T, tau: T) -> Result<Self, MapError> {
        let (zero, one) = (T::zero(), T::one());
        if !(alpha > zero && alpha < one) {
            return Err(MapError::Invalid("slope must lie in (0, 1)".into()));
        }
        if !(tau > zero && tau < one) {
            return Err(MapError::Invalid("threshold must lie in (0, 1)".into()));
        }
        Ok(Self { one_minus_alpha: one - alpha.clone(), alpha, tau })
    }

    pub fn side(&self, x: &T) -> Result<Side1D, MapError> {
        // written so that NaN fails the range test
        if !(*x >= T::zero() && *x <= T::one()) {
            return Err(MapError::PointOutsideDomain { x: x.to_f64(), y: 0.0 });
        }
        if *x < self.tau {
            Ok(Side1D::Left)
        } else if *x > self.tau {
            Ok(Side1D::Right)
        } else {
            Err(MapError::OnBoundary { distance: 0.0 })
        }
    }

    pub fn branch(&self, side: Side1D, x: &T) -> T {
        let ax = self.alpha.clone() * x.clone();
        match side {
            Side1D::Left => ax + self.one_minus_alpha.clone(),
            Side1D::Right => ax,
        }
    }

    pub fn apply(&self, x: &T) -> Result<T, MapError> {
        Ok(self.branch(self.side(x)?, x))
    }

    /// Both branches share the slope `α`.
    pub fn contraction(&self) -> f64 {
        self.alpha.to_f64()
    }

    pub fn to_f64(&self) -> Map1D<f64> {
        Map1D::new(self.alpha.to_f64(), self.tau.to_f64()).expect("parameters already checked")
    }
}
