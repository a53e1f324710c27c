//! Attractors of piecewise contracting planar maps: grid outer approximations
//! of atoms and of `Λ`, separation and periodicity certificates, orbit and
//! recurrence probes, and the two-branch interval map with a Cantor attractor.
//!
//! The map model, orbit engine and interval map are generic over [`Scalar`]
//! (`f32`, `f64`, and the exact [`Dyadic`]); the aliases below fix the usual
//! choices.

// `!(a > b)` is used on purpose so that NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atoms;
pub mod cantor;
pub mod gallery;
pub mod geometry;
pub mod map_model;
pub mod orbit;
pub mod render;
pub mod repro;
pub mod scalar;

pub use scalar::{Dyadic, Scalar};

pub type Point = geometry::Point2<f64>;
pub type Rect = geometry::Box2<f64>;
pub type Map = map_model::PwcMap2<f64>;
pub type IntervalMap = map_model::Map1D<f64>;
pub type ExactPoint = geometry::Point2<Dyadic>;
pub type ExactMap = map_model::PwcMap2<Dyadic>;
pub type ExactIntervalMap = map_model::Map1D<Dyadic>;
