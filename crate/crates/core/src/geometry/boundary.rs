use super::{Box2, Point2};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Conservative sign verdict of a boundary function over a closed region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Pos,
    Neg,
    Straddle,
}

/// Analytic function whose zero set is part of the discontinuity set.
///
/// * `Linear(a, b, c)`: `a·x + b·y + c`
/// * `ParabolaX(x0, s)`: `y − s·(x − x0)²`
/// * `OscLog`: `x − y·sin(−ln|y|)`, equal to `x` on `y = 0`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawBoundary",
    into = "RawBoundary",
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub enum BoundaryFn<T> {
    Linear(T, T, T),
    ParabolaX(T, T),
    OscLog,
}

/// Wire form: `{"kind": "linear", "params": [a, b, c]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct RawBoundary {
    kind: String,
    #[serde(default)]
    params: Vec<f64>,
}

impl<T: Scalar> TryFrom<RawBoundary> for BoundaryFn<T> {
    type Error = String;

    fn try_from(raw: RawBoundary) -> Result<Self, String> {
        let conv = |v: f64| T::from_f64(v).ok_or_else(|| format!("non-finite parameter {v}"));
        let expect = |n: usize| {
            if raw.params.len() == n {
                Ok(())
            } else {
                Err(format!(
                    "boundary kind '{}' takes {n} params, got {}",
                    raw.kind,
                    raw.params.len()
                ))
            }
        };
        match raw.kind.as_str() {
            "linear" => {
                expect(3)?;
                Ok(BoundaryFn::Linear(conv(raw.params[0])?, conv(raw.params[1])?, conv(raw.params[2])?))
            }
            "parabola_x" => {
                expect(2)?;
                Ok(BoundaryFn::ParabolaX(conv(raw.params[0])?, conv(raw.params[1])?))
            }
            "osc_log" => {
                expect(0)?;
                Ok(BoundaryFn::OscLog)
            }
            other => Err(format!("unknown boundary kind '{other}'")),
        }
    }
}

impl<T: Scalar> From<BoundaryFn<T>> for RawBoundary {
    fn from(g: BoundaryFn<T>) -> Self {
        let (kind, params) = match g {
            BoundaryFn::Linear(a, b, c) => ("linear", vec![a.to_f64(), b.to_f64(), c.to_f64()]),
            BoundaryFn::ParabolaX(x0, s) => ("parabola_x", vec![x0.to_f64(), s.to_f64()]),
            BoundaryFn::OscLog => ("osc_log", vec![]),
        };
        RawBoundary { kind: kind.to_string(), params }
    }
}

impl<T: Scalar> BoundaryFn<T> {
    /// Value at `p`, or `None` when `T` cannot represent it (`OscLog` with an exact scalar).
    pub fn try_eval(&self, p: &Point2<T>) -> Option<T> {
        match self {
            BoundaryFn::Linear(a, b, c) => {
                Some(a.clone() * p.x.clone() + b.clone() * p.y.clone() + c.clone())
            }
            BoundaryFn::ParabolaX(x0, s) => {
                let dx = p.x.clone() - x0.clone();
                Some(p.y.clone() - s.clone() * dx.clone() * dx)
            }
            BoundaryFn::OscLog => Some(p.x.clone() - T::osc_log_term(&p.y)?),
        }
    }

    pub fn to_f64(&self) -> BoundaryFn<f64> {
        match self {
            BoundaryFn::Linear(a, b, c) => BoundaryFn::Linear(a.to_f64(), b.to_f64(), c.to_f64()),
            BoundaryFn::ParabolaX(x0, s) => BoundaryFn::ParabolaX(x0.to_f64(), s.to_f64()),
            BoundaryFn::OscLog => BoundaryFn::OscLog,
        }
    }

    /// Upper bound on `|∇g|` over `domain`.
    pub fn lipschitz_bound(&self, domain: &Box2<f64>) -> f64 {
        match self.to_f64() {
            BoundaryFn::Linear(a, b, _) => a.hypot(b),
            BoundaryFn::ParabolaX(x0, s) => {
                let reach = (domain.xlo - x0).abs().max((domain.xhi - x0).abs());
                (2.0 * s.abs() * reach).hypot(1.0)
            }
            // |∂x| = 1 and |∂y| = |cos − sin| ≤ √2
            BoundaryFn::OscLog => 3f64.sqrt(),
        }
    }
}

impl<T: Scalar> BoundaryFn<T> {
    pub fn convert<U: Scalar>(&self) -> Option<BoundaryFn<U>> {
        let c = |v: &T| U::from_f64(v.to_f64());
        Some(match self {
            BoundaryFn::Linear(a, b, cc) => BoundaryFn::Linear(c(a)?, c(b)?, c(cc)?),
            BoundaryFn::ParabolaX(x0, s) => BoundaryFn::ParabolaX(c(x0)?, c(s)?),
            BoundaryFn::OscLog => BoundaryFn::OscLog,
        })
    }
}

impl BoundaryFn<f64> {
    pub fn eval(&self, p: &Point2<f64>) -> f64 {
        self.eval_with_error(p).0
    }

    /// Value at `p` together with a bound on its floating-point evaluation error.
    pub(crate) fn eval_with_error(&self, p: &Point2<f64>) -> (f64, f64) {
        const E: f64 = 4.0 * f64::EPSILON;
        match *self {
            BoundaryFn::Linear(a, b, c) => {
                let v = a * p.x + b * p.y + c;
                (v, E * ((a * p.x).abs() + (b * p.y).abs() + c.abs()))
            }
            BoundaryFn::ParabolaX(x0, s) => {
                let dx = p.x - x0;
                let q = s * dx * dx;
                (p.y - q, E * (p.y.abs() + q.abs() + s.abs() * dx.abs() * x0.abs().max(p.x.abs())))
            }
            BoundaryFn::OscLog => {
                let term = f64::osc_log_term(&p.y).unwrap_or(0.0);
                let log = if p.y == 0.0 { 0.0 } else { p.y.abs().ln().abs() };
                (p.x - term, E * (p.x.abs() + p.y.abs() * (8.0 + log)))
            }
        }
    }
}

/// Sign of `g` over the closed box `b`, given `lip ≥ sup |∇g|` on `b`.
///
/// Evaluates at the centre: when `|g(c)|` exceeds `lip` times the
/// half-diagonal, `g` cannot change sign on the box.
pub fn box_sign(g: &BoundaryFn<f64>, b: &Box2<f64>, lip: f64) -> Sign {
    let (v, err) = g.eval_with_error(&b.center());
    if v.abs() > lip * b.half_diagonal() * (1.0 + 4.0 * f64::EPSILON) + err {
        if v > 0.0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    } else {
        Sign::Straddle
    }
}

/// Certified lower bound on the distance from every point of `b` to `{g = 0}`,
/// using `|g(p)| ≤ lip · dist(p, {g = 0})`.
pub fn distance_lower_bound(g: &BoundaryFn<f64>, b: &Box2<f64>, lip: f64) -> f64 {
    let (v, err) = g.eval_with_error(&b.center());
    ((v.abs() - err).max(0.0) / lip - b.half_diagonal()).max(0.0)
}
