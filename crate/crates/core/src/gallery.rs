//! Named example maps with the attractors they are known to have.

use crate::cantor::{build_h, CantorError};
use crate::geometry::{BoundaryFn, Box2, Point2};
use crate::map_model::{AffineMap2, Conjunct, MapError, Map1D, PieceSpec, PwcMap2, Side};
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GalleryError {
    #[error("unknown example '{0}'")]
    UnknownExample(String),
    #[error("example '{example}' has no parameter '{param}'")]
    UnknownParam { example: String, param: String },
    #[error("parameters out of range: {0}")]
    ParamsOutOfRange(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Cantor(#[from] CantorError),
}

pub const NAMES: [&str; 9] = [
    "example_finite",
    "example_countable_A",
    "example_countable_B",
    "example_three_piece",
    "appendix_map",
    "cantor_interval",
    "two_piece_demo",
    "single_cycle_demo",
    "two_cycle_demo",
];

#[derive(Clone, Debug)]
pub enum ExampleMap {
    Planar(PwcMap2<f64>),
    Interval(Map1D<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    FinitePoints(Vec<Point2<f64>>),
    /// `members[k]` for `k = 0..truncation`, accumulating at `limit`.
    CountableFamily {
        formula: String,
        truncation: usize,
        members: Vec<Point2<f64>>,
        limit: Point2<f64>,
    },
    QualitativeTags(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct ExampleDescriptor {
    pub name: String,
    pub params: Params,
    pub map: ExampleMap,
    pub lambda: f64,
    pub expected: Vec<Expected>,
    pub notes: String,
}

impl ExampleDescriptor {
    pub fn planar(&self) -> Option<&PwcMap2<f64>> {
        match &self.map {
            ExampleMap::Planar(m) => Some(m),
            ExampleMap::Interval(_) => None,
        }
    }

    pub fn interval(&self) -> Option<&Map1D<f64>> {
        match &self.map {
            ExampleMap::Interval(h) => Some(h),
            ExampleMap::Planar(_) => None,
        }
    }
}

fn defaults(name: &str) -> Option<Params> {
    let kv: &[(&str, f64)] = match name {
        "example_finite" => &[("n", 1.0), ("m", 1.0), ("x1", 0.25), ("x2", 0.75), ("lambda1", 0.5), ("lambda2", 0.5)],
        "example_countable_A" | "example_countable_B" | "example_three_piece" => &[("lambda", 0.5)],
        "cantor_interval" => &[("alpha", 0.5), ("nu", (5f64.sqrt() - 1.0) / 2.0), ("tol", 1e-12)],
        "appendix_map" | "two_piece_demo" | "single_cycle_demo" | "two_cycle_demo" => &[],
        _ => return None,
    };
    Some(kv.iter().map(|(k, v)| (k.to_string(), *v)).collect())
}

fn merged(name: &str, overrides: &Params) -> Result<Params, GalleryError> {
    let mut p = defaults(name).ok_or_else(|| GalleryError::UnknownExample(name.to_string()))?;
    for (k, v) in overrides {
        match p.get_mut(k) {
            Some(slot) => *slot = *v,
            None => return Err(GalleryError::UnknownParam { example: name.into(), param: k.clone() }),
        }
    }
    Ok(p)
}

fn lin(a: f64, b: f64, c: f64, sign: Side) -> Conjunct<f64> {
    Conjunct::new(BoundaryFn::Linear(a, b, c), sign)
}

fn para(x0: f64, s: f64, sign: Side) -> Conjunct<f64> {
    Conjunct::new(BoundaryFn::ParabolaX(x0, s), sign)
}

fn aff(a: [[f64; 2]; 2], t: [f64; 2]) -> AffineMap2<f64> {
    AffineMap2::new(a, t)
}

fn scale(l: f64, t: [f64; 2]) -> AffineMap2<f64> {
    aff([[l, 0.0], [0.0, l]], t)
}

fn pt(x: f64, y: f64) -> Point2<f64> {
    Point2::new(x, y)
}

fn lambda_in_unit(l: f64, what: &str) -> Result<(), GalleryError> {
    if l > 0.0 && l < 1.0 {
        Ok(())
    } else {
        Err(GalleryError::ParamsOutOfRange(format!("{what} = {l} must lie in (0, 1)")))
    }
}

fn count_param(v: f64, what: &str) -> Result<i32, GalleryError> {
    if v >= 1.0 && v.fract() == 0.0 && v <= 60.0 {
        Ok(v as i32)
    } else {
        Err(GalleryError::ParamsOutOfRange(format!("{what} = {v} must be an integer in 1..=60")))
    }
}

/// Pre-images of `1/2` under the first map: `a_k = x₁ + λ₁^{−k}(1/2 − x₁)`, `k = 0..=n`.
pub fn finite_a(x1: f64, lambda1: f64, n: i32) -> Vec<f64> {
    (0..=n).map(|k| x1 + lambda1.powi(-k) * (0.5 - x1)).collect()
}

/// Pre-images of `1/2` under the second map: `b_k = x₂ − λ₂^{−k}(x₂ − 1/2)`, `k = 0..=m`.
pub fn finite_b(x2: f64, lambda2: f64, m: i32) -> Vec<f64> {
    (0..=m).map(|k| x2 - lambda2.powi(-k) * (x2 - 0.5)).collect()
}

/// One period of the x-coordinates the finite example's orbits shadow:
/// `1/2, b_m, …, b_1, 1/2, a_n, …, a_1`.
pub fn finite_cycle(p: &Params) -> Vec<f64> {
    let (n, m) = (p["n"] as i32, p["m"] as i32);
    let a = finite_a(p["x1"], p["lambda1"], n);
    let b = finite_b(p["x2"], p["lambda2"], m);
    let mut z = vec![0.5];
    z.extend((1..=m as usize).rev().map(|k| b[k]));
    z.push(0.5);
    z.extend((1..=n as usize).rev().map(|k| a[k]));
    z
}

fn example_finite(p: &Params) -> Result<ExampleDescriptor, GalleryError> {
    let (n, m) = (count_param(p["n"], "n")?, count_param(p["m"], "m")?);
    let (x1, x2, l1, l2) = (p["x1"], p["x2"], p["lambda1"], p["lambda2"]);
    if !(0.0..0.5).contains(&x1) {
        return Err(GalleryError::ParamsOutOfRange(format!("x1 = {x1} must lie in [0, 1/2)")));
    }
    if !(x2 > 0.5 && x2 < 1.0) {
        return Err(GalleryError::ParamsOutOfRange(format!("x2 = {x2} must lie in (1/2, 1)")));
    }
    lambda_in_unit(l2, "lambda2")?;
    let ratio = (1.0 - x1) / (0.5 - x1);
    let (lo, hi) = (ratio.powf(-1.0 / n as f64), ratio.powf(-1.0 / (n as f64 + 1.0)));
    if !(l1 > lo && l1 <= hi) {
        return Err(GalleryError::ParamsOutOfRange(format!(
            "lambda1 = {l1} must satisfy {lo} < lambda1 <= {hi}"
        )));
    }
    let a = finite_a(x1, l1, n);
    let b = finite_b(x2, l2, m);
    for (k, ak) in a.iter().enumerate().skip(1) {
        if !(*ak > 0.5 && *ak < 1.0) {
            return Err(GalleryError::ParamsOutOfRange(format!("a_{k} = {ak} not in (1/2, 1)")));
        }
    }
    for (k, bk) in b.iter().enumerate().skip(1) {
        if !(*bk > 0.0 && *bk < 0.5) {
            return Err(GalleryError::ParamsOutOfRange(format!("b_{k} = {bk} not in (0, 1/2)")));
        }
    }
    let (an, bm, a1, b1) = (a[n as usize], b[m as usize], a[1], b[1]);
    let map = PwcMap2::new(
        Box2::unit(),
        vec![
            PieceSpec::new(1, vec![lin(1.0, 0.0, -a1, Side::Pos)]),
            PieceSpec::new(2, vec![lin(1.0, 0.0, -b1, Side::Neg)]),
            PieceSpec::new(3, vec![lin(1.0, 0.0, -b1, Side::Pos), lin(1.0, 0.0, -0.5, Side::Neg)]),
            PieceSpec::new(4, vec![lin(1.0, 0.0, -0.5, Side::Pos), lin(1.0, 0.0, -a1, Side::Neg)]),
        ],
        vec![
            scale(l1, [(1.0 - l1) * x1, 0.0]),
            scale(l2, [(1.0 - l2) * x2, 0.0]),
            // 2(1−a_n)(1−x, y) + (2a_n − 1, 0)
            aff([[-2.0 * (1.0 - an), 0.0], [0.0, 2.0 * (1.0 - an)]], [2.0 * (1.0 - an) + 2.0 * an - 1.0, 0.0]),
            // 2b_m(1−x, y)
            aff([[-2.0 * bm, 0.0], [0.0, 2.0 * bm]], [2.0 * bm, 0.0]),
        ],
    )?;
    let mut xs = finite_cycle(p);
    xs.sort_by(|u, v| u.partial_cmp(v).expect("finite"));
    xs.dedup();
    Ok(ExampleDescriptor {
        name: "example_finite".into(),
        params: p.clone(),
        lambda: l1.max(l2).max(2.0 * (1.0 - an)).max(2.0 * bm),
        map: ExampleMap::Planar(map),
        expected: vec![
            Expected::FinitePoints(xs.into_iter().map(|x| pt(x, 0.0)).collect()),
            Expected::QualitativeTags(vec!["transitive".into(), "not_periodic".into()]),
        ],
        notes: "b_k solved from the second map's pre-image recursion: b_k = x2 - lambda2^-k (x2 - 1/2)".into(),
    })
}

fn parabola_pieces() -> Vec<PieceSpec<f64>> {
    vec![
        PieceSpec::new(1, vec![para(0.0, 1.0, Side::Neg)]),
        PieceSpec::new(2, vec![para(0.0, 1.0, Side::Pos)]),
    ]
}

fn countable_a(p: &Params) -> Result<ExampleDescriptor, GalleryError> {
    let l = p["lambda"];
    lambda_in_unit(l, "lambda")?;
    let map = PwcMap2::new(
        Box2::unit(),
        parabola_pieces(),
        vec![scale(l, [0.0, 0.0]), aff([[-l, 0.0], [0.0, l]], [1.0, 0.0])],
    )?;
    Ok(ExampleDescriptor {
        name: "example_countable_A".into(),
        params: p.clone(),
        lambda: l,
        map: ExampleMap::Planar(map),
        expected: vec![Expected::CountableFamily {
            formula: "(lambda^k, 0)".into(),
            truncation: 12,
            members: (0..12).map(|k| pt(l.powi(k), 0.0)).collect(),
            limit: pt(0.0, 0.0),
        }],
        notes: "limit set equals the attractor".into(),
    })
}

fn family_b(l: f64) -> Expected {
    Expected::CountableFamily {
        formula: "(0, 1 - lambda^k)".into(),
        truncation: 12,
        members: (0..12).map(|k| pt(0.0, 1.0 - l.powi(k))).collect(),
        limit: pt(0.0, 1.0),
    }
}

fn countable_b(p: &Params) -> Result<ExampleDescriptor, GalleryError> {
    let l = p["lambda"];
    lambda_in_unit(l, "lambda")?;
    let map = PwcMap2::new(Box2::unit(), parabola_pieces(), vec![scale(l, [0.0, 0.0]), scale(l, [0.0, 1.0 - l])])?;
    Ok(ExampleDescriptor {
        name: "example_countable_B".into(),
        params: p.clone(),
        lambda: l,
        map: ExampleMap::Planar(map),
        expected: vec![
            family_b(l),
            Expected::FinitePoints(vec![pt(0.0, 0.0), pt(0.0, 1.0)]),
            Expected::QualitativeTags(vec!["limit_set_smaller_than_attractor".into(), "wandering_points".into()]),
        ],
        notes: "attractor is the countable family; limit set and non-wandering set are its two end points".into(),
    })
}

fn three_piece(p: &Params) -> Result<ExampleDescriptor, GalleryError> {
    let l = p["lambda"];
    lambda_in_unit(l, "lambda")?;
    let dom = Box2::checked(-1.0, 1.0, 0.0, 1.0).expect("static box");
    let right = BoundaryFn::Linear(1.0, 0.0, 0.0);
    let lower = BoundaryFn::ParabolaX(0.0, 1.0); // y − x²
    let upper = BoundaryFn::ParabolaX(-1.0, 1.0); // y − (x+1)²
    let c = |g: &BoundaryFn<f64>, s| Conjunct::new(g.clone(), s);
    let map = PwcMap2::new(
        dom,
        vec![
            PieceSpec::new(1, vec![c(&right, Side::Pos), c(&lower, Side::Neg)]),
            // the middle piece: above y = x² on the right, below y = (x+1)² on the left,
            // and the open segment x = 0 between them
            PieceSpec::new(2, vec![c(&lower, Side::Pos), c(&upper, Side::Neg)]),
            PieceSpec::new(2, vec![c(&right, Side::Pos), c(&lower, Side::Pos)]),
            PieceSpec::new(2, vec![c(&right, Side::Neg), c(&upper, Side::Neg)]),
            PieceSpec::new(3, vec![c(&right, Side::Neg), c(&upper, Side::Pos)]),
        ],
        vec![
            scale(l, [0.0, 0.0]),
            scale(l, [0.0, 1.0 - l]),
            aff([[l, 0.0], [0.0, -l]], [1.0, l]),
        ],
    )?;
    Ok(ExampleDescriptor {
        name: "example_three_piece".into(),
        params: p.clone(),
        lambda: l,
        map: ExampleMap::Planar(map),
        expected: vec![
            family_b(l),
            Expected::FinitePoints(vec![pt(0.0, 0.0), pt(0.0, 1.0)]),
            Expected::QualitativeTags(vec!["non_wandering_equals_attractor".into()]),
        ],
        notes: "attractor and non-wandering set are the countable family; limit set is its two end points".into(),
    })
}

fn appendix() -> Result<ExampleDescriptor, GalleryError> {
    let dom = Box2::checked(-1.0, 1.0, 0.0, (-2.0 * PI).exp()).expect("static box");
    let g = BoundaryFn::OscLog;
    let c = (-PI).exp();
    let map = PwcMap2::new(
        dom,
        vec![
            PieceSpec::new(1, vec![Conjunct::new(g.clone(), Side::Pos)]),
            PieceSpec::new(2, vec![Conjunct::new(g, Side::Neg)]),
        ],
        vec![scale(c, [0.0, 0.0]), scale(0.5, [-0.25, 0.0])],
    )?;
    Ok(ExampleDescriptor {
        name: "appendix_map".into(),
        params: Params::new(),
        lambda: 0.5,
        map: ExampleMap::Planar(map),
        expected: vec![
            Expected::FinitePoints(vec![pt(-0.5, 0.0), pt(0.0, 0.0)]),
            Expected::QualitativeTags(vec!["atom_12_multi_component".into()]),
        ],
        notes: "second map read as (x/2 - 1/4, y/2), fixed point (-1/2, 0)".into(),
    })
}

fn cantor(p: &Params) -> Result<ExampleDescriptor, GalleryError> {
    let h = build_h(p["alpha"], p["nu"], p["tol"])?;
    Ok(ExampleDescriptor {
        name: "cantor_interval".into(),
        params: p.clone(),
        lambda: h.alpha,
        map: ExampleMap::Interval(h),
        expected: vec![Expected::QualitativeTags(vec!["cantor_set".into(), "min_below_threshold_below_max".into()])],
        notes: "nu is taken irrational by assertion".into(),
    })
}

fn halves_pieces() -> Vec<PieceSpec<f64>> {
    vec![
        PieceSpec::new(1, vec![lin(1.0, 0.0, -0.5, Side::Neg)]),
        PieceSpec::new(2, vec![lin(1.0, 0.0, -0.5, Side::Pos)]),
    ]
}

fn demo(name: &str, maps: Vec<AffineMap2<f64>>, points: Vec<Point2<f64>>, notes: &str) -> Result<ExampleDescriptor, GalleryError> {
    let map = PwcMap2::new(Box2::unit(), halves_pieces(), maps)?;
    Ok(ExampleDescriptor {
        name: name.into(),
        params: Params::new(),
        lambda: map.lambda(),
        map: ExampleMap::Planar(map),
        expected: vec![Expected::FinitePoints(points)],
        notes: notes.into(),
    })
}

/// Period-2 orbit of the two-cycle demo, solving `(I − A₂A₁) y = A₂t₁ + t₂`.
pub fn two_cycle_points() -> [Point2<f64>; 2] {
    // A₂A₁ = R/4 with R(x, y) = (−y, x), and A₂t₁ + t₂ = (3/8, 7/16)
    let (rx, ry) = (0.375, 0.4375);
    // (I − R/4)⁻¹ = (16/17)·[[1, −1/4], [1/4, 1]]
    let k = 16.0 / 17.0;
    let y = pt(k * (rx - 0.25 * ry), k * (0.25 * rx + ry));
    let z = pt(0.5 * y.x + 0.625, 0.5 * y.y + 0.25);
    [y, z]
}

pub fn build_example(name: &str, overrides: &Params) -> Result<ExampleDescriptor, GalleryError> {
    let p = merged(name, overrides)?;
    match name {
        "example_finite" => example_finite(&p),
        "example_countable_A" => countable_a(&p),
        "example_countable_B" => countable_b(&p),
        "example_three_piece" => three_piece(&p),
        "appendix_map" => appendix(),
        "cantor_interval" => cantor(&p),
        "two_piece_demo" => demo(
            name,
            vec![scale(0.5, [0.0, 0.0]), scale(0.5, [0.5, 0.0])],
            vec![pt(0.0, 0.0), pt(1.0, 0.0)],
            "two attracting fixed points well away from x = 1/2",
        ),
        "single_cycle_demo" => demo(
            name,
            vec![scale(0.5, [0.0, 0.0]), scale(0.25, [0.0, 0.0])],
            vec![pt(0.0, 0.0)],
            "both pieces map into the left half; one global fixed point",
        ),
        "two_cycle_demo" => demo(
            name,
            // the right half turns a quarter about (3/4, 1/2) and lands in the left half
            vec![scale(0.5, [0.625, 0.25]), aff([[0.0, -0.5], [0.5, 0.0]], [0.5, 0.125])],
            two_cycle_points().to_vec(),
            "each half maps into the other; one period-2 orbit",
        ),
        _ => Err(GalleryError::UnknownExample(name.into())),
    }
}

/// First `count` members of the example's expected family (plus its limit
/// when `count > 0`), or the first `count` expected points.
pub fn expected_points(name: &str, overrides: &Params, count: usize) -> Result<Vec<Point2<f64>>, GalleryError> {
    let d = build_example(name, overrides)?;
    if count == 0 {
        return Ok(vec![]);
    }
    let p = merged(name, overrides)?;
    for e in &d.expected {
        if let Expected::CountableFamily { formula, limit, .. } = e {
            let l = p["lambda"];
            let members: Vec<Point2<f64>> = (0..count as i32)
                .map(|k| match formula.as_str() {
                    "(lambda^k, 0)" => pt(l.powi(k), 0.0),
                    _ => pt(0.0, 1.0 - l.powi(k)),
                })
                .collect();
            let mut out = members;
            out.push(limit.clone());
            return Ok(out);
        }
    }
    for e in &d.expected {
        if let Expected::FinitePoints(v) = e {
            return Ok(v.iter().take(count).cloned().collect());
        }
    }
    Ok(vec![])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_model::Classification;

    #[test]
    fn finite_defaults() {
        let d = build_example("example_finite", &Params::new()).unwrap();
        let p = &d.params;
        let a = finite_a(p["x1"], p["lambda1"], 1);
        let b = finite_b(p["x2"], p["lambda2"], 1);
        assert_eq!((a[1], b[1]), (0.75, 0.25));
        assert_eq!(finite_cycle(p), vec![0.5, 0.25, 0.5, 0.75]);
        assert_eq!(d.lambda, 0.5);
        let m = d.planar().unwrap();
        // f3(1/2, 0) = (a_n, 0), f3(0, 0) = (1, 0), f4(1/2, 0) = (b_m, 0), f4(1, 0) = (0, 0)
        assert_eq!(m.map_of(3).apply(&pt(0.5, 0.0)), pt(0.75, 0.0));
        assert_eq!(m.map_of(3).apply(&pt(0.0, 0.0)), pt(1.0, 0.0));
        assert_eq!(m.map_of(4).apply(&pt(0.5, 0.0)), pt(0.25, 0.0));
        assert_eq!(m.map_of(4).apply(&pt(1.0, 0.0)), pt(0.0, 0.0));
    }

    #[test]
    fn finite_recursions_hold() {
        let mut p = defaults("example_finite").unwrap();
        p.insert("n".into(), 3.0);
        p.insert("m".into(), 2.0);
        p.insert("x1".into(), 0.1);
        p.insert("x2".into(), 0.8);
        // footnote interval for n = 3, x1 = 0.1: (2.25^{-1/3}, 2.25^{-1/4}] = (0.763, 0.816]
        p.insert("lambda1".into(), 0.8);
        p.insert("lambda2".into(), 0.8);
        let d = build_example("example_finite", &p).unwrap();
        let m = d.planar().unwrap();
        let a = finite_a(0.1, 0.8, 3);
        let b = finite_b(0.8, 0.8, 2);
        for k in 1..=3 {
            let img = m.map_of(1).apply(&pt(a[k], 0.0));
            assert!((img.x - a[k - 1]).abs() < 1e-12);
            assert!(a[k] > 0.5 && a[k] < 1.0);
        }
        for k in 1..=2 {
            // root-solving oracle: bisection for f₂ᵏ(b) = 1/2 on (0, 1/2)
            let f2k = |x: f64| (0..k).fold(x, |v, _| 0.8 * v + 0.2 * 0.8);
            let (mut lo, mut hi) = (0.0, 0.5);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f2k(mid) < 0.5 { lo = mid } else { hi = mid }
            }
            assert!((b[k] - lo).abs() < 1e-12, "b_{k}: {} vs {lo}", b[k]);
            let img = m.map_of(2).apply(&pt(b[k], 0.0));
            assert!((img.x - b[k - 1]).abs() < 1e-12);
        }
        assert!(d.planar().unwrap().validate(20_000, 1e-12).is_ok());
    }

    #[test]
    fn finite_rejects_out_of_range() {
        let mut p = Params::new();
        p.insert("lambda1".into(), 0.3);
        assert!(matches!(build_example("example_finite", &p), Err(GalleryError::ParamsOutOfRange(_))));
        let mut p = Params::new();
        p.insert("lambda2".into(), 0.2);
        // b_1 = 0.75 − 5·0.25 < 0
        assert!(matches!(build_example("example_finite", &p), Err(GalleryError::ParamsOutOfRange(_))));
        let mut p = Params::new();
        p.insert("bogus".into(), 1.0);
        assert!(matches!(build_example("example_finite", &p), Err(GalleryError::UnknownParam { .. })));
        assert!(build_example("nope", &Params::new()).is_err());
    }

    #[test]
    fn every_planar_example_validates_with_stated_lambda() {
        for name in NAMES {
            let d = build_example(name, &Params::new()).unwrap();
            if let Some(m) = d.planar() {
                let rep = m.validate(100_000, 1e-12).unwrap_or_else(|e| panic!("{name}: {e}"));
                assert_eq!(rep.lambda, d.lambda, "{name}");
                for e in &d.expected {
                    if let Expected::FinitePoints(ps) = e {
                        assert!(ps.iter().all(|q| m.domain().contains(q)), "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn three_piece_examples() {
        let d = build_example("example_three_piece", &Params::new()).unwrap();
        let m = d.planar().unwrap();
        assert_eq!(m.classify_point(&pt(-0.5, 0.1), 1e-12).unwrap(), Classification::Piece(2));
        assert_eq!(m.classify_point(&pt(0.0, 0.5), 1e-12).unwrap(), Classification::Piece(2));
        assert!(m.apply(&pt(-0.5, 0.9), 1e-12).unwrap().dist(&pt(0.75, 0.05)) < 1e-15);
        let grid = crate::geometry::Grid::new(m.domain_f64().clone(), 40, 20).unwrap();
        // [0.4, 0.45] × [0.9, 0.95]
        assert_eq!(m.classify_cell(&grid, (28, 18)), crate::map_model::CellClass::Piece(2));
    }

    #[test]
    fn countable_b_apply() {
        let d = build_example("example_countable_B", &Params::new()).unwrap();
        assert!(d.planar().unwrap().apply(&pt(0.2, 0.9), 1e-12).unwrap().dist(&pt(0.1, 0.95)) < 1e-15);
    }

    #[test]
    fn appendix_lambda() {
        let d = build_example("appendix_map", &Params::new()).unwrap();
        assert_eq!(d.planar().unwrap().lambda(), 0.5);
        assert!((d.planar().unwrap().maps()[0].factor - (-PI).exp()).abs() < 1e-16);
    }

    #[test]
    fn expected_point_lists() {
        let v = expected_points("example_countable_B", &Params::new(), 4).unwrap();
        assert_eq!(v, vec![pt(0.0, 0.0), pt(0.0, 0.5), pt(0.0, 0.75), pt(0.0, 0.875), pt(0.0, 1.0)]);
        assert!(expected_points("example_countable_B", &Params::new(), 0).unwrap().is_empty());
        assert_eq!(
            expected_points("example_three_piece", &Params::new(), 4).unwrap(),
            expected_points("example_countable_B", &Params::new(), 4).unwrap()
        );
    }

    #[test]
    fn two_cycle_oracle_is_periodic() {
        let d = build_example("two_cycle_demo", &Params::new()).unwrap();
        let m = d.planar().unwrap();
        let [y, z] = two_cycle_points();
        assert_eq!((y.x, y.y, z.x, z.y), (0.25, 0.5, 0.75, 0.5));
        assert_eq!(m.classify_point(&y, 1e-12).unwrap(), Classification::Piece(1));
        let fy = m.apply(&y, 1e-12).unwrap();
        assert!(fy.dist(&z) < 1e-15);
        let ffy = m.apply(&fy, 1e-12).unwrap();
        assert!(ffy.dist(&y) < 1e-15);
    }
}
