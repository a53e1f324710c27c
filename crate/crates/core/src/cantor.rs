//! Two-branch affine interval map whose discontinuity sits at a threshold
//! `τ = T(α, ν)` built from the Sturmian sequence `⌊ν(k+1)⌋`, and probes of
//! the Cantor set traced by the orbit of `τ`.
//!
//! Floats are a poor fit here. The orbit of `τ` returns to within roughly
//! `α^{2.6n}` of `τ` by step `n`, so after a few dozen steps a float orbit no
//! longer follows the true itinerary, and for `α = 1/2` it collapses onto a
//! short cycle. [`build_h_exact`] evaluates the series exactly in [`Dyadic`]
//! arithmetic with enough terms for the requested orbit length; the probes are
//! generic over the scalar and can certify the itinerary after the fact.

use crate::map_model::{Map1D, MapError, Side1D};
use crate::scalar::{Dyadic, Scalar};
use num_bigint::BigInt;
use num_traits::Signed;
use num_traits::{Float, One, Zero};
use serde::{Deserialize, Serialize};
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CantorError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("orbit hit the threshold exactly at step {step}")]
    BoundaryCollision { step: usize },
    #[error("no orbit point qualifies among {searched} candidates")]
    NoCandidateFound { searched: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Truncated evaluation of the threshold series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SturmianParams {
    pub alpha: f64,
    pub nu: f64,
    pub tau: f64,
    /// Number of series terms summed (`k = 0..k_terms`).
    pub k_terms: usize,
    /// Rigorous bound on the omitted part, already scaled by `(1−α)²/α`.
    pub tail_bound: f64,
}

fn check_params(alpha: f64, nu: f64) -> Result<(), CantorError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CantorError::InvalidParams("alpha must lie in (0, 1)".into()));
    }
    if !(nu > 0.0 && nu < 1.0) {
        return Err(CantorError::InvalidParams("nu must lie in (0, 1)".into()));
    }
    Ok(())
}

/// `((1−α)²/α) · Σ_{k ≥ K} αᵏ ν (k+1)`, using
/// `Σ_{k ≥ K} αᵏ (k+1) = α^K ((K+1) − Kα) / (1−α)²`.
pub fn tail_bound<F: Float>(alpha: F, nu: F, k_terms: usize) -> F {
    let k = F::from(k_terms).expect("term count fits");
    let one = F::one();
    nu * alpha.powi(k_terms as i32 - 1) * ((k + one) - k * alpha)
}

/// `log₂` of [`tail_bound`]; stays finite where the bound itself underflows.
pub fn tail_bound_log2(alpha: f64, nu: f64, k_terms: usize) -> f64 {
    let k = k_terms as f64;
    nu.log2() + (k - 1.0) * alpha.log2() + ((k + 1.0) - k * alpha).log2()
}

/// `T(α, ν) = 1 − ((1−α)²/α) Σ_{k ≥ 0} αᵏ ⌊ν(k+1)⌋`, truncated at the
/// smallest term count whose tail bound is below `tol`.
pub fn threshold_t<F: Float>(alpha: F, nu: F, tol: F) -> Result<(F, usize, F), CantorError> {
    let (zero, one) = (F::zero(), F::one());
    check_params(alpha.to_f64().unwrap_or(f64::NAN), nu.to_f64().unwrap_or(f64::NAN))?;
    if !(tol > zero) {
        return Err(CantorError::InvalidParams("tol must be positive".into()));
    }
    let mut k_terms = 0usize;
    while tail_bound(alpha, nu, k_terms) >= tol {
        k_terms += 1;
        if k_terms > 1_000_000 {
            return Err(CantorError::InvalidParams("tolerance unreachable".into()));
        }
    }
    let mut sum = zero;
    let mut pow = one;
    for k in 0..k_terms {
        let kk = F::from(k + 1).expect("index fits");
        sum = sum + pow * (nu * kk).floor();
        pow = pow * alpha;
    }
    let c = (one - alpha) * (one - alpha) / alpha;
    let tau = one - c * sum;
    Ok((tau, k_terms, tail_bound(alpha, nu, k_terms)))
}

pub fn sturmian_params(alpha: f64, nu: f64, tol: f64) -> Result<SturmianParams, CantorError> {
    let (tau, k_terms, tail_bound) = threshold_t(alpha, nu, tol)?;
    Ok(SturmianParams { alpha, nu, tau, k_terms, tail_bound })
}

/// The interval map with threshold `T(α, ν)`.
pub fn build_h<F: Float + Scalar>(alpha: F, nu: F, tol: F) -> Result<Map1D<F>, CantorError> {
    let (tau, _, _) = threshold_t(alpha, nu, tol)?;
    Ok(Map1D::new(alpha, tau)?)
}

/// `⌊ν·m⌋` computed from the binary expansion of `ν`, without rounding.
fn floor_mul(nu: f64, m: u64) -> u128 {
    let bits = nu.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as u128;
    let (mant, e) = if biased == 0 { (frac, -1074) } else { (frac | (1 << 52), biased - 1075) };
    // ν < 1 forces e < 0
    let shift = (-e) as u32;
    if shift >= 128 {
        0
    } else {
        (mant * m as u128) >> shift
    }
}

/// The `k_terms`-term partial sum of `T(α, ν)` in exact arithmetic, plus the
/// `log₂` of its tail bound. Every finite `α` is a binary fraction, so the
/// only error is the truncation.
pub fn threshold_exact(alpha: f64, nu: f64, k_terms: usize) -> Result<(Dyadic, f64), CantorError> {
    check_params(alpha, nu)?;
    let a = Dyadic::from_f64(alpha).expect("finite");
    // (1/α)·Σ_{k≥1} αᵏ f_k = Σ_{k≥1} α^{k−1} f_k; the k = 0 term is ⌊ν⌋ = 0
    let mut s = Dyadic::zero();
    for k in (1..k_terms).rev() {
        let f = Dyadic::new(BigInt::from(floor_mul(nu, k as u64 + 1)), 0);
        s = s * a.clone() + f;
    }
    let c = (Dyadic::one() - a.clone()) * (Dyadic::one() - a);
    Ok((Dyadic::one() - c * s, tail_bound_log2(alpha, nu, k_terms)))
}

/// Exact interval map whose threshold is accurate enough for an orbit of `steps`.
#[derive(Clone, Debug)]
pub struct ExactH {
    pub h: Map1D<Dyadic>,
    pub k_terms: usize,
    /// `log₂` of the bound on `|τ − T(α, ν)|`.
    pub tail_bound_log2: f64,
}

impl ExactH {
    /// True when the sampled itinerary is provably that of the untruncated
    /// threshold: every iterate keeps more than twice the truncation error
    /// from `τ`, and the two orbits differ by at most that error.
    pub fn certifies(&self, report: &CantorProbeReport) -> bool {
        report.min_dist_to_tau_log2 > self.tail_bound_log2 + 1.0
    }
}

/// Series terms used by [`build_h_exact`]. For the golden `ν` the closest
/// return to `τ` by step `n` is about `α^{2.62n}`; three terms per step keep
/// the truncation below that, and [`ExactH::certifies`] checks it.
pub fn exact_terms(steps: usize) -> usize {
    3 * steps + 128
}

pub fn build_h_exact(alpha: f64, nu: f64, steps: usize) -> Result<ExactH, CantorError> {
    let k_terms = exact_terms(steps);
    let (tau, tail_bound_log2) = threshold_exact(alpha, nu, k_terms)?;
    let h = Map1D::new(Dyadic::from_f64(alpha).expect("finite"), tau)?;
    Ok(ExactH { h, k_terms, tail_bound_log2 })
}

/// A sampled orbit of a one-sided image of `τ`, rounded to `f64` for
/// statistics; sides and distances to `τ` are decided in the map's scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitTrace {
    pub tau: f64,
    pub values: Vec<f64>,
    /// `⌊x · 2^GAP_BITS⌋` per point, for gap statistics below `f64` resolution.
    pub keys: Vec<BigInt>,
    pub symbols: Vec<Side1D>,
    /// Over points after the first, as `log₂` (exact scalars go far below `f64`).
    pub min_dist_to_tau_log2: f64,
    pub min_index: usize,
    pub max_index: usize,
    /// `min < τ < max` with everything in `[0, 1]`, compared in the map's scalar.
    pub ordered: bool,
}

/// Orbit of `h₂(τ)` for `Left`, `h₁(τ)` for `Right`, streamed so that exact
/// iterates are never stored.
pub fn trace_orbit<T: Scalar>(h: &Map1D<T>, steps: usize, start: Side1D) -> Result<OrbitTrace, CantorError> {
    if steps == 0 {
        return Err(CantorError::InvalidParams("empty orbit".into()));
    }
    let (zero, one) = (T::zero(), T::one());
    let mut x = h.branch(start, &h.tau);
    let mut values = Vec::with_capacity(steps);
    let mut keys = Vec::with_capacity(steps);
    let mut symbols = Vec::with_capacity(steps);
    let mut min_dist = f64::INFINITY;
    let (mut lo, mut hi) = (x.clone(), x.clone());
    let (mut min_index, mut max_index) = (0, 0);
    let mut in_unit = true;
    for step in 0..steps {
        let d = x.clone() - h.tau.clone();
        let side = if d < zero {
            Side1D::Left
        } else if d > zero {
            Side1D::Right
        } else {
            return Err(CantorError::BoundaryCollision { step });
        };
        if step > 0 {
            min_dist = min_dist.min(d.log2_abs());
        }
        in_unit &= x >= zero && x <= one;
        if x < lo {
            lo = x.clone();
            min_index = step;
        }
        if x > hi {
            hi = x.clone();
            max_index = step;
        }
        values.push(x.to_f64());
        keys.push(x.floor_scaled(GAP_BITS).expect("orbit stays finite"));
        symbols.push(side);
        if step + 1 < steps {
            x = h.branch(side, &x);
        }
    }
    Ok(OrbitTrace {
        tau: h.tau.to_f64(),
        values,
        keys,
        symbols,
        min_dist_to_tau_log2: min_dist,
        min_index,
        max_index,
        ordered: in_unit && lo < h.tau && h.tau < hi,
    })
}

impl OrbitTrace {
    /// `step,value,symbol` rows; `L` for the piece left of `τ`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "step,value,symbol")?;
        for (i, (v, s)) in self.values.iter().zip(&self.symbols).enumerate() {
            let c = if *s == Side1D::Left { 'L' } else { 'R' };
            writeln!(w, "{i},{v:.17e},{c}")?;
        }
        Ok(())
    }

    pub fn left_frequency(&self) -> f64 {
        self.symbols.iter().filter(|s| **s == Side1D::Left).count() as f64 / self.symbols.len() as f64
    }
}

/// Gap statistics resolve distances down to `2^-GAP_BITS`. For `α = 1/2`
/// nearest-neighbour gaps shrink like `2^{-0.4n}`, so `f64` values stop
/// separating orbit points after ~50 steps.
pub const GAP_BITS: u32 = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CantorProbeReport {
    pub start_side: Side1D,
    pub tau: f64,
    pub orbit_len: usize,
    pub min_val: f64,
    pub max_val: f64,
    /// Over orbit points after the first; may underflow to zero.
    pub min_dist_to_tau: f64,
    pub min_dist_to_tau_log2: f64,
    /// Largest distance from an orbit point to its nearest distinct orbit
    /// point, as `log₂`. Clamped below at `-GAP_BITS`: a value there is an
    /// upper bound.
    pub nn_gap_max_log2: f64,
    pub nn_gap_median_log2: f64,
    /// `2^nn_gap_max_log2`; underflows for long exact orbits.
    pub nn_gap_max: f64,
    /// Distinct points at resolution `2^-GAP_BITS`.
    pub distinct_values: usize,
    /// Fraction of orbit points left of `τ`.
    pub left_frequency: f64,
    /// `min < τ < max` with everything in `[0, 1]`.
    pub ordered: bool,
}

/// `log₂` of each point's distance to its nearest distinct neighbour, with
/// keys equal at resolution counted as `-GAP_BITS`; and the distinct count.
fn nn_gaps_log2(keys: &[BigInt]) -> (Vec<f64>, usize) {
    let floor = -(GAP_BITS as f64);
    let mut s: Vec<&BigInt> = keys.iter().collect();
    s.sort();
    let mut runs: Vec<(&BigInt, usize)> = vec![];
    for k in s {
        match runs.last_mut() {
            Some((last, n)) if *last == k => *n += 1,
            _ => runs.push((k, 1)),
        }
    }
    let gap = |a: &BigInt, b: &BigInt| {
        let d = (b - a).abs();
        Dyadic::new(d, -(GAP_BITS as i64)).log2_abs().max(floor)
    };
    let mut out = Vec::with_capacity(keys.len());
    for (i, (k, n)) in runs.iter().enumerate() {
        let left = (i > 0).then(|| gap(runs[i - 1].0, k));
        let right = (i + 1 < runs.len()).then(|| gap(k, runs[i + 1].0));
        let g = match (left, right) {
            _ if *n > 1 => floor,
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => continue,
        };
        out.extend(std::iter::repeat_n(g, *n));
    }
    (out, runs.len())
}

impl CantorProbeReport {
    pub fn from_trace(t: &OrbitTrace, start: Side1D) -> Self {
        let (mut gaps, distinct) = nn_gaps_log2(&t.keys);
        gaps.sort_by(f64::total_cmp);
        let nn_gap_max_log2 = gaps.last().copied().unwrap_or(f64::NEG_INFINITY);
        let nn_gap_median_log2 = gaps.get(gaps.len() / 2).copied().unwrap_or(f64::NEG_INFINITY);
        Self {
            start_side: start,
            tau: t.tau,
            orbit_len: t.values.len(),
            min_val: t.values[t.min_index],
            max_val: t.values[t.max_index],
            min_dist_to_tau: t.min_dist_to_tau_log2.exp2(),
            min_dist_to_tau_log2: t.min_dist_to_tau_log2,
            nn_gap_max_log2,
            nn_gap_median_log2,
            nn_gap_max: nn_gap_max_log2.exp2(),
            distinct_values: distinct,
            left_frequency: t.left_frequency(),
            ordered: t.ordered,
        }
    }
}

pub fn cantor_probe<T: Scalar>(h: &Map1D<T>, steps: usize, start: Side1D) -> Result<CantorProbeReport, CantorError> {
    Ok(CantorProbeReport::from_trace(&trace_orbit(h, steps, start)?, start))
}

/// Minimum separation kept by [`choose_xe`] from `min K` and `τ`.
pub const XE_GUARD: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XeChoice {
    /// Index in the left-started orbit sample.
    pub step: usize,
    pub value: f64,
}

/// An orbit point `x_e` with `τ < x_e < max K` whose next `guard_horizon`
/// images stay at least [`XE_GUARD`] from both `min K` and `τ` (orbit sample
/// of length `orbit_len`, started left).
///
/// Returns of the orbit to `τ` get geometrically closer, so for long horizons
/// there may be no candidate at all.
pub fn choose_xe<T: Scalar>(h: &Map1D<T>, orbit_len: usize, guard_horizon: usize) -> Result<XeChoice, CantorError> {
    let t = trace_orbit(h, orbit_len + guard_horizon, Side1D::Left)?;
    let sample = &t.values[..orbit_len];
    let xs = sample.iter().copied().fold(f64::INFINITY, f64::min);
    let xmax = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut searched = 0;
    for (n, &xe) in sample.iter().enumerate() {
        if t.symbols[n] != Side1D::Right || xe >= xmax {
            continue;
        }
        searched += 1;
        let clear = t.values[n + 1..=n + guard_horizon]
            .iter()
            .all(|x| (x - xs).abs() >= XE_GUARD && (x - t.tau).abs() >= XE_GUARD);
        if clear {
            return Ok(XeChoice { step: n, value: xe });
        }
    }
    Err(CantorError::NoCandidateFound { searched })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> f64 {
        (5f64.sqrt() - 1.0) / 2.0
    }

    /// `⌊m·ν⌋` for `ν = (√5 − 1)/2` in integer arithmetic:
    /// `m·ν = (√(5m²) − m)/2`, and `√(5m²)` is irrational for `m > 0`.
    fn golden_floor(m: u64) -> u64 {
        let n = 5 * m as u128 * m as u128;
        let mut r = (n as f64).sqrt() as u128;
        while r * r > n {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= n {
            r += 1;
        }
        ((r as u64) - m) / 2
    }

    fn brute_force(alpha: f64, terms: usize) -> f64 {
        let mut sum = 0.0;
        let mut pow = 1.0;
        for k in 0..terms {
            sum += pow * golden_floor(k as u64 + 1) as f64;
            pow *= alpha;
        }
        1.0 - (1.0 - alpha).powi(2) / alpha * sum
    }

    #[test]
    fn golden_threshold_matches_long_sum() {
        let (tau, k, tail) = threshold_t(0.5, golden(), 1e-12).unwrap();
        assert!(tail < 1e-12);
        assert!(k > 0 && tail_bound(0.5, golden(), k - 1) >= 1e-12);
        let oracle = brute_force(0.5, 10_000);
        assert!((tau - oracle).abs() <= 1e-12, "{tau} vs {oracle}");
        assert!(tau > 0.0 && tau < 1.0);
    }

    #[test]
    fn exact_threshold_agrees_with_float() {
        let (exact, tail_log2) = threshold_exact(0.5, golden(), 200).unwrap();
        assert!(tail_log2 < -180.0);
        assert!((exact.to_f64() - brute_force(0.5, 10_000)).abs() <= 1e-15);
        let (e3, _) = threshold_exact(0.3, golden(), 200).unwrap();
        assert!((e3.to_f64() - brute_force(0.3, 10_000)).abs() <= 1e-14);
    }

    #[test]
    fn exact_floor_matches_integer_oracle() {
        // the f64 golden ratio agrees with the true one on these floors
        for m in (1..200_000u64).step_by(7) {
            assert_eq!(floor_mul(golden(), m) as u64, golden_floor(m), "{m}");
        }
        assert_eq!(floor_mul(0.5, 3), 1);
        assert_eq!(floor_mul(5e-324, 1 << 40), 0);
    }

    #[test]
    fn tail_bound_dominates_the_omitted_terms() {
        for (alpha, k) in [(0.5, 5usize), (0.3, 10), (0.9, 40)] {
            let nu = golden();
            let mut omitted = 0.0;
            for j in k..5000 {
                omitted += alpha.powi(j as i32) * golden_floor(j as u64 + 1) as f64;
            }
            let scaled = (1.0 - alpha).powi(2) / alpha * omitted;
            assert!(scaled <= tail_bound(alpha, nu, k) * (1.0 + 1e-12));
            assert!((tail_bound_log2(alpha, nu, k) - tail_bound(alpha, nu, k).log2()).abs() < 1e-9);
        }
    }

    #[test]
    fn tiny_nu_gives_threshold_near_one() {
        let nu = 1e-9;
        let (tau, _, _) = threshold_t(0.5, nu, 1e-12).unwrap();
        // τ ≥ 1 − ν/α from ⌊ν(k+1)⌋ ≤ ν(k+1)
        assert!(tau >= 1.0 - nu / 0.5 - 1e-12 && tau <= 1.0);
    }

    #[test]
    fn loose_tolerance_truncates_early() {
        let (tau, k, tail) = threshold_t(0.5, golden(), 10.0).unwrap();
        assert_eq!(k, 0);
        assert!(tail < 10.0);
        assert_eq!(tau, 1.0);
    }

    #[test]
    fn tolerances_agree() {
        let (a, _, _) = threshold_t(0.5, golden(), 1e-10).unwrap();
        let (b, _, _) = threshold_t(0.5, golden(), 1e-12).unwrap();
        assert!((a - b).abs() <= 2e-10);
    }

    #[test]
    fn invalid_params() {
        assert!(threshold_t(1.5, golden(), 1e-12).is_err());
        assert!(threshold_t(0.5, 0.0, 1e-12).is_err());
        assert!(threshold_t(0.5, golden(), 0.0).is_err());
        assert!(threshold_exact(0.5, 1.0, 10).is_err());
    }

    #[test]
    fn h_endpoints() {
        let h = build_h(0.5, golden(), 1e-12).unwrap();
        assert_eq!(h.apply(&0.0).unwrap(), 0.5);
        assert_eq!(h.apply(&1.0).unwrap(), 0.5);
        assert_eq!(h.contraction(), 0.5);
        let h32 = build_h(0.5f32, golden() as f32, 1e-6).unwrap();
        assert!((h32.tau as f64 - h.tau).abs() < 1e-5);
    }

    #[test]
    fn float_orbit_collapses_onto_a_cycle() {
        // why the probes run exactly: in f64 the α = 1/2 orbit is eventually periodic
        let h = build_h(0.5, golden(), 1e-12).unwrap();
        let rep = cantor_probe(&h, 10_000, Side1D::Left).unwrap();
        assert!(rep.distinct_values < 200, "{}", rep.distinct_values);
        let ex = build_h_exact(0.5, golden(), 10_000).unwrap();
        let exact = cantor_probe(&ex.h, 10_000, Side1D::Left).unwrap();
        // Sturmian words have n + 1 factors of length n, hence ~GAP_BITS + 1 clusters
        assert!(exact.distinct_values > 1000, "{}", exact.distinct_values);
    }

    #[test]
    fn exact_probe_orders_and_densifies() {
        let ex = build_h_exact(0.5, golden(), 20_000).unwrap();
        let long = cantor_probe(&ex.h, 20_000, Side1D::Left).unwrap();
        let short = cantor_probe(&ex.h, 1_000, Side1D::Left).unwrap();
        assert!(long.ordered);
        assert!(long.min_val >= 0.0 && long.max_val <= 1.0);
        assert!(long.min_dist_to_tau_log2.is_finite());
        assert!(ex.certifies(&long), "{} vs {}", long.min_dist_to_tau_log2, ex.tail_bound_log2);
        assert!(long.nn_gap_max_log2 < short.nn_gap_max_log2, "{} vs {}", long.nn_gap_max_log2, short.nn_gap_max_log2);
        assert!(short.nn_gap_max_log2 > -(GAP_BITS as f64));
    }

    #[test]
    fn gap_oracle_on_known_keys() {
        // points 0, 1/4, 1/4, 1: gaps 1/4, 0 (clamped), 0, 3/4
        let k = |v: f64| Dyadic::from_f64(v).unwrap().floor_scaled(GAP_BITS).unwrap();
        let (g, distinct) = nn_gaps_log2(&[k(1.0), k(0.25), k(0.0), k(0.25)]);
        assert_eq!(distinct, 3);
        let floor = -(GAP_BITS as f64);
        assert_eq!(&g[..3], &[-2.0, floor, floor]);
        assert!((g[3] - 0.75f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn exact_left_frequency_settles() {
        let ex = build_h_exact(0.5, golden(), 20_000).unwrap();
        let t = trace_orbit(&ex.h, 20_000, Side1D::Left).unwrap();
        let half = t.symbols[..10_000].iter().filter(|s| **s == Side1D::Left).count() as f64 / 10_000.0;
        assert!((half - t.left_frequency()).abs() < 1e-2);
        let f = t.left_frequency();
        assert!((f - golden()).abs() < 1e-2 || (f - (1.0 - golden())).abs() < 1e-2, "{f}");
    }

    #[test]
    fn one_sided_orbits_shadow() {
        let ex = build_h_exact(0.5, golden(), 20_000).unwrap();
        let a = trace_orbit(&ex.h, 20_000, Side1D::Left).unwrap();
        let b = trace_orbit(&ex.h, 20_000, Side1D::Right).unwrap();
        let disagree = a.symbols[1..].iter().zip(&b.symbols[1..]).filter(|(x, y)| x != y).count();
        assert!((disagree as f64) < 1e-2 * 20_000.0, "{disagree}");
        assert!(a.values.iter().chain(&b.values).all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn xe_selection() {
        let ex = build_h_exact(0.5, golden(), 2_000).unwrap();
        let xe = choose_xe(&ex.h, 1_000, 10).unwrap();
        assert!(xe.value > ex.h.tau.to_f64());
        let t = trace_orbit(&ex.h, 1_000, Side1D::Left).unwrap();
        let first = t.symbols.iter().position(|s| *s == Side1D::Right).unwrap();
        let xe0 = choose_xe(&ex.h, 1_000, 0).unwrap();
        // the first point above τ is skipped only if it is the sample maximum
        assert!(xe0.step == first || first == t.max_index);
        assert!(matches!(choose_xe(&ex.h, 10, 1_000), Err(CantorError::NoCandidateFound { .. })));
    }

    #[test]
    fn csv_dump() {
        let ex = build_h_exact(0.5, golden(), 10).unwrap();
        let t = trace_orbit(&ex.h, 3, Side1D::Left).unwrap();
        let mut buf = vec![];
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().count(), 4);
        assert!(s.lines().nth(1).unwrap().starts_with("0,"));
    }

    #[test]
    fn golden_floor_oracle_sane() {
        for m in 1..2000u64 {
            assert_eq!(golden_floor(m), (m as f64 * golden()).floor() as u64);
        }
    }
}
