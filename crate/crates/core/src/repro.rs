//! The reproduction suite: one deterministic check per headline property of
//! the gallery. Shared by the `repro` command and the acceptance tests.
//!
//! Orbits of maps with algebraic boundaries are run in exact dyadic
//! arithmetic with zero tolerance (their attractors touch the discontinuity
//! set, where float orbits are flagged within a few dozen steps); the
//! appendix map is run in floats.

use crate::atoms::{
    atom_for_word, certify_periodicity, format_word, generate_atoms, separation_test,
    AtomConfig, AtomTower, DisconnectionReport, SeparationOutcome,
};
use crate::cantor::{build_h_exact, cantor_probe, threshold_exact, threshold_t};
use crate::gallery::{build_example, Params, NAMES};
use crate::geometry::{Grid, Point2};
use crate::map_model::{Side1D, PwcMap2, DEFAULT_TOL};
use crate::orbit::{
    containment_check, limit_set_estimate_best, nonwandering_probe, omega_estimate, sample_box, sample_surviving,
    simulate, OrbitParams, ProbeVerdict,
};
use crate::scalar::{Dyadic, Scalar};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Seed for every sampler in the suite.
pub const SEED: u64 = 20_110_207;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn planar(name: &str) -> PwcMap2<f64> {
    build_example(name, &Params::new())
        .expect("gallery example")
        .planar()
        .expect("planar example")
        .clone()
}

fn exact(m: &PwcMap2<f64>) -> PwcMap2<Dyadic> {
    m.convert().expect("dyadic coefficients")
}

fn grid(m: &PwcMap2<f64>, nx: u32, ny: u32) -> Grid {
    Grid::new(m.domain_f64().clone(), nx, ny).expect("valid grid")
}

fn near_any(p: &Point2<f64>, targets: &[Point2<f64>], tol: f64) -> bool {
    targets.iter().any(|t| p.dist(t) < tol)
}

/// Collects sub-claims; a check passes when all of them do.
struct Parts(Vec<(String, bool)>);

impl Parts {
    fn new() -> Self {
        Self(vec![])
    }

    fn add(&mut self, what: impl Into<String>, ok: bool) {
        self.0.push((what.into(), ok));
    }

    fn finish(self, id: u32, name: &str) -> CheckResult {
        let passed = self.0.iter().all(|(_, ok)| *ok);
        let detail = self
            .0
            .iter()
            .map(|(w, ok)| format!("[{}] {w}", if *ok { "ok" } else { "FAIL" }))
            .collect::<Vec<_>>()
            .join("; ");
        CheckResult { id, name: name.into(), passed, detail }
    }
}

/// `x` with `f^k(x) = 1/2` for the increasing affine branch `f`, by bisection.
fn preimage_of_half(f: impl Fn(f64) -> f64, k: usize, mut lo: f64, mut hi: f64) -> f64 {
    let fk = |mut x: f64| {
        for _ in 0..k {
            x = f(x);
        }
        x
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fk(mid) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The suite, with the expensive tower shared by checks 3 and 4.
#[derive(Default)]
pub struct Repro {
    countable_b: OnceLock<(Grid, AtomTower)>,
}

impl Repro {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn run_all(&self) -> Vec<CheckResult> {
        (1..=9).map(|id| self.run(id).expect("known id")).collect()
    }

    pub fn run(&self, id: u32) -> Option<CheckResult> {
        Some(match id {
            1 => self.finite_attractor(),
            2 => self.countable_a_limit_set(),
            3 => self.countable_b_attractor_exceeds_limit_set(),
            4 => self.countable_b_language(),
            5 => self.nonwandering(),
            6 => self.separation(),
            7 => self.appendix_atom(),
            8 => self.cantor(),
            9 => self.invariants(),
            _ => return None,
        })
    }

    fn countable_b_tower(&self) -> &(Grid, AtomTower) {
        self.countable_b.get_or_init(|| {
            let m = planar("example_countable_B");
            let g = grid(&m, 1024, 1024);
            let t = generate_atoms(&m, &g, &AtomConfig::new(12)).expect("tower");
            (g, t)
        })
    }

    fn finite_attractor(&self) -> CheckResult {
        let mut parts = Parts::new();
        let m = planar("example_finite");
        let (x1, x2, l1, l2) = (0.25, 0.75, 0.5, 0.5);
        let a1 = preimage_of_half(|x| l1 * x + (1.0 - l1) * x1, 1, 0.5, 1.0);
        let b1 = preimage_of_half(|x| l2 * x + (1.0 - l2) * x2, 1, 0.0, 0.5);
        // in time order: 1/2 → a₁ → 1/2 → b₁ → 1/2
        let cycle = [0.5, a1, 0.5, b1];
        let e = exact(&m);
        let seeds = sample_surviving(&e, 500, 300, 0.0, SEED);
        parts.add(format!("{} surviving seeds", seeds.len()), seeds.len() == 500);
        let (burn, horizon) = (200, 100);
        let mut worst = 0f64;
        let mut locked = 0;
        for s in &seeds {
            let rec = simulate(&e, &Point2::<Dyadic>::from_f64(s).expect("dyadic"), burn + horizon, 0.0)
                .expect("in domain");
            let post = &rec.points[burn..];
            // 1/2 appears twice per period, so the phase is fitted over the whole window
            let dev = (0..4)
                .map(|phase| {
                    post.iter()
                        .enumerate()
                        .map(|(k, p)| (p.x - cycle[(phase + k) % 4]).abs().max(p.y.abs()))
                        .fold(0.0, f64::max)
                })
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(dev);
            locked += (dev < 1e-6) as usize;
        }
        parts.add(
            format!("a1 = {a1:.12}, b1 = {b1:.12}; {locked}/{} orbits shadow the 4-cycle, max deviation {worst:.3e}", seeds.len()),
            locked == seeds.len(),
        );
        let p = OrbitParams { burn_in: burn, horizon, cluster_eps: 1e-7, tol: 0.0 };
        let est = limit_set_estimate_best(&m, &seeds, &p).expect("estimate");
        let targets = [Point2::new(b1, 0.0), Point2::new(0.5, 0.0), Point2::new(a1, 0.0)];
        let centers = est.centers();
        let ok = centers.len() == 3
            && centers.iter().all(|c| near_any(c, &targets, 1e-6))
            && targets.iter().all(|t| near_any(t, &centers, 1e-6));
        parts.add(format!("limit set estimate has {} clusters, {} seeds skipped", centers.len(), est.seeds_skipped), ok);
        parts.finish(1, "finite_attractor_period_four")
    }

    fn countable_a_limit_set(&self) -> CheckResult {
        let mut parts = Parts::new();
        let e = exact(&planar("example_countable_A"));
        let x0 = Point2::<Dyadic>::from_f64(&Point2::new(0.3, 0.2)).expect("dyadic");
        match omega_estimate(&e, &x0, 1000, 10_000, 1e-7, 0.0) {
            Ok(est) => {
                let c = est.centers();
                let missing: Vec<i32> =
                    (0..=10).filter(|&k| !near_any(&Point2::new(0.5f64.powi(k), 0.0), &c, 1e-6)).collect();
                parts.add(format!("{} clusters; powers 2^-k, k = 0..10, missing: {missing:?}", c.len()), missing.is_empty());
                let family: Vec<Point2<f64>> = (0..1100)
                    .map(|k| Point2::new(0.5f64.powi(k), 0.0))
                    .chain(std::iter::once(Point2::new(0.0, 0.0)))
                    .collect();
                let stray = c.iter().filter(|p| !near_any(p, &family, 1e-6)).count();
                parts.add(format!("{stray} clusters away from the family"), stray == 0);
            }
            Err(err) => parts.add(format!("orbit failed: {err}"), false),
        }
        parts.finish(2, "countable_limit_set_equals_attractor")
    }

    fn countable_b_attractor_exceeds_limit_set(&self) -> CheckResult {
        let mut parts = Parts::new();
        let (g, t) = self.countable_b_tower();
        let cover = t.level(12).expect("generation 12");
        let pts: Vec<Point2<f64>> = (0..=8).map(|k| Point2::new(0.0, 1.0 - 0.5f64.powi(k))).collect();
        let rep = containment_check(&pts, cover, g, 1);
        parts.add(
            format!("points (0, 1 - 2^-k), k = 0..8, outside the generation-12 cover: {}", rep.outside.len()),
            rep.passed,
        );
        let m = planar("example_countable_B");
        let seeds = sample_box(m.domain_f64(), 100, SEED);
        let p = OrbitParams { burn_in: 1000, horizon: 1000, cluster_eps: 1e-4, tol: 0.0 };
        let est = limit_set_estimate_best(&m, &seeds, &p).expect("estimate");
        let near_mid = est.centers().iter().filter(|c| c.dist(&Point2::new(0.0, 0.5)) < 0.1).count();
        parts.add(
            format!("{} clusters from {} seeds, {near_mid} within 0.1 of (0, 0.5)", est.clusters.len(), est.seeds_used),
            near_mid == 0 && est.seeds_used == 100,
        );
        parts.finish(3, "attractor_strictly_contains_limit_set")
    }

    fn countable_b_language(&self) -> CheckResult {
        let mut parts = Parts::new();
        let (_, t) = self.countable_b_tower();
        let words = t.level(6).expect("generation 6").words();
        let expected: Vec<Vec<u8>> =
            (0..=6).map(|j| std::iter::repeat_n(1, j).chain(std::iter::repeat_n(2, 6 - j)).collect()).collect();
        let mut sorted = expected.clone();
        sorted.sort();
        parts.add(
            format!("generation-6 words: {}", words.iter().map(|w| format_word(w)).collect::<Vec<_>>().join(" ")),
            words == sorted,
        );
        let rep = DisconnectionReport::from_tower(t);
        let l12 = &rep.levels[11];
        parts.add(
            format!("generation 12: {} words, product {:e}", l12.words, l12.product),
            l12.words == 13 && l12.product == 13.0 / 4096.0,
        );
        parts.finish(4, "admissible_language_linear_growth")
    }

    fn nonwandering(&self) -> CheckResult {
        let mut parts = Parts::new();
        let c = Point2::new(0.0, 0.5);
        let probe = nonwandering_probe(&planar("example_three_piece"), &c, 0.05, 1000, 10_000, DEFAULT_TOL, SEED)
            .expect("probe");
        parts.add(
            format!("three-piece map: {:?} ({} sampled orbits stopped at the boundary)", probe.verdict, probe.seeds_terminated),
            matches!(probe.verdict, ProbeVerdict::ReturnObserved { .. }),
        );
        let probe = nonwandering_probe(&planar("example_countable_B"), &c, 0.05, 1000, 10_000, DEFAULT_TOL, SEED)
            .expect("probe");
        parts.add(format!("countable map: {:?}", probe.verdict), probe.verdict == ProbeVerdict::NoReturnObserved);
        parts.finish(5, "non_wandering_probes")
    }

    fn separation(&self) -> CheckResult {
        let mut parts = Parts::new();
        let m = planar("two_piece_demo");
        let g = grid(&m, 256, 256);
        let t = generate_atoms(&m, &g, &AtomConfig::new(6)).expect("tower");
        match separation_test(&t, &m, 6).expect("level 6 present") {
            SeparationOutcome::Certified(cert) => {
                parts.add(format!("delta = {:.6}", cert.delta), cert.delta >= 0.3);
                match certify_periodicity(&cert, &t, &m, 1e-12) {
                    Ok(rep) => {
                        let targets = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)];
                        let pts: Vec<Point2<f64>> = rep.orbits.iter().flat_map(|o| o.points.clone()).collect();
                        let ok = rep.orbits.len() == 2
                            && rep.orbits.iter().all(|o| o.period == 1)
                            && targets.iter().all(|t| near_any(t, &pts, 1e-10));
                        parts.add(format!("{} periodic orbits, periods {:?}", rep.orbits.len(), rep.orbits.iter().map(|o| o.period).collect::<Vec<_>>()), ok);
                    }
                    Err(e) => parts.add(format!("periodicity: {e}"), false),
                }
            }
            SeparationOutcome::NotSeparatedAtThisResolution { word, reason, .. } => {
                parts.add(format!("not separated at word {}: {reason}", format_word(&word)), false)
            }
        }
        parts.finish(6, "separation_certificate")
    }

    fn appendix_atom(&self) -> CheckResult {
        let mut parts = Parts::new();
        let m = planar("appendix_map");
        let mut counts = vec![];
        for ny_log in [8, 12, 15] {
            let g = grid(&m, 256, 1 << ny_log);
            let a = atom_for_word(&m, &g, &[1, 2], &AtomConfig::new(2)).expect("atom");
            counts.push(a.cells.component_count());
        }
        parts.add(format!("components at y-resolution 2^8: {}", counts[0]), counts[0] >= 2);
        parts.add(format!("components at y-resolution 2^15: {}", counts[2]), counts[2] >= 3);
        parts.add(format!("counts at 2^8, 2^12, 2^15: {counts:?}"), counts.windows(2).all(|w| w[0] <= w[1]));
        let seeds = sample_box(m.domain_f64(), 100, SEED);
        let p = OrbitParams { burn_in: 100, horizon: 100, cluster_eps: 1e-7, tol: 0.0 };
        let est = limit_set_estimate_best(&m, &seeds, &p).expect("estimate");
        let targets = [Point2::new(-0.5, 0.0), Point2::new(0.0, 0.0)];
        let c = est.centers();
        parts.add(
            format!("{} clusters from {} seeds ({} skipped)", c.len(), est.seeds_used, est.seeds_skipped),
            !c.is_empty() && c.iter().all(|p| near_any(p, &targets, 1e-6)) && targets.iter().all(|t| near_any(t, &c, 1e-6)),
        );
        parts.finish(7, "appendix_multi_component_atom")
    }

    fn cantor(&self) -> CheckResult {
        let mut parts = Parts::new();
        let (alpha, nu) = (0.5, (5f64.sqrt() - 1.0) / 2.0);
        let (tau, k_terms, _) = threshold_t(alpha, nu, 1e-12).expect("threshold");
        let brute = 1.0
            - (1.0 - alpha) * (1.0 - alpha) / alpha
                * (0..10_000).map(|k| alpha.powi(k) * (nu * (k + 1) as f64).floor()).sum::<f64>();
        parts.add(format!("T = {tau:.15} ({k_terms} terms), brute force {brute:.15}"), (tau - brute).abs() <= 1e-12);
        let (exact_tau, _) = threshold_exact(alpha, nu, 10_000).expect("threshold");
        parts.add("exact partial sum agrees", (exact_tau.to_f64() - tau).abs() <= 1e-12);
        let mut gaps = vec![];
        for steps in [1_000, 100_000] {
            let h = build_h_exact(alpha, nu, steps).expect("map");
            let r = cantor_probe(&h.h, steps, Side1D::Left).expect("orbit");
            parts.add(
                format!(
                    "{steps} steps: min {:.6} < tau < max {:.6}, certified {}",
                    r.min_val,
                    r.max_val,
                    h.certifies(&r)
                ),
                r.ordered && r.min_val >= 0.0 && r.max_val <= 1.0 && h.certifies(&r),
            );
            gaps.push(r.nn_gap_max_log2);
        }
        parts.add(format!("log2 max nearest-neighbour gap: {:.1} then {:.1}", gaps[0], gaps[1]), gaps[1] < gaps[0]);
        parts.finish(8, "cantor_threshold_orbit")
    }

    fn invariants(&self) -> CheckResult {
        let mut parts = Parts::new();
        for name in NAMES {
            let Some(m) = build_example(name, &Params::new()).expect("gallery").planar().cloned() else { continue };
            let r = invariant_report(&m);
            parts.add(format!("{name}: {r}"), r.passed());
        }
        parts.finish(9, "global_invariants")
    }
}

/// Generation depth and grid of the invariant suite.
const INV_GENS: usize = 10;
const INV_RES: u32 = 256;

struct InvariantReport {
    nested: bool,
    /// Smallest `bound − diameter` over all atoms of all generations.
    diameter_slack: f64,
    unsound: usize,
    seeds: usize,
    outside: usize,
    clusters: usize,
}

impl InvariantReport {
    fn passed(&self) -> bool {
        self.nested && self.diameter_slack >= 0.0 && self.unsound == 0 && self.seeds == 1000 && self.outside == 0
    }
}

impl std::fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "nested {}, diameter slack {:.3e}, {} misses over {} seeds x {INV_GENS} steps, {}/{} clusters outside cover+1",
            self.nested, self.diameter_slack, self.unsound, self.seeds, self.outside, self.clusters
        )
    }
}

fn invariant_report(m: &PwcMap2<f64>) -> InvariantReport {
    let g = grid(m, INV_RES, INV_RES);
    let t = generate_atoms(m, &g, &AtomConfig::new(INV_GENS)).expect("tower");
    let nested = t.levels.windows(2).all(|w| w[1].union.is_subset(&w[0].union));
    let lam = m.lambda();
    let diam = m.domain_f64().diameter();
    let h = g.cell_diagonal();
    let mut slack = f64::INFINITY;
    for level in &t.levels {
        let bound = lam.powi(level.generation as i32) * diam + h / (1.0 - lam);
        for a in &level.atoms {
            slack = slack.min(bound - a.cells.diameter(&g));
        }
    }
    let (unsound, seeds) = match m.convert::<Dyadic>().filter(|_| m.is_algebraic()) {
        Some(e) => soundness(&e, &t, &g, 0.0),
        None => soundness(m, &t, &g, DEFAULT_TOL),
    };
    let p = OrbitParams { burn_in: 200, horizon: 200, cluster_eps: 1e-6, tol: 0.0 };
    let est = limit_set_estimate_best(m, &sample_box(m.domain_f64(), 100, SEED), &p).expect("estimate");
    let rep = containment_check(&est.centers(), t.last(), &g, 1);
    InvariantReport { nested, diameter_slack: slack, unsound, seeds, outside: rep.outside.len(), clusters: rep.checked }
}

/// `f^n(seed)` must lie in the cover of its own itinerary, for `n ≤ INV_GENS`.
fn soundness<T: Scalar>(m: &PwcMap2<T>, t: &AtomTower, g: &Grid, tol: f64) -> (usize, usize) {
    let seeds = sample_surviving(m, 1000, INV_GENS, tol, SEED);
    let mut bad = 0;
    for s in &seeds {
        let x0 = Point2::<T>::from_f64(s).expect("representable");
        let rec = simulate(m, &x0, INV_GENS, tol).expect("in domain");
        for n in 1..=INV_GENS {
            let word = &rec.symbols[..n].iter().map(|&l| l as u8).collect::<Vec<u8>>();
            let inside = g
                .cell_of(&rec.points[n])
                .zip(t.level(n).and_then(|l| l.cover(word)))
                .is_some_and(|(c, a)| a.cells.contains(c));
            bad += !inside as usize;
        }
    }
    (bad, seeds.len())
}
