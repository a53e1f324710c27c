use crate::config::{Arith, RunConfig};
use crate::CliError;
use pwcmap::atoms::{
    atom_component_counts, atom_for_word, certify_periodicity, format_word, generate_atoms, separation_test,
    AtomConfig, AtomTower, DisconnectionReport, SeparationOutcome,
};
use pwcmap::cantor::{build_h, build_h_exact, cantor_probe, trace_orbit, CantorProbeReport};
use pwcmap::gallery::{build_example, ExampleMap, NAMES};
use pwcmap::geometry::{CellSet, Grid, Point2};
use pwcmap::map_model::{MapFile, PwcMap2, Side1D};
use pwcmap::orbit::{
    limit_set_estimate, nonwandering_probe, omega_estimate, sample_box, simulate, OrbitParams,
};
use pwcmap::render::{pgm_layers, svg_figure, SvgStyle};
use pwcmap::repro::{CheckResult, Repro};
use pwcmap::scalar::{Dyadic, Scalar};
use serde::Serialize;
use serde_json::{json, Value};
use std::fs;
use std::path::Path;

/// Every JSON report is wrapped in this envelope.
#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    report: R,
}

pub struct Ctx {
    pub cfg: RunConfig,
}

/// What a command produced: `Ok(true)` for success, `Ok(false)` for a failed check.
pub type Outcome = Result<bool, CliError>;

impl Ctx {
    fn out_dir(&self) -> Result<&Path, CliError> {
        fs::create_dir_all(&self.cfg.out).map_err(|e| CliError::io(&self.cfg.out, e))?;
        Ok(&self.cfg.out)
    }

    fn write_bytes(&self, rel: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.out_dir()?.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        println!("wrote {}", path.display());
        Ok(())
    }

    fn write_report<R: Serialize>(&self, command: &str, file: &str, report: R) -> Result<(), CliError> {
        let env = Envelope { tool: "pwc", version: env!("CARGO_PKG_VERSION"), command, config: &self.cfg, report };
        let mut s = serde_json::to_string_pretty(&env).expect("reports serialize");
        s.push('\n');
        self.write_bytes(file, s.as_bytes())
    }

    fn example_map(&self) -> Result<ExampleMap, CliError> {
        let name = self.cfg.map_name()?;
        if NAMES.contains(&name) {
            let ex = build_example(name, &self.cfg.params).map_err(|e| CliError::Usage(format!("--param: {e}")))?;
            return Ok(ex.map);
        }
        if !self.cfg.params.is_empty() {
            return Err(CliError::Usage("--param only applies to gallery maps".into()));
        }
        let path = Path::new(name);
        if !path.exists() {
            return Err(CliError::Usage(format!("--map: `{name}` is neither a gallery name nor a file")));
        }
        MapFile::load(path)
            .map(ExampleMap::Planar)
            .map_err(|e| CliError::Usage(format!("--map: {e}")))
    }

    fn planar(&self) -> Result<PwcMap2<f64>, CliError> {
        match self.example_map()? {
            ExampleMap::Planar(m) => Ok(m),
            ExampleMap::Interval(_) => {
                Err(CliError::Usage("--map: interval map; use the `cantor` command".into()))
            }
        }
    }

    fn grid(&self, m: &PwcMap2<f64>) -> Result<Grid, CliError> {
        Grid::new(m.domain_f64().clone(), self.cfg.grid[0], self.cfg.grid[1])
            .map_err(|e| CliError::Usage(format!("--grid: {e}")))
    }

    fn tower(&self, m: &PwcMap2<f64>, g: &Grid) -> Result<AtomTower, CliError> {
        generate_atoms(m, g, &AtomConfig::new(self.cfg.gens)).map_err(|e| CliError::Failed(e.to_string()))
    }

    /// Exact map and tolerance 0, or the float map and `--tol`.
    fn exact_or_none(&self, m: &PwcMap2<f64>) -> Result<Option<PwcMap2<Dyadic>>, CliError> {
        let exact = || m.convert::<Dyadic>().filter(|_| m.is_algebraic());
        match self.cfg.arith {
            Arith::Float => Ok(None),
            Arith::Auto => Ok(exact()),
            Arith::Exact => exact()
                .map(Some)
                .ok_or_else(|| CliError::Usage("--arith exact: map has non-algebraic boundaries".into())),
        }
    }

    fn orbit_tol(&self, exact: bool) -> f64 {
        if exact && self.cfg.arith == Arith::Auto {
            0.0
        } else {
            self.cfg.tol
        }
    }

    pub fn validate(&self, samples: usize) -> Outcome {
        match self.example_map()? {
            ExampleMap::Interval(h) => {
                let rep = json!({ "kind": "interval", "alpha": h.alpha, "tau": h.tau, "contraction": h.contraction() });
                self.write_report("validate", "validate.json", json!({ "ok": true, "detail": rep }))?;
                Ok(true)
            }
            ExampleMap::Planar(m) => match m.validate(samples, self.cfg.tol) {
                Ok(rep) => {
                    self.write_report("validate", "validate.json", json!({ "ok": true, "detail": rep }))?;
                    Ok(true)
                }
                Err(f) => {
                    eprintln!("ValidationFailure({}): {}", f.condition, f.detail);
                    let body = json!({
                        "ok": false,
                        "failure": { "condition": f.condition, "detail": f.detail },
                        "detail": f.report,
                    });
                    self.write_report("validate", "validate.json", body)?;
                    Ok(false)
                }
            },
        }
    }

    pub fn simulate(&self, x0: [f64; 2]) -> Outcome {
        let m = self.planar()?;
        let p = Point2::new(x0[0], x0[1]);
        let rec = match self.exact_or_none(&m)? {
            Some(e) => run_simulate(&e, &p, self.cfg.steps, self.orbit_tol(true))?,
            None => run_simulate(&m, &p, self.cfg.steps, self.cfg.tol)?,
        };
        let mut csv = Vec::new();
        rec.write_csv(&mut csv).map_err(|e| CliError::io(Path::new("orbit.csv"), e))?;
        self.write_bytes("orbit.csv", &csv)?;
        self.write_report("simulate", "orbit.json", &rec)?;
        Ok(true)
    }

    pub fn omega(&self, x0: Option<[f64; 2]>) -> Outcome {
        let m = self.planar()?;
        let exact = self.exact_or_none(&m)?;
        let tol = self.orbit_tol(exact.is_some());
        let c = &self.cfg;
        match x0 {
            Some(x0) => {
                let p = Point2::new(x0[0], x0[1]);
                let est = match &exact {
                    Some(e) => omega_estimate(e, &exact_point(&p)?, c.burn_in, c.steps, c.eps, tol),
                    None => omega_estimate(&m, &p, c.burn_in, c.steps, c.eps, tol),
                };
                match est {
                    Ok(est) => {
                        self.write_report("omega", "omega.json", json!({ "kind": "single", "estimate": est }))?;
                        Ok(true)
                    }
                    Err(e) => Err(CliError::Failed(e.to_string())),
                }
            }
            None => {
                let seeds = sample_box(m.domain_f64(), c.seeds, c.seed);
                let p = OrbitParams { burn_in: c.burn_in, horizon: c.steps, cluster_eps: c.eps, tol };
                let est = match &exact {
                    Some(e) => limit_set_estimate(e, &seeds, &p),
                    None => limit_set_estimate(&m, &seeds, &p),
                }
                .map_err(|e| CliError::Failed(e.to_string()))?;
                if est.seeds_skipped > 0 {
                    eprintln!("warning: {} seeds hit the discontinuity set and were skipped", est.seeds_skipped);
                }
                self.write_report("omega", "omega.json", json!({ "kind": "aggregate", "estimate": est }))?;
                Ok(true)
            }
        }
    }

    pub fn probe(&self, center: [f64; 2]) -> Outcome {
        let m = self.planar()?;
        let c = &self.cfg;
        let p = Point2::new(center[0], center[1]);
        let exact = self.exact_or_none(&m)?;
        let tol = self.orbit_tol(exact.is_some());
        let probe = match &exact {
            Some(e) => nonwandering_probe(e, &p, c.eps, c.seeds, c.steps, tol, c.seed),
            None => nonwandering_probe(&m, &p, c.eps, c.seeds, c.steps, tol, c.seed),
        }
        .map_err(|e| CliError::Usage(format!("probe centre: {e}")))?;
        self.write_report("probe", "probe.json", &probe)?;
        Ok(true)
    }

    pub fn atoms(&self, word: Option<Vec<u8>>) -> Outcome {
        let m = self.planar()?;
        let g = self.grid(&m)?;
        if let Some(w) = word {
            let cfg = AtomConfig::new(w.len());
            let a = atom_for_word(&m, &g, &w, &cfg).map_err(|e| CliError::Usage(format!("--word: {e}")))?;
            let file = format!("atoms/word_{}.cells", file_word(&w));
            self.write_bytes(&file, &cells_text(&a.cells, &g))?;
            let line = json!({
                "generation": w.len(),
                "word": w,
                "cells": a.cells.len(),
                "components": a.cells.component_count(),
                "file": file,
            });
            self.write_bytes("atoms.jsonl", format!("{line}\n").as_bytes())?;
            return Ok(true);
        }
        let t = self.tower(&m, &g)?;
        let mut lines = String::new();
        for level in &t.levels {
            let n = level.generation;
            let union_file = format!("atoms/lambda_g{n:02}.cells");
            self.write_bytes(&union_file, &cells_text(&level.union, &g))?;
            for a in &level.atoms {
                let file = format!("atoms/g{n:02}_{}.cells", file_word(&a.word));
                self.write_bytes(&file, &cells_text(&a.cells, &g))?;
                let line = json!({
                    "generation": n,
                    "word": a.word,
                    "cells": a.cells.len(),
                    "components": a.cells.component_count(),
                    "file": file,
                });
                lines.push_str(&line.to_string());
                lines.push('\n');
            }
        }
        self.write_bytes("atoms.jsonl", lines.as_bytes())?;
        Ok(true)
    }

    pub fn certify(&self) -> Outcome {
        let m = self.planar()?;
        let g = self.grid(&m)?;
        let t = self.tower(&m, &g)?;
        let n0 = self.cfg.gens;
        let outcome = separation_test(&t, &m, n0).map_err(|e| CliError::Failed(e.to_string()))?;
        let (ok, periodicity) = match &outcome {
            SeparationOutcome::Certified(cert) => match certify_periodicity(cert, &t, &m, self.cfg.tol) {
                Ok(rep) => (true, serde_json::to_value(rep).expect("serializes")),
                Err(e) => (false, json!({ "error": e.to_string() })),
            },
            SeparationOutcome::NotSeparatedAtThisResolution { word, reason, .. } => {
                eprintln!("NotSeparatedAtThisResolution at word {}: {reason}", format_word(word));
                (false, Value::Null)
            }
        };
        self.write_report("certify", "certify.json", json!({ "separation": outcome, "periodicity": periodicity }))?;
        Ok(ok)
    }

    pub fn diagnose(&self) -> Outcome {
        let m = self.planar()?;
        let g = self.grid(&m)?;
        let t = self.tower(&m, &g)?;
        let rep = DisconnectionReport::from_tower(&t);
        let components: Vec<Value> = atom_component_counts(t.last())
            .into_iter()
            .map(|(w, c)| json!({ "word": w, "components": c }))
            .collect();
        self.write_report("diagnose", "diagnose.json", json!({ "disconnection": rep, "components": components }))?;
        Ok(true)
    }

    pub fn cantor(&self, float: bool, csv: bool, start: Side1D) -> Outcome {
        let name = self.cfg.map.as_deref().unwrap_or("cantor_interval");
        if name != "cantor_interval" {
            return Err(CliError::Usage("--map: the cantor command only runs cantor_interval".into()));
        }
        let ex = build_example(name, &self.cfg.params).map_err(|e| CliError::Usage(format!("--param: {e}")))?;
        let p = &ex.params;
        let (alpha, nu, tol) = (p["alpha"], p["nu"], p["tol"]);
        let steps = self.cfg.steps;
        let fail = |e: pwcmap::cantor::CantorError| CliError::Failed(e.to_string());
        let (report, certified, terms): (CantorProbeReport, Option<bool>, Option<usize>) = if float {
            let h = build_h(alpha, nu, tol).map_err(fail)?;
            (run_cantor(&h, steps, start, csv.then_some(self))?, None, None)
        } else {
            let h = build_h_exact(alpha, nu, steps).map_err(fail)?;
            let r = run_cantor(&h.h, steps, start, csv.then_some(self))?;
            let ok = h.certifies(&r);
            (r, Some(ok), Some(h.k_terms))
        };
        let body = json!({
            "arithmetic": if float { "float" } else { "exact" },
            "series_terms": terms,
            "itinerary_certified": certified,
            "probe": report,
        });
        self.write_report("cantor", "cantor.json", body)?;
        Ok(report.ordered && certified != Some(false))
    }

    pub fn gallery_list(&self) -> Outcome {
        let mut list = vec![];
        for name in NAMES {
            let ex = build_example(name, &Default::default()).map_err(|e| CliError::Failed(e.to_string()))?;
            println!("{name:22} {}", ex.notes);
            list.push(json!({
                "name": name,
                "kind": match ex.map { ExampleMap::Planar(_) => "planar", ExampleMap::Interval(_) => "interval" },
                "params": ex.params,
                "lambda": ex.lambda,
                "expected": ex.expected,
                "notes": ex.notes,
            }));
        }
        self.write_report("gallery", "gallery.json", list)?;
        Ok(true)
    }

    pub fn gallery_emit(&self, name: &str) -> Outcome {
        let ex = build_example(name, &self.cfg.params).map_err(|e| CliError::Usage(e.to_string()))?;
        match ex.map {
            ExampleMap::Planar(m) => {
                let mut s = MapFile::from_map(&m, Some(name)).to_json();
                s.push('\n');
                self.write_bytes(&format!("{name}.json"), s.as_bytes())?;
                Ok(true)
            }
            ExampleMap::Interval(_) => Err(CliError::Usage(format!("{name} is an interval map and has no map file"))),
        }
    }

    pub fn render(&self, kind: RenderKind, levels: &[usize], word: Option<Vec<u8>>) -> Outcome {
        let m = self.planar()?;
        match kind {
            RenderKind::Covers => {
                let g = self.grid(&m)?;
                let t = self.tower(&m, &g)?;
                let mut sets = vec![];
                for &n in levels {
                    let l = t
                        .level(n)
                        .ok_or_else(|| CliError::Usage(format!("--levels: generation {n} exceeds --gens")))?;
                    sets.push(&l.union);
                }
                self.write_bytes("covers.pgm", &pgm_layers(&g, &sets))?;
            }
            RenderKind::Atom => {
                let g = self.grid(&m)?;
                let w = word.ok_or_else(|| CliError::Usage("--word is required for --kind atom".into()))?;
                let a = atom_for_word(&m, &g, &w, &AtomConfig::new(w.len()))
                    .map_err(|e| CliError::Usage(format!("--word: {e}")))?;
                self.write_bytes(&format!("atom_{}.pgm", file_word(&w)), &pgm_layers(&g, &[&a.cells]))?;
            }
            RenderKind::Figure => {
                let c = &self.cfg;
                let seeds = sample_box(m.domain_f64(), c.seeds, c.seed);
                let exact = self.exact_or_none(&m)?;
                let p = OrbitParams {
                    burn_in: c.burn_in,
                    horizon: c.steps,
                    cluster_eps: c.eps,
                    tol: self.orbit_tol(exact.is_some()),
                };
                let est = match &exact {
                    Some(e) => limit_set_estimate(e, &seeds, &p),
                    None => limit_set_estimate(&m, &seeds, &p),
                }
                .map_err(|e| CliError::Failed(e.to_string()))?;
                let svg = svg_figure(&m, &est.centers(), &SvgStyle::default());
                self.write_bytes("figure.svg", svg.as_bytes())?;
            }
        }
        Ok(true)
    }

    pub fn repro(&self, only: Option<Vec<u32>>) -> Outcome {
        let suite = Repro::new();
        let ids = only.unwrap_or_else(|| (1..=9).collect());
        let mut results: Vec<CheckResult> = vec![];
        for id in ids {
            let r = suite.run(id).ok_or_else(|| CliError::Usage(format!("--only: no check {id}")))?;
            println!("{:>2}  {}  {}", r.id, if r.passed { "PASS" } else { "FAIL" }, r.name);
            results.push(r);
        }
        let all = results.iter().all(|r| r.passed);
        self.write_report("repro", "repro.json", json!({ "seed": pwcmap::repro::SEED, "checks": results }))?;
        Ok(all)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum RenderKind {
    /// PGM of the Λ_n unions named by `--levels`.
    Covers,
    /// PGM of one atom (`--word`).
    Atom,
    /// SVG of the boundary curves and the limit-set estimate.
    Figure,
}

fn file_word(w: &[u8]) -> String {
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("-")
}

fn cells_text(s: &CellSet, g: &Grid) -> Vec<u8> {
    let mut v = Vec::new();
    s.write_text(g, &mut v).expect("writing to memory");
    v
}

fn exact_point(p: &Point2<f64>) -> Result<Point2<Dyadic>, CliError> {
    Point2::from_f64(p).ok_or_else(|| CliError::Usage("--x0: not a finite point".into()))
}

fn run_simulate<T: Scalar>(
    m: &PwcMap2<T>,
    p: &Point2<f64>,
    steps: usize,
    tol: f64,
) -> Result<pwcmap::orbit::OrbitRecord, CliError> {
    let x0 = Point2::<T>::from_f64(p).ok_or_else(|| CliError::Usage("--x0: not a finite point".into()))?;
    simulate(m, &x0, steps, tol).map_err(|e| CliError::Usage(format!("--x0: {e}")))
}

fn run_cantor<T: Scalar>(
    h: &pwcmap::map_model::Map1D<T>,
    steps: usize,
    start: Side1D,
    csv: Option<&Ctx>,
) -> Result<CantorProbeReport, CliError> {
    let fail = |e: pwcmap::cantor::CantorError| CliError::Failed(e.to_string());
    match csv {
        Some(ctx) => {
            let t = trace_orbit(h, steps, start).map_err(fail)?;
            let mut buf = Vec::new();
            t.write_csv(&mut buf).map_err(|e| CliError::io(Path::new("cantor.csv"), e))?;
            ctx.write_bytes("cantor.csv", &buf)?;
            Ok(CantorProbeReport::from_trace(&t, start))
        }
        None => cantor_probe(h, steps, start).map_err(fail),
    }
}
