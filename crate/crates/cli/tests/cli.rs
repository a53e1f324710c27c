//! End-to-end runs of the `pwc` binary: exit codes, schemas, byte stability.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn scratch(tag: &str) -> PathBuf {
    static N: AtomicUsize = AtomicUsize::new(0);
    let d = Path::new(env!("CARGO_TARGET_TMPDIR"))
        .join(format!("cli_{tag}_{}_{}", std::process::id(), N.fetch_add(1, Ordering::Relaxed)));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn pwc(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwc"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("PWC_OUT")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_valid(schema: &str, doc: &Value) {
    let s = read_json(&schema_dir().join(format!("{schema}.schema.json")));
    let v = jsonschema::validator_for(&s).expect("schema compiles");
    let errs: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errs.is_empty(), "{schema}: {errs:#?}");
}

#[test]
fn usage_errors_exit_1_and_name_the_flag() {
    let d = scratch("usage");
    let o = pwc(&d, &["--map", "example_finite", "--grid", "0,4", "validate"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--grid"));

    let o = pwc(&d, &["--map", "example_finite", "--eps", "-1", "omega"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--eps"));

    let o = pwc(&d, &["certify"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--map"));

    assert_eq!(code(&pwc(&d, &["--no-such-flag", "certify"])), 1);
    assert_eq!(code(&pwc(&d, &["--map", "cantor_interval", "certify"])), 1);
    assert_eq!(code(&pwc(&d, &["--map", "example_finite", "--param", "nope=1", "validate"])), 1);
}

#[test]
fn certify_countable_a_is_not_separated() {
    let d = scratch("certA");
    let o = pwc(&d, &["--map", "example_countable_A", "--gens", "6", "--grid", "256,256", "certify"]);
    assert_eq!(code(&o), 2);
    let r = read_json(&d.join("certify.json"));
    assert_valid("certify", &r);
    assert_eq!(r["report"]["separation"]["outcome"], "not_separated_at_this_resolution");
}

#[test]
fn certify_two_piece_demo_succeeds() {
    let d = scratch("certT");
    let o = pwc(&d, &["--map", "two_piece_demo", "--gens", "6", "--grid", "256,256", "certify"]);
    assert_eq!(code(&o), 0);
    let r = read_json(&d.join("certify.json"));
    assert_valid("certify", &r);
    assert_eq!(r["report"]["periodicity"]["orbits"].as_array().unwrap().len(), 2);
}

#[test]
fn validate_rejects_non_contracting_file() {
    let d = scratch("nc");
    let map = d.join("stretch.json");
    std::fs::write(
        &map,
        r#"{"domain": {"xlo": 0, "xhi": 1, "ylo": 0, "yhi": 1},
            "pieces": [[{"boundary": {"kind": "linear", "params": [1, 0, -0.5]}, "sign": "neg"}],
                       [{"boundary": {"kind": "linear", "params": [1, 0, -0.5]}, "sign": "pos"}]],
            "maps": [{"A": [[1.0, 0], [0, 0.5]], "t": [0, 0]},
                     {"A": [[0.5, 0], [0, 0.5]], "t": [0.5, 0]}]}"#,
    )
    .unwrap();
    assert_valid("map", &read_json(&map));
    let o = pwc(&d, &["--map", map.to_str().unwrap(), "validate"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("ValidationFailure(contraction)"));
    let r = read_json(&d.join("validate.json"));
    assert_valid("validate", &r);
    assert_eq!(r["report"]["failure"]["condition"], "contraction");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let d = scratch("cfg");
    let cfg = d.join("run.json");
    std::fs::write(&cfg, r#"{"map": "example_countable_B", "steps": 40, "seed": 9}"#).unwrap();
    let o = pwc(&d, &["--config", cfg.to_str().unwrap(), "--steps", "25", "simulate", "--x0", "0.3,0.2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&d.join("orbit.json"));
    assert_eq!(r["config"]["steps"], 25);
    assert_eq!(r["config"]["seed"], 9);
    assert!(r["config"].get("workers").is_none());

    std::fs::write(&cfg, r#"{"map": "example_countable_B", "stepz": 40}"#).unwrap();
    assert_eq!(code(&pwc(&d, &["--config", cfg.to_str().unwrap(), "diagnose"])), 1);
}

/// Runs every command once and checks each JSON output against its schema.
#[test]
fn outputs_match_schemas() {
    let d = scratch("schema");
    let runs: &[(&[&str], &str, &str)] = &[
        (&["--map", "example_countable_B", "validate"], "validate.json", "validate"),
        (&["--map", "cantor_interval", "validate"], "validate.json", "validate"),
        (&["--map", "example_countable_B", "--steps", "50", "simulate", "--x0", "0.3,0.2"], "orbit.json", "simulate"),
        (&["--map", "example_finite", "--arith", "float", "--steps", "30", "simulate", "--x0", "0.3,0.2"], "orbit.json", "simulate"),
        (&["--map", "example_countable_B", "--burn-in", "50", "--steps", "50", "omega", "--x0", "0.3,0.2"], "omega.json", "omega"),
        (&["--map", "example_countable_A", "--seeds", "8", "--burn-in", "50", "--steps", "100", "omega"], "omega.json", "omega"),
        (&["--map", "example_three_piece", "--seeds", "20", "--steps", "500", "--eps", "0.05", "omega", "--probe", "0,0.5"], "probe.json", "probe"),
        (&["--map", "example_countable_B", "--gens", "5", "--grid", "64,64", "diagnose"], "diagnose.json", "diagnose"),
        (&["--steps", "300", "cantor"], "cantor.json", "cantor"),
        (&["--steps", "300", "cantor", "--float", "--start", "right"], "cantor.json", "cantor"),
        (&["gallery", "list"], "gallery.json", "gallery"),
        (&["gallery", "emit", "appendix_map"], "appendix_map.json", "map"),
        (&["repro", "--only", "4"], "repro.json", "repro"),
    ];
    for (args, file, schema) in runs {
        let o = pwc(&d, args);
        assert!(matches!(code(&o), 0 | 2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_valid(schema, &read_json(&d.join(file)));
    }

    let o = pwc(&d, &["--map", "example_countable_B", "--gens", "3", "--grid", "32,32", "atoms"]);
    assert_eq!(code(&o), 0);
    let lines = std::fs::read_to_string(d.join("atoms.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 2 + 3 + 4);
    for l in lines.lines() {
        let v: Value = serde_json::from_str(l).unwrap();
        assert_valid("atoms-line", &v);
        assert!(d.join(v["file"].as_str().unwrap()).exists());
    }
}

#[test]
fn emitted_gallery_maps_round_trip() {
    let d = scratch("emit");
    for name in ["example_finite", "example_three_piece", "two_cycle_demo"] {
        assert_eq!(code(&pwc(&d, &["gallery", "emit", name])), 0);
        let file = d.join(format!("{name}.json"));
        let o = pwc(&d, &["--map", file.to_str().unwrap(), "validate"]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(code(&pwc(&d, &["gallery", "emit", "cantor_interval"])), 1);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let runs: &[(&[&str], &[&str])] = &[
        (&["--map", "example_countable_A", "--seeds", "16", "--seed", "3", "--burn-in", "100", "--steps", "200", "omega"], &["omega.json"]),
        (&["--map", "example_finite", "--arith", "float", "--seeds", "16", "--burn-in", "100", "--steps", "200", "omega"], &["omega.json"]),
        (&["--map", "appendix_map", "--gens", "4", "--grid", "64,128", "atoms"], &["atoms.jsonl", "atoms/lambda_g04.cells"]),
        (&["--map", "example_countable_B", "--gens", "6", "--grid", "128,128", "render", "--levels", "1,3,6"], &["covers.pgm"]),
        (&["--map", "example_countable_A", "--seeds", "8", "--burn-in", "50", "--steps", "50", "render", "--kind", "figure"], &["figure.svg"]),
        (&["--steps", "400", "cantor", "--csv"], &["cantor.json", "cantor.csv"]),
    ];
    for (args, files) in runs {
        let a = scratch("det_a");
        let b = scratch("det_b");
        assert_eq!(code(&pwc(&a, args)), 0, "{args:?}");
        let mut wargs = args.to_vec();
        wargs.extend(["--workers", "3"]);
        assert_eq!(code(&pwc(&b, &wargs)), 0, "{args:?}");
        for f in *files {
            let (x, y) = (std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
            assert!(x == y, "{args:?}: {f} differs");
        }
    }
}

#[test]
fn render_atom_shows_bands() {
    let d = scratch("band");
    let o = pwc(&d, &["--map", "appendix_map", "--grid", "256,4096", "render", "--kind", "atom", "--word", "1,2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let img = std::fs::read(d.join("atom_1-2.pgm")).unwrap();
    let header = b"P5\n256 4096\n255\n";
    assert!(img.starts_with(header));
    let px = &img[header.len()..];
    // count maximal runs of rows holding any dark pixel
    let dark_rows: Vec<bool> = px.chunks(256).map(|r| r.iter().any(|&p| p < 255)).collect();
    let bands = dark_rows.windows(2).filter(|w| w[1] && !w[0]).count() + usize::from(dark_rows[0]);
    assert!(bands >= 2, "bands = {bands}");
}
