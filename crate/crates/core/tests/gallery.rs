use pwcmap::atoms::{generate_atoms, AtomConfig};
use pwcmap::gallery::{build_example, expected_points, ExampleMap, Params, NAMES};
use pwcmap::geometry::Grid;
use pwcmap::map_model::MapFile;
use pwcmap::render::pgm_layers;

#[test]
fn every_planar_example_validates_and_round_trips() {
    for name in NAMES {
        let ex = build_example(name, &Params::new()).unwrap();
        let ExampleMap::Planar(m) = &ex.map else { continue };
        let rep = m.validate(2048, 1e-12).unwrap_or_else(|f| panic!("{name}: {f}"));
        assert!(rep.lambda < 1.0, "{name}");
        assert!((rep.lambda - ex.lambda).abs() < 1e-12, "{name}");
        let back = MapFile::parse(&MapFile::from_map(m, Some(name)).to_json()).unwrap();
        assert_eq!(MapFile::from_map(&back, Some(name)).to_json(), MapFile::from_map(m, Some(name)).to_json());
    }
}

#[test]
fn out_of_range_parameters_are_rejected() {
    let bad = |name: &str, k: &str, v: f64| {
        let p: Params = [(k.to_string(), v)].into_iter().collect();
        build_example(name, &p).is_err()
    };
    assert!(bad("example_countable_A", "lambda", 1.5));
    assert!(bad("example_countable_B", "lambda", 0.0));
    assert!(bad("cantor_interval", "alpha", 1.0));
    assert!(bad("example_finite", "no_such", 0.1));
}

#[test]
fn countable_family_members() {
    let pts = expected_points("example_countable_A", &Params::new(), 4).unwrap();
    let xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
    assert!(xs.starts_with(&[1.0, 0.5, 0.25, 0.125]));
    assert!(pts.iter().all(|p| p.y == 0.0));
}

/// Ex-3.3 covers at generations 1, 4, 8 give nested grey bands that shrink
/// toward the segment x = 0.
#[test]
fn countable_b_covers_render_as_shrinking_bands() {
    let m = build_example("example_countable_B", &Params::new()).unwrap().planar().unwrap().clone();
    let g = Grid::new(m.domain_f64().clone(), 128, 128).unwrap();
    let t = generate_atoms(&m, &g, &AtomConfig::new(8)).unwrap();
    let layers = [&t.level(1).unwrap().union, &t.level(4).unwrap().union, &t.level(8).unwrap().union];
    assert!(layers[2].is_subset(layers[1]) && layers[1].is_subset(layers[0]));
    let max_x = |s: &pwcmap::geometry::CellSet| s.iter().map(|c| c.0).max().unwrap();
    assert!(max_x(layers[0]) > max_x(layers[1]) && max_x(layers[1]) > max_x(layers[2]));
    assert!(max_x(layers[2]) < 4);

    let img = pgm_layers(&g, &layers);
    let px = &img[b"P5\n128 128\n255\n".len()..];
    let mut greys: Vec<u8> = px.to_vec();
    greys.sort_unstable();
    greys.dedup();
    assert_eq!(greys.len(), 4, "white plus three bands: {greys:?}");
}
