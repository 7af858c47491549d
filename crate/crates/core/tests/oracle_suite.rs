use wave_manifold::lax::region_classify;
use wave_manifold::oracle::{
    derive_region_table, frozen_region_table, oracle_floodfill, run_checks, GridSpec, SweepConfig,
};
use wave_manifold::ModelParams;

#[test]
fn registry_passes_on_default_instance() {
    let cfg = SweepConfig {
        samples: 200,
        ..Default::default()
    };
    let reports = run_checks(&cfg, None).unwrap();
    assert!(reports.iter().any(|r| r.check == "coverage"));
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn registry_passes_on_other_instance() {
    let cfg = SweepConfig {
        params: ModelParams::new(3.5, 0.7).unwrap(),
        samples: 100,
        ..Default::default()
    };
    let reports = run_checks(&cfg, None).unwrap();
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn unknown_check_is_an_error() {
    assert!(run_checks(&SweepConfig::default(), Some(&["nope"])).is_err());
}

#[test]
fn labels_are_stable_under_halving() {
    let m = ModelParams::default();
    let fine = oracle_floodfill(&m, &GridSpec::default()).unwrap();
    let coarse = oracle_floodfill(&m, &GridSpec::default().halved()).unwrap();
    assert_eq!(coarse.count(), 12);
    for comp in &coarse.components {
        let p = comp.representative;
        assert_eq!(region_classify(&m, &p, 1e-9), comp.label);
        assert_eq!(fine.label_at(&p), Some(comp.label), "{p:?}");
    }
}

#[test]
fn labels_are_stable_under_bound_growth() {
    let m = ModelParams::default();
    let grown = GridSpec {
        z: (-3.0, 3.0),
        t: (-4.5, 4.5),
        y: (-9.0, 9.0),
        ..GridSpec::default()
    };
    let fill = oracle_floodfill(&m, &grown).unwrap();
    assert_eq!(fill.count(), 12);
    assert_eq!(fill.count_upper(), 6);
    assert_eq!(
        derive_region_table(&m, &grown).unwrap(),
        frozen_region_table()
    );
}

#[test]
fn region_table_is_instance_independent() {
    for (b1, c) in [(3.0, 1.0), (1.5, 2.0), (1.2, 0.5)] {
        let m = ModelParams::new(b1, c).unwrap();
        // Coarser grids can pinch the thin neck of the bridge region shut.
        let grid = GridSpec::default();
        assert_eq!(derive_region_table(&m, &grid).unwrap(), frozen_region_table(), "b1={b1} c={c}");
    }
}
