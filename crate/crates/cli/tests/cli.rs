use std::process::{Command, Output};

use serde_json::Value;
use wave_manifold::surfaces::{sigma, sonprime};
use wave_manifold::{ChartPoint, ModelParams};

fn wavemanifold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavemanifold"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = wavemanifold(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).expect("valid JSON")
}

fn code(args: &[&str]) -> Option<i32> {
    wavemanifold(args).status.code()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn classify_examples() {
    for (y, label) in [
        ("1", "BelowBridge"),
        ("0", "Boundary"),
        ("3", "AboveBridge"),
    ] {
        let out = stdout(&["classify", "--z", "0", "--t", "0", "--Y", y]);
        assert_eq!(out.lines().next(), Some(format!("label: {label}").as_str()));
    }
    let v = json(&[
        "classify", "--z", "0", "--t", "0", "--y", "-1", "--format", "json",
    ]);
    assert_eq!(v["label"], "AboveTunnel");
    assert_eq!(v["distances"]["characteristic"], 1.0);
}

#[test]
fn classify_rejects_malformed_input() {
    assert_eq!(code(&["classify", "--z", "0", "--t", "0"]), Some(2));
    assert_eq!(
        code(&["classify", "--z", "x", "--t", "0", "--Y", "0"]),
        Some(2)
    );
    assert_eq!(
        code(&["classify", "--z", "NaN", "--t", "0", "--Y", "0"]),
        Some(2)
    );
}

#[test]
fn secondary_curve_lies_on_sigma() {
    let m = ModelParams::new(2.0, 1.0).unwrap();
    let out = stdout(&[
        "curve", "--k", "0", "--l", "-2", "--c", "1", "--z-from", "-5", "--z-to", "5", "--n", "201",
    ]);
    let samples: Vec<_> = csv_rows(&out)
        .into_iter()
        .filter(|r| r[0] == "sample")
        .collect();
    assert_eq!(samples.len(), 201);
    for r in samples {
        let p: Vec<f64> = r[1..4].iter().map(|x| x.parse().unwrap()).collect();
        assert!(
            sigma(&m, &ChartPoint::new(p[0], p[1], p[2])).abs() < 1e-10,
            "{r:?}"
        );
    }
}

#[test]
fn fold_point_is_a_double_characteristic_root() {
    let v = json(&["curve", "--through", "0.5,0,0", "--format", "json"]);
    let hits: Vec<_> = v["intersections"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["surface"] == "characteristic")
        .collect();
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0]["multiplicity"], 2);
    assert_eq!(hits[0]["z"], 0.5);
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    let args = [
        "curve", "--k", "0.7", "--l", "-0.3", "--prime", "--z-from", "-3", "--z-to", "3", "--n",
        "37",
    ];
    let csv = stdout(&args);
    let mut with_json = args.to_vec();
    with_json.extend(["--format", "json"]);
    let v = json(&with_json);

    let rows = csv_rows(&csv);
    let samples = v["samples"].as_array().unwrap();
    let crossings = v["intersections"].as_array().unwrap();
    assert_eq!(rows.len(), samples.len() + crossings.len());
    for (row, obj) in rows.iter().zip(samples.iter().chain(crossings)) {
        for (cell, key) in row[1..5].iter().zip(["z", "t", "Y", "s"]) {
            let from_csv: f64 = cell.parse().unwrap();
            assert_eq!(
                from_csv.to_bits(),
                obj[key].as_f64().unwrap().to_bits(),
                "{key}: {cell}"
            );
            assert_eq!(cell, &obj[key].to_string());
        }
    }
}

#[test]
fn curve_needs_two_samples() {
    assert_eq!(
        code(&["curve", "--k", "1", "--l", "1", "--n", "1"]),
        Some(2)
    );
    assert_eq!(code(&["curve", "--k", "1"]), Some(2));
}

#[test]
fn arcs_through_origin_side_point() {
    let v = json(&["arcs", "--through", "0,-1,0"]);
    let segments = v["segments"].as_array().unwrap();
    let local: Vec<_> = segments
        .iter()
        .filter(|s| s["classification"] == "Local")
        .collect();
    assert_eq!(local.len(), 1);
    assert_eq!(local[0]["start_kind"], "Cs");
    assert_eq!(local[0]["z_start"], 0.0);
    // Samples run with decreasing speed.
    let s: Vec<f64> = local[0]["samples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["s"].as_f64().unwrap())
        .collect();
    assert!(s.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn arcs_from_a_slow_sonprime_point() {
    let v = json(&["arcs", "--on-sonprime", "0.5,2"]);
    let nonlocal: Vec<_> = v["segments"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["classification"] == "NonLocal")
        .collect();
    assert_eq!(nonlocal.len(), 1);
    assert_eq!(nonlocal[0]["start_kind"], "SonPrimeS");
    assert!((nonlocal[0]["z_start"].as_f64().unwrap() - 0.5).abs() < 1e-8);
}

#[test]
fn arcs_on_the_secondary_bifurcation_exit_3() {
    let out = wavemanifold(&["arcs", "--k", "1", "--l", "-2", "--c", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("secondary bifurcation"));
    assert_eq!(
        code(&["arcs", "--k", "0", "--l", "-3", "--c", "1.5"]),
        Some(3)
    );
}

#[test]
fn sonprime_mesh_rows_lie_on_sonprime() {
    let m = ModelParams::default();
    let out = stdout(&["mesh", "--surface", "sonprime"]);
    assert_eq!(out.lines().next(), Some("surface,z,t,Y"));
    let rows = csv_rows(&out);
    assert!(rows.len() > 2000);
    for r in rows {
        assert_eq!(r[0], "sonprime");
        let p: Vec<f64> = r[1..4].iter().map(|x| x.parse().unwrap()).collect();
        assert!(
            sonprime(&m, &ChartPoint::new(p[0], p[1], p[2])).abs() < 1e-9,
            "{r:?}"
        );
    }
}

#[test]
fn mesh_json_matches_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("tf.csv");
    let json_path = dir.path().join("tf.json");
    let base = ["mesh", "--surface", "tf", "--nz", "9", "--nt", "7"];
    let mut a = base.to_vec();
    a.extend(["--out", csv_path.to_str().unwrap()]);
    stdout(&a);
    let mut b = base.to_vec();
    b.extend(["--out", json_path.to_str().unwrap(), "--format", "json"]);
    stdout(&b);

    let csv = std::fs::read_to_string(csv_path).unwrap();
    let v: Value = serde_json::from_str(&std::fs::read_to_string(json_path).unwrap()).unwrap();
    assert_eq!(v["surface"], "tf");
    let points = v["points"].as_array().unwrap();
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), points.len());
    for (row, triple) in rows.iter().zip(points) {
        for (cell, x) in row[1..].iter().zip(triple.as_array().unwrap()) {
            assert_eq!(cell, &x.to_string());
        }
    }
}

#[test]
fn io_errors_exit_5_and_name_the_path() {
    let out = wavemanifold(&[
        "mesh",
        "--surface",
        "son",
        "--out",
        "/nonexistent/dir/son.csv",
    ]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/dir/son.csv"));
    assert_eq!(
        code(&[
            "--config",
            "/nonexistent/wm.toml",
            "classify",
            "--z",
            "0",
            "--t",
            "0",
            "--Y",
            "1"
        ]),
        Some(5)
    );
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wm.toml");
    std::fs::write(
        &path,
        "b1 = 3.0\nc = 1.0\nformat = \"json\"\n[tolerances]\nboundary = 1e-8\n",
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    // zc = 1/2 at b1 = 3 but 1/sqrt(3) at b1 = 2, which puts z = 0.55 on opposite sides.
    let v = json(&[
        "--config", cfg, "classify", "--z", "0.55", "--t", "0", "--Y", "0.1",
    ]);
    assert_eq!(v["z_interval"], 3);
    let v = json(&[
        "--config", cfg, "--b1", "2", "classify", "--z", "0.55", "--t", "0", "--Y", "0.1",
    ]);
    assert_eq!(v["z_interval"], 2);

    std::fs::write(&path, "z_max = 1.0\n").unwrap();
    assert_eq!(
        code(&["--config", cfg, "classify", "--z", "0", "--t", "0", "--Y", "1"]),
        Some(2)
    );
    std::fs::write(&path, "[tolerances]\nroot = -1.0\n").unwrap();
    assert_eq!(
        code(&["--config", cfg, "classify", "--z", "0", "--t", "0", "--Y", "1"]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "--root-tol",
            "0",
            "classify",
            "--z",
            "0",
            "--t",
            "0",
            "--Y",
            "1"
        ]),
        Some(2)
    );
}

#[test]
fn verify_floodfill_reports_twelve_components() {
    let reports = json(&["verify", "--check", "floodfill"]);
    let count = reports
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check"] == "floodfill_components")
        .expect("component report");
    assert_eq!(count["pass"], true);
    assert!(count["notes"][0]
        .as_str()
        .unwrap()
        .starts_with("12 components, 6 with Y > 0"));
}

#[test]
fn verify_all_passes_on_default_instance() {
    let reports = json(&["verify", "--all", "--samples", "100"]);
    let reports = reports.as_array().unwrap();
    assert!(reports.iter().any(|r| r["check"] == "coverage"));
    let failed: Vec<_> = reports.iter().filter(|r| r["pass"] != true).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn verify_failure_exits_4() {
    // A one-cell guard on a coarse grid cannot separate the twelve regions.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coarse.toml");
    std::fs::write(&path, "[grid]\ncells = [8, 8, 8]\nguard = 1\n").unwrap();
    assert_eq!(
        code(&[
            "--config",
            path.to_str().unwrap(),
            "verify",
            "--check",
            "floodfill"
        ]),
        Some(4)
    );
    assert_eq!(code(&["verify", "--check", "nope"]), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "--check", "intersections", "--samples", "50"][..],
        &["arcs", "--through", "0.3,-0.7,0"],
        &["mesh", "--surface", "tfprime", "--format", "json"],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}
