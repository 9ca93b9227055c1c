use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

fn flatsurf(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_flatsurf"))
        .args(args)
        .env_remove("FLATSURF_SEED")
        .output()
        .unwrap();
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

fn scratch(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn validate_matches_golden_counts() {
    for name in ["pillow", "torus", "tetra"] {
        let (code, got) = flatsurf(&["validate", &fixture(&format!("{name}.glue"))]);
        assert_eq!(code, 0);
        let text = std::fs::read_to_string(fixture(&format!("{name}.expected.json"))).unwrap();
        let want: Value = serde_json::from_str(&text).unwrap();
        for key in ["V", "E", "F", "chi"] {
            assert_eq!(got[key], want[key], "{name} {key}");
        }
        assert_eq!(got["version"], env!("CARGO_PKG_VERSION"));
        assert_eq!(got["input_digest"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn canonical_output_revalidates() {
    let (_, first) = flatsurf(&["validate", &fixture("tetra.glue"), "--emit-canonical"]);
    let canonical = first["canonical"].as_str().unwrap();
    let f = scratch(canonical);
    let (code, second) = flatsurf(&["validate", f.path().to_str().unwrap(), "--emit-canonical"]);
    assert_eq!(code, 0);
    assert_eq!(second["canonical"], first["canonical"]);
    assert_eq!(second["V"], 4);
}

#[test]
fn self_glued_side_is_a_domain_error() {
    let f = scratch("faces 1\nglue 1.1 1.1 keep\n");
    let (code, out) = flatsurf(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(out["error"]["kind"], "parse");
    assert!(out["error"]["message"].as_str().unwrap().contains("itself"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(flatsurf(&["dist", "a.glue"]).0, 2);
    assert_eq!(flatsurf(&["chart", &fixture("torus.glue"), "--nope"]).0, 2);
    assert_eq!(flatsurf(&["frobnicate"]).0, 2);
    assert_eq!(flatsurf(&["gb"]).0, 2);
}

#[test]
fn gb_on_prescribed_angles() {
    let pi = PI.to_string();
    let tetra = [pi.as_str(); 4].join(",");
    let (code, out) = flatsurf(&["gb", "--angles", &tetra, "--chi", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out["pass"], true);
    let (_, out) = flatsurf(&["gb", "--angles", &tetra, "--chi", "0"]);
    assert_eq!(out["pass"], false);
    let (code, out) = flatsurf(&["gb", "--angles", "-1,7", "--chi", "0"]);
    assert_eq!(code, 1);
    assert_eq!(out["error"]["kind"], "teich");
}

#[test]
fn gb_and_angles_on_a_surface() {
    let (code, out) = flatsurf(&["gb", &fixture("tetra.glue"), &fixture("tetra.len")]);
    assert_eq!(code, 0);
    assert_eq!(out["pass"], true);
    let (_, angles) = flatsurf(&["angles", &fixture("torus.glue"), &fixture("torus.len")]);
    let v = angles["vertices"].as_array().unwrap();
    assert_eq!(v.len(), 1);
    assert!((v[0]["cone_angle"].as_f64().unwrap() - 2.0 * PI).abs() < 1e-9);
    assert!((angles["area"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn tetrahedron_vertex_distances() {
    let (g, l) = (fixture("tetra.glue"), fixture("tetra.len"));
    // corner 1 of face 1 is b, corner 1 of faces 2 and 3 is a
    let (code, out) = flatsurf(&["dist", &g, &l, "1:1,0,0", "2:1,0,0", "--mode", "exact"]);
    assert_eq!(code, 0);
    assert!((out["distance"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(out["k"], Value::Null);
    assert!(!out["path"].as_array().unwrap().is_empty());
    let (_, same) = flatsurf(&["dist", &g, &l, "2:1,0,0", "3:1,0,0"]);
    assert_eq!(same["distance"], 0.0);
}

#[test]
fn approximate_distance_is_an_upper_bound() {
    let (g, l) = (fixture("tetra.glue"), fixture("tetra.len"));
    let (x, y) = ("1:0.2,0.3,0.5", "3:0.6,0.3,0.1");
    let (_, exact) = flatsurf(&["dist", &g, &l, x, y]);
    let (code, approx) = flatsurf(&["dist", &g, &l, x, y, "--mode", "approx", "--k", "8"]);
    assert_eq!(code, 0);
    assert_eq!(approx["k"], 8);
    assert!(approx["distance"].as_f64().unwrap() >= exact["distance"].as_f64().unwrap() - 1e-12);
}

#[test]
fn bad_point_is_a_domain_error() {
    let (code, out) = flatsurf(&[
        "dist",
        &fixture("tetra.glue"),
        &fixture("tetra.len"),
        "9:1,0,0",
        "1:1,0,0",
    ]);
    assert_eq!(code, 1);
    assert_eq!(out["error"]["kind"], "point");
}

#[test]
fn curve_length_report() {
    let curve = scratch("seg 1 0.2,0.3,0.5 0.5,0.3,0.2 0.1,0.1,0.8\n");
    let (code, out) = flatsurf(&[
        "length",
        &fixture("tetra.glue"),
        &fixture("tetra.len"),
        curve.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out["converged"], true);
    let face = out["face_length"].as_f64().unwrap();
    assert!((face - out["estimate"].as_f64().unwrap()).abs() < 1e-6);
}

#[test]
fn chart_and_invariants() {
    for (name, dim) in [("pillow", 3), ("torus", 3), ("tetra", 6)] {
        let (_, out) = flatsurf(&["chart", &fixture(&format!("{name}.glue"))]);
        assert_eq!(out["dimension"], dim, "{name}");
    }
    let (_, inv) = flatsurf(&["invariants", &fixture("tetra.glue"), &fixture("tetra.len")]);
    assert!((inv["area"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-12);
    assert_eq!(inv["vertex_count"], 4);
}

#[test]
fn proptest_is_deterministic_and_passes() {
    let a = flatsurf(&["proptest", "--trials", "5", "--seed", "3"]);
    let b = flatsurf(&["proptest", "--trials", "5", "--seed", "3"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    assert_eq!(a.1["passed"], true);
    assert_eq!(a.1["seed"], 3);
    assert_eq!(a.1["properties"].as_array().unwrap().len(), 3 * 15);
}

#[test]
fn proptest_with_zero_trials_is_empty() {
    let (code, out) = flatsurf(&["proptest", "--trials", "0"]);
    assert_eq!(code, 0);
    assert!(out["properties"].as_array().unwrap().is_empty());
}

#[test]
fn seed_from_environment_wins() {
    let out = Command::new(env!("CARGO_BIN_EXE_flatsurf"))
        .args(["proptest", "--trials", "0", "--seed", "3"])
        .env("FLATSURF_SEED", "17")
        .output()
        .unwrap();
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["seed"], 17);
}

#[test]
fn injected_fault_is_reported() {
    let (code, out) = flatsurf(&["proptest", "--trials", "40", "--inject-fault"]);
    assert_eq!(code, 0);
    assert_eq!(out["passed"], false);
    let failing: Vec<&Value> = out["properties"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["violations"].as_u64().unwrap() > 0)
        .collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|r| r["counterexample"].is_object()));
}

#[test]
fn user_complex_joins_the_suite() {
    let (code, out) = flatsurf(&[
        "proptest",
        "--trials",
        "3",
        "--complex",
        &fixture("pillow.glue"),
        "--lengths",
        &fixture("pillow.len"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out["subjects"].as_array().unwrap().len(), 4);
}

#[test]
fn text_format_renders_the_same_fields() {
    let out = Command::new(env!("CARGO_BIN_EXE_flatsurf"))
        .args(["validate", &fixture("pillow.glue"), "--format", "text"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for line in ["V: 3", "E: 3", "F: 2", "chi: 2", "command: validate"] {
        assert!(
            text.lines().any(|l| l == line),
            "{line} missing from\n{text}"
        );
    }
}

#[test]
fn digest_tracks_inputs() {
    let (_, a) = flatsurf(&["chart", &fixture("torus.glue")]);
    let (_, b) = flatsurf(&["chart", &fixture("pillow.glue")]);
    let (_, c) = flatsurf(&["validate", &fixture("torus.glue")]);
    assert_ne!(a["input_digest"], b["input_digest"]);
    assert_eq!(a["input_digest"], c["input_digest"]);
}
