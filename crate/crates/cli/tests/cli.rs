use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polyvar_cli::format::read_json;
use polyvar_cli::{ModelFile, PolytopeFile, RunReport};
use serde_json::Value;

fn models() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn polyvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn model(name: &str) -> String {
    models().join(name).display().to_string()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bound_reports_the_benchmark_values() {
    let dir = tempfile::tempdir().unwrap();
    for (file, expected) in [
        ("constrained_cubic.json", -120.0),
        ("quartic.json", -837.5),
        ("constant.json", 3.25),
    ] {
        let out_path = dir.path().join("report.json");
        let out = polyvar(&["bound", &model(file), "--report", path_str(&out_path)]);
        assert_eq!(out.status.code(), Some(0), "{file}");
        let report: RunReport = read_json(&out_path).unwrap();
        let d = report.bound.unwrap().d_star;
        assert!((d - expected).abs() < 1e-6, "{file}: {d}");
    }
}

#[test]
fn bound_prints_json_to_stdout_with_oracle() {
    let out = polyvar(&[
        "bound",
        &model("quartic.json"),
        "--oracle",
        "--steps",
        "1001",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    let bound = report.bound.unwrap();
    let oracle = bound.oracle.unwrap();
    assert!((oracle.value + 7.5).abs() < 0.05);
    assert!(bound.d_star <= oracle.value);
}

#[test]
fn malformed_and_infeasible_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ not json").unwrap();
    assert_eq!(
        polyvar(&["bound", path_str(&broken)]).status.code(),
        Some(2)
    );
    assert_eq!(
        polyvar(&["bound", "/nonexistent/problem.json"])
            .status
            .code(),
        Some(2)
    );

    let infeasible = dir.path().join("infeasible.json");
    std::fs::write(
        &infeasible,
        r#"{"schema_version": "1",
            "polynomial": [{"exponents": [1], "coefficient": 1.0}],
            "rectangle": {"lower": [0.0], "upper": [1.0]},
            "inequalities": [{"normal": [1.0], "sense": ">=", "rhs": 2.0}]}"#,
    )
    .unwrap();
    let out = polyvar(&["bound", path_str(&infeasible)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no point"));
}

fn write_model(dir: &Path, name: &str, edit: impl FnOnce(&mut ModelFile)) -> PathBuf {
    let mut m: ModelFile = read_json(&models().join("linear.json")).unwrap();
    edit(&mut m);
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&m).unwrap()).unwrap();
    path
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = polyvar(&["verify", &model("linear.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    for f in report.facets.unwrap() {
        assert!(f.d_star.unwrap() > 0.0);
    }

    let outside = write_model(dir.path(), "outside.json", |m| {
        m.template.offsets = Some(vec![3.0, 3.0, 3.0, 3.0]);
    });
    assert_eq!(
        polyvar(&["verify", path_str(&outside)]).status.code(),
        Some(2)
    );

    let no_offsets = write_model(dir.path(), "no_offsets.json", |m| m.template.offsets = None);
    assert_eq!(
        polyvar(&["verify", path_str(&no_offsets)]).status.code(),
        Some(2)
    );

    let unstable = write_model(dir.path(), "unstable.json", |m| {
        for comp in &mut m.field {
            comp[0].coefficient = 1.0;
        }
    });
    assert_eq!(
        polyvar(&["verify", path_str(&unstable)]).status.code(),
        Some(1)
    );
}

#[test]
fn stable_linear_model_is_found_at_the_first_iteration() {
    let out = polyvar(&["synthesize", &model("linear.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    let s = report.synthesis.unwrap();
    assert_eq!(s.status, "invariant_found");
    assert_eq!(s.iterations.len(), 1);
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

#[test]
fn fitzhugh_nagumo_polygon_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let poly_path = dir.path().join("polytope.json");
    let out = polyvar(&[
        "synthesize",
        &model("fitzhugh_nagumo.json"),
        "--polytope",
        path_str(&poly_path),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let poly: PolytopeFile = read_json(&poly_path).unwrap();
    let vertices = poly.vertices.clone().unwrap();
    assert_eq!(vertices.len(), 8);
    for v in &vertices {
        for (a, b) in poly.normals.iter().zip(&poly.offsets) {
            assert!(a[0] * v[0] + a[1] * v[1] <= b + 1e-8);
        }
    }
    for i in 0..vertices.len() {
        let (o, a, b) = (
            vertices[i],
            vertices[(i + 1) % vertices.len()],
            vertices[(i + 2) % vertices.len()],
        );
        assert!(cross(o, a, b) > 0.0, "turn at vertex {}", i + 1);
    }

    let verified = polyvar(&[
        "verify",
        &model("fitzhugh_nagumo.json"),
        "--polytope",
        path_str(&poly_path),
    ]);
    assert_eq!(verified.status.code(), Some(0));
}

#[test]
fn phytoplankton_writes_halfspaces_only_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let poly_path = dir.path().join("polytope.json");
    let out = polyvar(&[
        "synthesize",
        &model("phytoplankton.json"),
        "--polytope",
        path_str(&poly_path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let poly: PolytopeFile = read_json(&poly_path).unwrap();
    assert_eq!(poly.normals.len(), 18);
    assert!(poly.vertices.is_none());
    let verified = polyvar(&[
        "verify",
        &model("phytoplankton.json"),
        "--polytope",
        path_str(&poly_path),
    ]);
    assert_eq!(verified.status.code(), Some(0));
}

fn without_wall_time(bytes: &[u8]) -> Value {
    let mut v: Value = serde_json::from_slice(bytes).unwrap();
    v.as_object_mut().unwrap().remove("wall_time_seconds");
    v
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    for args in [
        vec!["synthesize", "fitzhugh_nagumo.json"],
        vec!["synthesize", "phytoplankton.json"],
        vec!["bound", "constrained_cubic.json"],
    ] {
        let full = [args[0].to_string(), model(args[1])];
        let argv: Vec<&str> = full.iter().map(String::as_str).collect();
        let a = polyvar(&argv);
        let b = polyvar(&argv);
        assert_eq!(a.status.code(), b.status.code());
        let text_a = String::from_utf8(a.stdout).unwrap();
        let text_b = String::from_utf8(b.stdout).unwrap();
        let strip = |t: &str| {
            t.lines()
                .filter(|l| !l.contains("wall_time_seconds"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(strip(&text_a), strip(&text_b));
        assert_eq!(
            without_wall_time(text_a.as_bytes()),
            without_wall_time(text_b.as_bytes())
        );
    }
}

#[test]
fn uniform_template_override() {
    let out = polyvar(&[
        "synthesize",
        &model("fitzhugh_nagumo.json"),
        "--template",
        "uniform:6",
    ]);
    // A hexagon from the default start is not expected to succeed; the run must still finish cleanly.
    assert!(matches!(out.status.code(), Some(0) | Some(1)));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        report.command.options,
        vec!["--template=uniform:6".to_string()]
    );
    assert_eq!(report.synthesis.unwrap().final_offsets.len(), 6);

    assert_eq!(
        polyvar(&[
            "verify",
            &model("fitzhugh_nagumo.json"),
            "--template",
            "octagon"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        polyvar(&[
            "synthesize",
            &model("phytoplankton.json"),
            "--template",
            "uniform:8"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn reals_are_written_with_full_precision() {
    let out = polyvar(&["bound", &model("quartic.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"d_star\": -837.50000000000000"), "{text}");
}
