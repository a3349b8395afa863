use std::path::{Path, PathBuf};

use pencil4_cli::error::code;
use pencil4_cli::run;

const RULED: &str = r#"{
    "curve": {"w_curve": {"a": "sqrt(3)/2", "b": 0.25, "c": 1, "d": 2}},
    "marching": "ruled",
    "domain": {"t": [-0.5, 0.5], "ns": 6, "nt": 5}
}"#;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pencil4(args: &[&str]) -> Outcome {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("pencil4").chain(args.iter().copied()), &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_lists_exit_codes() {
    let o = pencil4(&["--help"]);
    assert_eq!(o.code, code::OK);
    assert!(o.stdout.contains("Exit codes:"));
    assert!(o.stdout.contains("flat-design"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pencil4(&[]).code, code::USAGE);
    assert_eq!(pencil4(&["eval"]).code, code::USAGE);
    assert_eq!(pencil4(&["eval", "--config", "x.json", "--grid", "5"]).code, code::USAGE);
    assert_eq!(pencil4(&["shade", "--config", "x.json"]).code, code::USAGE);
}

#[test]
fn curvature_csv_has_header_and_grid_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "r.json", RULED);
    let o = pencil4(&["curvature", "--config", s(&cfg)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "s,t,E,G,K,K_N,Hnormsq,status");
    assert_eq!(lines.len(), 1 + 6 * 5);
    // t-major: the first six rows share t = -0.5
    assert!(lines[1..7].iter().all(|l| l.split(',').nth(1) == Some("-5.0000000000000000e-1")));
    assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));

    let o = pencil4(&["curvature", "--config", s(&cfg), "--grid", "3x2"]);
    assert_eq!(o.stdout.lines().count(), 1 + 6);
}

#[test]
fn frenet_rows_carry_seed_curvatures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "r.json", RULED);
    let out = dir.path().join("f.csv");
    assert_eq!(pencil4(&["frenet", "--config", s(&cfg), "--out", s(&out)]).code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').take(20).map(|x| x.parse().unwrap()).collect();
    assert!((row[17] - 1.3228756555).abs() < 1e-9);
    assert!((row[18] - 0.9819805061).abs() < 1e-9);
    assert!((row[19] - 1.5118578920).abs() < 1e-9);
}

#[test]
fn verify_passes_on_ruled_pencil_and_reports_printed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "r.json", RULED);
    let out = dir.path().join("v.csv");
    let o = pencil4(&["verify", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("result: PASS"));
    assert!(o.stdout.contains("as-printed"));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("s,t,K_closed,K_oracle"));

    // an absurd step makes the oracle disagree
    let o = pencil4(&["verify", "--config", s(&cfg), "--step", "0.2"]);
    assert_eq!(o.code, code::CHECK_FAILED, "{}", o.stdout);
    assert!(o.stdout.contains("result: FAIL"));
}

#[test]
fn verify_on_the_full_ruled_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "r.json", &RULED.replace("[-0.5, 0.5]", "[0, 0.5]"));
    let o = pencil4(&["verify", "--config", s(&cfg), "--grid", "50x50"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let k = o.stdout.lines().find(|l| l.starts_with("K ")).unwrap();
    assert!(k.contains("compared  2500"), "{k}");
    let rel: f64 = k.split("max_rel ").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(rel <= 1e-6, "{k}");
}

#[test]
fn flat_design_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let spiral = config(
        dir.path(),
        "v.json",
        r#"{"marching": {"vranceanu": {"r": "exp(0.2*t)", "a": 0.6, "b": 0.8}}, "domain": {"t": [0, 2], "ns": 12, "nt": 12}}"#,
    );
    let o = pencil4(&["flat-design", "--config", s(&spiral)]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("verdict: FLAT"));

    let bumpy = config(
        dir.path(),
        "b.json",
        r#"{"marching": {"vranceanu": {"r": "1 + 0.5*cos(t)", "a": 0.6, "b": 0.8}}, "domain": {"t": [0, 2], "ns": 12, "nt": 12}}"#,
    );
    let o = pencil4(&["flat-design", "--config", s(&bumpy)]);
    assert_eq!(o.code, code::CHECK_FAILED);
    assert!(o.stdout.contains("verdict: NOT FLAT"));

    let ruled = config(dir.path(), "r.json", RULED);
    assert_eq!(pencil4(&["flat-design", "--config", s(&ruled)]).code, code::CONFIG);
}

#[test]
fn flat_polar_errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // case i needs a planar spine
    let nonplanar = config(
        dir.path(),
        "np.json",
        r#"{"curve": {"w_curve": {"a": "sqrt(3)/2", "b": 0.25, "c": 1, "d": 2}},
            "marching": {"flat_polar": {"case": "i", "c1": 1, "c2": 0}}, "domain": {"t": [0.9, 2.5]}}"#,
    );
    assert_eq!(pencil4(&["flat-design", "--config", s(&nonplanar)]).code, code::FAMILY);
    // the range contains the pole t = 0
    let pole = config(
        dir.path(),
        "pole.json",
        r#"{"curve": {"analytic": {"components": ["cos(s)", "sin(s)", "0", "0"]}},
            "marching": {"flat_polar": {"case": "i", "c1": 1, "c2": 0}}, "domain": {"s": [0, 6], "t": [-0.5, 0.5]}}"#,
    );
    assert_eq!(pencil4(&["flat-design", "--config", s(&pole)]).code, code::EVAL_DOMAIN);
    let unknown = config(
        dir.path(),
        "u.json",
        r#"{"curve": {"w_curve": {"a": 1, "b": 0, "c": 1, "d": 1}},
            "marching": {"flat_polar": {"case": "v", "c1": 1, "c2": 0}}, "domain": {"t": [0.9, 2.5]}}"#,
    );
    assert_eq!(pencil4(&["flat-design", "--config", s(&unknown)]).code, code::CONFIG);
}

#[test]
fn configuration_and_expression_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(pencil4(&["eval", "--config", s(&missing)]).code, code::IO);
    let junk = config(dir.path(), "j.json", "{ not json");
    assert_eq!(pencil4(&["eval", "--config", s(&junk)]).code, code::CONFIG);
    let bad_expr = config(
        dir.path(),
        "e.json",
        r#"{"curve": {"w_curve": {"a": "sqrt(3)/2", "b": 0.25, "c": 1, "d": 2}},
            "marching": {"expressions": {"a": "t +", "b": "t"}}, "domain": {"t": [0, 1]}}"#,
    );
    let o = pencil4(&["eval", "--config", s(&bad_expr)]);
    assert_eq!(o.code, code::EXPR_PARSE);
    assert!(o.stderr.starts_with("error:"));
    let not_unit = config(
        dir.path(),
        "nu.json",
        r#"{"curve": {"analytic": {"components": ["2*cos(s)", "2*sin(s)", "0", "0"]}},
            "marching": "ruled", "domain": {"s": [0, 1], "t": [0, 1]}}"#,
    );
    assert_eq!(pencil4(&["eval", "--config", s(&not_unit)]).code, code::UNIT_SPEED);
    let cfg = config(dir.path(), "r.json", RULED);
    assert_eq!(pencil4(&["verify", "--config", s(&cfg), "--tol=-1"]).code, code::CONFIG);
}

#[test]
fn irregular_points_are_marked_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    // B/A = κ₂/κ₃ = 3√3/8 on the seed, so a = b = 0 at t = 1/κ₁, the
    // middle of the t-range
    let cfg = config(
        dir.path(),
        "c.json",
        r#"{"curve": {"w_curve": {"a": "sqrt(3)/2", "b": 0.25, "c": 1, "d": 2}},
            "marching": {"expressions": {"a": "t", "b": "3*sqrt(3)/8*t"}},
            "domain": {"t": [0, 1.5118578920369088], "ns": 3, "nt": 3}}"#,
    );
    let o = pencil4(&["curvature", "--config", s(&cfg)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let marked: Vec<&str> = o.stdout.lines().filter(|l| l.ends_with("irregular-spine")).collect();
    assert_eq!(marked.len(), 3, "{}", o.stdout);
    assert!(marked.iter().all(|l| l.contains("NaN")));

    let obj = dir.path().join("m.obj");
    assert_eq!(pencil4(&["export", "--config", s(&cfg), "--out", s(&obj)]).code, 0);
    let text = std::fs::read_to_string(&obj).unwrap();
    // positions exist everywhere; faces touching the singular row stay
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 4);
}

#[test]
fn export_obj_and_curvature_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "r.json", RULED);
    let obj = dir.path().join("mesh.obj");
    assert_eq!(pencil4(&["export", "--config", s(&cfg), "--out", s(&obj)]).code, 0);
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 30);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 5 * 4);
    assert!(text.contains("\nf 1 2 8 7\n"));
    let k = std::fs::read_to_string(dir.path().join("mesh.k.csv")).unwrap();
    assert_eq!(k.lines().count(), 31);

    let csv = dir.path().join("raw.csv");
    assert_eq!(pencil4(&["export", "--config", s(&cfg), "--out", s(&csv)]).code, 0);
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("s,t,x1,x2,x3,x4,status"));
}

#[test]
fn export_projections() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "r.json", RULED);
    let o = pencil4(&["export", "--config", s(&cfg), "--projection", "stereo"]);
    assert_eq!(o.code, code::PROJECTION);
    let o = pencil4(&["export", "--config", s(&cfg), "--projection", "drop:9"]);
    assert_eq!(o.code, code::PROJECTION);
    let o = pencil4(&["export", "--config", s(&cfg), "--projection", "ortho:0,0,0,1;0,0,1,0;0,1,0,0"]);
    assert_eq!(o.code, 0);

    let sphere = config(
        dir.path(),
        "s.json",
        r#"{"marching": {"vranceanu": {"r": "1", "a": 0.6, "b": 0.8}}, "domain": {"t": [0.2, 1.2], "ns": 4, "nt": 4},
            "output": {"format": "obj", "projection": "stereo"}}"#,
    );
    let o = pencil4(&["export", "--config", s(&sphere)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout.lines().filter(|l| l.starts_with("f ")).count(), 9);
}
