use std::path::PathBuf;
use std::process::{Command, Output};

use surface_qp::lie::{AlgebraContext, GroupKind};
use surface_qp::repspace::RepPoint;
use surface_qp::surfaces::{diagram_from_word, polygon_model, GeneratorWord, SurfaceSpec};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surface-qp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("surface-qp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("report on stdout")
}

#[test]
fn handle_generator_bracket_passes_with_normal_form() {
    let out = bin(&["bracket", "--surface", "1,1", "--alpha", "C_1", "--beta", "D_1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["pass"], true);
    assert!(r["normal_form"].as_str().unwrap().starts_with("(/ "));
    assert_eq!(r["intersection"], "1");
}

#[test]
fn qp_identity_suite_passes_on_the_handle() {
    let out = bin(&["verify", "--suite", "qp-identity", "--n", "2", "--surface", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn mutated_sign_convention_fails() {
    let out = bin(&["verify", "--suite", "main-theorem", "--mutate", "--surface", "1,1", "--points", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn empty_fixture_list_is_an_input_error() {
    let p = scratch("empty.json");
    std::fs::write(&p, "[]").unwrap();
    let out = bin(&["verify", "--suite", "moment", "--surface", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_is_an_input_error() {
    let p = scratch("bad.json");
    std::fs::write(&p, "{\"genus\": 1,").unwrap();
    let out = bin(&["bracket", "--surface", p.to_str().unwrap(), "--alpha", "C_1", "--beta", "D_1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["verify", "--suite", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["bracket", "--surface", "1,1", "--alpha", "A_2", "--beta", "D_1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn singular_cross_section_point_is_a_numeric_error() {
    let spec = SurfaceSpec::new(1, 1).unwrap();
    let ctx = AlgebraContext::u(2);
    let p = scratch("identity-point.json");
    let file = RepPoint::identity(spec, &ctx).to_file(GroupKind::U);
    std::fs::write(&p, serde_json::to_string(&file).unwrap()).unwrap();
    let out = bin(&[
        "bracket", "--surface", "1,1", "--group", "u", "--cross-section", "--alpha", "C_1", "--beta", "D_1",
        "--point", p.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn cross_section_bracket_at_projected_points() {
    let out = bin(&["bracket", "--surface", "0,2", "--group", "u", "--cross-section", "--alpha", "A_2", "--beta", "B_2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bracket_from_diagram_and_point_files() {
    let spec = SurfaceSpec::new(0, 3).unwrap();
    let pm = polygon_model(&spec);
    let da = diagram_from_word(&GeneratorWord::parse("A_2 B_2").unwrap(), &pm, 11).unwrap();
    let db = diagram_from_word(&GeneratorWord::parse("A_3").unwrap(), &pm, 12).unwrap();
    let (pa, pb, pp, ps) = (scratch("a.json"), scratch("b.json"), scratch("point.json"), scratch("surface.json"));
    std::fs::write(&pa, da.to_json()).unwrap();
    std::fs::write(&pb, db.to_json()).unwrap();
    std::fs::write(&ps, serde_json::to_string(&spec).unwrap()).unwrap();
    let m = RepPoint::random(&AlgebraContext::gl(2), spec, 5).unwrap();
    std::fs::write(&pp, serde_json::to_string(&m.to_file(GroupKind::GL)).unwrap()).unwrap();
    let out_path = scratch("report.json");
    let out = bin(&[
        "bracket", "--surface", ps.to_str().unwrap(), "--diagram", pa.to_str().unwrap(), "--diagram",
        pb.to_str().unwrap(), "--point", pp.to_str().unwrap(), "--phi", "trace", "--psi", "entry:1,1",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r["fixture_count"], 1);
    assert!(r.get("normal_form").is_none());
}

#[test]
fn reports_are_reproducible_modulo_timestamp() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_surface-qp"))
            .args(["verify", "--suite", "splitting", "--seed", "7"])
            .env("SURFACE_QP_THREADS", threads)
            .output()
            .unwrap();
        let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["timestamp_unix"] = serde_json::Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn bad_thread_count_is_an_input_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_surface-qp"))
        .args(["verify", "--suite", "qp-identity"])
        .env("SURFACE_QP_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
