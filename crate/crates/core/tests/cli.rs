mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

use common::data;
use serde_json::Value;

fn leviflat(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_leviflat"));
    cmd.args(args);
    match seed_env {
        Some(s) => cmd.env("LEVIFLAT_SEED", s),
        None => cmd.env_remove("LEVIFLAT_SEED"),
    };
    cmd.output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

fn scratch(name: &str, text: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn classify_reports_schema_and_verdict() {
    let out = leviflat(&["classify", &fixture("brunella"), "--point", "0,0"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "classify");
    assert_eq!(r["classification"], "nondegenerate_branched");
    assert_eq!(r["d"], 2);
    assert_eq!(r["levi_flat"]["verdict"], true);
    assert!(r["timing"]["elapsed_ms"].is_number());
}

#[test]
fn sphere_is_not_levi_flat() {
    let out = leviflat(&["classify", &fixture("sphere"), "--point", "1,0"], None);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert_eq!(r["levi_flat"]["verdict"], false);
}

#[test]
fn malformed_input_exits_2_with_position() {
    let bad = scratch("bad.lf", "z1*~z1 - (z2\n");
    let out = leviflat(&["classify", &bad, "--point", "0,0"], None);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert!(r["error"]["line"].is_number() && r["error"]["column"].is_number(), "{r}");
}

#[test]
fn non_hermitian_input_exits_2() {
    let bad = scratch("nonreal.lf", "z1 + i*z2\n");
    let out = leviflat(&["classify", &bad, "--point", "0,0"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn off_hypersurface_point_exits_2() {
    let out = leviflat(&["classify", &fixture("cone"), "--point", "1,0"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_tolerance_and_seed_exit_2() {
    let out = leviflat(&["classify", &fixture("cone"), "--point", "0,0", "--tol", "bogus=1"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = leviflat(&["classify", &fixture("cone"), "--point", "0,0"], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn integral_verify_rejects_wrong_integral() {
    let out = leviflat(&["integral-verify", &fixture("imz1z2"), "--point", "0,0", "--h", "z1+z2"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["check"]["holds"], false);
}

#[test]
fn out_and_out_dir_write_files() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("hull_artifacts");
    let _ = std::fs::remove_dir_all(&dir);
    let json = dir.join("report.json");
    let out = leviflat(
        &[
            "hull",
            &fixture("circle"),
            "--point",
            "0,0",
            "--h",
            "z1",
            "--q",
            "3,0",
            "--radius",
            "2",
            "--out-dir",
            dir.to_str().unwrap(),
            "--out",
            json.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(r["escape_summary"]["certificates"], 1);
    let image = std::fs::read_to_string(dir.join("image.csv")).unwrap();
    assert!(image.starts_with("re_f,im_f,tag\n") && image.lines().count() > 100);
    assert!(dir.join("paths.csv").exists());
}

fn strip(out: &Output) -> Value {
    leviflat::cli::strip_timing(report(out))
}

#[test]
fn seeded_runs_are_reproducible() {
    let args = ["hull", &fixture("imz1z2"), "--point", "0,0", "--h", "z1*z2", "--random", "10", "--window", "2"];
    let a = leviflat(&args, Some("0"));
    let b = leviflat(&args, Some("0"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a)["seed"], 0);
    let c = leviflat(&args, Some("7"));
    assert_eq!(strip(&c)["seed"], 7);
    assert_ne!(strip(&a)["certificates"], strip(&c)["certificates"]);
    // the flag wins over the environment
    let d = leviflat(&[&args[..], &["--seed", "0"]].concat(), Some("7"));
    assert_eq!(strip(&a), strip(&d));
}

#[test]
fn wedge_discs_need_the_branched_fixture() {
    let out = leviflat(&["discs", &fixture("cone"), "--brunella-wedge"], None);
    assert_eq!(out.status.code(), Some(2));
}
