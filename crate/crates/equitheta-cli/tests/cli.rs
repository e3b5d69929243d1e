//! End-to-end runs of the binary: every subcommand, the exit-code
//! contract, config-file merging, report determinism, and atomic
//! output.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_equitheta"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({}): {}",
            e,
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process not killed by signal")
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("equitheta-cli-{}-{}", std::process::id(), name));
    p
}

#[test]
fn theta_worked_example_json() {
    let out = run(&["theta", "--q", "3", "--m", "t", "--s0", "inf,t", "--t0", "t+1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["config"]["model"]["kind"], "carlitz");
    assert_eq!(v["config"]["model"]["m"], "t");
    assert_eq!(v["theta"]["stabilization_degree"], 1);
    let coeffs = v["theta"]["body"]["polynomial"].as_array().expect("polynomial body");
    assert_eq!(coeffs.len(), 2);
    assert_eq!(coeffs[0], serde_json::json!({"1": "1"}));
    assert_eq!(coeffs[1], serde_json::json!({"1": "-2", "2": "1"}));
}

#[test]
fn theta_text_format_lists_coefficients() {
    let out = run(&[
        "theta", "--q", "3", "--m", "t", "--s0", "inf,t", "--t0", "t+1", "--format", "text",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("stabilized at degree 1"), "{}", text);
    assert!(text.contains("u^0: {1: 1}"), "{}", text);
    assert!(text.contains("u^1: {1: -2, 2: 1}"), "{}", text);
}

#[test]
fn theta_missing_infinite_place_is_a_config_error() {
    let out = run(&["theta", "--q", "3", "--m", "t", "--s0", "t", "--t0", "t+1"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("configuration error"));
}

#[test]
fn theta_forced_small_window_is_a_stabilization_error() {
    let out = run(&[
        "theta", "--q", "3", "--m", "t^2", "--s0", "inf,t", "--t0", "t+1", "--dmax", "2",
        "--guard", "1",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("stabilize"));
}

#[test]
fn theta_per_character_body_when_t0_empty() {
    let out = run(&["theta", "--q", "3", "--m", "t", "--s0", "inf,t"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!(v["theta"]["body"]["per_character"].is_array());
}

#[test]
fn enum_cap_env_is_honored_and_validated() {
    let out = bin()
        .args(["theta", "--q", "3", "--m", "t", "--s0", "inf,t", "--t0", "t+1"])
        .env("EQUITHETA_ENUM_CAP", "3")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));

    let out = bin()
        .args(["theta", "--q", "3", "--m", "t", "--s0", "inf,t", "--t0", "t+1"])
        .env("EQUITHETA_ENUM_CAP", "banana")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("EQUITHETA_ENUM_CAP"));
}

#[test]
fn verify_carlitz_passes_and_reports_all_checks() {
    let out = run(&[
        "verify", "--q", "3", "--m", "t", "--s0", "inf,t", "--t0", "t+1", "--n", "2..3",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["all_pass"], true);
    let checks = v["checks"].as_array().expect("checks array");
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    for want in [
        "twist_matches_special[n=2]",
        "twist_matches_special[n=3]",
        "special_value_unit_mod_p4[n=2]",
        "t0_independence[n=2]",
        "character_compatibility",
    ] {
        assert!(names.contains(&want), "missing {} in {:?}", want, names);
    }
    assert!(names.iter().any(|n| n.starts_with("euler_factor[")));
    assert!(names.iter().any(|n| n.starts_with("weil[")));
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn verify_constant_field_model() {
    let out = run(&["verify", "--q", "2", "--r", "2", "--s0", "inf,t", "--t0", "t+1", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["config"]["model"]["kind"], "constant");
}

#[test]
fn verify_corrupted_frobenius_fails_the_euler_check() {
    let out = run(&[
        "verify", "--q", "3", "--m", "t", "--s0", "inf,t", "--t0", "t+1", "--n", "2",
        "--corrupt-frobenius",
    ]);
    assert_eq!(code(&out), 3);
    let v = stdout_json(&out);
    assert_eq!(v["all_pass"], false);
    let euler = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"].as_str().unwrap().starts_with("euler_factor["))
        .expect("euler check present");
    assert_eq!(euler["pass"], false);
}

#[test]
fn fitlab_is_deterministic_and_complete() {
    let p1 = tmp_path("fitlab-a.json");
    let p2 = tmp_path("fitlab-b.json");
    for p in [&p1, &p2] {
        let out = run(&["fitlab", "--seed", "42", "--n", "25", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let b1 = std::fs::read(&p1).expect("report written");
    let b2 = std::fs::read(&p2).expect("report written");
    assert_eq!(b1, b2, "fixed seed must give byte-identical reports");
    let v: Value = serde_json::from_slice(&b1).expect("report is JSON");
    assert_eq!(v["report"]["all_pass"], true);
    assert_eq!(v["report"]["records"].as_array().unwrap().len(), 25 * 9);
    std::fs::remove_file(&p1).ok();
    std::fs::remove_file(&p2).ok();
}

#[test]
fn fitlab_without_seed_is_a_config_error() {
    let out = run(&["fitlab", "--n", "5"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
}

#[test]
fn fitlab_zero_instances_passes_vacuously_with_a_warning() {
    let out = run(&["fitlab", "--seed", "7", "--n", "0"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("vacuous"));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["all_pass"], true);
    assert_eq!(v["report"]["records"].as_array().unwrap().len(), 0);
}

#[test]
fn k_report_worked_example() {
    let out = run(&[
        "k-report", "--q", "3", "--m", "t", "--s0", "inf,t", "--t0", "t+1;t+2", "--n", "2",
        "--ell", "2", "--k", "3",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let rep = &v["reports"][0];
    assert_eq!(rep["n"], 2);
    let entries = rep["report"]["entries"].as_array().expect("entries");
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0]["ell"], 2);
    assert_eq!(entries[0]["status"], "predicted");
    assert_eq!(
        entries[0]["theta"],
        serde_json::json!({"numerator": {"1": "40", "2": "-24"}, "denominator": "64"})
    );
    assert_eq!(entries[1]["ell"], 3);
    assert_eq!(entries[1]["status"], "unit");
    let pred = &rep["predictions"][0];
    assert_eq!(pred["checks"]["witnesses_agree"], true);
    assert_eq!(pred["checks"]["integral"], true);
    assert_eq!(pred["fit_h2"], entries[0]["fit_even"]);
}

#[test]
fn k_report_even_ideal_matches_the_library() {
    let out = run(&[
        "k-report", "--q", "3", "--m", "t", "--s0", "inf,t", "--t0", "t+1;t+2", "--n", "2",
        "--ell", "2", "--k", "3",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    use equitheta::cohomcheck::{predict_h2, prediction_to_json};
    use equitheta::ffq::{poly_from_indices, FqCtx, Place};
    use equitheta::lfun::ExtensionModel;
    let ctx = FqCtx::new(3).unwrap();
    let t = poly_from_indices(&ctx, &[0, 1]);
    let model = ExtensionModel::carlitz(3, &t).unwrap();
    let s0 = vec![Place::Infinity, Place::Finite(t)];
    let w1 = vec![Place::Finite(poly_from_indices(&ctx, &[1, 1]))];
    let w2 = vec![Place::Finite(poly_from_indices(&ctx, &[2, 1]))];
    let pred = predict_h2(&model, &s0, 2, 2, 3, &[w1, w2]).unwrap();
    let expected = prediction_to_json(&pred);
    assert_eq!(v["reports"][0]["predictions"][0], expected);
}

#[test]
fn k_report_needs_two_witness_sets() {
    let out = run(&["k-report", "--q", "3", "--m", "t", "--s0", "inf,t", "--t0", "t+1"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("witness"));
}

#[test]
fn k_report_affine_line_predicts_unit_ideals() {
    let out = run(&[
        "k-report", "--q", "3", "--r", "1", "--s0", "inf", "--t0", "t;t+1", "--n", "2",
        "--ell", "2,5", "--k", "2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    for pred in v["reports"][0]["predictions"].as_array().unwrap() {
        let fit = pred["fit_h2"].as_array().unwrap();
        assert_eq!(fit.len(), 1);
        assert_eq!(fit[0], serde_json::json!({"1": "1"}));
    }
}

#[test]
fn config_file_merges_and_flags_win() {
    let cfg = tmp_path("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"kind": "carlitz", "q": 3, "m": "t", "s0": ["inf", "t"], "t0": ["t+1"], "n": "2..3"}"#,
    )
    .unwrap();
    let out = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["config"]["n"], serde_json::json!([2, 3]));

    let out = run(&["verify", "--config", cfg.to_str().unwrap(), "--n", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["config"]["n"], serde_json::json!([2, 2]));
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn config_file_with_witness_sets_and_coefficient_places() {
    let cfg = tmp_path("cfg-witness.json");
    std::fs::write(
        &cfg,
        r#"{"q": 3, "m": [0, 1], "s0": ["inf", [0, 1]],
            "witnesses": [[[1, 1]], [[2, 1]]], "n": 2, "ell": 2, "k": 3}"#,
    )
    .unwrap();
    let out = run(&["k-report", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(
        v["config"]["witnesses"],
        serde_json::json!([["t+1"], ["t+2"]])
    );
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn unknown_config_field_is_rejected() {
    let cfg = tmp_path("cfg-bad.json");
    std::fs::write(&cfg, r#"{"q": 3, "bogus": 1}"#).unwrap();
    let out = run(&["theta", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn bad_flag_and_help_exit_codes() {
    let out = run(&["theta", "--no-such-flag"]);
    assert_eq!(code(&out), 1);
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let out = run(&["fitlab", "--help"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn report_lands_atomically_at_out_path() {
    let p = tmp_path("theta-out.json");
    let out = run(&[
        "theta", "--q", "3", "--m", "t", "--s0", "inf,t", "--t0", "t+1", "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&p).expect("file written")).unwrap();
    assert_eq!(v["theta"]["stabilization_degree"], 1);
    let dir = p.parent().unwrap();
    let leftovers: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| {
            n.starts_with(p.file_name().unwrap().to_string_lossy().as_ref()) && n.contains(".tmp.")
        })
        .collect();
    assert!(leftovers.is_empty(), "temp files left behind: {:?}", leftovers);
    std::fs::remove_file(&p).ok();
}
