use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use encfault_core::{ambiguity_threshold, encode_faulty, parse_matrix, BitVec, ErasureMatrix, Limits};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_encfault"))
}

fn matrix(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../matrices").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("encfault-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn analyze_repetition_code() {
    let v = json(&["analyze", matrix("rep4.txt").to_str().unwrap(), "--output", "json"]);
    assert_eq!(v["eta_max"], 3);
    assert_eq!(v["k"], 1);
    assert_eq!(v["n"], 4);
    assert_eq!(v["d_star"], 1);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["closest_pair"]["witness"]["erasures"], 4);
}

fn positions(v: &Value) -> Vec<(usize, usize)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_u64().unwrap() as usize, p[1].as_u64().unwrap() as usize))
        .collect()
}

#[test]
fn analyze_k2_code_reports_a_working_witness() {
    let path = matrix("k2n3.txt");
    let v = json(&["analyze", path.to_str().unwrap(), "--output", "json"]);
    assert_eq!(v["eta_max"], 0);
    let pair = &v["closest_pair"];
    assert_eq!(pair["eta0"], 1);
    assert_eq!(pair["witness"]["erasures"], 1);

    let g = parse_matrix(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let m1 = BitVec::parse(pair["m"].as_str().unwrap()).unwrap();
    let m2 = BitVec::parse(pair["m_prime"].as_str().unwrap()).unwrap();
    let e1 = ErasureMatrix::from_positions(&g, &positions(&pair["witness"]["e1"])).unwrap();
    let e2 = ErasureMatrix::from_positions(&g, &positions(&pair["witness"]["e2"])).unwrap();
    let r = pair["witness"]["r"].as_str().unwrap();
    assert_eq!(encode_faulty(&m1, &g, &e1).unwrap().to_string(), r);
    assert_eq!(encode_faulty(&m2, &g, &e2).unwrap().to_string(), r);

    // The tied pair 10 / 11 confuses on 100 with one erasure each.
    let e = |ps: &[(usize, usize)]| ErasureMatrix::from_positions(&g, ps).unwrap();
    let r10 = encode_faulty(&BitVec::parse("10").unwrap(), &g, &e(&[(0, 2)])).unwrap();
    let r11 = encode_faulty(&BitVec::parse("11").unwrap(), &g, &e(&[(1, 1)])).unwrap();
    assert_eq!(r10.to_string(), "100");
    assert_eq!(r11, r10);
}

#[test]
fn malformed_and_empty_files_exit_with_2() {
    let bad = scratch("bad.txt", "2 3\n1x1\n011\n");
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2, column 2"), "{err}");

    let empty = scratch("empty.txt", "");
    assert_eq!(run(&["analyze", empty.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "/nonexistent/matrix.txt"]).status.code(), Some(2));
    let p = matrix("k2n3.txt");
    assert_eq!(run(&["simulate", p.to_str().unwrap(), "--p", "1.5"]).status.code(), Some(2));
}

#[test]
fn capacity_limits_exit_with_3() {
    let p = matrix("hamming74.txt");
    let out = run(&["analyze", p.to_str().unwrap(), "--max-message-bits", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["oracle", p.to_str().unwrap(), "--max-erasure-ones", "8"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn simulate_is_reproducible() {
    let p = matrix("k2n3.txt");
    let args = ["simulate", p.to_str().unwrap(), "--p", "0.2", "--trials", "20000", "--seed", "11", "--output", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(v["trials"], 20000);
    assert_eq!(v["rng"], "chacha8-stream-v1");

    let mut other = args;
    other[7] = "12";
    assert_ne!(run(&other).stdout, a.stdout);
}

#[test]
fn simulate_with_p_zero_never_errs() {
    for name in ["k2n3.txt", "rep4.txt", "hamming74.txt"] {
        let p = matrix(name);
        let v = json(&["simulate", p.to_str().unwrap(), "--p", "0", "--trials", "5000", "--output", "json"]);
        assert_eq!(v["errors"], 0);
        assert_eq!(v["error_rate"], 0.0);
    }
}

#[test]
fn simulate_csv_has_fixed_columns() {
    let p = matrix("rep4.txt");
    let out = run(&["simulate", p.to_str().unwrap(), "--p", "0.3", "--trials", "1000", "--output", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "trials,errors,error_rate,ci_low,ci_high,seed,p,decoder,policy");
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1].split(',').count(), 9);
}

#[test]
fn simulate_decoder_and_policy_flags() {
    let p = matrix("k2n3.txt");
    let v = json(&[
        "simulate", p.to_str().unwrap(), "--p", "0.2", "--trials", "4000", "--decoder", "worstcase",
        "--ties", "uniform", "--policy", "fixed", "--message", "11", "--output", "json",
    ]);
    assert_eq!(v["decoder"], "worstcase:0+uniform-ties");
    assert_eq!(v["policy"], "fixed:11");
    let out = run(&["simulate", p.to_str().unwrap(), "--p", "0.2", "--policy", "fixed", "--message", "111"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn insertion_channel_wrecks_wide_random_codes() {
    let out = run(&["gen", "--k", "12", "--n", "24", "--seed", "3"]);
    let g = scratch("wide.txt", &String::from_utf8(out.stdout).unwrap());
    let v = json(&[
        "simulate", g.to_str().unwrap(), "--channel", "insertion", "--p0", "0.05", "--p1", "0.05",
        "--trials", "3000", "--output", "json",
    ]);
    assert_eq!(v["channel"]["model"], "insertion");
    assert!(v["error_rate"].as_f64().unwrap() > 0.5, "{v}");
}

#[test]
fn gen_is_seeded_and_honors_density() {
    let a = run(&["gen", "--k", "4", "--n", "9", "--seed", "7"]);
    let b = run(&["gen", "--k", "4", "--n", "9", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let g = parse_matrix(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert_eq!((g.k(), g.n()), (4, 9));

    let full = run(&["gen", "--k", "3", "--n", "5", "--density", "1.0"]);
    assert_eq!(String::from_utf8(full.stdout).unwrap(), "3 5\n11111\n11111\n11111\n");

    let out = std::env::temp_dir().join(format!("encfault-gen-{}.txt", std::process::id()));
    let v = json(&["gen", "--k", "2", "--n", "5", "--seed", "1", "--out", out.to_str().unwrap(), "--output", "json"]);
    assert_eq!(v["seed"], 1);
    let back = parse_matrix(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(back.bits().to_strings(), vec![v["rows"][0].as_str().unwrap(), v["rows"][1].as_str().unwrap()]);
}

#[test]
fn search_reaches_the_split_repetition_baseline() {
    let baseline = parse_matrix("2 6\n111000\n000111\n").unwrap();
    let want = ambiguity_threshold(&baseline, &Limits::default()).unwrap();
    assert_eq!(want, 2);
    let v = json(&["search", "--k", "2", "--n", "6", "--samples", "500", "--seed", "4", "--p", "0.1", "--output", "json"]);
    let best = &v["best_eta_max"];
    assert!(best["eta_max"].as_i64().unwrap() >= want, "{best}");
    let rows: Vec<&str> = best["rows"].as_array().unwrap().iter().map(|r| r.as_str().unwrap()).collect();
    let g = parse_matrix(&format!("2 6\n{}\n{}\n", rows[0], rows[1])).unwrap();
    assert_eq!(ambiguity_threshold(&g, &Limits::default()).unwrap(), best["eta_max"].as_i64().unwrap());
    assert!(v["best_rate_bound"].is_object());
    assert_eq!(v["seed"], 4);
}

#[test]
fn bound_for_the_repetition_code() {
    let p = matrix("rep4.txt");
    let v = json(&["bound", p.to_str().unwrap(), "--p", "0.1", "--n-list", "8,16", "--output", "json"]);
    for key in ["command", "seed", "k", "n", "rate", "p", "d_star", "pairs", "summary", "pe_curve"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let beta = v["summary"]["beta_max"].as_f64().unwrap();
    assert!((beta - 0.1).abs() < 1e-12);
    let rate = v["summary"]["rate_bound"].as_f64().unwrap();
    assert!((rate - 10f64.log2()).abs() < 1e-9);
    assert_eq!(v["summary"]["eta_max"], 3);
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 2);
    // 0 -> 1 would need ones to appear
    let up = pairs.iter().find(|r| r["m"] == "0").unwrap();
    assert_eq!(up["beta"], 0.0);
    assert_eq!(up["minus_log2_beta"], "inf");
    assert_eq!(v["pe_curve"].as_array().unwrap().len(), 2);

    let out = run(&["bound", p.to_str().unwrap(), "--p", "0.1", "--output", "csv", "--table", "curve", "--n-list", "4,8"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("n,rate,pe_bound,seed"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn bound_with_zero_p_reports_unbounded_rate() {
    let p = matrix("k2n3.txt");
    let v = json(&["bound", p.to_str().unwrap(), "--p", "0", "--output", "json"]);
    assert_eq!(v["summary"]["rate_bound"], "unbounded");
    assert_eq!(v["summary"]["beta_max"], 0.0);
}

#[test]
fn oracle_passes_on_bundled_matrices() {
    for name in ["k2n3.txt", "rep4.txt", "hamming74.txt"] {
        let p = matrix(name);
        let out = run(&["oracle", p.to_str().unwrap(), "--trials", "50000", "--output", "json"]);
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(out.status.code(), Some(0), "{name}: {v}");
        assert_eq!(v["passed"], true);
        assert_eq!(v["checks"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn oracle_flags_the_one_bit_code() {
    // n(n+1)C < 1 at n = 1, so the pairwise bound cannot hold there.
    let g = scratch("one.txt", "1 1\n1\n");
    let out = run(&["oracle", g.to_str().unwrap(), "--trials", "20000", "--output", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["pairwise_vs_bound"]);
}

#[test]
fn every_format_echoes_the_seed() {
    let p = matrix("k2n3.txt");
    let p = p.to_str().unwrap();
    for args in [
        vec!["analyze", p],
        vec!["bound", p, "--p", "0.1"],
        vec!["simulate", p, "--p", "0.1", "--trials", "100"],
        vec!["search", "--k", "2", "--n", "4", "--samples", "5"],
        vec!["gen", "--k", "2", "--n", "4"],
    ] {
        for fmt in ["text", "csv", "json"] {
            let mut a = args.clone();
            a.extend(["--seed", "987654321", "--output", fmt]);
            let out = run(&a);
            assert!(out.status.success(), "{a:?}");
            let both = format!("{}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));
            assert!(both.contains("987654321"), "{a:?}");
        }
    }
}
