use std::path::Path;
use std::process::{Command, Output};

use mwforge::io;
use mwforge::synthesis;

fn mwforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwforge"))
        .args(args)
        .env_remove("MWFORGE_TOL")
        .output()
        .expect("binary runs")
}

fn path(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn read(p: &str) -> String {
    std::fs::read_to_string(Path::new(p)).unwrap()
}

#[test]
fn synth_d4_is_reversed_daubechies() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(&dir, "d4.json");
    let o = mwforge(&["synth", "d4", "-o", &out]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("sum rules of order 2"));
    let pair = io::parse_mask_json(&read(&out)).unwrap();
    let s3 = 3f64.sqrt();
    let k = 4.0 * 2f64.sqrt();
    let expect = [(1.0 - s3) / k, (3.0 - s3) / k, (3.0 + s3) / k, (1.0 + s3) / k];
    for (c, e) in pair.p().coeffs().iter().zip(expect) {
        assert!((c[(0, 0)].re - e).abs() < 1e-12);
    }
}

#[test]
fn synth_scalar_flags_give_shifted_haar() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(&dir, "s.json");
    assert!(mwforge(&["synth", "scalar", "--b", "1", "--sign", "+", "-o", &out])
        .status
        .success());
    let pair = io::parse_mask_json(&read(&out)).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let p: Vec<f64> = pair.p().coeffs().iter().map(|c| c[(0, 0)].re).collect();
    let expect = [0.0, h, h, 0.0];
    assert!(p.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-15), "{p:?}");
}

#[test]
fn synth_chui_lian_support() {
    let o = mwforge(&["synth", "chui-lian"]);
    assert!(o.status.success());
    let pair = io::parse_mask_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(pair.p().coeff(3).iter().all(|z| z.norm() == 0.0));
    assert!(pair.q().coeff(3).iter().all(|z| z.norm() == 0.0));
}

#[test]
fn synth_errors_exit_2() {
    assert_eq!(mwforge(&["synth", "d8"]).status.code(), Some(2));
    assert_eq!(mwforge(&["synth", "scalar", "--b", "1.5"]).status.code(), Some(2));
    assert_eq!(mwforge(&["synth", "fullrank-a3", "--b", "-2"]).status.code(), Some(2));
    assert_eq!(mwforge(&["synth", "d4", "--b", "0.3"]).status.code(), Some(2));
}

#[test]
fn verify_pass_and_corrupted() {
    let dir = tempfile::tempdir().unwrap();
    let good = path(&dir, "d4.json");
    assert!(mwforge(&["synth", "d4", "-o", &good]).status.success());
    let o = mwforge(&["verify", &good, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["sum_rule_order_achieved"], 2);

    let mut doc: serde_json::Value = serde_json::from_str(&read(&good)).unwrap();
    let x = doc["p"][1][0][0][0].as_f64().unwrap();
    doc["p"][1][0][0][0] = serde_json::json!(x + 0.01);
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let o = mwforge(&["verify", &bad, "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["pass"], false);
    assert!(report["qmf_residual"].as_f64().unwrap() > 1e-3);
}

#[test]
fn verify_haar_and_text_report() {
    let dir = tempfile::tempdir().unwrap();
    let haar = path(&dir, "haar.json");
    assert!(mwforge(&["synth", "haar", "-o", &haar]).status.success());
    let o = mwforge(&["verify", &haar]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("PASS") && text.contains("qmf_residual"));
}

#[test]
fn verify_is_deterministic_and_honours_env_tol() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(&dir, "cl.json");
    assert!(mwforge(&["synth", "chui-lian", "-o", &m]).status.success());
    let a = mwforge(&["verify", &m, "--json", "--seed", "7"]).stdout;
    let b = mwforge(&["verify", &m, "--json", "--seed", "7"]).stdout;
    assert_eq!(a, b);
    let o = Command::new(env!("CARGO_BIN_EXE_mwforge"))
        .args(["verify", &m, "--json"])
        .env("MWFORGE_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_with_explicit_vector() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(&dir, "lv.json");
    assert!(mwforge(&["synth", "lebrun-vetterli", "-o", &m]).status.success());
    let o = mwforge(&["verify", &m, "--json", "--v", "1,1"]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["sum_rule_order_achieved"], 1);
    assert_eq!(r["vanishing_moment_order_achieved"], 1);
}

#[test]
fn realize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (fam, n) in [("haar", 1), ("d6", 2)] {
        let m = path(&dir, "m.json");
        let r = path(&dir, "r.json");
        assert!(mwforge(&["synth", fam, "-o", &m]).status.success());
        assert!(mwforge(&["realize", &m, "-o", &r]).status.success());
        let real = io::parse_realization_json(&read(&r)).unwrap();
        assert_eq!(real.degree(), n);
        assert!(mwforge::realization::unitarity_residual(&real.abcd()) < 1e-10);
        let f = mwforge::realization::taylor_masks(&real, 1e-10).unwrap();
        let pair = mwforge::masks::polyphase_split(&f);
        let orig = io::parse_mask_json(&read(&m)).unwrap();
        assert!(pair.max_abs_diff(&orig) < 1e-12);
    }
}

#[test]
fn factor_matches_synth_d6() {
    let a = mwforge(&["factor", "--family", "d6-potapov"]);
    let b = mwforge(&["synth", "d6"]);
    assert!(a.status.success() && b.status.success());
    let pa = io::parse_mask_json(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    let pb = io::parse_mask_json(std::str::from_utf8(&b.stdout).unwrap()).unwrap();
    assert!(pa.max_abs_diff(&pb) < 1e-10);

    let (b1, b2) = synthesis::blaschke_d6_reference();
    let f1 = format!("{b1},-");
    let f2 = format!("{b2},-");
    let c = mwforge(&["factor", "--factor", &f1, "--factor", &f2]);
    assert!(c.status.success());
    let pc = io::parse_mask_json(std::str::from_utf8(&c.stdout).unwrap()).unwrap();
    assert!(pc.max_abs_diff(&pb) < 1e-10);
    assert_eq!(mwforge(&["factor", "--family", "d4"]).status.code(), Some(2));
    assert_eq!(mwforge(&["factor", "--factor", "2,+"]).status.code(), Some(2));
}

#[test]
fn solve_outputs() {
    let o = mwforge(&["solve", "d4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["b"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    let o = mwforge(&["solve", "d6-potapov"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let (r1, r2) = synthesis::blaschke_d6_reference();
    assert!((v["b1"].as_f64().unwrap() - r1).abs() < 1e-10);
    assert!((v["b2"].as_f64().unwrap() - r2).abs() < 1e-10);
    assert_eq!(mwforge(&["solve", "d8"]).status.code(), Some(2));
}

#[test]
fn cascade_haar_indicator() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(&dir, "haar.json");
    let c = path(&dir, "haar.csv");
    assert!(mwforge(&["synth", "haar", "-o", &m]).status.success());
    assert!(mwforge(&["cascade", &m, "--levels", "3", "-o", &c]).status.success());
    let text = read(&c);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,phi_1,psi_1"));
    for (i, line) in lines.enumerate() {
        let phi = line.split(',').nth(1).unwrap();
        let expect = if i < 8 { "1.0;0.0" } else { "0.0;0.0" };
        assert_eq!(phi, expect, "row {i}");
    }
}

#[test]
fn cascade_rejects_broken_sum_rule() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(&dir, "m.json");
    let pair = synthesis::d4().unwrap();
    let scaled = mwforge::masks::MaskPair::new(pair.p().scaled(2.0), pair.q().clone()).unwrap();
    std::fs::write(&m, io::mask_to_json(&scaled)).unwrap();
    assert_eq!(mwforge(&["cascade", &m, "--v", "1"]).status.code(), Some(2));
}

#[test]
fn dwt_idwt_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(&dir, "cl.json");
    let sig = path(&dir, "sig.csv");
    let sub = path(&dir, "sub.csv");
    let back = path(&dir, "back.csv");
    assert!(mwforge(&["synth", "chui-lian", "-o", &m]).status.success());
    let text: String = (0..16).map(|i| format!("{}.5;0,{};-1\n", i, -i)).collect();
    std::fs::write(&sig, &text).unwrap();
    assert!(mwforge(&["dwt", &sig, &m, "-o", &sub]).status.success());
    assert!(read(&sub).starts_with("low_1,low_2,high_1,high_2"));
    assert!(mwforge(&["idwt", &sub, &m, "-o", &back]).status.success());
    let a = io::parse_signal_csv(&text).unwrap();
    let b = io::parse_signal_csv(&read(&back)).unwrap();
    assert!(a.max_abs_diff(&b) < 1e-10);

    std::fs::write(&sig, "1;0\n2;0\n3;0\n").unwrap();
    assert_eq!(mwforge(&["dwt", &sig, &m]).status.code(), Some(2));
}
