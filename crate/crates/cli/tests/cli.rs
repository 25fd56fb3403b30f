use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dephasing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dephasing"))
        .args(args)
        .env_remove("DEPHASING_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = dephasing(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Table {
    header: Vec<String>,
    rows: Vec<HashMap<String, String>>,
}

impl Table {
    fn read(path: &Path) -> Self {
        let mut r = csv::Reader::from_path(path).unwrap();
        let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| header.iter().cloned().zip(rec.unwrap().iter().map(String::from)).collect())
            .collect();
        Table { header, rows }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        self.rows.iter().map(|r| r[name].parse().unwrap()).collect()
    }
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn decoherence_writes_header_and_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    ok(&[
        "decoherence",
        "--eta",
        "1",
        "--chi",
        "0.8",
        "--kappa",
        "1",
        "--a0",
        "0.5",
        "--tmax",
        "20",
        "--points",
        "400",
        "--out",
        path_arg(&out),
    ]);
    let t = Table::read(&out);
    assert_eq!(t.header, ["t", "abs_D", "re_D", "im_D", "phi", "gamma"]);
    assert_eq!(t.rows.len(), 400);
    let times = t.col("t");
    assert_eq!(times[0], 0.0);
    assert_eq!(*times.last().unwrap(), 20.0);
    assert_eq!(t.col("abs_D")[0], 1.0);
    // 17 significant digits
    let first = &t.rows[1]["abs_D"];
    assert_eq!(first.split('e').next().unwrap().replace('.', "").len(), 17, "{first}");
}

#[test]
fn zero_coupling_keeps_full_coherence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    ok(&["decoherence", "--chi", "0", "--kappa", "2", "--a0", "0.3", "--out", path_arg(&out)]);
    assert!(Table::read(&out).col("abs_D").iter().all(|&d| d == 1.0));
}

#[test]
fn stationary_noise_gives_real_coherence_with_a_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    ok(&[
        "decoherence",
        "--a0",
        "0",
        "--chi",
        "3",
        "--kappa",
        "1",
        "--tmax",
        "5",
        "--points",
        "20001",
        "--out",
        path_arg(&out),
    ]);
    let t = Table::read(&out);
    assert!(t.col("im_D").iter().all(|&x| x == 0.0));
    assert!(min(&t.col("abs_D")) < 1e-3);
}

#[test]
fn memoryless_and_negative_a0_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    ok(&["decoherence", "--chi", "3", "--kappa", "inf", "--a0", "-0.5", "--out", path_arg(&out)]);
    let t = Table::read(&out);
    assert!(t.rows.iter().all(|r| !r["phi"].is_empty() && !r["gamma"].is_empty()));
}

#[test]
fn identical_flags_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let mut args: Vec<&str> = extra.to_vec();
        args.extend(["--out", path_arg(&out)]);
        ok(&args);
        fs::read(&out).unwrap()
    };
    let dec = ["decoherence", "--chi", "3", "--kappa", "0.7", "--a0", "0.4"];
    assert_eq!(run("a.csv", &dec), run("b.csv", &dec));
    let map = ["nm-map", "--chi", "3", "--kappa-points", "3", "--a0-points", "5", "--qubits", "2"];
    assert_eq!(run("c.csv", &map), run("d.csv", &map));
}

fn nm_map(dir: &Path, name: &str, qubits: &str) -> Table {
    let out = dir.join(name);
    ok(&[
        "nm-map",
        "--chi",
        "3",
        "--kappa-min",
        "0.3",
        "--kappa-max",
        "3",
        "--kappa-points",
        "3",
        "--a0-points",
        "21",
        "--qubits",
        qubits,
        "--include-memoryless",
        "--out",
        path_arg(&out),
    ]);
    Table::read(&out)
}

#[test]
fn nm_map_is_symmetric_in_a0_and_two_qubits_stay_below_twice_single() {
    let dir = tempfile::tempdir().unwrap();
    let single = nm_map(dir.path(), "s.csv", "1");
    let two = nm_map(dir.path(), "t.csv", "2");
    assert_eq!(single.header, ["kappa", "a0", "N", "N_scaled"]);
    assert_eq!(single.rows.len(), 4 * 21);
    assert_eq!(single.rows.last().unwrap()["kappa"], "inf");

    for table in [&single, &two] {
        let n = table.col("N");
        let scaled = table.col("N_scaled");
        for (row, (&x, &s)) in n.iter().zip(&scaled).enumerate() {
            assert!((s - x / (x + 1.0)).abs() < 1e-15);
            let mirror = row - row % 21 + 20 - row % 21;
            assert!((x - n[mirror]).abs() < 1e-6, "row {row}");
        }
    }
    for (ns, nt) in single.col("N").iter().zip(two.col("N")) {
        if *ns > 1e-8 {
            assert!(nt < 2.0 * ns, "N_T = {nt}, N_S = {ns}");
        }
    }
}

#[test]
fn weak_coupling_non_markovianity_vanishes_at_large_kappa() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    ok(&[
        "nm-map",
        "--chi",
        "0.8",
        "--kappa-min",
        "0.1",
        "--kappa-max",
        "100",
        "--kappa-points",
        "4",
        "--a0-points",
        "3",
        "--out",
        path_arg(&out),
    ]);
    let t = Table::read(&out);
    let n = t.col("N");
    assert!(n[..3].iter().all(|&x| x > 0.0));
    assert!(n[9..].iter().all(|&x| x < 1e-12));
}

fn entanglement(dir: &Path, name: &str, args: &[&str]) -> (Table, Value) {
    let out = dir.join(name);
    let mut all = vec!["entanglement"];
    all.extend(args);
    all.extend(["--out", path_arg(&out)]);
    ok(&all);
    let side: Value = serde_json::from_str(&fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    (Table::read(&out), side)
}

#[test]
fn entanglement_columns_respect_physical_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let tsirelson = 2.0 * 2f64.sqrt();
    for (i, family) in [
        vec!["--family", "cbs", "--c", "0.3", "--psi-sign", "minus"],
        vec!["--family", "ews", "--r", "0.7", "--alpha", "0.6", "--beta-phase", "1.1", "--werner", "phi"],
    ]
    .into_iter()
    .enumerate()
    {
        let mut args = vec!["--chi", "3", "--kappa", "0.5", "--a0", "0.5"];
        args.extend(family);
        let (t, _) = entanglement(dir.path(), &format!("e{i}.csv"), &args);
        assert_eq!(t.header, ["t", "abs_D", "concurrence", "bell", "paper_variant_concurrence", "paper_variant_bell"]);
        assert!(max(&t.col("bell")) <= tsirelson + 1e-9);
        let c = t.col("concurrence");
        assert!(min(&c) >= 0.0 && max(&c) <= 1.0);
    }
}

#[test]
fn werner_state_starts_maximally_entangled() {
    let dir = tempfile::tempdir().unwrap();
    let (t, side) =
        entanglement(dir.path(), "w.csv", &["--chi", "3", "--kappa", "1", "--a0", "0.5", "--family", "ews"]);
    assert!((t.col("concurrence")[0] - 1.0).abs() < 1e-12);
    assert!((t.col("bell")[0] - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(side["thresholds"]["entanglement_abs_d"], 0.0);
    assert_eq!(side["family"]["name"], "ews");
    assert_eq!(side["noise"]["chi"], 3.0);
    assert_eq!(side["family_constants"]["classical_concurrence_threshold"], 0.0);
}

#[test]
fn sidecar_records_thresholds_and_never_markers() {
    let dir = tempfile::tempdir().unwrap();
    let (t, side) = entanglement(
        dir.path(),
        "c.csv",
        &["--chi", "3", "--kappa", "inf", "--a0", "0", "--family", "cbs", "--c", "0"],
    );
    assert!(t.col("concurrence").iter().all(|&c| c == 0.0));
    assert_eq!(side["thresholds"]["entanglement_abs_d"], "never");
    assert_eq!(side["thresholds"]["nonlocality_abs_d"], "never");
    assert_eq!(side["noise"]["kappa"], "inf");
    assert_eq!(side["grid"]["points"], 401);

    let (_, side) = entanglement(
        dir.path(),
        "h.csv",
        &["--chi", "1", "--kappa", "1", "--a0", "0", "--family", "cbs", "--c", "0.6"],
    );
    let th = side["thresholds"]["entanglement_abs_d"].as_f64().unwrap();
    assert!((th - 0.5).abs() < 1e-12);
    let variant = side["paper_variant_thresholds"]["nonlocality_abs_d"].as_f64().unwrap();
    assert_eq!(variant, 0.0);
    assert!(side["thresholds"]["nonlocality_abs_d"].as_f64().unwrap() > 0.0);
}

#[test]
fn composite_bell_revivals_follow_stationarity() {
    let dir = tempfile::tempdir().unwrap();
    let trough = |a0: &str, name: &str| {
        let args = ["--chi", "3", "--kappa", "1", "--a0", a0, "--family", "cbs", "--tmax", "3", "--points", "30001"];
        let (t, _) = entanglement(dir.path(), name, &args);
        min(&t.col("concurrence"))
    };
    assert!(trough("0", "z.csv") < 1e-6);
    assert!(trough("0.5", "n.csv") > 1e-4);
}

#[test]
fn family_flags_must_match_the_family() {
    let out = dephasing(&["entanglement", "--chi", "1", "--kappa", "1", "--a0", "0", "--family", "cbs", "--r", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--r"));
    let out = dephasing(&["entanglement", "--chi", "1", "--kappa", "1", "--a0", "0", "--family", "ews", "--c", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selfcheck_passes_and_is_reproducible() {
    let a = ok(&["selfcheck", "--seed", "7"]);
    let b = ok(&["selfcheck", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS ")).count(), 7);
    assert!(!text.contains("FAIL"));
}

#[test]
fn selfcheck_detects_a_perturbed_residue() {
    let out = dephasing(&["selfcheck", "--perturb-residue", "1e-3"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("FAIL residue-identities")), "{text}");
}

#[test]
fn exit_codes_separate_validation_and_io_failures() {
    let code = |args: &[&str]| dephasing(args).status.code();
    assert_eq!(code(&["decoherence", "--chi", "1", "--kappa", "1"]), Some(2));
    assert_eq!(code(&["decoherence", "--chi", "1", "--kappa", "-1", "--a0", "0"]), Some(2));
    assert_eq!(code(&["decoherence", "--chi", "1", "--kappa", "1", "--a0", "1.5"]), Some(2));
    assert_eq!(code(&["decoherence", "--chi", "1", "--kappa", "1", "--a0", "0", "--points", "1"]), Some(2));
    assert_eq!(code(&["decoherence", "--chi", "1", "--kappa", "1", "--a0", "0", "--tmax", "0"]), Some(2));
    assert_eq!(code(&["nm-map", "--chi", "1", "--kappa-points", "1"]), Some(2));
    assert_eq!(code(&["preset", "fig9a"]), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let blocked = dir.path().join("missing").join("x.csv");
    assert_eq!(code(&["decoherence", "--chi", "1", "--kappa", "1", "--a0", "0", "--out", path_arg(&blocked)]), Some(4));
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dephasing"))
        .args(["decoherence", "--chi", "1", "--kappa", "1", "--a0", "0", "--points", "3"])
        .env("DEPHASING_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(Table::read(&dir.path().join("decoherence.csv")).rows.len(), 3);

    let out = Command::new(env!("CARGO_BIN_EXE_dephasing"))
        .args(["preset", "fig2a"])
        .env("DEPHASING_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("fig2a.json").exists());
}

#[test]
fn presets_expand_to_captioned_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let d = path_arg(dir.path());
    let manifest = |name: &str| -> Value {
        ok(&["preset", name, "--out-dir", d]);
        serde_json::from_str(&fs::read_to_string(dir.path().join(format!("{name}.json"))).unwrap()).unwrap()
    };

    let m = manifest("fig2b");
    for run in m["runs"].as_array().unwrap() {
        assert_eq!(run["chi"], 3.0);
        assert_eq!(run["kappa"], 1.0);
    }
    let m = manifest("fig3a");
    let runs = m["runs"].as_array().unwrap();
    assert!(runs.iter().all(|r| r["chi"] == 0.8 && r["a0"] == 0.5));
    assert!(runs.iter().any(|r| r["kappa"] == "inf"));

    let m = manifest("fig1b");
    let map = Table::read(&dir.path().join(m["runs"][0]["file"].as_str().unwrap()));
    assert_eq!(map.rows.last().unwrap()["kappa"], "inf");

    let a = manifest("fig7a");
    let b = manifest("fig7b");
    let runs = a["runs"].as_array().unwrap();
    assert_eq!(runs.len(), b["runs"].as_array().unwrap().len());
    let chis: Vec<f64> = runs.iter().map(|r| r["chi"].as_f64().unwrap()).collect();
    assert!(chis.contains(&0.8) && chis.contains(&3.0));
    for (ra, rb) in runs.iter().zip(b["runs"].as_array().unwrap()) {
        let fa = fs::read(dir.path().join(ra["file"].as_str().unwrap())).unwrap();
        let fb = fs::read(dir.path().join(rb["file"].as_str().unwrap())).unwrap();
        assert_eq!(fa, fb);
    }
    let side = ews_sidecar(dir.path(), runs[0]["file"].as_str().unwrap());
    assert_eq!(side["family"]["r"], 1.0);
    assert_eq!(side["noise"]["kappa"], 1.0);
}

fn ews_sidecar(dir: &Path, csv: &str) -> Value {
    let path = dir.join(csv).with_extension("json");
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}
