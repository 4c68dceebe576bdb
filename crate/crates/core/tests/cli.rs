use std::fs;
use std::path::Path;

use fluxmag::cli::main_with_args;
use fluxmag::cli::scenario::{FIG2, FIG4};

fn run(args: &[&str]) -> i32 {
    let mut full = vec!["fluxmag"];
    full.extend_from_slice(args);
    main_with_args(full)
}

fn data_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "manifest.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_slice(&fs::read(dir.join("manifest.json")).unwrap()).unwrap()
}

fn write_scenario(dir: &Path, text: &str) -> String {
    let p = dir.join("scenario.json");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn pssw_defaults_and_override_echo() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("pssw");
    assert_eq!(run(&["pssw", "--n", "1", "--out", out.to_str().unwrap()]), 0);
    let m = manifest(&out);
    let f = m["summary"]["pssw"]["frequency_GHz"].as_f64().unwrap();
    assert!((f - 3.39).abs() < 0.05, "{f}");
    assert_eq!(m["summary"]["pssw"]["frequency_override_GHz"], 4.57);
    assert_eq!(m["summary"]["pssw"]["convention"], "integer_n");
    let csv = fs::read_to_string(out.join("modes.csv")).unwrap();
    assert!(csv.starts_with("n,k_z_per_m,wavelength_m,frequency_Hz\n"));

    let half = tmp.path().join("half");
    let code = run(&[
        "pssw",
        "--convention",
        "half_integer_k",
        "--mode-freq-override",
        "4.6",
        "--out",
        half.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let m = manifest(&half);
    assert!(m["summary"]["pssw"]["frequency_GHz"].as_f64().unwrap() > f);
    assert_eq!(m["summary"]["pssw"]["frequency_override_GHz"], 4.6);
}

#[test]
fn reproduce_is_byte_identical_at_fixed_threads() {
    let tmp = tempfile::tempdir().unwrap();
    for target in ["fig2", "fig3", "fig4"] {
        let a = tmp.path().join(format!("{target}-a"));
        let b = tmp.path().join(format!("{target}-b"));
        for dir in [&a, &b] {
            assert_eq!(run(&["reproduce", target, "--threads", "2", "--out", dir.to_str().unwrap()]), 0);
        }
        let (fa, fb) = (data_files(&a), data_files(&b));
        assert!(!fa.is_empty());
        assert_eq!(fa, fb, "{target}");
        assert_eq!(manifest(&a)["outputs"], manifest(&b)["outputs"]);
        assert_eq!(manifest(&a)["inputs_sha256"], manifest(&b)["inputs_sha256"]);
    }
}

#[test]
fn fig3_manifest_records_splitting() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("fig3");
    assert_eq!(run(&["reproduce", "fig3", "--out", out.to_str().unwrap()]), 0);
    let rows = manifest(&out)["summary"]["spectrum"].clone();
    assert!(rows[0]["splitting_MHz"].is_null());
    let s = rows[1]["splitting_MHz"].as_f64().unwrap();
    assert!((s - 60.0).abs() < 2.0, "{s}");
    assert!(out.join("spectrum_g0MHz.csv").exists() && out.join("spectrum_g30MHz.csv").exists());
}

#[test]
fn coupling_csv_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("couple");
    assert_eq!(run(&["couple", "--out", out.to_str().unwrap()]), 0);
    let csv = fs::read_to_string(out.join("coupling_near.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "d_um,g_abs_MHz,g_phase_rad,npoints,converged");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first.len(), 5);
    assert_eq!(first[4], "true");
    let slope = manifest(&out)["summary"]["couple"]["coupling_far"]["loglog_slope"].as_f64().unwrap();
    assert!(slope < -2.0 && slope > -3.5);
}

#[test]
fn inductance_matrix_json() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("ind");
    assert_eq!(run(&["inductance", "--out", out.to_str().unwrap()]), 0);
    let m: serde_json::Value = serde_json::from_slice(&fs::read(out.join("inductance.json")).unwrap()).unwrap();
    assert_eq!(m["loops"], serde_json::json!(["q1", "q2", "squid"]));
    assert!(m["henries"][0][0].is_null());
    assert_eq!(m["henries"][0][1], m["henries"][1][0]);
    assert!(m["MHz"][0][2].as_f64().unwrap() > 0.0);
}

#[test]
fn switch_report_keys() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("sw");
    assert_eq!(run(&["switch", "--out", out.to_str().unwrap()]), 0);
    let r: serde_json::Value = serde_json::from_slice(&fs::read(out.join("switch_report.json")).unwrap()).unwrap();
    for key in ["J_off_detuning", "J_on", "g_ind", "total_on", "total_off", "broadening_budget"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    assert!(out.join("switch_end_to_end.json").exists());
}

#[test]
fn validation_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let out = out.to_str().unwrap();
    let cases = [
        ("unknown key", FIG2.replacen("\"thickness_nm\": 80", "\"thickness_mm\": 80", 1)),
        ("non-monotone sweep", FIG2.replacen("\"start\": 0.5, \"stop\": 2.0", "\"start\": 2.0, \"stop\": 2.0", 1)),
        ("dispersive violation", FIG4.replacen("\"on_detuning_MHz\": 400", "\"on_detuning_MHz\": 40", 1)),
        ("unresolved loop", FIG4.replacen("\"loop\": \"q1\"", "\"loop\": \"q9\"", 1)),
    ];
    for (what, text) in cases {
        assert_ne!(text, FIG2);
        let path = write_scenario(tmp.path(), &text);
        let cmd = if text.contains("\"fig4\"") { "switch" } else { "couple" };
        assert_eq!(run(&[cmd, "--scenario", &path, "--out", out]), 2, "{what}");
    }

    // a second loop threading the film at d = 1 um
    let probe = r#""loops": [
    {
      "name": "probe",
      "current_nA": 100,
      "geometry": { "square": { "side_um": 1, "center_um": [0, 1.04, 0], "normal": [0, 0, 1] } }
    },"#;
    let crossing = FIG2.replacen("\"loops\": [", probe, 1);
    let path = write_scenario(tmp.path(), &crossing);
    assert_eq!(run(&["couple", "--scenario", &path, "--out", out]), 2);
}

#[test]
fn usage_io_and_convergence_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let out = out.to_str().unwrap();
    assert_eq!(run(&["frobnicate"]), 64);
    assert_eq!(run(&["pssw", "--convention", "quarter"]), 64);
    assert_eq!(run(&["reproduce", "fig9"]), 64);
    assert_eq!(run(&["couple", "--scenario", "/nonexistent/scenario.json", "--out", out]), 1);
    assert_eq!(run(&["pssw", "--threads", "0", "--out", out]), 2);

    let one_level = FIG2.replacen("\"max_levels\": 4", "\"max_levels\": 1", 1);
    let path = write_scenario(tmp.path(), &one_level);
    assert_eq!(run(&["couple", "--scenario", &path, "--out", out]), 3);
    // data and manifest are still written
    assert!(Path::new(out).join("manifest.json").exists());
    assert!(Path::new(out).join("coupling_near.csv").exists());
}
