mod common;

use std::process::Command;

use subharmonic::cli::{cmd_find_po, cmd_melnikov, cmd_period_curve, CliError, Format, RunConfig};

fn subharm() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subharm"))
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn binary_runs_each_subcommand() {
    let tmp = tempfile::tempdir().unwrap();
    for (cmd, extra) in [
        ("period-curve", vec![]),
        ("phase-portrait", vec!["--eps", "0.1"]),
        ("strobo-scan", vec!["--m", "3", "--n", "1", "--v0", "1.6", "--eps", "0.1"]),
        ("melnikov", vec!["--m", "3", "--n", "1", "--v0", "1.6"]),
        ("find-po", vec!["--m", "3", "--n", "1", "--v0", "1.6", "--eps", "0.01", "--seed-zero", "0"]),
    ] {
        let out = tmp.path().join(cmd);
        let status = subharm().arg(cmd).args(&extra).arg("--out").arg(&out).output().unwrap();
        assert!(status.status.success(), "{cmd}: {}", String::from_utf8_lossy(&status.stderr));
        assert!(!common::list_files(&out).is_empty(), "{cmd} wrote nothing");
    }
}

#[test]
fn exit_codes_distinguish_config_and_numerical_failures() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = subharm().args(["period-curve", "--config", "/definitely/not/here.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let bad_grid = tmp.path().join("bad.json");
    std::fs::write(&bad_grid, r#"{"experiment": {"v_max": 2.5}}"#).unwrap();
    let out = subharm().arg("period-curve").arg("--config").arg(&bad_grid).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let over = subharm().args(["melnikov", "--omega", "2", "--v0", "1.6"]).output().unwrap();
    assert_eq!(over.status.code(), Some(2));

    // identically zero Melnikov function: no seeds
    let none = subharm()
        .args(["find-po", "--m", "3", "--n", "2", "--v0", "1.6", "--eps", "0.01", "--out"])
        .arg(tmp.path().join("none"))
        .output()
        .unwrap();
    assert_eq!(none.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&none.stderr).contains("no simple zeros"));

    // divergent Newton: partial outputs kept
    let dir = tmp.path().join("div");
    let div = subharm()
        .args(["find-po", "--m", "3", "--n", "1", "--v0", "1.6", "--eps", "0.05", "--seed-zero", "0", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(div.status.code(), Some(3));
    let orbits = std::fs::read_to_string(dir.join("orbits.csv")).unwrap();
    assert!(data_lines(&orbits)[1].contains("diverged"));
    assert!(dir.join("newton_log.csv").exists());
}

#[test]
fn headers_embed_the_resolved_config() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::from_json(r#"{"experiment": {"m": 3, "n": 1, "v0": 1.6, "samples": 32}}"#).unwrap();
    cfg.output.dir = tmp.path().to_path_buf();
    for file in cmd_melnikov(&cfg).unwrap() {
        let text = std::fs::read_to_string(&file).unwrap();
        let first = text.lines().next().unwrap();
        let json: serde_json::Value = serde_json::from_str(first.strip_prefix("# config: ").unwrap()).unwrap();
        assert_eq!(json["command"], "melnikov");
        assert_eq!(json["config"]["experiment"]["v0"], 1.6);
        let period = json["resolved"]["resonance"]["period"].as_f64().unwrap();
        assert!((period - 2.66040370355).abs() < 1e-9);
    }
}

#[test]
fn json_output_mirrors_csv_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::from_json(r#"{"experiment": {"points": 20}}"#).unwrap();
    cfg.output.dir = tmp.path().join("csv");
    let csv = std::fs::read_to_string(&cmd_period_curve(&cfg).unwrap()[0]).unwrap();
    cfg.output.dir = tmp.path().join("json");
    cfg.output.format = Format::Json;
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cmd_period_curve(&cfg).unwrap()[0]).unwrap()).unwrap();
    let rows = data_lines(&csv);
    assert_eq!(rows[0], "v0,c,T_c,T_oracle");
    let records = json["rows"].as_array().unwrap();
    assert_eq!(records.len(), rows.len() - 1);
    for (line, rec) in rows[1..].iter().zip(records) {
        let tc: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(rec["T_c"].as_f64().unwrap(), tc);
    }
}

#[test]
fn period_curve_rows_are_monotone_and_accurate() {
    let tmp = tempfile::tempdir().unwrap();
    let files = common::run_reference("period_curve", tmp.path());
    let text = std::fs::read_to_string(&files[0]).unwrap();
    let rows: Vec<Vec<f64>> = data_lines(&text)[1..]
        .iter()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 200);
    assert!(rows.windows(2).all(|w| w[1][2] > w[0][2]));
    assert!(rows.iter().all(|r| (r[2] - r[3]).abs() < 1e-7));
    // small-amplitude expansion T = 2 pi (1 + v0^2 / 16 + ...)
    let v0 = rows[0][0];
    assert!((rows[0][2] - 2.0 * std::f64::consts::PI * (1.0 + v0 * v0 / 16.0)).abs() < 1e-5);
}

#[test]
fn degenerate_melnikov_writes_marker_row() {
    let tmp = tempfile::tempdir().unwrap();
    common::run_reference("melnikov_3_2_sine", tmp.path());
    let text = std::fs::read_to_string(tmp.path().join("melnikov_zeros.csv")).unwrap();
    assert!(text.contains("# identically zero"));
    assert_eq!(data_lines(&text)[1..], ["nan,nan,identically_zero"]);
}

#[test]
fn phase_portrait_conserves_energy_without_forcing() {
    let tmp = tempfile::tempdir().unwrap();
    common::run_reference("phase_portrait", tmp.path());
    let text = std::fs::read_to_string(tmp.path().join("trajectories.csv")).unwrap();
    let mut first_h: std::collections::HashMap<i64, f64> = Default::default();
    for line in &data_lines(&text)[1..] {
        let cols: Vec<&str> = line.split(',').collect();
        let id: i64 = cols[0].parse().unwrap();
        let h: f64 = cols[4].parse().unwrap();
        let h0 = *first_h.entry(id).or_insert(h);
        assert!((h - h0).abs() < 1e-7, "seed {id}: {h} vs {h0}");
    }
    let status = std::fs::read_to_string(tmp.path().join("trajectories_status.csv")).unwrap();
    assert!(data_lines(&status)[1..].iter().all(|l| l.contains(",complete,")));
}

#[test]
fn find_po_reports_duplicates_and_stability() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::from_json(
        r#"{"system": {"epsilon": 0.01}, "experiment": {"m": 3, "n": 1, "v0": 1.6, "samples": 64}}"#,
    )
    .unwrap();
    cfg.output.dir = tmp.path().to_path_buf();
    cmd_find_po(&cfg).unwrap();
    let text = std::fs::read_to_string(tmp.path().join("orbits.csv")).unwrap();
    let lines = data_lines(&text);
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let rows: Vec<Vec<&str>> = lines[1..].iter().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    let unique: Vec<&Vec<&str>> = rows.iter().filter(|r| r[col("duplicate_of")] == "-1").collect();
    assert_eq!(unique.len(), 2);
    let kinds: Vec<&str> = unique.iter().map(|r| r[col("stability")]).collect();
    assert_eq!(kinds, ["saddle", "elliptic"]);
    // closure samples for the two distinct orbits only
    let closure = std::fs::read_to_string(tmp.path().join("closure.csv")).unwrap();
    let seeds: std::collections::BTreeSet<&str> =
        data_lines(&closure)[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(seeds.into_iter().collect::<Vec<_>>(), ["0", "1"]);
}

#[test]
fn seed_index_out_of_range_is_a_config_error() {
    let mut cfg = RunConfig::from_json(
        r#"{"system": {"epsilon": 0.01}, "experiment": {"m": 3, "n": 1, "v0": 1.6, "samples": 32, "seed_zero_index": 40}}"#,
    )
    .unwrap();
    cfg.output.dir = tempfile::tempdir().unwrap().path().to_path_buf();
    assert!(matches!(cmd_find_po(&cfg), Err(CliError::Config(_))));
}

#[test]
fn reruns_are_byte_identical() {
    for name in ["island_scan_t0_1", "find_po_2_3_two_harmonic", "phase_portrait_forced"] {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let (fa, fb) = (common::run_reference(name, a.path()), common::run_reference(name, b.path()));
        for (x, y) in fa.iter().zip(&fb) {
            assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap(), "{}", x.display());
        }
    }
}
