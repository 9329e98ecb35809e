#![allow(dead_code)]

use std::path::{Path, PathBuf};

use subharmonic::cli::{cmd_find_po, cmd_melnikov, cmd_period_curve, cmd_phase_portrait, cmd_strobo_scan, CliError, RunConfig};

/// Reference configs shipped in `configs/` with the subcommand that runs them.
pub const REFERENCE_CONFIGS: &[(&str, &str)] = &[
    ("period_curve", "period-curve"),
    ("resonance_3_1_unperturbed", "strobo-scan"),
    ("resonance_5_2_unperturbed", "strobo-scan"),
    ("melnikov_3_1_sine", "melnikov"),
    ("melnikov_3_2_sine", "melnikov"),
    ("melnikov_3_2_two_harmonic", "melnikov"),
    ("find_po_saddle", "find-po"),
    ("find_po_diverging", "find-po"),
    ("find_po_saddle_branch", "find-po"),
    ("find_po_elliptic_branch", "find-po"),
    ("find_po_2_3_two_harmonic", "find-po"),
    ("find_po_poincare", "find-po"),
    ("island_scan_t0_0", "strobo-scan"),
    ("island_scan_t0_1", "strobo-scan"),
    ("scan_3_2_sine", "strobo-scan"),
    ("axis_scan_eps_small", "strobo-scan"),
    ("diagonal_scan", "strobo-scan"),
    ("phase_portrait", "phase-portrait"),
    ("phase_portrait_forced", "phase-portrait"),
];

/// Configs whose outputs are frozen under `tests/golden/<name>/`.
pub const GOLDEN_CONFIGS: &[&str] = &[
    "period_curve",
    "resonance_3_1_unperturbed",
    "resonance_5_2_unperturbed",
    "melnikov_3_1_sine",
    "melnikov_3_2_sine",
    "melnikov_3_2_two_harmonic",
    "find_po_saddle",
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn load_config(name: &str) -> RunConfig {
    RunConfig::load(&crate_dir().join("configs").join(format!("{name}.json"))).expect("reference config loads")
}

pub fn command_of(name: &str) -> &'static str {
    REFERENCE_CONFIGS.iter().find(|(n, _)| *n == name).map(|(_, c)| *c).expect("known config")
}

pub fn run_command(command: &str, cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    match command {
        "phase-portrait" => cmd_phase_portrait(cfg),
        "period-curve" => cmd_period_curve(cfg),
        "strobo-scan" => cmd_strobo_scan(cfg),
        "melnikov" => cmd_melnikov(cfg),
        "find-po" => cmd_find_po(cfg),
        other => panic!("unknown command {other}"),
    }
}

/// Runs a reference config with its output redirected to `out`; returns the
/// sorted list of files in `out` (numerical failures still leave outputs).
pub fn run_reference(name: &str, out: &Path) -> Vec<PathBuf> {
    let mut cfg = load_config(name);
    cfg.output.dir = out.to_path_buf();
    if let Err(e) = run_command(command_of(name), &cfg) {
        assert!(matches!(e, CliError::Numerical(_)), "{name}: {e}");
    }
    list_files(out)
}

pub fn list_files(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map(|it| it.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.is_file()).collect())
        .unwrap_or_default();
    files.sort();
    files
}

/// Compares the outputs of `name` with its golden copy. With
/// `UPDATE_GOLDEN=1` the golden copy is rewritten instead.
pub fn check_golden(name: &str) -> Result<(), String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let produced = run_reference(name, tmp.path());
    let golden_dir = crate_dir().join("tests").join("golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        let _ = std::fs::remove_dir_all(&golden_dir);
        std::fs::create_dir_all(&golden_dir).map_err(|e| e.to_string())?;
        for f in &produced {
            std::fs::copy(f, golden_dir.join(f.file_name().expect("file name"))).map_err(|e| e.to_string())?;
        }
        return Ok(());
    }
    let expected = list_files(&golden_dir);
    let names = |v: &[PathBuf]| v.iter().map(|p| p.file_name().expect("file name").to_owned()).collect::<Vec<_>>();
    if names(&produced) != names(&expected) {
        return Err(format!("{name}: file set {:?} differs from golden {:?}", names(&produced), names(&expected)));
    }
    for (p, g) in produced.iter().zip(&expected) {
        let (a, b) = (std::fs::read(p).map_err(|e| e.to_string())?, std::fs::read(g).map_err(|e| e.to_string())?);
        if a != b {
            let line = String::from_utf8_lossy(&a)
                .lines()
                .zip(String::from_utf8_lossy(&b).lines())
                .position(|(x, y)| x != y)
                .map_or("length".to_string(), |i| format!("line {}", i + 1));
            return Err(format!("{name}: {} differs from golden at {line}", g.display()));
        }
    }
    Ok(())
}
