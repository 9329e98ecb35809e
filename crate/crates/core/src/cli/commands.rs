use std::path::PathBuf;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{RunConfig, SeedLine};
use super::output::{write_table, Cell, Table};
use super::CliError;
use crate::dynamics::{hamiltonian, planar_rhs, ForcingSpec, PlanarState, SystemSpec};
use crate::integrator::{integrate_sampled, IntegratorConfig};
use crate::melnikov::{melnikov_config, melnikov_profile, melnikov_seeds, MelnikovSeed};
use crate::solvers::{
    closure_trajectory, continue_in_epsilon, newton_poincare, newton_strobo, same_orbit, NewtonReport,
    PeriodicOrbitRecord, SolveError, SolverKind,
};
use crate::strobo::{axis_seeds, diagonal_seeds, scan, seed_line, OrbitStatus};
use crate::unperturbed::{period_of_level, period_oracle, ResonanceSpec};

/// Orbits closer than this (after phase alignment) are reported as duplicates.
const DUPLICATE_TOL: f64 = 1e-6;

struct Writer<'a> {
    cfg: &'a RunConfig,
    header: Value,
    files: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    fn new(cfg: &'a RunConfig, command: &str, resolved: Value) -> Self {
        // the output directory is where the file lives, not part of the experiment
        let mut config = cfg.to_json();
        if let Some(out) = config.get_mut("output").and_then(Value::as_object_mut) {
            out.remove("dir");
        }
        let header = json!({ "command": command, "config": config, "resolved": resolved });
        Self { cfg, header, files: vec![] }
    }

    fn write(&mut self, table: &Table) -> Result<(), CliError> {
        let out = &self.cfg.output;
        let path = write_table(&out.dir, table, &self.header, out.format, out.precision)
            .map_err(|e| CliError::Config(format!("cannot write to {}: {e}", out.dir.display())))?;
        self.files.push(path);
        Ok(())
    }
}

fn resonance_json(spec: &ResonanceSpec) -> Value {
    json!({
        "m": spec.m,
        "n": spec.n,
        "period": spec.period,
        "omega": spec.omega,
        "c": spec.level.value(),
        "v0": spec.level.axis_velocity(),
        "orbit_period": spec.orbit_period,
    })
}

fn system_json(sys: &SystemSpec) -> Value {
    json!({
        "period": sys.period(),
        "omega": sys.forcing.omega(),
        "epsilon": sys.epsilon,
        "forcing": ForcingSpec::format_terms(sys.forcing.terms()),
    })
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Seeds used when the config lists none: librations on the `u = 0` axis,
/// both sides of the separatrix (`H = 1 -/+ 0.01`) and rotations.
pub fn default_portrait_seeds() -> Vec<PlanarState> {
    let mut seeds: Vec<PlanarState> = (1..=7).map(|i| PlanarState::new(0.0, 0.25 * i as f64)).collect();
    for h in [0.99f64, 1.01] {
        let v = (2.0 * (h + 1.0)).sqrt();
        seeds.push(PlanarState::new(0.0, v));
        seeds.push(PlanarState::new(0.0, -v));
    }
    for v in [2.25, 2.5] {
        seeds.push(PlanarState::new(0.0, v));
        seeds.push(PlanarState::new(0.0, -v));
    }
    seeds
}

/// Trajectories of a grid of seeds over `[t0, t0 + duration]`, sampled every
/// `sample_dt`. Columns `seed_id, t, u, v, H`.
pub fn cmd_phase_portrait(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    let e = &cfg.experiment;
    if !(e.duration > 0.0 && e.sample_dt > 0.0) {
        return Err(CliError::Config("experiment.duration and sample_dt must be positive".into()));
    }
    let sys = cfg.explicit_system()?;
    let seeds: Vec<PlanarState> = match &e.seeds {
        Some(list) => list
            .iter()
            .map(|&[u, v]| PlanarState::try_new(u, v))
            .collect::<crate::Result<_>>()
            .map_err(|e| CliError::Config(e.to_string()))?,
        None => default_portrait_seeds(),
    };
    let count = (e.duration / e.sample_dt).round() as usize;
    let times: Vec<f64> = (1..=count).map(|i| e.t0 + i as f64 * e.sample_dt).collect();
    let integ = IntegratorConfig::default();
    let runs: Vec<crate::Result<Vec<Vec<f64>>>> = seeds
        .par_iter()
        .map(|x| integrate_sampled(planar_rhs(&sys), &x.to_array(), e.t0, &times, &integ))
        .collect();

    let mut traj = Table::new("trajectories", &["seed_id", "t", "u", "v", "H"]);
    let mut status = Table::new("trajectories_status", &["seed_id", "u0", "v0", "status", "message"]);
    for (id, (x, run)) in seeds.iter().zip(&runs).enumerate() {
        traj.push(vec![id.into(), e.t0.into(), x.u.into(), x.v.into(), hamiltonian(*x).into()]);
        match run {
            Ok(ys) => {
                for (t, y) in times.iter().zip(ys) {
                    let p = PlanarState::from_slice(y);
                    traj.push(vec![id.into(), (*t).into(), p.u.into(), p.v.into(), hamiltonian(p).into()]);
                }
                status.push(vec![id.into(), x.u.into(), x.v.into(), "complete".into(), "".into()]);
            }
            Err(err) => status.push(vec![id.into(), x.u.into(), x.v.into(), "failed".into(), err.to_string().into()]),
        }
    }
    let mut w = Writer::new(cfg, "phase-portrait", system_json(&sys));
    w.write(&traj)?;
    w.write(&status)?;
    Ok(w.files)
}

/// Period function of the unforced pendulum on a grid of axis velocities.
/// Columns `v0, c, T_c, T_oracle`.
pub fn cmd_period_curve(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    let e = &cfg.experiment;
    if !(e.v_min > 0.0 && e.v_max < 2.0 && e.v_min < e.v_max) || e.points < 2 {
        return Err(CliError::Config(format!(
            "period grid must satisfy 0 < v_min < v_max < 2 with >= 2 points (got [{}, {}], {})",
            e.v_min, e.v_max, e.points
        )));
    }
    let grid: Vec<f64> = (0..e.points)
        .map(|i| e.v_min + (e.v_max - e.v_min) * i as f64 / (e.points - 1) as f64)
        .collect();
    let rows: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&v| Ok((period_of_level(v)?, period_oracle(v)?)))
        .collect::<crate::Result<_>>()
        .map_err(numerical)?;
    let mut table = Table::new("period_curve", &["v0", "c", "T_c", "T_oracle"]);
    for (&v, &(tc, oracle)) in grid.iter().zip(&rows) {
        table.push(vec![v.into(), (0.5 * v * v - 1.0).into(), tc.into(), oracle.into()]);
    }
    let mut w = Writer::new(cfg, "period-curve", json!({}));
    w.write(&table)?;
    Ok(w.files)
}

/// `v1 > 0` with `H(v1, v1) = c`.
fn diagonal_level_point(c: f64) -> f64 {
    let f = |x: f64| 0.5 * x * x - x.cos() - c;
    let (mut lo, mut hi) = (0.0, 4.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn scan_seeds(cfg: &RunConfig, spec: &ResonanceSpec) -> Result<Vec<PlanarState>, CliError> {
    let e = &cfg.experiment;
    let eps = cfg.system.epsilon;
    let w = e.half_width.unwrap_or(if eps > 0.0 { 2.0 * eps } else { 0.2 });
    // the library helpers take eps and use a half-width of 2 eps
    let seeds = match e.seed_line {
        SeedLine::Axis => axis_seeds(spec.level.axis_velocity(), 0.5 * w, e.seed_count),
        SeedLine::Diagonal => diagonal_seeds(diagonal_level_point(spec.level.value()), 0.5 * w, e.seed_count),
        SeedLine::Custom => {
            let (Some([a0, a1]), Some([b0, b1])) = (e.line_start, e.line_end) else {
                return Err(CliError::Config("seed_line = custom needs line_start and line_end".into()));
            };
            seed_line(PlanarState::new(a0, a1), PlanarState::new(b0, b1), e.seed_count)
        }
    };
    Ok(seeds)
}

/// Iterates of the stroboscopic map at phase `t0` from a line of seeds near
/// a resonant level. Columns `seed_id, iter, u, v`.
pub fn cmd_strobo_scan(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    let e = &cfg.experiment;
    let spec = cfg.resonance()?;
    let sys = cfg.system_with_period(spec.period)?;
    let seeds = scan_seeds(cfg, &spec)?;
    let orbits = scan(&seeds, e.t0, &sys, e.iterations, &IntegratorConfig::default());

    let mut table = Table::new("strobo_scan", &["seed_id", "iter", "u", "v"]);
    let mut status = Table::new("strobo_scan_status", &["seed_id", "u0", "v0", "iterates", "status", "message"]);
    for (id, orbit) in orbits.iter().enumerate() {
        for (k, p) in orbit.points.iter().enumerate() {
            table.push(vec![id.into(), k.into(), p.u.into(), p.v.into()]);
        }
        let (label, message) = match &orbit.status {
            OrbitStatus::Complete => ("complete", String::new()),
            OrbitStatus::Escaped { at_iterate } => ("escaped", format!("|v| > escape speed before iterate {at_iterate}")),
            OrbitStatus::Failed { message } => ("failed", message.clone()),
        };
        let x = seeds[id];
        let done = orbit.points.len() - 1;
        status.push(vec![id.into(), x.u.into(), x.v.into(), done.into(), label.into(), message.into()]);
    }
    let mut w = Writer::new(cfg, "strobo-scan", json!({ "resonance": resonance_json(&spec), "system": system_json(&sys) }));
    w.write(&table)?;
    w.write(&status)?;
    Ok(w.files)
}

/// Subharmonic Melnikov function over `[0, mT)` and its zeros.
/// Columns `t0, M` and `t0_bar, slope, kind`.
pub fn cmd_melnikov(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    let spec = cfg.resonance()?;
    let sys = cfg.system_with_period(spec.period)?;
    let x0 = cfg.base_point()?.unwrap_or_else(|| spec.axis_point());
    let profile = melnikov_profile(x0, &spec, &sys.forcing, cfg.experiment.samples, &melnikov_config())
        .map_err(numerical)?;

    let mut samples = Table::new("melnikov", &["t0", "M"]);
    for &(t, m) in &profile.samples {
        samples.push(vec![t.into(), m.into()]);
    }
    let mut zeros = Table::new("melnikov_zeros", &["t0_bar", "slope", "kind"]);
    for z in &profile.zeros {
        zeros.push(vec![z.t0.into(), z.slope.into(), "simple".into()]);
    }
    for z in &profile.degenerate_zeros {
        zeros.push(vec![z.t0.into(), z.slope.into(), "degenerate".into()]);
    }
    if profile.identically_zero {
        let note = format!("identically zero: max |M| = {:e}", profile.max_abs);
        samples.notes.push(note.clone());
        zeros.notes.push(note);
        zeros.push(vec![f64::NAN.into(), f64::NAN.into(), "identically_zero".into()]);
    }
    let resolved = json!({
        "resonance": resonance_json(&spec),
        "system": system_json(&sys),
        "x0": [x0.u, x0.v],
        "max_abs": profile.max_abs,
    });
    let mut w = Writer::new(cfg, "melnikov", resolved);
    w.write(&samples)?;
    w.write(&zeros)?;
    Ok(w.files)
}

struct SeedOutcome {
    seed: MelnikovSeed,
    solved: Result<(PeriodicOrbitRecord, NewtonReport), SolveError>,
}

fn record_cells(rec: &PeriodicOrbitRecord) -> Vec<Cell> {
    vec![
        rec.epsilon.into(),
        rec.x_eps.u.into(),
        rec.x_eps.v.into(),
        rec.t0.into(),
        rec.m.into(),
        rec.n.into(),
        rec.trace().into(),
        rec.multipliers[0][0].into(),
        rec.multipliers[0][1].into(),
        rec.multipliers[1][0].into(),
        rec.multipliers[1][1].into(),
        rec.stability.to_string().into(),
        rec.residual.into(),
    ]
}

const RECORD_COLUMNS: [&str; 13] = [
    "epsilon", "u", "v", "t0", "m", "n", "trace", "mu1_re", "mu1_im", "mu2_re", "mu2_im", "stability", "residual",
];

/// Melnikov seeds, Newton shooting, optional continuation in `eps` and the
/// closure trajectory of each distinct orbit found.
pub fn cmd_find_po(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    let e = &cfg.experiment;
    let spec = cfg.resonance()?;
    let sys = cfg.system_with_period(spec.period)?;
    let x0 = cfg.base_point()?.unwrap_or_else(|| spec.axis_point());
    if e.solver == SolverKind::Poincare && x0.u != 0.0 {
        return Err(CliError::Config("the poincare solver needs a base point on u = 0".into()));
    }
    if let Some(target) = e.continue_to {
        if !(target.is_finite() && target >= 0.0) {
            return Err(CliError::Config(format!("continue_to must be >= 0, got {target}")));
        }
    }
    let resolved = json!({ "resonance": resonance_json(&spec), "system": system_json(&sys), "x0": [x0.u, x0.v] });
    let mut w = Writer::new(cfg, "find-po", resolved);

    let profile = melnikov_profile(x0, &spec, &sys.forcing, e.samples, &melnikov_config()).map_err(numerical)?;
    let all_seeds = melnikov_seeds(&profile).map_err(|err| {
        CliError::Numerical(format!("{err}; no Newton seed available"))
    })?;
    let chosen: Vec<(usize, MelnikovSeed)> = match e.seed_zero_index {
        Some(i) if i < all_seeds.len() => vec![(i, all_seeds[i])],
        Some(i) => {
            return Err(CliError::Config(format!(
                "seed_zero_index {i} out of range: {} simple zeros",
                all_seeds.len()
            )))
        }
        None => all_seeds.iter().copied().enumerate().collect(),
    };

    let opts = cfg.newton_options();
    let outcomes: Vec<SeedOutcome> = chosen
        .par_iter()
        .map(|&(_, seed)| {
            let solved = match e.solver {
                SolverKind::Strobo => newton_strobo(seed.x0, seed.t0, &sys, spec.m, &opts),
                SolverKind::Poincare => newton_poincare(seed.x0.v, seed.t0, &sys, spec.n, spec.m, &opts),
            };
            SeedOutcome { seed, solved }
        })
        .collect();

    // deduplicate converged orbits in seed order
    let mut unique: Vec<usize> = vec![];
    let mut duplicate_of: Vec<Option<usize>> = vec![None; outcomes.len()];
    for (i, out) in outcomes.iter().enumerate() {
        let Ok((rec, _)) = &out.solved else { continue };
        for &j in &unique {
            let Ok((other, _)) = &outcomes[j].solved else { continue };
            if same_orbit(other, rec, DUPLICATE_TOL, &opts.integrator).unwrap_or(false) {
                duplicate_of[i] = Some(chosen[j].0);
                break;
            }
        }
        if duplicate_of[i].is_none() {
            unique.push(i);
        }
    }

    let mut orbit_cols = vec!["seed_index", "t0_bar", "slope", "status", "duplicate_of", "iterations"];
    orbit_cols.extend(RECORD_COLUMNS);
    let mut orbits = Table::new("orbits", &orbit_cols);
    let mut log = Table::new("newton_log", &["seed_index", "iter", "x1", "x2", "residual"]);
    log.notes.push(match e.solver {
        SolverKind::Strobo => "x1, x2 = u, v at phase t0".into(),
        SolverKind::Poincare => "x1, x2 = v0, t0 on the section u = 0".into(),
    });
    for (i, ((idx, _), out)) in chosen.iter().zip(&outcomes).enumerate() {
        let (status, report) = match &out.solved {
            Ok((_, report)) => ("converged".to_string(), report),
            Err(err) => (err.kind.to_string(), &err.report),
        };
        let dup = duplicate_of[i];
        let mut row: Vec<Cell> = vec![
            (*idx).into(),
            out.seed.t0.into(),
            out.seed.slope.into(),
            status.into(),
            dup.map_or(Cell::Int(-1), Cell::from),
            report.iterations().into(),
        ];
        match &out.solved {
            Ok((rec, _)) => row.extend(record_cells(rec)),
            Err(_) => {
                row.extend((0..RECORD_COLUMNS.len()).map(|k| match RECORD_COLUMNS[k] {
                    "m" => Cell::from(spec.m),
                    "n" => Cell::from(spec.n),
                    "epsilon" => Cell::from(sys.epsilon),
                    "stability" => Cell::from(""),
                    _ => Cell::from(f64::NAN),
                }));
            }
        }
        orbits.push(row);
        for (k, it) in report.iterates.iter().enumerate() {
            log.push(vec![(*idx).into(), k.into(), it.point[0].into(), it.point[1].into(), it.residual.into()]);
        }
    }
    w.write(&orbits)?;
    w.write(&log)?;

    let mut failures: Vec<String> = vec![];
    let mut finals: Vec<(usize, PeriodicOrbitRecord)> = vec![];
    if let Some(target) = e.continue_to {
        let mut cont_cols = vec!["seed_index", "step"];
        cont_cols.extend(RECORD_COLUMNS);
        let mut cont = Table::new("continuation", &cont_cols);
        let branches: Vec<_> = unique
            .par_iter()
            .map(|&i| {
                let (rec, _) = outcomes[i].solved.as_ref().expect("unique orbits converged");
                continue_in_epsilon(rec, target, &cfg.step_policy(), &opts)
            })
            .collect();
        for (&i, branch) in unique.iter().zip(branches) {
            let idx = chosen[i].0;
            let records = match branch {
                Ok(records) => records,
                Err(err) => {
                    failures.push(format!("seed {idx}: {err}"));
                    cont.notes.push(format!("seed {idx}: {err}"));
                    err.records
                }
            };
            for (k, rec) in records.iter().enumerate() {
                let mut row: Vec<Cell> = vec![idx.into(), k.into()];
                row.extend(record_cells(rec));
                cont.push(row);
            }
            if let Some(last) = records.last() {
                finals.push((idx, last.clone()));
            }
        }
        w.write(&cont)?;
    } else {
        for &i in &unique {
            let (rec, _) = outcomes[i].solved.as_ref().expect("unique orbits converged");
            finals.push((chosen[i].0, rec.clone()));
        }
    }

    let mut closure = Table::new("closure", &["seed_index", "epsilon", "t", "u", "v"]);
    for (idx, rec) in &finals {
        let path = closure_trajectory(rec, e.closure_samples, &opts.integrator).map_err(numerical)?;
        for (t, p) in path {
            closure.push(vec![(*idx).into(), rec.epsilon.into(), t.into(), p.u.into(), p.v.into()]);
        }
    }
    w.write(&closure)?;

    if unique.is_empty() {
        return Err(CliError::Numerical(format!(
            "no seed converged ({} tried); see newton_log for the iterates",
            chosen.len()
        )));
    }
    if !failures.is_empty() {
        return Err(CliError::Numerical(format!("continuation stalled: {}", failures.join("; "))));
    }
    Ok(w.files)
}
