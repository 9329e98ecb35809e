//! Newton shooting for subharmonic periodic orbits, continuation in `eps`
//! and linear stability.
//!
//! Two formulations share the report and record types:
//!
//! * [`newton_strobo`] solves `s^m(x) - x = 0` at a fixed forcing phase `t0`;
//! * [`newton_poincare`] solves `P^n(v0, t0) - (v0, t0 + m T) = 0` on the
//!   section `{u = 0}`, with both the velocity and the phase unknown.

mod continuation;
mod poincare;
mod shooting;
mod stability;

pub use continuation::{continue_in_epsilon, ContinuationError, StepPolicy};
pub use poincare::{newton_poincare, poincare_map, poincare_return, SectionReturn};
pub use shooting::newton_strobo;
pub use stability::{classify, Classification, Stability, TRACE_MARGIN};

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{ForcingSpec, PlanarState, SystemSpec};
use crate::error::{Error, Result};
use crate::integrator::IntegratorConfig;
use crate::strobo::{flow, loops_around_origin, strobo_iterate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub residual_tol: f64,
    pub max_iters: usize,
    /// Any iterate farther than this from the seed aborts the solve.
    pub divergence_radius: f64,
    /// `DF` is treated as singular when its smallest singular value falls
    /// below `singular_tol` times its largest one.
    pub singular_tol: f64,
    pub integrator: IntegratorConfig,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            residual_tol: 1e-10,
            max_iters: 20,
            divergence_radius: 1.0,
            singular_tol: 1e-7,
            integrator: IntegratorConfig::default().with_tol(1e-12),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Diverged,
    SingularJacobian,
    MaxIters,
    TangentialCrossing,
    Integration,
}

impl std::fmt::Display for FailureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FailureKind::Diverged => "diverged",
            FailureKind::SingularJacobian => "singular_jacobian",
            FailureKind::MaxIters => "max_iters",
            FailureKind::TangentialCrossing => "tangential_crossing",
            FailureKind::Integration => "integration",
        })
    }
}

/// One Newton iterate: the unknowns (`(u, v)` or `(v0, t0)`) and `|F|` there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonIterate {
    pub point: [f64; 2],
    pub residual: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NewtonReport {
    pub iterates: Vec<NewtonIterate>,
    pub converged: bool,
    pub failure: Option<FailureKind>,
}

impl NewtonReport {
    pub fn iterations(&self) -> usize {
        self.iterates.len().saturating_sub(1)
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.iterates.iter().map(|i| i.residual).collect()
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.iterates.last().map(|i| i.residual)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("Newton solve failed ({kind}): {message}")]
pub struct SolveError {
    pub kind: FailureKind,
    pub message: String,
    pub report: NewtonReport,
}

impl SolveError {
    fn new(kind: FailureKind, message: impl Into<String>, mut report: NewtonReport) -> Self {
        report.converged = false;
        report.failure = Some(kind);
        Self { kind, message: message.into(), report }
    }

    fn integration(err: Error, report: NewtonReport) -> Self {
        Self::new(FailureKind::Integration, err.to_string(), report)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Strobo,
    Poincare,
}

/// A converged subharmonic periodic orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbitRecord {
    /// Point of the orbit at time `t0`.
    pub x_eps: PlanarState,
    pub t0: f64,
    pub m: u32,
    /// Loops around the origin per cycle.
    pub n: u32,
    pub epsilon: f64,
    pub forcing: ForcingSpec,
    /// `D s^m(x_eps)` at phase `t0`, row-major.
    pub monodromy: [[f64; 2]; 2],
    /// Floquet multipliers as `(re, im)`.
    pub multipliers: [[f64; 2]; 2],
    pub stability: Stability,
    pub residual: f64,
    /// `x_eps, s(x_eps), ..., s^{m-1}(x_eps)` at phase `t0`.
    pub iterates: Vec<PlanarState>,
    pub solver: SolverKind,
}

impl PeriodicOrbitRecord {
    pub fn system(&self) -> SystemSpec {
        SystemSpec { forcing: self.forcing.clone(), epsilon: self.epsilon }
    }

    pub fn monodromy_matrix(&self) -> Matrix2<f64> {
        let m = &self.monodromy;
        Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    pub fn trace(&self) -> f64 {
        self.monodromy[0][0] + self.monodromy[1][1]
    }

    pub fn cycle_duration(&self) -> f64 {
        self.m as f64 * self.forcing.period()
    }

    /// Builds the record for a converged point: classifies the monodromy,
    /// counts loops and stores the `m` map iterates.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        x_eps: PlanarState,
        t0: f64,
        m: u32,
        sys: &SystemSpec,
        monodromy: Matrix2<f64>,
        residual: f64,
        solver: SolverKind,
        cfg: &IntegratorConfig,
    ) -> Result<Self> {
        let class = classify(&monodromy)?;
        let duration = m as f64 * sys.period();
        let loops = loops_around_origin(x_eps, t0, duration, sys, cfg)?;
        let orbit = strobo_iterate(x_eps, t0, sys, m.saturating_sub(1) as usize, cfg)?;
        Ok(Self {
            x_eps,
            t0,
            m,
            n: loops.round().max(0.0) as u32,
            epsilon: sys.epsilon,
            forcing: sys.forcing.clone(),
            monodromy: [[monodromy[(0, 0)], monodromy[(0, 1)]], [monodromy[(1, 0)], monodromy[(1, 1)]]],
            multipliers: class.multipliers.map(|z| [z.re, z.im]),
            stability: class.stability,
            residual,
            iterates: orbit.points,
            solver,
        })
    }
}

/// Time-continuous orbit sampled at `samples + 1` uniform times over
/// `[t0, t0 + m T]`.
pub fn closure_trajectory(
    record: &PeriodicOrbitRecord,
    samples: usize,
    cfg: &IntegratorConfig,
) -> Result<Vec<(f64, PlanarState)>> {
    let sys = record.system();
    let span = record.cycle_duration();
    let samples = samples.max(1);
    let times: Vec<f64> = (1..=samples).map(|i| record.t0 + span * i as f64 / samples as f64).collect();
    let ys = crate::integrator::integrate_sampled(
        crate::dynamics::planar_rhs(&sys),
        &record.x_eps.to_array(),
        record.t0,
        &times,
        cfg,
    )?;
    let mut out = vec![(record.t0, record.x_eps)];
    out.extend(times.iter().zip(&ys).map(|(&t, y)| (t, PlanarState::from_slice(y))));
    Ok(out)
}

/// Whether two records describe the same periodic orbit of the same map,
/// possibly seen at a different phase or starting from another iterate.
pub fn same_orbit(a: &PeriodicOrbitRecord, b: &PeriodicOrbitRecord, tol: f64, cfg: &IntegratorConfig) -> Result<bool> {
    if a.m != b.m || a.forcing != b.forcing || (a.epsilon - b.epsilon).abs() > 1e-14 {
        return Ok(false);
    }
    let period = a.forcing.period();
    let shift = (a.t0 - b.t0).rem_euclid(period);
    let moved = flow(b.x_eps, b.t0, b.t0 + shift, &b.system(), cfg)?;
    Ok(a.iterates.iter().any(|p| p.distance(moved) < tol))
}

/// Solves `DF d = -F` by LU with partial pivoting.
fn newton_step(df: &Matrix2<f64>, f: &Vector2<f64>) -> Option<Vector2<f64>> {
    df.lu().solve(&(-f))
}

/// `sigma_min / sigma_max` of a 2x2 matrix.
fn inverse_condition(df: &Matrix2<f64>) -> f64 {
    let sv = df.singular_values();
    let (lo, hi) = (sv[0].min(sv[1]), sv[0].max(sv[1]));
    if hi == 0.0 {
        0.0
    } else {
        lo / hi
    }
}
