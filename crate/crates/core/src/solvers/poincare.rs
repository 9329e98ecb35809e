//! Return map to the section `{u = 0}` in the extended phase space.
//!
//! `P(v0, t0) = (v*, t*)`: start at `(0, v0)` at time `t0`, flow until `u`
//! returns to zero crossing in the same direction it left, and record the
//! velocity and time there. The differential comes from the clock-extended
//! variational system integrated up to the crossing plus the implicit
//! function correction for the moving crossing time.

use nalgebra::{Matrix2, Vector2};

use super::{
    inverse_condition, newton_step, FailureKind, NewtonIterate, NewtonOptions, NewtonReport, PeriodicOrbitRecord,
    SolveError, SolverKind,
};
use crate::dynamics::{eval_field, variational_rhs_3, PlanarState, SystemSpec, VariationalState3};
use crate::error::{Error, Result};
use crate::integrator::{find_event, Direction, EventSpec, IntegratorConfig};
use crate::strobo::monodromy;

/// Denominators `|u'|` below this make the crossing tangential.
pub const TANGENCY_TOL: f64 = 1e-8;

/// One section return together with `DP`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionReturn {
    pub v: f64,
    pub t: f64,
    /// Rows `(v*, t*)`, columns `(v0, t0)`.
    pub jacobian: Matrix2<f64>,
}

#[derive(Debug)]
enum ReturnError {
    Tangential { v: f64, t: f64 },
    Integration(Error),
}

impl From<Error> for ReturnError {
    fn from(e: Error) -> Self {
        ReturnError::Integration(e)
    }
}

fn section_return(v0: f64, t0: f64, sys: &SystemSpec, cfg: &IntegratorConfig) -> Result<SectionReturn, ReturnError> {
    if v0.abs() < TANGENCY_TOL {
        return Err(ReturnError::Tangential { v: v0, t: t0 });
    }
    let start = VariationalState3::initial(PlanarState::new(0.0, v0), t0);
    let direction = if v0 > 0.0 { Direction::Rising } else { Direction::Falling };
    // Generous horizon: the unforced period diverges only at the separatrix.
    let event = EventSpec::new(|y: &[f64], _t| y[0], direction, 1).with_horizon(1e3);
    // The extended system is autonomous; integration time is elapsed time.
    let hit = find_event(variational_rhs_3(sys), &start.to_vec(), 0.0, &event, cfg)?;
    let end = VariationalState3::from_slice(&hit.y);
    let f = eval_field(end.base, end.clock, sys);
    let field = [f.u, f.v, 1.0];
    if field[0].abs() < TANGENCY_TOL {
        return Err(ReturnError::Tangential { v: end.base.v, t: end.clock });
    }
    let j = &end.jac;
    // d(elapsed)/d(v0, s0) from u(elapsed) = 0
    let dtau = [-j[(0, 1)] / field[0], -j[(0, 2)] / field[0]];
    let jacobian = Matrix2::new(
        j[(1, 1)] + field[1] * dtau[0],
        j[(1, 2)] + field[1] * dtau[1],
        j[(2, 1)] + field[2] * dtau[0],
        j[(2, 2)] + field[2] * dtau[1],
    );
    Ok(SectionReturn { v: end.base.v, t: end.clock, jacobian })
}

/// One application of `P` with its differential.
pub fn poincare_return(v0: f64, t0: f64, sys: &SystemSpec, cfg: &IntegratorConfig) -> Result<SectionReturn> {
    section_return(v0, t0, sys, cfg).map_err(|e| match e {
        ReturnError::Integration(e) => e,
        ReturnError::Tangential { v, t } => {
            Error::InvalidInput(format!("tangential crossing of u = 0 at v = {v:e}, t = {t}"))
        }
    })
}

/// `P^n(v0, t0)` and `DP^n` by chaining single returns.
pub fn poincare_map(v0: f64, t0: f64, n: u32, sys: &SystemSpec, cfg: &IntegratorConfig) -> Result<SectionReturn> {
    chained(v0, t0, n, sys, cfg).map_err(|e| match e {
        ReturnError::Integration(e) => e,
        ReturnError::Tangential { v, t } => {
            Error::InvalidInput(format!("tangential crossing of u = 0 at v = {v:e}, t = {t}"))
        }
    })
}

fn chained(v0: f64, t0: f64, n: u32, sys: &SystemSpec, cfg: &IntegratorConfig) -> Result<SectionReturn, ReturnError> {
    let mut acc = SectionReturn { v: v0, t: t0, jacobian: Matrix2::identity() };
    for _ in 0..n {
        let step = section_return(acc.v, acc.t, sys, cfg)?;
        acc = SectionReturn { v: step.v, t: step.t, jacobian: step.jacobian * acc.jacobian };
    }
    Ok(acc)
}

/// Newton's method on `F(v0, t0) = P^n(v0, t0) - (v0, t0 + m T)`.
pub fn newton_poincare(
    seed_v0: f64,
    seed_t0: f64,
    sys: &SystemSpec,
    n: u32,
    m: u32,
    opts: &NewtonOptions,
) -> Result<(PeriodicOrbitRecord, NewtonReport), SolveError> {
    let mut report = NewtonReport::default();
    if n == 0 || m == 0 {
        return Err(SolveError::new(FailureKind::Integration, "n and m must be >= 1", report));
    }
    let cfg = &opts.integrator;
    let cycle = m as f64 * sys.period();
    let seed = Vector2::new(seed_v0, seed_t0);
    let mut z = seed;
    for iter in 0..=opts.max_iters {
        let ret = match chained(z[0], z[1], n, sys, cfg) {
            Ok(r) => r,
            Err(ReturnError::Tangential { v, t }) => {
                return Err(SolveError::new(
                    FailureKind::TangentialCrossing,
                    format!("flow tangent to u = 0 at v = {v:e}, t = {t}"),
                    report,
                ))
            }
            Err(ReturnError::Integration(e)) => return Err(SolveError::integration(e, report)),
        };
        let f = Vector2::new(ret.v - z[0], ret.t - z[1] - cycle);
        let residual = f.norm();
        report.iterates.push(NewtonIterate { point: [z[0], z[1]], residual });
        let df = ret.jacobian - Matrix2::identity();
        if inverse_condition(&df) < opts.singular_tol {
            return Err(SolveError::new(
                FailureKind::SingularJacobian,
                format!("DP^n - I is numerically singular at (v0, t0) = ({}, {})", z[0], z[1]),
                report,
            ));
        }
        if residual < opts.residual_tol {
            report.converged = true;
            let x = PlanarState::new(0.0, z[0]);
            let record = monodromy(x, z[1], sys, cycle, cfg).and_then(|mono| {
                PeriodicOrbitRecord::assemble(x, z[1], m, sys, mono, residual, SolverKind::Poincare, cfg)
            });
            return match record {
                Ok(mut record) => {
                    record.n = n;
                    Ok((record, report))
                }
                Err(e) => Err(SolveError::integration(e, report)),
            };
        }
        if iter == opts.max_iters {
            break;
        }
        let Some(delta) = newton_step(&df, &f) else {
            return Err(SolveError::new(FailureKind::SingularJacobian, "LU solve failed", report));
        };
        z += delta;
        let dist = (z - seed).norm();
        if dist.is_nan() || dist > opts.divergence_radius {
            return Err(SolveError::new(
                FailureKind::Diverged,
                format!("iterate ({}, {}) is {dist:.3} from the seed", z[0], z[1]),
                report,
            ));
        }
    }
    Err(SolveError::new(
        FailureKind::MaxIters,
        format!("no convergence in {} iterations", opts.max_iters),
        report,
    ))
}
