use nalgebra::{Matrix2, Vector2};

use super::{
    inverse_condition, newton_step, FailureKind, NewtonIterate, NewtonOptions, NewtonReport, PeriodicOrbitRecord,
    SolveError, SolverKind,
};
use crate::dynamics::{PlanarState, SystemSpec};
use crate::strobo::flow_with_jacobian;

/// Newton's method on `F(x) = s^m(x) - x` at fixed phase `t0`.
///
/// Each iterate integrates the variational system once over
/// `[t0, t0 + m T]`, giving both `s^m(x)` and `DF = D s^m(x) - I`.
pub fn newton_strobo(
    seed: PlanarState,
    t0: f64,
    sys: &SystemSpec,
    m: u32,
    opts: &NewtonOptions,
) -> Result<(PeriodicOrbitRecord, NewtonReport), SolveError> {
    let mut report = NewtonReport::default();
    if m == 0 {
        return Err(SolveError::new(FailureKind::Integration, "m must be >= 1", report));
    }
    let duration = m as f64 * sys.period();
    let cfg = &opts.integrator;
    let mut x = seed;
    for iter in 0..=opts.max_iters {
        let end = match flow_with_jacobian(x, t0, duration, sys, cfg) {
            Ok(v) => v,
            Err(e) => return Err(SolveError::integration(e, report)),
        };
        let f = Vector2::new(end.base.u - x.u, end.base.v - x.v);
        let residual = f.norm();
        report.iterates.push(NewtonIterate { point: x.to_array(), residual });
        let df = end.jac - Matrix2::identity();
        if inverse_condition(&df) < opts.singular_tol {
            return Err(SolveError::new(
                FailureKind::SingularJacobian,
                format!("D s^m - I is numerically singular at {x} (multiplier 1)"),
                report,
            ));
        }
        if residual < opts.residual_tol {
            report.converged = true;
            return match PeriodicOrbitRecord::assemble(x, t0, m, sys, end.jac, residual, SolverKind::Strobo, cfg) {
                Ok(record) => Ok((record, report)),
                Err(e) => Err(SolveError::integration(e, report)),
            };
        }
        if iter == opts.max_iters {
            break;
        }
        let Some(delta) = newton_step(&df, &f) else {
            return Err(SolveError::new(FailureKind::SingularJacobian, "LU solve failed", report));
        };
        x = PlanarState::new(x.u + delta[0], x.v + delta[1]);
        let dist = x.distance(seed);
        if dist.is_nan() || dist > opts.divergence_radius {
            return Err(SolveError::new(
                FailureKind::Diverged,
                format!("iterate {x} is {dist:.3} from the seed"),
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
