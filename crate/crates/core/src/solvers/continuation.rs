use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{newton_poincare, newton_strobo, NewtonOptions, PeriodicOrbitRecord, SolverKind};
use crate::error::Error;

/// Natural-parameter stepping in `eps`: halve on failure, grow on easy
/// convergence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepPolicy {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub grow: f64,
    pub shrink: f64,
    /// Converging in at most this many Newton iterations counts as easy.
    pub easy_iterations: usize,
}

impl Default for StepPolicy {
    fn default() -> Self {
        Self {
            initial_step: 0.01,
            min_step: 1e-5,
            max_step: 0.1,
            grow: 1.5,
            shrink: 0.5,
            easy_iterations: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("continuation stalled at eps = {last_eps} (step below {min_step:e})")]
pub struct ContinuationError {
    pub last_eps: f64,
    pub min_step: f64,
    /// Records accepted before the stall, starting with the input record.
    pub records: Vec<PeriodicOrbitRecord>,
}

/// Follows a converged orbit in `eps` up (or down) to `eps_target`.
///
/// The strobo solver keeps the phase `t0` fixed; the Poincaré solver lets
/// `(v0, t0)` move. Returns every accepted record, starting with `record`.
pub fn continue_in_epsilon(
    record: &PeriodicOrbitRecord,
    eps_target: f64,
    policy: &StepPolicy,
    opts: &NewtonOptions,
) -> Result<Vec<PeriodicOrbitRecord>, ContinuationError> {
    let mut records = vec![record.clone()];
    let stall = |records: Vec<PeriodicOrbitRecord>| ContinuationError {
        last_eps: records.last().map(|r| r.epsilon).unwrap_or(record.epsilon),
        min_step: policy.min_step,
        records,
    };
    if !(eps_target.is_finite() && eps_target >= 0.0) {
        return Err(stall(records));
    }
    let dir = if eps_target >= record.epsilon { 1.0 } else { -1.0 };
    let mut step = policy.initial_step.min(policy.max_step);
    loop {
        let last = records.last().expect("non-empty");
        let remaining = (eps_target - last.epsilon).abs();
        if remaining <= 1e-14 {
            return Ok(records);
        }
        let eps = if step >= remaining { eps_target } else { last.epsilon + dir * step };
        match solve_at(last, eps, opts) {
            Ok((next, iterations)) => {
                records.push(next);
                if iterations <= policy.easy_iterations {
                    step = (step * policy.grow).min(policy.max_step);
                }
            }
            Err(_) => {
                step *= policy.shrink;
                if step < policy.min_step {
                    return Err(stall(records));
                }
            }
        }
    }
}

fn solve_at(prev: &PeriodicOrbitRecord, eps: f64, opts: &NewtonOptions) -> Result<(PeriodicOrbitRecord, usize), Error> {
    let sys = prev.system().with_epsilon(eps)?;
    let solved = match prev.solver {
        SolverKind::Strobo => newton_strobo(prev.x_eps, prev.t0, &sys, prev.m, opts),
        SolverKind::Poincare => newton_poincare(prev.x_eps.v, prev.t0, &sys, prev.n, prev.m, opts),
    };
    let (mut rec, report) = solved.map_err(|e| Error::NoConvergence(e.to_string()))?;
    if prev.solver == SolverKind::Strobo {
        rec.n = rec.n.max(1);
    }
    Ok((rec, report.iterations()))
}
