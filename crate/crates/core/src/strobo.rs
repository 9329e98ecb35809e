//! The stroboscopic map `s(x) = phi(t0 + T; x, t0)`, its iterates, its
//! differential, and bulk scans for phase portraits.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{planar_rhs, variational_rhs_2, PlanarState, SystemSpec, VariationalState2};
use crate::error::Result;
use crate::integrator::{integrate, integrate_sampled, IntegratorConfig, Stepper};

/// Trajectories leaving `|v| <= ESCAPE_SPEED` are truncated in scans.
pub const ESCAPE_SPEED: f64 = 10.0;

/// Flow map `phi(t1; x, t0)` of the forced system (either time direction).
pub fn flow(x: PlanarState, t0: f64, t1: f64, sys: &SystemSpec, cfg: &IntegratorConfig) -> Result<PlanarState> {
    if t0 == t1 {
        return Ok(x);
    }
    let y = integrate(planar_rhs(sys), &x.to_array(), t0, t1, cfg)?;
    Ok(PlanarState::from_slice(&y))
}

/// One application of the stroboscopic map at phase `t0`.
pub fn strobo(x: PlanarState, t0: f64, sys: &SystemSpec, cfg: &IntegratorConfig) -> Result<PlanarState> {
    flow(x, t0, t0 + sys.period(), sys, cfg)
}

/// `s^m(x)` as a single integration over `[t0, t0 + m T]`.
pub fn strobo_power(x: PlanarState, t0: f64, sys: &SystemSpec, m: u32, cfg: &IntegratorConfig) -> Result<PlanarState> {
    flow(x, t0, t0 + m as f64 * sys.period(), sys, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OrbitStatus {
    Complete,
    /// `|v|` exceeded [`ESCAPE_SPEED`] before this iterate.
    Escaped { at_iterate: usize },
    Failed { message: String },
}

/// Iterates of the stroboscopic map, starting with the initial point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StroboOrbit {
    pub points: Vec<PlanarState>,
    pub t0: f64,
    pub period: f64,
    pub epsilon: f64,
    pub status: OrbitStatus,
}

impl StroboOrbit {
    pub fn is_complete(&self) -> bool {
        self.status == OrbitStatus::Complete
    }
}

/// `x, s(x), ..., s^k(x)` sampled from one integration over `[t0, t0 + k T]`.
pub fn strobo_iterate(
    x: PlanarState,
    t0: f64,
    sys: &SystemSpec,
    k: usize,
    cfg: &IntegratorConfig,
) -> Result<StroboOrbit> {
    let period = sys.period();
    let times: Vec<f64> = (1..=k).map(|i| t0 + i as f64 * period).collect();
    let samples = integrate_sampled(planar_rhs(sys), &x.to_array(), t0, &times, cfg)?;
    let mut points = Vec::with_capacity(k + 1);
    points.push(x);
    points.extend(samples.iter().map(|y| PlanarState::from_slice(y)));
    Ok(StroboOrbit { points, t0, period, epsilon: sys.epsilon, status: OrbitStatus::Complete })
}

/// Like [`strobo_iterate`] but records failures in the orbit instead of
/// returning them, and truncates trajectories that escape.
pub fn strobo_iterate_guarded(
    x: PlanarState,
    t0: f64,
    sys: &SystemSpec,
    k: usize,
    cfg: &IntegratorConfig,
) -> StroboOrbit {
    let period = sys.period();
    let mut orbit = StroboOrbit { points: vec![x], t0, period, epsilon: sys.epsilon, status: OrbitStatus::Complete };
    let mut stepper = match Stepper::new(planar_rhs(sys), &x.to_array(), t0, cfg) {
        Ok(s) => s,
        Err(e) => {
            orbit.status = OrbitStatus::Failed { message: e.to_string() };
            return orbit;
        }
    };
    for i in 1..=k {
        let target = t0 + i as f64 * period;
        while stepper.t() != target {
            if let Err(e) = stepper.step_toward(target) {
                orbit.status = OrbitStatus::Failed { message: e.to_string() };
                return orbit;
            }
            if stepper.y()[1].abs() > ESCAPE_SPEED {
                orbit.status = OrbitStatus::Escaped { at_iterate: i };
                return orbit;
            }
        }
        orbit.points.push(PlanarState::from_slice(stepper.y()));
    }
    orbit
}

/// `D s^m(x)`: the variational system integrated over `[t0, t0 + duration]`.
pub fn monodromy(
    x: PlanarState,
    t0: f64,
    sys: &SystemSpec,
    duration: f64,
    cfg: &IntegratorConfig,
) -> Result<Matrix2<f64>> {
    Ok(flow_with_jacobian(x, t0, duration, sys, cfg)?.jac)
}

/// End point and state-transition matrix of the flow over `duration`.
pub fn flow_with_jacobian(
    x: PlanarState,
    t0: f64,
    duration: f64,
    sys: &SystemSpec,
    cfg: &IntegratorConfig,
) -> Result<VariationalState2> {
    let start = VariationalState2::initial(x);
    if duration == 0.0 {
        return Ok(start);
    }
    let y = integrate(variational_rhs_2(sys), &start.to_vec(), t0, t0 + duration, cfg)?;
    Ok(VariationalState2::from_slice(&y))
}

/// Polar angle around the origin accumulated continuously along
/// `phi(t; x, t0)` for `t` in `[t0, t0 + duration]`. Librations run clockwise,
/// so a full loop contributes `-2 pi`.
pub fn accumulated_angle(
    x: PlanarState,
    t0: f64,
    duration: f64,
    sys: &SystemSpec,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let base = planar_rhs(sys);
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        base(t, &y[..2], &mut dy[..2]);
        let r2 = y[0] * y[0] + y[1] * y[1];
        dy[2] = (y[0] * dy[1] - y[1] * dy[0]) / r2;
    };
    let y = integrate(rhs, &[x.u, x.v, 0.0], t0, t0 + duration, cfg)?;
    Ok(y[2])
}

/// Number of clockwise loops around the origin over `duration`.
pub fn loops_around_origin(
    x: PlanarState,
    t0: f64,
    duration: f64,
    sys: &SystemSpec,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    Ok(-accumulated_angle(x, t0, duration, sys, cfg)? / (2.0 * PI))
}

/// Iterates every seed independently (in parallel); results keep the seed order.
pub fn scan(
    seeds: &[PlanarState],
    t0: f64,
    sys: &SystemSpec,
    k: usize,
    cfg: &IntegratorConfig,
) -> Vec<StroboOrbit> {
    seeds
        .par_iter()
        .map(|&x| strobo_iterate_guarded(x, t0, sys, k, cfg))
        .collect()
}

/// `count` evenly spaced points on the segment from `a` to `b` (inclusive).
pub fn seed_line(a: PlanarState, b: PlanarState, count: usize) -> Vec<PlanarState> {
    match count {
        0 => vec![],
        1 => vec![a],
        _ => (0..count)
            .map(|i| {
                let s = i as f64 / (count - 1) as f64;
                PlanarState::new(a.u + s * (b.u - a.u), a.v + s * (b.v - a.v))
            })
            .collect(),
    }
}

/// Seeds on the vertical axis from `(0, v0 - 2 eps)` to `(0, v0 + 2 eps)`.
pub fn axis_seeds(v0: f64, epsilon: f64, count: usize) -> Vec<PlanarState> {
    seed_line(
        PlanarState::new(0.0, v0 - 2.0 * epsilon),
        PlanarState::new(0.0, v0 + 2.0 * epsilon),
        count,
    )
}

/// Seeds on the diagonal from `(v1 - 2 eps, v1 - 2 eps)` to `(v1 + 2 eps, v1 + 2 eps)`.
pub fn diagonal_seeds(v1: f64, epsilon: f64, count: usize) -> Vec<PlanarState> {
    let lo = v1 - 2.0 * epsilon;
    let hi = v1 + 2.0 * epsilon;
    seed_line(PlanarState::new(lo, lo), PlanarState::new(hi, hi), count)
}

/// `count` points of the unforced orbit through `x`, spread uniformly in time
/// over one period.
pub fn points_on_orbit(x: PlanarState, orbit_period: f64, count: usize, cfg: &IntegratorConfig) -> Result<Vec<PlanarState>> {
    let sys = SystemSpec::new(crate::dynamics::ForcingSpec::new(1.0, vec![])?, 0.0)?;
    let times: Vec<f64> = (1..count).map(|i| i as f64 * orbit_period / count as f64).collect();
    let mut points = vec![x];
    if !times.is_empty() {
        let samples = integrate_sampled(planar_rhs(&sys), &x.to_array(), 0.0, &times, cfg)?;
        points.extend(samples.iter().map(|y| PlanarState::from_slice(y)));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{hamiltonian, ForcingSpec};
    use crate::unperturbed::period_of_level;

    fn unforced_with_period(period: f64) -> SystemSpec {
        SystemSpec::new(ForcingSpec::from_period(period, vec![crate::ForcingTerm::sine(1.0, 1)]).unwrap(), 0.0)
            .unwrap()
    }

    #[test]
    fn full_loop_returns() {
        let cfg = IntegratorConfig::default();
        let tc = period_of_level(1.6).unwrap();
        let sys = unforced_with_period(tc);
        let x = PlanarState::new(0.0, 1.6);
        let y = strobo(x, 0.0, &sys, &cfg).unwrap();
        assert!(y.distance(x) < 1e-7);
    }

    #[test]
    fn third_of_period_is_three_periodic() {
        let cfg = IntegratorConfig::default();
        let tc = period_of_level(1.6).unwrap();
        let sys = unforced_with_period(tc / 3.0);
        let x = PlanarState::new(0.0, 1.6);
        let once = strobo(x, 0.0, &sys, &cfg).unwrap();
        assert!(once.distance(x) > 0.5);
        let thrice = strobo_power(x, 0.0, &sys, 3, &cfg).unwrap();
        assert!(thrice.distance(x) < 1e-7);
    }

    #[test]
    fn two_fifths_rotation() {
        let cfg = IntegratorConfig::default();
        let tc = period_of_level(1.6).unwrap();
        let sys = unforced_with_period(2.0 * tc / 5.0);
        let x = PlanarState::new(0.0, 1.6);
        let orbit = strobo_iterate(x, 0.0, &sys, 5, &cfg).unwrap();
        assert!(orbit.points[5].distance(x) < 1e-7);
        for p in &orbit.points[1..5] {
            assert!(p.distance(x) > 0.1);
            assert!((hamiltonian(*p) - 0.28).abs() < 1e-7);
        }
        let loops = loops_around_origin(x, 0.0, 5.0 * sys.period(), &sys, &cfg).unwrap();
        assert!((loops - 2.0).abs() < 1e-6, "{loops}");
    }

    #[test]
    fn iterate_matches_repeated_map() {
        let cfg = IntegratorConfig::default();
        let sys = SystemSpec::new(ForcingSpec::sine(2.3).unwrap(), 0.1).unwrap();
        let x = PlanarState::new(0.2, 1.1);
        let orbit = strobo_iterate(x, 0.4, &sys, 4, &cfg).unwrap();
        let mut p = x;
        for q in &orbit.points[1..] {
            p = strobo(p, 0.4, &sys, &cfg).unwrap();
            assert!(p.distance(*q) < 1e-8);
        }
    }

    #[test]
    fn monodromy_of_zero_duration_is_identity() {
        let sys = SystemSpec::new(ForcingSpec::sine(1.0).unwrap(), 0.3).unwrap();
        let m = monodromy(PlanarState::new(0.1, 0.2), 0.0, &sys, 0.0, &IntegratorConfig::default()).unwrap();
        assert_eq!(m, Matrix2::identity());
    }

    #[test]
    fn scan_flags_escapes_and_keeps_order() {
        let cfg = IntegratorConfig::default();
        let sys = SystemSpec::new(ForcingSpec::sine(2.0).unwrap(), 0.0).unwrap();
        let seeds = vec![PlanarState::new(0.0, 0.5), PlanarState::new(0.0, 12.0), PlanarState::new(0.0, 1.0)];
        let orbits = scan(&seeds, 0.0, &sys, 3, &cfg);
        assert_eq!(orbits.len(), 3);
        assert!(orbits[0].is_complete() && orbits[2].is_complete());
        assert_eq!(orbits[1].status, OrbitStatus::Escaped { at_iterate: 1 });
        assert_eq!(orbits[0].points[0], seeds[0]);
        assert_eq!(orbits[2].points[0], seeds[2]);
        assert_eq!(orbits[0].points.len(), 4);
    }

    #[test]
    fn seed_lines() {
        let s = axis_seeds(1.6, 0.2, 5);
        assert_eq!(s.len(), 5);
        assert!((s[0].v - 1.2).abs() < 1e-15 && (s[4].v - 2.0).abs() < 1e-15);
        let d = diagonal_seeds(1.0, 0.1, 3);
        assert_eq!(d[1], PlanarState::new(1.0, 1.0));
        assert!(seed_line(s[0], s[1], 0).is_empty());
    }

    #[test]
    fn orbit_points_share_energy() {
        let cfg = IntegratorConfig::default();
        let tc = period_of_level(1.6).unwrap();
        let pts = points_on_orbit(PlanarState::new(0.0, 1.6), tc, 10, &cfg).unwrap();
        assert_eq!(pts.len(), 10);
        for p in pts {
            assert!((hamiltonian(p) - 0.28).abs() < 1e-8);
        }
    }
}
