//! The unforced pendulum inside the separatrix loop: energy levels, the
//! period function `T_c`, its inversion, and resonance bookkeeping.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{hamiltonian, planar_rhs, ForcingSpec, ForcingTerm, PlanarState, SystemSpec};
use crate::error::{Error, Result};
use crate::integrator::{find_event, Direction, EventSpec, IntegratorConfig};

/// Energy `c` of a libration orbit, strictly between the centre (-1) and the
/// separatrix (+1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EnergyLevel(f64);

impl EnergyLevel {
    pub fn new(c: f64) -> Result<Self> {
        if c > -1.0 && c < 1.0 {
            Ok(Self(c))
        } else {
            Err(Error::OutOfRange { what: "energy level c", value: c, range: "(-1, 1)" })
        }
    }

    /// Level through `(0, v0)`.
    pub fn from_axis_velocity(v0: f64) -> Result<Self> {
        check_axis_velocity(v0)?;
        Self::new(0.5 * v0 * v0 - 1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Positive velocity where the level crosses `u = 0`.
    pub fn axis_velocity(self) -> f64 {
        (2.0 * (self.0 + 1.0)).sqrt()
    }
}

impl TryFrom<f64> for EnergyLevel {
    type Error = Error;
    fn try_from(c: f64) -> Result<Self> {
        Self::new(c)
    }
}

impl From<EnergyLevel> for f64 {
    fn from(c: EnergyLevel) -> f64 {
        c.0
    }
}

fn check_axis_velocity(v0: f64) -> Result<()> {
    if v0 > 0.0 && v0 < 2.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange { what: "axis velocity v0", value: v0, range: "(0, 2)" })
    }
}

/// Resonance `T_c = (m / n) T` between a libration orbit and the forcing.
///
/// `m` is the number of forcing periods (map iterates) needed to close the
/// orbit and `n` the number of loops around the centre it makes meanwhile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSpec {
    pub m: u32,
    pub n: u32,
    pub period: f64,
    pub omega: f64,
    pub level: EnergyLevel,
    pub orbit_period: f64,
}

impl ResonanceSpec {
    /// Chooses the forcing period so the level through `(0, v0)` is resonant:
    /// `T = n T_c / m`.
    pub fn from_axis_velocity(v0: f64, m: u32, n: u32) -> Result<Self> {
        check_mn(m, n)?;
        let level = EnergyLevel::from_axis_velocity(v0)?;
        let orbit_period = period_of_level(v0)?;
        let period = n as f64 * orbit_period / m as f64;
        Ok(Self { m, n, period, omega: 2.0 * PI / period, level, orbit_period })
    }

    pub fn axis_point(&self) -> PlanarState {
        PlanarState::new(0.0, self.level.axis_velocity())
    }

    /// Duration `m T` of one resonant cycle.
    pub fn cycle_duration(&self) -> f64 {
        self.m as f64 * self.period
    }

    /// Forcing with this resonance's base frequency.
    pub fn forcing(&self, terms: Vec<ForcingTerm>) -> Result<ForcingSpec> {
        ForcingSpec::new(self.omega, terms)
    }

    pub fn system(&self, terms: Vec<ForcingTerm>, epsilon: f64) -> Result<SystemSpec> {
        SystemSpec::new(self.forcing(terms)?, epsilon)
    }
}

fn check_mn(m: u32, n: u32) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput(format!("m and n must be positive (m = {m}, n = {n})")));
    }
    if gcd(m, n) != 1 {
        return Err(Error::InvalidInput(format!("m = {m} and n = {n} are not coprime")));
    }
    Ok(())
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Point `(0, v0)` on the level `c`, with `v0 > 0`.
pub fn ic_on_axis(c: f64) -> Result<PlanarState> {
    let level = EnergyLevel::new(c)?;
    Ok(PlanarState::new(0.0, level.axis_velocity()))
}

/// Tolerances used for period evaluation; tighter than the general default
/// because the period feeds resonance construction.
pub fn period_config() -> IntegratorConfig {
    IntegratorConfig::default().with_tol(1e-12)
}

/// Period of the libration orbit through `(0, v0)`: return time to
/// `{u = 0, v > 0}` of the unforced flow.
pub fn period_of_level(v0: f64) -> Result<f64> {
    period_of_level_with(v0, &period_config())
}

pub fn period_of_level_with(v0: f64, cfg: &IntegratorConfig) -> Result<f64> {
    check_axis_velocity(v0)?;
    let sys = SystemSpec::new(ForcingSpec::new(1.0, vec![])?, 0.0)?;
    let event = EventSpec::new(|y: &[f64], _t| y[0], Direction::Rising, 1).with_horizon(1e4);
    let hit = find_event(planar_rhs(&sys), &[0.0, v0], 0.0, &event, cfg)?;
    Ok(hit.t)
}

/// Closed form `4 K(v0 / 2)` with `K` evaluated by the arithmetic–geometric mean.
pub fn period_oracle(v0: f64) -> Result<f64> {
    check_axis_velocity(v0)?;
    Ok(4.0 * complete_elliptic_k(0.5 * v0))
}

/// Complete elliptic integral of the first kind, modulus convention `K(k)`.
pub fn complete_elliptic_k(k: f64) -> f64 {
    assert!((0.0..1.0).contains(&k.abs()), "modulus must satisfy |k| < 1");
    let mut a = 1.0;
    let mut b = (1.0 - k * k).sqrt();
    while (a - b).abs() > 1e-15 * a {
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    PI / (2.0 * a)
}

/// Energy level whose orbit period is `(m / n) * target_period`, found by
/// bracketing and bisection in the axis velocity.
pub fn level_for_period(target_period: f64, m: u32, n: u32) -> Result<ResonanceSpec> {
    check_mn(m, n)?;
    if !(target_period.is_finite() && target_period > 0.0) {
        return Err(Error::OutOfRange { what: "forcing period", value: target_period, range: "(0, inf)" });
    }
    let wanted = m as f64 * target_period / n as f64;
    if wanted <= 2.0 * PI {
        return Err(Error::Unattainable { period: wanted });
    }
    let excess = |v0: f64| period_of_level(v0).map(|p| p - wanted);

    let mut hi = 1.0;
    let mut f_hi = excess(hi)?;
    while f_hi < 0.0 {
        hi = 2.0 - 0.1 * (2.0 - hi);
        if 2.0 - hi < 1e-14 {
            return Err(Error::NoConvergence(format!("period {wanted} beyond the separatrix bracket")));
        }
        f_hi = excess(hi)?;
    }
    let mut lo = hi;
    let mut f_lo = f_hi;
    while f_lo > 0.0 {
        lo *= 0.25;
        if lo < 1e-9 {
            return Err(Error::NoConvergence(format!("period {wanted} too close to 2*pi")));
        }
        f_lo = excess(lo)?;
    }
    if f_lo == 0.0 {
        hi = lo;
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let f = excess(mid)?;
        if f == 0.0 {
            lo = mid;
            hi = mid;
        } else if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let v0 = 0.5 * (lo + hi);
    let orbit_period = period_of_level(v0)?;
    let level = EnergyLevel::new(hamiltonian(PlanarState::new(0.0, v0)))?;
    Ok(ResonanceSpec {
        m,
        n,
        period: target_period,
        omega: 2.0 * PI / target_period,
        level,
        orbit_period,
    })
}
