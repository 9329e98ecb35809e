//! The forced pendulum `u' = v, v' = -sin u + eps * g(t)` and the augmented
//! right-hand sides (variational, clock-extended) built on top of it.
//!
//! Augmented states are flat `f64` slices so a single integrator drives every
//! system: `[u, v, J00, J01, J10, J11]` for the planar variational system and
//! `[u, v, s, J (3x3 row-major)]` for the clock-extended one.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix2, Matrix3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `(u, v)` of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarState {
    pub u: f64,
    pub v: f64,
}

impl PlanarState {
    pub const ORIGIN: PlanarState = PlanarState { u: 0.0, v: 0.0 };

    pub fn new(u: f64, v: f64) -> Self {
        debug_assert!(u.is_finite() && v.is_finite(), "non-finite state ({u}, {v})");
        Self { u, v }
    }

    /// Fallible constructor for values coming from outside the crate.
    pub fn try_new(u: f64, v: f64) -> Result<Self> {
        if u.is_finite() && v.is_finite() {
            Ok(Self { u, v })
        } else {
            Err(Error::InvalidInput(format!("non-finite state ({u}, {v})")))
        }
    }

    pub fn from_slice(y: &[f64]) -> Self {
        Self::new(y[0], y[1])
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.u, self.v]
    }

    pub fn distance(self, other: PlanarState) -> f64 {
        (self.u - other.u).hypot(self.v - other.v)
    }

    pub fn norm(self) -> f64 {
        self.u.hypot(self.v)
    }
}

impl fmt::Display for PlanarState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseKind {
    Sine,
    Cosine,
}

/// One Fourier term `amplitude * sin(harmonic * omega * t)` (or cosine).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForcingTerm {
    pub amplitude: f64,
    pub harmonic: u32,
    pub kind: PhaseKind,
}

impl ForcingTerm {
    pub fn sine(amplitude: f64, harmonic: u32) -> Self {
        Self { amplitude, harmonic, kind: PhaseKind::Sine }
    }

    pub fn cosine(amplitude: f64, harmonic: u32) -> Self {
        Self { amplitude, harmonic, kind: PhaseKind::Cosine }
    }
}

/// State-independent `T`-periodic forcing `g(t)` given as a finite Fourier sum.
///
/// An empty term list is the unforced case `g = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForcingSpec {
    omega: f64,
    terms: Vec<ForcingTerm>,
}

impl ForcingSpec {
    pub fn new(omega: f64, terms: Vec<ForcingTerm>) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::OutOfRange { what: "omega", value: omega, range: "(0, inf)" });
        }
        if let Some(t) = terms.iter().find(|t| t.harmonic == 0 || !t.amplitude.is_finite()) {
            return Err(Error::InvalidInput(format!("bad forcing term {t:?}")));
        }
        Ok(Self { omega, terms })
    }

    pub fn from_period(period: f64, terms: Vec<ForcingTerm>) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::OutOfRange { what: "period", value: period, range: "(0, inf)" });
        }
        Self::new(2.0 * PI / period, terms)
    }

    /// `g(t) = sin(omega t)`.
    pub fn sine(omega: f64) -> Result<Self> {
        Self::new(omega, vec![ForcingTerm::sine(1.0, 1)])
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn terms(&self) -> &[ForcingTerm] {
        &self.terms
    }

    /// Same spectrum, different base frequency.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(omega, self.terms.clone())
    }

    pub fn with_period(&self, period: f64) -> Result<Self> {
        Self::from_period(period, self.terms.clone())
    }

    pub fn value(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                let arg = term.harmonic as f64 * self.omega * t;
                match term.kind {
                    PhaseKind::Sine => term.amplitude * arg.sin(),
                    PhaseKind::Cosine => term.amplitude * arg.cos(),
                }
            })
            .sum()
    }

    /// `dg/dt`.
    pub fn derivative(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                let k = term.harmonic as f64 * self.omega;
                match term.kind {
                    PhaseKind::Sine => term.amplitude * k * (k * t).cos(),
                    PhaseKind::Cosine => -term.amplitude * k * (k * t).sin(),
                }
            })
            .sum()
    }

    /// Parses `"1*sin(1),4*cos(2)"`. A bare `sin(k)` means amplitude 1.
    pub fn parse_terms(text: &str) -> Result<Vec<ForcingTerm>> {
        let bad = |s: &str| Error::InvalidInput(format!("cannot parse forcing term `{s}`"));
        let mut terms = Vec::new();
        for raw in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (amp, func) = match raw.split_once('*') {
                Some((a, f)) => (a.trim().parse::<f64>().map_err(|_| bad(raw))?, f.trim()),
                None => (1.0, raw),
            };
            let (kind, rest) = if let Some(rest) = func.strip_prefix("sin") {
                (PhaseKind::Sine, rest)
            } else if let Some(rest) = func.strip_prefix("cos") {
                (PhaseKind::Cosine, rest)
            } else {
                return Err(bad(raw));
            };
            let harmonic = rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|h| h.trim().parse::<u32>().ok())
                .filter(|&h| h > 0)
                .ok_or_else(|| bad(raw))?;
            terms.push(ForcingTerm { amplitude: amp, harmonic, kind });
        }
        Ok(terms)
    }

    pub fn format_terms(terms: &[ForcingTerm]) -> String {
        terms
            .iter()
            .map(|t| {
                let f = match t.kind {
                    PhaseKind::Sine => "sin",
                    PhaseKind::Cosine => "cos",
                };
                format!("{}*{}({})", t.amplitude, f, t.harmonic)
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// The full forced system: forcing spectrum plus perturbation size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub forcing: ForcingSpec,
    pub epsilon: f64,
}

impl SystemSpec {
    pub fn new(forcing: ForcingSpec, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::OutOfRange { what: "epsilon", value: epsilon, range: "[0, inf)" });
        }
        Ok(Self { forcing, epsilon })
    }

    /// Same forcing, `eps = 0`.
    pub fn unperturbed(&self) -> Self {
        Self { forcing: self.forcing.clone(), epsilon: 0.0 }
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.forcing.clone(), epsilon)
    }

    pub fn period(&self) -> f64 {
        self.forcing.period()
    }

    /// `eps * g(t)`, the second component of the perturbation.
    pub fn perturbation(&self, t: f64) -> f64 {
        if self.epsilon == 0.0 {
            0.0
        } else {
            self.epsilon * self.forcing.value(t)
        }
    }
}

/// Planar state together with its 2x2 sensitivity to the initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalState2 {
    pub base: PlanarState,
    pub jac: Matrix2<f64>,
}

impl VariationalState2 {
    pub const DIM: usize = 6;

    pub fn initial(base: PlanarState) -> Self {
        Self { base, jac: Matrix2::identity() }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let j = &self.jac;
        vec![self.base.u, self.base.v, j[(0, 0)], j[(0, 1)], j[(1, 0)], j[(1, 1)]]
    }

    pub fn from_slice(y: &[f64]) -> Self {
        Self {
            base: PlanarState::from_slice(y),
            jac: Matrix2::new(y[2], y[3], y[4], y[5]),
        }
    }
}

/// State of the clock-extended system `(u, v, s)` with its 3x3 sensitivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalState3 {
    pub base: PlanarState,
    pub clock: f64,
    pub jac: Matrix3<f64>,
}

impl VariationalState3 {
    pub const DIM: usize = 12;

    pub fn initial(base: PlanarState, clock: f64) -> Self {
        Self { base, clock, jac: Matrix3::identity() }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut y = vec![self.base.u, self.base.v, self.clock];
        for r in 0..3 {
            for c in 0..3 {
                y.push(self.jac[(r, c)]);
            }
        }
        y
    }

    pub fn from_slice(y: &[f64]) -> Self {
        Self {
            base: PlanarState::from_slice(y),
            clock: y[2],
            jac: Matrix3::from_row_slice(&y[3..12]),
        }
    }
}

/// Vector field `(v, -sin u + eps g(t))`, returned as a velocity.
pub fn eval_field(state: PlanarState, t: f64, sys: &SystemSpec) -> PlanarState {
    PlanarState { u: state.v, v: -state.u.sin() + sys.perturbation(t) }
}

/// `H(u, v) = v^2 / 2 - cos u`.
pub fn hamiltonian(state: PlanarState) -> f64 {
    0.5 * state.v * state.v - state.u.cos()
}

/// Planar cross product `a1 b2 - a2 b1`.
pub fn wedge(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Jacobian of the field in the state variables. The forcing does not depend
/// on the state, so this is independent of `eps` and `t`.
pub fn field_jacobian(state: PlanarState) -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -state.u.cos(), 0.0)
}

pub fn variational_field_2(y: &VariationalState2, t: f64, sys: &SystemSpec) -> VariationalState2 {
    VariationalState2 {
        base: eval_field(y.base, t, sys),
        jac: field_jacobian(y.base) * y.jac,
    }
}

pub fn variational_field_3(y: &VariationalState3, sys: &SystemSpec) -> VariationalState3 {
    let base = eval_field(y.base, y.clock, sys);
    let j = variational_jacobian_3(y.base, y.clock, sys);
    VariationalState3 { base, clock: 1.0, jac: j * y.jac }
}

fn variational_jacobian_3(x: PlanarState, s: f64, sys: &SystemSpec) -> Matrix3<f64> {
    let dg = if sys.epsilon == 0.0 { 0.0 } else { sys.epsilon * sys.forcing.derivative(s) };
    Matrix3::new(0.0, 1.0, 0.0, -x.u.cos(), 0.0, dg, 0.0, 0.0, 0.0)
}

/// Flat right-hand side of the planar system (dimension 2).
pub fn planar_rhs(sys: &SystemSpec) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    move |t, y, dy| {
        dy[0] = y[1];
        dy[1] = -y[0].sin() + sys.perturbation(t);
    }
}

/// Flat right-hand side of the 2 + 4 variational system.
pub fn variational_rhs_2(sys: &SystemSpec) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    move |t, y, dy| {
        let c = -y[0].cos();
        dy[0] = y[1];
        dy[1] = -y[0].sin() + sys.perturbation(t);
        // Df = [[0, 1], [c, 0]]; d/dt J = Df J
        dy[2] = y[4];
        dy[3] = y[5];
        dy[4] = c * y[2];
        dy[5] = c * y[3];
    }
}

/// Flat right-hand side of the 3 + 9 clock-extended variational system.
/// The clock `s` replaces explicit time, so `t` is ignored.
pub fn variational_rhs_3(sys: &SystemSpec) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    move |_t, y, dy| {
        let s = y[2];
        let c = -y[0].cos();
        let dg = if sys.epsilon == 0.0 { 0.0 } else { sys.epsilon * sys.forcing.derivative(s) };
        dy[0] = y[1];
        dy[1] = -y[0].sin() + sys.perturbation(s);
        dy[2] = 1.0;
        let jac = &y[3..12];
        for col in 0..3 {
            dy[3 + col] = jac[3 + col];
            dy[6 + col] = c * jac[col] + dg * jac[6 + col];
            dy[9 + col] = 0.0;
        }
    }
}
