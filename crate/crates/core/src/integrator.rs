//! Adaptive Dormand–Prince 5(4) integration with dense output and
//! directional event location.
//!
//! Systems are closures `rhs(t, y, dy)` over flat `f64` slices, so the same
//! stepper drives the planar flow, the variational systems and the Melnikov
//! quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            initial_step: 1e-3,
            max_step: 1.0,
            max_steps: 10_000_000,
        }
    }
}

impl IntegratorConfig {
    /// Same config with both tolerances set to `tol`.
    pub fn with_tol(self, tol: f64) -> Self {
        Self { rel_tol: tol, abs_tol: tol, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.rel_tol, self.abs_tol, self.initial_step, self.max_step]
            .iter()
            .all(|x| x.is_finite() && *x > 0.0)
            && self.max_steps > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("integrator config must be positive: {self:?}")))
        }
    }
}

// Dormand–Prince coefficients.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// error coefficients: 5th order weights minus embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// continuous extension (Hairer, Nørsett & Wanner)
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

/// Single-trajectory Dormand–Prince stepper.
///
/// After each accepted step the interval `[t_prev, t]` carries a dense
/// interpolant available through [`Stepper::dense`].
pub struct Stepper<F> {
    rhs: F,
    cfg: IntegratorConfig,
    dim: usize,
    t: f64,
    y: Vec<f64>,
    t_prev: f64,
    y_prev: Vec<f64>,
    h: f64,
    steps: usize,
    k: [Vec<f64>; 7],
    y_new: Vec<f64>,
    y_stage: Vec<f64>,
    cont: [Vec<f64>; 5],
}

impl<F> Stepper<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub fn new(rhs: F, y0: &[f64], t0: f64, cfg: &IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        if !t0.is_finite() || y0.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite initial data".into()));
        }
        let dim = y0.len();
        let zeros = || vec![0.0; dim];
        let mut k = [zeros(), zeros(), zeros(), zeros(), zeros(), zeros(), zeros()];
        rhs(t0, y0, &mut k[0]);
        Ok(Self {
            rhs,
            cfg: *cfg,
            dim,
            t: t0,
            y: y0.to_vec(),
            t_prev: t0,
            y_prev: y0.to_vec(),
            h: cfg.initial_step.min(cfg.max_step),
            steps: 0,
            k,
            y_new: zeros(),
            y_stage: zeros(),
            cont: [zeros(), zeros(), zeros(), zeros(), zeros()],
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn t_prev(&self) -> f64 {
        self.t_prev
    }

    pub fn y_prev(&self) -> &[f64] {
        &self.y_prev
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Takes one accepted step towards `t_limit`, never stepping past it.
    pub fn step_toward(&mut self, t_limit: f64) -> Result<()> {
        let dir = if t_limit >= self.t { 1.0 } else { -1.0 };
        let remaining = (t_limit - self.t).abs();
        if remaining == 0.0 {
            return Ok(());
        }
        let mut h = self.h.abs().min(self.cfg.max_step);
        loop {
            if self.steps >= self.cfg.max_steps {
                return Err(Error::StepLimitExceeded { max_steps: self.cfg.max_steps, t: self.t });
            }
            let mut last = false;
            if h >= remaining {
                h = remaining;
                last = true;
            } else if h > 0.5 * remaining && h < remaining {
                // avoid a sliver step at the end
                h = 0.5 * remaining;
            }
            let min_h = 16.0 * f64::EPSILON * self.t.abs().max(1.0);
            if h < min_h && !last {
                return Err(Error::StepUnderflow { t: self.t, h });
            }
            self.steps += 1;
            let err = self.attempt(dir * h);
            if err <= 1.0 {
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                self.accept(dir * h, last.then_some(t_limit));
                if !last || factor < 1.0 {
                    self.h = (h * factor).min(self.cfg.max_step);
                }
                return Ok(());
            }
            let factor = (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
            h *= factor;
        }
    }

    /// Advances exactly to `t1`.
    pub fn advance_to(&mut self, t1: f64) -> Result<()> {
        while self.t != t1 {
            self.step_toward(t1)?;
        }
        Ok(())
    }

    /// Computes all stages for a trial step `h` and returns the scaled error norm.
    fn attempt(&mut self, h: f64) -> f64 {
        let (t, n) = (self.t, self.dim);
        let [k1, k2, k3, k4, k5, k6, k7] = &mut self.k;
        let ys = &mut self.y_stage;
        let y = &self.y;
        for i in 0..n {
            ys[i] = y[i] + h * A21 * k1[i];
        }
        (self.rhs)(t + C2 * h, ys, k2);
        for i in 0..n {
            ys[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        (self.rhs)(t + C3 * h, ys, k3);
        for i in 0..n {
            ys[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        (self.rhs)(t + C4 * h, ys, k4);
        for i in 0..n {
            ys[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        (self.rhs)(t + C5 * h, ys, k5);
        for i in 0..n {
            ys[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        (self.rhs)(t + h, ys, k6);
        let yn = &mut self.y_new;
        for i in 0..n {
            yn[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        (self.rhs)(t + h, yn, k7);

        let mut sum = 0.0;
        for i in 0..n {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = self.cfg.abs_tol + self.cfg.rel_tol * y[i].abs().max(yn[i].abs());
            sum += (e / scale).powi(2);
        }
        let err = (sum / n as f64).sqrt();
        if err.is_finite() {
            err
        } else {
            f64::INFINITY
        }
    }

    fn accept(&mut self, h: f64, snap_to: Option<f64>) {
        let n = self.dim;
        let [k1, _k2, k3, k4, k5, k6, k7] = &self.k;
        for i in 0..n {
            let dy = self.y_new[i] - self.y[i];
            let bspl = h * k1[i] - dy;
            self.cont[0][i] = self.y[i];
            self.cont[1][i] = dy;
            self.cont[2][i] = bspl;
            self.cont[3][i] = dy - h * k7[i] - bspl;
            self.cont[4][i] =
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        self.t_prev = self.t;
        self.y_prev.copy_from_slice(&self.y);
        self.t = snap_to.unwrap_or(self.t + h);
        self.y.copy_from_slice(&self.y_new);
        // FSAL
        let (first, rest) = self.k.split_at_mut(1);
        first[0].copy_from_slice(&rest[5]);
    }

    /// Dense output at `t` inside the last accepted step.
    pub fn dense(&self, t: f64, out: &mut [f64]) {
        let h = self.t - self.t_prev;
        if h == 0.0 {
            out.copy_from_slice(&self.y);
            return;
        }
        let theta = (t - self.t_prev) / h;
        let theta1 = 1.0 - theta;
        let c = &self.cont;
        for i in 0..self.dim {
            out[i] = c[0][i]
                + theta * (c[1][i] + theta1 * (c[2][i] + theta * (c[3][i] + theta1 * c[4][i])));
        }
    }
}

/// Integrates from `t0` to `t1` (either direction) and returns the final state.
pub fn integrate<F>(rhs: F, y0: &[f64], t0: f64, t1: f64, cfg: &IntegratorConfig) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let mut stepper = Stepper::new(rhs, y0, t0, cfg)?;
    stepper.advance_to(t1)?;
    Ok(stepper.y().to_vec())
}

/// One integration passing exactly through each of `times` (monotone, all
/// on the same side of `t0`). Returns the state at every requested time.
pub fn integrate_sampled<F>(
    rhs: F,
    y0: &[f64],
    t0: f64,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let mut stepper = Stepper::new(rhs, y0, t0, cfg)?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        stepper.advance_to(t)?;
        out.push(stepper.y().to_vec());
    }
    Ok(out)
}

/// Integrates to `t1`, handing every accepted step `(t, y)` to `observe`
/// (including the initial point). `observe` returns `false` to stop early.
pub fn integrate_observed<F, O>(
    rhs: F,
    y0: &[f64],
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
    mut observe: O,
) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]) -> bool,
{
    let mut stepper = Stepper::new(rhs, y0, t0, cfg)?;
    if !observe(t0, y0) {
        return Ok(y0.to_vec());
    }
    while stepper.t() != t1 {
        stepper.step_toward(t1)?;
        if !observe(stepper.t(), stepper.y()) {
            break;
        }
    }
    Ok(stepper.y().to_vec())
}

/// Crossing direction filter for [`EventSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Rising,
    Falling,
    Either,
}

impl Direction {
    fn accepts(self, rising: bool) -> bool {
        match self {
            Direction::Rising => rising,
            Direction::Falling => !rising,
            Direction::Either => true,
        }
    }

    pub fn from_sign(sign: i32) -> Self {
        match sign.signum() {
            1 => Direction::Rising,
            -1 => Direction::Falling,
            _ => Direction::Either,
        }
    }
}

/// Zero crossing of a scalar function of the state, counted in one direction.
pub struct EventSpec<G> {
    pub event_value: G,
    pub direction: Direction,
    pub target_count: usize,
    /// Longest elapsed time to search; `None` means `max_steps * max_step`.
    pub horizon: Option<f64>,
}

impl<G> EventSpec<G>
where
    G: Fn(&[f64], f64) -> f64,
{
    pub fn new(event_value: G, direction: Direction, target_count: usize) -> Self {
        Self { event_value, direction, target_count, horizon: None }
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = Some(horizon);
        self
    }
}

/// Located event: crossing time and the dense-output state there.
#[derive(Debug, Clone, PartialEq)]
pub struct EventHit {
    pub t: f64,
    pub y: Vec<f64>,
}

const EVENT_TOL: f64 = 1e-12;

/// Integrates forward from `t0` until the `target_count`-th crossing of
/// `event_value` in the requested direction. A zero at the start does not count.
pub fn find_event<F, G>(
    rhs: F,
    y0: &[f64],
    t0: f64,
    event: &EventSpec<G>,
    cfg: &IntegratorConfig,
) -> Result<EventHit>
where
    F: Fn(f64, &[f64], &mut [f64]),
    G: Fn(&[f64], f64) -> f64,
{
    if event.target_count == 0 {
        return Err(Error::InvalidInput("event target_count must be >= 1".into()));
    }
    let horizon = event.horizon.unwrap_or(cfg.max_steps as f64 * cfg.max_step);
    let t_end = t0 + horizon;
    let g = &event.event_value;
    let mut stepper = Stepper::new(rhs, y0, t0, cfg)?;
    let mut g_prev = g(y0, t0);
    let mut found = 0;
    let mut scratch = vec![0.0; y0.len()];
    while stepper.t() < t_end {
        stepper.step_toward(t_end)?;
        let g_new = g(stepper.y(), stepper.t());
        let crossed = g_prev != 0.0 && (g_new == 0.0 || g_new.signum() != g_prev.signum());
        if crossed {
            let rising = g_prev < 0.0;
            if event.direction.accepts(rising) {
                found += 1;
                if found == event.target_count {
                    let t_star = refine_crossing(&stepper, g, g_prev, g_new, &mut scratch);
                    stepper.dense(t_star, &mut scratch);
                    return Ok(EventHit { t: t_star, y: scratch });
                }
            }
        }
        g_prev = g_new;
    }
    Err(Error::EventNotFound { found, wanted: event.target_count, t: stepper.t() })
}

/// Safeguarded Illinois/bisection root search on the dense interpolant of the
/// last step.
fn refine_crossing<F, G>(stepper: &Stepper<F>, g: &G, g_a: f64, g_b: f64, buf: &mut [f64]) -> f64
where
    F: Fn(f64, &[f64], &mut [f64]),
    G: Fn(&[f64], f64) -> f64,
{
    let (mut a, mut b) = (stepper.t_prev(), stepper.t());
    let (mut fa, mut fb) = (g_a, g_b);
    if fb == 0.0 {
        return b;
    }
    let mut eval = |t: f64| {
        stepper.dense(t, buf);
        g(buf, t)
    };
    let mut side = 0i8;
    for _ in 0..200 {
        let width = (b - a).abs();
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !c.is_finite() || (c - a) * (c - b) >= 0.0 {
            c = 0.5 * (a + b);
        }
        let fc = eval(c);
        if fc.abs() < EVENT_TOL * 1e-2 || width <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
            return c;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        // force a bisection when the bracket shrinks too slowly
        if (b - a).abs() > 0.5 * width {
            let m = 0.5 * (a + b);
            let fm = eval(m);
            if fm.abs() < EVENT_TOL * 1e-2 {
                return m;
            }
            if fm.signum() == fb.signum() {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
            side = 0;
        }
    }
    if fa.abs() < fb.abs() {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn oscillator(_t: f64, y: &[f64], dy: &mut [f64]) {
        dy[0] = y[1];
        dy[1] = -y[0];
    }

    fn pendulum(_t: f64, y: &[f64], dy: &mut [f64]) {
        dy[0] = y[1];
        dy[1] = -y[0].sin();
    }

    #[test]
    fn harmonic_oscillator_full_period() {
        let cfg = IntegratorConfig::default();
        let y = integrate(oscillator, &[1.0, 0.0], 0.0, 2.0 * PI, &cfg).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-8 && y[1].abs() < 1e-8, "{y:?}");
    }

    #[test]
    fn backward_integration_inverts_forward() {
        let cfg = IntegratorConfig::default();
        let y1 = integrate(pendulum, &[0.3, 1.2], 0.0, 5.0, &cfg).unwrap();
        let y0 = integrate(pendulum, &y1, 5.0, 0.0, &cfg).unwrap();
        assert!((y0[0] - 0.3).abs() < 1e-8 && (y0[1] - 1.2).abs() < 1e-8);
    }

    #[test]
    fn sampled_matches_separate_solves() {
        let cfg = IntegratorConfig::default();
        let times = [1.0, 2.5, 4.0];
        let samples = integrate_sampled(pendulum, &[0.0, 1.6], 0.0, &times, &cfg).unwrap();
        for (t, s) in times.iter().zip(&samples) {
            let direct = integrate(pendulum, &[0.0, 1.6], 0.0, *t, &cfg).unwrap();
            assert!((s[0] - direct[0]).abs() < 1e-8 && (s[1] - direct[1]).abs() < 1e-8);
        }
    }

    #[test]
    fn dense_output_tracks_solution() {
        let cfg = IntegratorConfig { max_step: 0.5, ..Default::default() };
        let mut stepper = Stepper::new(oscillator, &[1.0, 0.0], 0.0, &cfg).unwrap();
        let mut buf = [0.0; 2];
        while stepper.t() < 3.0 {
            stepper.step_toward(3.0).unwrap();
            let mid = 0.5 * (stepper.t_prev() + stepper.t());
            stepper.dense(mid, &mut buf);
            assert!((buf[0] - mid.cos()).abs() < 1e-8);
            assert!((buf[1] + mid.sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn pendulum_conserves_energy() {
        let cfg = IntegratorConfig::default();
        let y = integrate(pendulum, &[0.0, 1.6], 0.0, 30.0, &cfg).unwrap();
        let h = 0.5 * y[1] * y[1] - y[0].cos();
        assert!((h - 0.28).abs() < 1e-8);
    }

    #[test]
    fn oscillator_events() {
        let cfg = IntegratorConfig::default();
        // u = cos t: falling zero at pi/2, rising zero at 3 pi/2
        let rising = EventSpec::new(|y: &[f64], _t| y[0], Direction::Rising, 1);
        let hit = find_event(oscillator, &[1.0, 0.0], 0.0, &rising, &cfg).unwrap();
        assert!((hit.t - 1.5 * PI).abs() < 1e-9);
        assert!(hit.y[0].abs() < 1e-12);

        let either = EventSpec::new(|y: &[f64], _t| y[0], Direction::Either, 3);
        let hit = find_event(oscillator, &[1.0, 0.0], 0.0, &either, &cfg).unwrap();
        assert!((hit.t - 2.5 * PI).abs() < 1e-9);
    }

    #[test]
    fn start_on_surface_is_not_counted() {
        let cfg = IntegratorConfig::default();
        // u = sin t starts on the surface, next rising crossing at 2 pi
        let ev = EventSpec::new(|y: &[f64], _t| y[0], Direction::Rising, 1);
        let hit = find_event(oscillator, &[0.0, 1.0], 0.0, &ev, &cfg).unwrap();
        assert!((hit.t - 2.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn time_events() {
        let cfg = IntegratorConfig::default();
        let ev = EventSpec::new(|_y: &[f64], t: f64| t - 2.75, Direction::Rising, 1);
        let hit = find_event(oscillator, &[1.0, 0.0], 0.0, &ev, &cfg).unwrap();
        assert!((hit.t - 2.75).abs() < 1e-13);
        assert!((hit.y[0] - 2.75f64.cos()).abs() < 1e-8);
    }

    #[test]
    fn missing_event() {
        let cfg = IntegratorConfig::default();
        let ev = EventSpec::new(|_y: &[f64], _t| 1.0, Direction::Either, 1).with_horizon(50.0);
        let err = find_event(oscillator, &[1.0, 0.0], 0.0, &ev, &cfg).unwrap_err();
        assert!(matches!(err, Error::EventNotFound { found: 0, wanted: 1, .. }));
    }

    #[test]
    fn events_are_deterministic() {
        let cfg = IntegratorConfig::default();
        let ev = EventSpec::new(|y: &[f64], _t| y[0], Direction::Rising, 2);
        let a = find_event(pendulum, &[0.0, 1.9], 0.0, &ev, &cfg).unwrap();
        let b = find_event(pendulum, &[0.0, 1.9], 0.0, &ev, &cfg).unwrap();
        assert_eq!(a.t.to_bits(), b.t.to_bits());
        assert_eq!(a.y, b.y);
    }

    #[test]
    fn event_time_independent_of_max_step() {
        let ev = EventSpec::new(|y: &[f64], _t| y[0], Direction::Rising, 1);
        let a = find_event(pendulum, &[0.0, 1.6], 0.0, &ev, &IntegratorConfig { max_step: 1.0, ..Default::default() })
            .unwrap();
        let b = find_event(pendulum, &[0.0, 1.6], 0.0, &ev, &IntegratorConfig { max_step: 0.1, ..Default::default() })
            .unwrap();
        assert!((a.t - b.t).abs() < 1e-8);
    }

    #[test]
    fn step_limit() {
        let cfg = IntegratorConfig { max_steps: 5, max_step: 0.1, ..Default::default() };
        let err = integrate(oscillator, &[1.0, 0.0], 0.0, 10.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::StepLimitExceeded { .. }));
    }

    #[test]
    fn step_underflow_on_blowup() {
        // y' = y^2 blows up at t = 1
        let cfg = IntegratorConfig::default();
        let err = integrate(|_t, y: &[f64], dy: &mut [f64]| dy[0] = y[0] * y[0], &[1.0], 0.0, 2.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::StepUnderflow { .. } | Error::StepLimitExceeded { .. }), "{err:?}");
    }

    #[test]
    fn tolerance_halving_converges() {
        let loose = IntegratorConfig::default().with_tol(1e-9);
        let tight = IntegratorConfig::default().with_tol(5e-10);
        let a = integrate(pendulum, &[0.0, 1.6], 0.0, 80.0, &loose).unwrap();
        let b = integrate(pendulum, &[0.0, 1.6], 0.0, 80.0, &tight).unwrap();
        let reference = integrate(pendulum, &[0.0, 1.6], 0.0, 80.0, &IntegratorConfig::default().with_tol(1e-13)).unwrap();
        let err_a = (a[0] - reference[0]).hypot(a[1] - reference[1]);
        let err_b = (b[0] - reference[0]).hypot(b[1] - reference[1]);
        assert!((a[0] - b[0]).hypot(a[1] - b[1]) <= err_a.max(err_b) + 1e-12);
        assert!(err_b < err_a);
    }
}
