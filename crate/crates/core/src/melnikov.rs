//! Subharmonic Melnikov function
//!
//! `M(t0) = int_0^{mT} f(phi_0(t; x0)) ^ g(phi_0(t; x0), t + t0) dt`
//!
//! evaluated along a resonant unforced orbit. Simple zeros of `M` are the
//! forcing phases at which a periodic orbit persists near `x0`; they seed
//! the Newton solvers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{hamiltonian, wedge, ForcingSpec, PlanarState};
use crate::error::{Error, Result};
use crate::integrator::{integrate, IntegratorConfig};
use crate::unperturbed::ResonanceSpec;

/// Tolerances for Melnikov quadrature.
pub fn melnikov_config() -> IntegratorConfig {
    IntegratorConfig::default().with_tol(1e-12)
}

fn check_inputs(x0: PlanarState, spec: &ResonanceSpec, forcing: &ForcingSpec) -> Result<()> {
    let energy = hamiltonian(x0);
    if (energy - spec.level.value()).abs() > 1e-9 {
        return Err(Error::SpecMismatch { energy, expected: spec.level.value() });
    }
    if (forcing.omega() - spec.omega).abs() > 1e-12 * spec.omega {
        return Err(Error::InvalidInput(format!(
            "forcing frequency {} does not match resonance frequency {}",
            forcing.omega(),
            spec.omega
        )));
    }
    Ok(())
}

/// `M(t0)` for base point `x0` on the resonant level. The integral is carried
/// as an extra component of the unforced flow.
pub fn melnikov_value(
    t0: f64,
    x0: PlanarState,
    spec: &ResonanceSpec,
    forcing: &ForcingSpec,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    check_inputs(x0, spec, forcing)?;
    melnikov_unchecked(t0, x0, spec, forcing, cfg)
}

fn melnikov_unchecked(
    t0: f64,
    x0: PlanarState,
    spec: &ResonanceSpec,
    forcing: &ForcingSpec,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let f = [y[1], -y[0].sin()];
        dy[0] = f[0];
        dy[1] = f[1];
        dy[2] = wedge(f, [0.0, forcing.value(t + t0)]);
    };
    let y = integrate(rhs, &[x0.u, x0.v, 0.0], 0.0, spec.cycle_duration(), cfg)?;
    Ok(y[2])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MelnikovZero {
    pub t0: f64,
    pub slope: f64,
}

/// `M` sampled on a uniform grid over `[0, mT)` with its located zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MelnikovProfile {
    pub spec: ResonanceSpec,
    pub forcing: ForcingSpec,
    pub x0: PlanarState,
    pub samples: Vec<(f64, f64)>,
    /// Simple zeros in `[0, mT)`, sorted by phase.
    pub zeros: Vec<MelnikovZero>,
    /// Sign changes whose slope failed the simplicity test.
    pub degenerate_zeros: Vec<MelnikovZero>,
    pub max_abs: f64,
    /// `M` vanishes identically on the grid (first order is inconclusive).
    pub identically_zero: bool,
}

impl MelnikovProfile {
    /// Threshold on `|M'|` below which a zero is not considered simple.
    pub fn simplicity_threshold(&self) -> f64 {
        1e-6 * self.max_abs / self.spec.cycle_duration()
    }

    /// Zeros reduced modulo one forcing period, deduplicated.
    pub fn zeros_mod_period(&self) -> Vec<f64> {
        let period = self.spec.period;
        let mut out: Vec<f64> = Vec::new();
        for z in &self.zeros {
            let r = z.t0.rem_euclid(period);
            let r = if period - r < 1e-9 { 0.0 } else { r };
            if !out.iter().any(|&o| (o - r).abs() < 1e-6) {
                out.push(r);
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Samples `M` on `sample_count` grid points (in parallel) and locates its
/// zeros by sign-change bracketing plus safeguarded refinement.
pub fn melnikov_profile(
    x0: PlanarState,
    spec: &ResonanceSpec,
    forcing: &ForcingSpec,
    sample_count: usize,
    cfg: &IntegratorConfig,
) -> Result<MelnikovProfile> {
    if sample_count < 16 {
        return Err(Error::InvalidInput(format!("sample_count must be >= 16, got {sample_count}")));
    }
    check_inputs(x0, spec, forcing)?;
    let span = spec.cycle_duration();
    let h = span / sample_count as f64;
    let values: Vec<f64> = (0..sample_count)
        .into_par_iter()
        .map(|i| melnikov_unchecked(i as f64 * h, x0, spec, forcing, cfg))
        .collect::<Result<_>>()?;
    let samples: Vec<(f64, f64)> = values.iter().enumerate().map(|(i, &m)| (i as f64 * h, m)).collect();
    let max_abs = values.iter().fold(0.0f64, |a, &m| a.max(m.abs()));
    let identically_zero = max_abs < 1e-8 * span * x0.v.abs().max(x0.norm());

    let mut profile = MelnikovProfile {
        spec: *spec,
        forcing: forcing.clone(),
        x0,
        samples,
        zeros: vec![],
        degenerate_zeros: vec![],
        max_abs,
        identically_zero,
    };
    if identically_zero {
        return Ok(profile);
    }

    let m_at = |t: f64| melnikov_unchecked(t, x0, spec, forcing, cfg);
    let zero_tol = 1e-10 * max_abs.max(1.0);
    let threshold = profile.simplicity_threshold();
    let n = sample_count;
    for i in 0..n {
        let (ta, ma) = (i as f64 * h, values[i]);
        let root = if ma.abs() < zero_tol {
            Some(ta)
        } else {
            // M(mT) = M(0) closes the grid
            let mb = values[(i + 1) % n];
            if mb.abs() >= zero_tol && ma.signum() != mb.signum() {
                Some(refine_zero(&m_at, ta, ta + h, ma, mb, zero_tol)?)
            } else {
                None
            }
        };
        let Some(t) = root else { continue };
        let t = t.rem_euclid(span);
        let dh = span * 1e-6;
        let slope = (m_at(t + dh)? - m_at(t - dh)?) / (2.0 * dh);
        let zero = MelnikovZero { t0: t, slope };
        if slope.abs() > threshold {
            profile.zeros.push(zero);
        } else {
            profile.degenerate_zeros.push(zero);
        }
    }
    profile.zeros.sort_by(|a, b| a.t0.total_cmp(&b.t0));
    Ok(profile)
}

/// Brent-style bracketed root refinement (bisection + secant/inverse quadratic).
fn refine_zero<F>(f: &F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, ftol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut bisected = true;
    let mut d = 0.0;
    for _ in 0..200 {
        if fb.abs() < ftol || (b - a).abs() < 1e-15 * b.abs().max(1.0) {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let outside = !((s > lo.min(b)) && (s < lo.max(b)));
        let slow = if bisected { (s - b).abs() >= 0.5 * (b - c).abs() } else { (s - b).abs() >= 0.5 * (c - d).abs() };
        if outside || slow || !s.is_finite() {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s)?;
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(Error::NoConvergence("Melnikov zero refinement".into()))
}

/// Newton seed: base point and forcing phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MelnikovSeed {
    pub x0: PlanarState,
    pub t0: f64,
    pub slope: f64,
}

/// One seed per simple zero of the profile.
pub fn melnikov_seeds(profile: &MelnikovProfile) -> Result<Vec<MelnikovSeed>> {
    if profile.zeros.is_empty() {
        return Err(Error::NoSimpleZeros { degenerate: profile.identically_zero });
    }
    Ok(profile
        .zeros
        .iter()
        .map(|z| MelnikovSeed { x0: profile.x0, t0: z.t0, slope: z.slope })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::ForcingTerm;

    fn reference() -> (ResonanceSpec, ForcingSpec) {
        let spec = ResonanceSpec::from_axis_velocity(1.6, 3, 1).unwrap();
        let forcing = spec.forcing(vec![ForcingTerm::sine(1.0, 1)]).unwrap();
        (spec, forcing)
    }

    #[test]
    fn vanishes_at_zero_phase() {
        let (spec, forcing) = reference();
        let m = melnikov_value(0.0, spec.axis_point(), &spec, &forcing, &melnikov_config()).unwrap();
        assert!(m.abs() < 1e-9, "{m}");
    }

    #[test]
    fn rejects_off_level_base_point() {
        let (spec, forcing) = reference();
        let err = melnikov_value(0.0, PlanarState::new(0.0, 1.5), &spec, &forcing, &melnikov_config()).unwrap_err();
        assert!(matches!(err, Error::SpecMismatch { .. }));
    }

    #[test]
    fn integrand_is_velocity_times_forcing() {
        // Compare against composite Simpson on a stored unforced trajectory.
        let (spec, forcing) = reference();
        let cfg = melnikov_config();
        let t0 = 0.37;
        let n = 4000;
        let span = spec.cycle_duration();
        let dt = span / n as f64;
        let sys = crate::SystemSpec::new(forcing.clone(), 0.0).unwrap();
        let times: Vec<f64> = (1..=n).map(|i| i as f64 * dt).collect();
        let traj = crate::integrator::integrate_sampled(
            crate::dynamics::planar_rhs(&sys),
            &spec.axis_point().to_array(),
            0.0,
            &times,
            &cfg,
        )
        .unwrap();
        let mut vs = vec![spec.axis_point().v];
        vs.extend(traj.iter().map(|y| y[1]));
        let integrand = |i: usize| vs[i] * forcing.value(i as f64 * dt + t0);
        let mut sum = integrand(0) + integrand(n);
        for i in 1..n {
            sum += if i % 2 == 1 { 4.0 } else { 2.0 } * integrand(i);
        }
        let simpson = sum * dt / 3.0;
        let m = melnikov_value(t0, spec.axis_point(), &spec, &forcing, &cfg).unwrap();
        assert!((m - simpson).abs() < 1e-9, "{m} vs {simpson}");
    }

    #[test]
    fn profile_needs_enough_samples() {
        let (spec, forcing) = reference();
        assert!(melnikov_profile(spec.axis_point(), &spec, &forcing, 8, &melnikov_config()).is_err());
    }

    #[test]
    fn seeds_require_simple_zeros() {
        let spec = ResonanceSpec::from_axis_velocity(1.6, 3, 2).unwrap();
        let forcing = spec.forcing(vec![ForcingTerm::sine(1.0, 1)]).unwrap();
        let profile = melnikov_profile(spec.axis_point(), &spec, &forcing, 32, &melnikov_config()).unwrap();
        assert!(profile.identically_zero);
        assert!(matches!(melnikov_seeds(&profile), Err(Error::NoSimpleZeros { degenerate: true })));
    }

    #[test]
    fn refine_zero_finds_cosine_root() {
        let f = |t: f64| Ok(t.cos());
        let r = refine_zero(&f, 1.0, 2.0, 1f64.cos(), 2f64.cos(), 1e-14).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }
}
