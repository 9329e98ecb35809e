//! Following subharmonic orbits in eps: the elliptic 3/1 orbit up to
//! eps = 2.9, the saddle 3/1 orbit up to 0.17 and a 2/3 orbit under
//! two-harmonic forcing up to 0.5.

use subharmonic::melnikov::{melnikov_config, melnikov_profile};
use subharmonic::solvers::{continue_in_epsilon, newton_strobo, NewtonOptions, PeriodicOrbitRecord, StepPolicy};
use subharmonic::strobo::loops_around_origin;
use subharmonic::{ForcingTerm, ResonanceSpec};

fn follow(label: &str, spec: &ResonanceSpec, terms: Vec<ForcingTerm>, zero: usize, target: f64) -> subharmonic::Result<()> {
    let opts = NewtonOptions::default();
    let forcing = spec.forcing(terms.clone())?;
    let profile = melnikov_profile(spec.axis_point(), spec, &forcing, 64, &melnikov_config())?;
    let t0 = profile.zeros[zero].t0;
    let sys = spec.system(terms, 0.01)?;
    let (start, _) = newton_strobo(spec.axis_point(), t0, &sys, spec.m, &opts).expect("seed converges");
    let branch = match continue_in_epsilon(&start, target, &StepPolicy::default(), &opts) {
        Ok(b) => b,
        Err(e) => {
            println!("{label}: {e}");
            e.records
        }
    };
    println!("{label}: t0 = {t0:.5}, {} accepted steps", branch.len());
    for rec in branch.iter().step_by((branch.len() / 6).max(1)).chain(branch.last()) {
        line(rec);
    }
    let last: &PeriodicOrbitRecord = branch.last().expect("non-empty");
    let loops = loops_around_origin(last.x_eps, last.t0, last.cycle_duration(), &last.system(), &opts.integrator)?;
    println!("  loops over {}T at eps = {}: {loops:.6}", last.m, last.epsilon);
    Ok(())
}

fn line(rec: &PeriodicOrbitRecord) {
    println!("  eps = {:<8.4} x = {}  trace = {:+.5}  {}", rec.epsilon, rec.x_eps, rec.trace(), rec.stability);
}

fn main() -> subharmonic::Result<()> {
    let sine = vec![ForcingTerm::sine(1.0, 1)];
    let spec = ResonanceSpec::from_axis_velocity(1.6, 3, 1)?;
    follow("3/1 elliptic", &spec, sine.clone(), 1, 2.9)?;
    follow("3/1 saddle", &spec, sine, 0, 0.17)?;
    let spec = ResonanceSpec::from_axis_velocity(1.7, 3, 2)?;
    follow("2/3", &spec, vec![ForcingTerm::sine(1.0, 1), ForcingTerm::cosine(4.0, 2)], 0, 0.5)?;
    Ok(())
}
