//! The same subharmonic orbit found two ways: Newton on the stroboscopic
//! map at fixed phase, and Newton on the return map to u = 0 with the
//! velocity and the phase both unknown.

use subharmonic::solvers::{newton_poincare, newton_strobo, poincare_map, NewtonOptions};
use subharmonic::{ForcingTerm, ResonanceSpec};

fn main() -> subharmonic::Result<()> {
    let spec = ResonanceSpec::from_axis_velocity(1.6, 3, 1)?;
    let sys = spec.system(vec![ForcingTerm::sine(1.0, 1)], 0.01)?;
    let opts = NewtonOptions::default();

    let (strobo, _) = newton_strobo(spec.axis_point(), 0.0, &sys, 3, &opts).expect("strobo solve");
    let (section, report) = newton_poincare(1.6, 0.0, &sys, 1, 3, &opts).expect("section solve");
    println!("strobo fixed point:   {} at t0 = 0", strobo.x_eps);
    println!("section fixed point:  {} at t0 = {:.3e} ({} iterations)", section.x_eps, section.t0, report.iterations());

    let back = poincare_map(section.x_eps.v, section.t0, 1, &sys, &opts.integrator)?;
    println!("return: v = {:.15}, elapsed - 3T = {:.3e}", back.v, back.t - section.t0 - spec.cycle_duration());
    println!("multipliers: {:?}, {}", section.multipliers, section.stability);
    Ok(())
}
