//! Island chain of the stroboscopic map around the 3/1 resonance at
//! eps = 0.2. The elliptic orbit is located by continuation, then seeds on
//! the line through it and the origin are iterated. Points are written as
//! CSV (seed, iterate, u, v) to stdout.

use subharmonic::melnikov::{melnikov_config, melnikov_profile};
use subharmonic::solvers::{continue_in_epsilon, newton_strobo, NewtonOptions, StepPolicy};
use subharmonic::strobo::{flow, scan, seed_line};
use subharmonic::{ForcingTerm, PlanarState, ResonanceSpec};

fn main() -> subharmonic::Result<()> {
    let phase: f64 = std::env::args().nth(1).map_or(Ok(0.0), |s| s.parse()).expect("phase t0");
    let spec = ResonanceSpec::from_axis_velocity(1.6, 3, 1)?;
    let terms = vec![ForcingTerm::sine(1.0, 1)];
    let opts = NewtonOptions::default();

    let profile = melnikov_profile(spec.axis_point(), &spec, &spec.forcing(terms.clone())?, 64, &melnikov_config())?;
    let elliptic_zero = profile.zeros.iter().find(|z| z.slope < 0.0).expect("a zero with M' < 0").t0;
    let sys = spec.system(terms, 0.01)?;
    let (rec, _) = newton_strobo(spec.axis_point(), elliptic_zero, &sys, 3, &opts).expect("seed converges");
    let branch = continue_in_epsilon(&rec, 0.2, &StepPolicy::default(), &opts).expect("branch reaches 0.2");
    let at = branch.last().expect("non-empty");
    let sys = at.system();
    let target = phase + spec.period * ((at.t0 - phase) / spec.period).ceil();
    let centre = flow(at.x_eps, at.t0, target, &sys, &opts.integrator)?;
    eprintln!("elliptic orbit at phase {phase}: {centre} ({})", at.stability);

    let far = PlanarState::new(1.25 * centre.u, 1.25 * centre.v);
    let near = PlanarState::new(0.6 * centre.u, 0.6 * centre.v);
    let orbits = scan(&seed_line(near, far, 24), phase, &sys, 300, &opts.integrator);
    println!("seed,iter,u,v");
    for (i, orbit) in orbits.iter().enumerate() {
        for (k, p) in orbit.points.iter().enumerate() {
            println!("{i},{k},{:.10},{:.10}", p.u, p.v);
        }
    }
    Ok(())
}
