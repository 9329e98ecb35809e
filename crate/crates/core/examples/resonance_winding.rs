//! Resonant levels of the unforced pendulum: with T = n T_c / m every point
//! of the level returns after m stroboscopic iterates, having looped n
//! times around the origin. An irrational ratio never closes.

use subharmonic::strobo::{loops_around_origin, points_on_orbit, strobo_iterate, strobo_power};
use subharmonic::unperturbed::period_of_level;
use subharmonic::{ForcingSpec, IntegratorConfig, PlanarState, ResonanceSpec, SystemSpec};

fn main() -> subharmonic::Result<()> {
    let cfg = IntegratorConfig::default().with_tol(1e-12);
    for (m, n) in [(3, 1), (5, 2), (7, 3)] {
        let spec = ResonanceSpec::from_axis_velocity(1.6, m, n)?;
        let sys = spec.system(vec![], 0.0)?;
        let mut worst: f64 = 0.0;
        for x in points_on_orbit(spec.axis_point(), spec.orbit_period, 8, &cfg)? {
            worst = worst.max(strobo_power(x, 0.0, &sys, m, &cfg)?.distance(x));
        }
        let loops = loops_around_origin(spec.axis_point(), 0.0, spec.cycle_duration(), &sys, &cfg)?;
        println!("m = {m}, n = {n}: T = {:.10}, max |s^m(x) - x| = {worst:.2e}, loops = {loops:.9}", spec.period);
    }

    let tc = period_of_level(1.6)?;
    let sys = SystemSpec::new(ForcingSpec::from_period(tc / 2f64.sqrt(), vec![])?, 0.0)?;
    let x = PlanarState::new(0.0, 1.6);
    let orbit = strobo_iterate(x, 0.0, &sys, 500, &cfg)?;
    let closest = orbit.points[1..].iter().map(|p| p.distance(x)).fold(f64::INFINITY, f64::min);
    println!("T = T_c / sqrt(2): closest of 500 iterates to the start = {closest:.3e}");
    Ok(())
}
