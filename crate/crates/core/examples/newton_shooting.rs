//! Newton's method on s^3(x) - x from the resonant axis point at phase 0,
//! printing the residual of each iterate. The same seed stops working once
//! eps is too large.

use subharmonic::solvers::{newton_strobo, NewtonOptions};
use subharmonic::{ForcingTerm, ResonanceSpec};

fn main() -> subharmonic::Result<()> {
    let spec = ResonanceSpec::from_axis_velocity(1.6, 3, 1)?;
    let opts = NewtonOptions::default();
    for eps in [0.0, 0.01, 0.05] {
        let sys = spec.system(vec![ForcingTerm::sine(1.0, 1)], eps)?;
        match newton_strobo(spec.axis_point(), 0.0, &sys, 3, &opts) {
            Ok((rec, report)) => {
                println!("eps = {eps}: converged in {} iterations to {}", report.iterations(), rec.x_eps);
                for (k, it) in report.iterates.iter().enumerate() {
                    println!("  {k:>2}  |F| = {:.3e}", it.residual);
                }
                println!("  trace = {:.6}, {}", rec.trace(), rec.stability);
            }
            Err(err) => println!("eps = {eps}: {err} after {} iterates", err.report.iterates.len()),
        }
    }
    Ok(())
}
