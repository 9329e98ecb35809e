//! Subharmonic Melnikov functions: simple zeros for the 3/1 resonance with
//! sine forcing, a vanishing function for 3/2 with the same forcing, and
//! simple zeros again once a second harmonic is added.

use subharmonic::melnikov::{melnikov_config, melnikov_profile};
use subharmonic::{ForcingTerm, PlanarState, ResonanceSpec};

fn report(label: &str, v0: f64, m: u32, n: u32, terms: Vec<ForcingTerm>) -> subharmonic::Result<()> {
    let spec = ResonanceSpec::from_axis_velocity(v0, m, n)?;
    let forcing = spec.forcing(terms)?;
    let p = melnikov_profile(PlanarState::new(0.0, v0), &spec, &forcing, 128, &melnikov_config())?;
    println!("{label}: T = {:.6}, max |M| = {:.3e}", spec.period, p.max_abs);
    if p.identically_zero {
        println!("  identically zero: first order gives no information");
    }
    for z in &p.zeros {
        println!("  zero t0 = {:.6}  (t0 / T = {:.4}), M' = {:+.5}", z.t0, z.t0 / spec.period, z.slope);
    }
    Ok(())
}

fn main() -> subharmonic::Result<()> {
    report("3/1, sin", 1.6, 3, 1, vec![ForcingTerm::sine(1.0, 1)])?;
    report("3/2, sin", 1.6, 3, 2, vec![ForcingTerm::sine(1.0, 1)])?;
    report("3/2, sin + 4 cos(2wt)", 1.7, 3, 2, vec![ForcingTerm::sine(1.0, 1), ForcingTerm::cosine(4.0, 2)])?;
    Ok(())
}
