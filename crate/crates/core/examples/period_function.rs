//! Period of the unforced libration through (0, v0), compared with the
//! closed form 4 K(v0 / 2).

use subharmonic::unperturbed::{period_of_level, period_oracle};

fn main() -> subharmonic::Result<()> {
    println!("{:>6} {:>10} {:>18} {:>10}", "v0", "c", "T_c", "|diff|");
    for i in 1..=19 {
        let v0 = 0.1 * i as f64;
        let tc = period_of_level(v0)?;
        let diff = (tc - period_oracle(v0)?).abs();
        println!("{v0:>6.2} {:>10.4} {tc:>18.12} {diff:>10.2e}", 0.5 * v0 * v0 - 1.0);
    }
    let small = period_of_level(0.01)?;
    println!("small oscillations: T_c(0.01) - 2 pi = {:.3e}", small - 2.0 * std::f64::consts::PI);
    for v0 in [1.99, 1.999, 1.9999] {
        println!("near the separatrix: T_c({v0}) = {:.6}", period_of_level(v0)?);
    }
    Ok(())
}
