//! The critical curve: corners of the V-region as the third coupling varies.

use ergm_phase::{corner_point, critical_curve, ModelSpec, ToleranceConfig};

fn main() -> ergm_phase::Result<()> {
    let spec = ModelSpec::new(3, 5)?;
    println!("{:>10} {:>12} {:>12} {:>12} {:>10}", "u0", "b1c", "b2c", "b3", "max resid");
    for c in critical_curve(&spec, 9)? {
        let r = c.residuals(&spec);
        let worst = r.iter().cloned().fold(0.0, f64::max);
        println!("{:>10.6} {:>12.6} {:>12.6} {:>12.6} {worst:>10.1e}", c.u0, c.beta1_c, c.beta2_c, c.beta3);
    }
    let c = corner_point(2.0, &spec, &ToleranceConfig::default())?;
    println!("corner at b3 = 2: u0 = {}, (b1c, b2c) = ({}, {})", c.u0, c.beta1_c, c.beta2_c);
    Ok(())
}
