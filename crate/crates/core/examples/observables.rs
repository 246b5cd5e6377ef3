//! Limiting expectations, the covariance matrix, jumps across the surface,
//! and the divergence of the second derivatives at a corner.

use ergm_phase::{
    corner_point, critical_approach_direction, divergence_probe, first_derivatives, jump_sizes, second_derivatives,
    transition_beta2, BetaPoint, ModelSpec, ToleranceConfig,
};

fn main() -> ergm_phase::Result<()> {
    let spec = ModelSpec::new(3, 5)?;
    let tol = ToleranceConfig::default();

    let beta = BetaPoint::new(0.5, 0.1, 0.1)?;
    println!("first derivatives at ({beta}): {:?}", first_derivatives(&beta, &spec, &tol)?);
    for row in second_derivatives(&beta, &spec, &tol)? {
        println!("  [{:>10.6} {:>10.6} {:>10.6}]", row[0], row[1], row[2]);
    }

    let pt = transition_beta2(-1.0, 0.5, &spec, &tol)?.expect("left of the corner");
    println!("on the surface at ({}): {:?}", pt.beta(), first_derivatives(&pt.beta(), &spec, &tol)?);
    println!("  jumps = {:?}", jump_sizes(&pt, &spec));

    let corner = corner_point(0.158, &spec, &tol)?;
    let dir = critical_approach_direction(&corner, &spec);
    let probe = divergence_probe(&corner, dir, 0.1, 0.5, 17, &spec, &tol)?;
    println!("approach to the corner ({:.6}, {:.6}, {}):", corner.beta1_c, corner.beta2_c, corner.beta3);
    for s in probe.samples.iter().step_by(3) {
        println!("  distance {:.3e}  d2psi/db1^2 = {:.4e}", s.distance, s.d2_beta1);
    }
    println!("  log-log slope = {:?}", probe.loglog_slope);
    Ok(())
}
