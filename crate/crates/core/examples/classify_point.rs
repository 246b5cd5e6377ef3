//! Locating couplings relative to the transition surface, at the couplings
//! of the l(u) figures.

use ergm_phase::{classify, transition_beta2, BetaPoint, ModelSpec, PhaseClassification, ToleranceConfig};

fn main() -> ergm_phase::Result<()> {
    let spec = ModelSpec::new(3, 5)?;
    let tol = ToleranceConfig::default();
    let r = transition_beta2(2.0, 2.0, &spec, &tol)?.expect("b1 = 2 is left of the corner").beta2;

    for b2 in [-4.0, -3.24, -2.95, r, -2.7, -2.5] {
        let beta = BetaPoint::new(2.0, b2, 2.0)?;
        let label = match classify(&beta, &spec, &tol)? {
            PhaseClassification::OffSurface { maximizer } => format!("off surface, u* = {:.6}", maximizer.u),
            PhaseClassification::OnSurface { u_low, u_high, .. } => {
                format!("on surface, u* in {{{u_low:.6}, {u_high:.6}}}")
            }
            PhaseClassification::Critical { u0 } => format!("critical, u0 = {u0:.6}"),
        };
        println!("b2 = {b2:<20} {label}");
    }
    Ok(())
}
