//! Limiting free energy and maximizers of `l` at a few couplings, including
//! the pure edge model where the maximizer is the logistic edge probability.

use ergm_phase::{eval_l, find_maximizers, free_energy, BetaPoint, ModelSpec, ToleranceConfig};

fn main() -> ergm_phase::Result<()> {
    let spec = ModelSpec::new(3, 5)?;
    let tol = ToleranceConfig::default();

    for beta in [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.2, 0.1, 0.1), (-1.0, 1.0584992095195373, 0.0)] {
        let beta = BetaPoint::new(beta.0, beta.1, beta.2)?;
        let fe = free_energy(&beta, &spec, &tol)?;
        print!("beta = ({beta})  psi = {:.10}  maximizers:", fe.psi);
        for (i, m) in fe.maximizers.locals.iter().enumerate() {
            let star = if fe.maximizers.globals.contains(&i) { "*" } else { "" };
            print!("  u = {:.8}{star}", m.u);
        }
        println!();
    }

    // Outside the attractive region the landscape is still defined.
    let beta = BetaPoint::new(2.0, -4.0, 2.0)?;
    let ms = find_maximizers(&beta, &spec, &tol)?;
    println!("beta = ({beta}): {} local maximizer(s), l(0.3) = {}", ms.locals.len(), eval_l(0.3, &beta, &spec, 0)?);

    let b1: f64 = 0.75;
    let u = find_maximizers(&BetaPoint::new(b1, 0.0, 0.0)?, &spec, &tol)?.best().u;
    let rho = (2.0 * b1).exp() / (1.0 + (2.0 * b1).exp());
    println!("edge model b1 = {b1}: u* = {u}, e^(2b1)/(1+e^(2b1)) = {rho}");
    Ok(())
}
