//! The V-shaped region and the transition curve inside it, the surface
//! slices for b3 = 0, 1, 2, and the approach to the plane b1 + b2 + b3 = 0.

use ergm_phase::{
    c1_curve, c2_curve, trace_surface, transition_beta2, universality_gap, v_region, ModelSpec, ToleranceConfig,
};

fn main() -> ergm_phase::Result<()> {
    let spec = ModelSpec::new(3, 5)?;
    let tol = ToleranceConfig::default();

    if let Some(v) = v_region(2.0, 2.0, &spec, &tol)? {
        println!("b1 = b3 = 2: V-region ({:.6}, {:.6}), inflection sites a = {:.6}, b = {:.6}", v.lower, v.upper, v.a, v.b);
    }
    if let Some(pt) = transition_beta2(2.0, 2.0, &spec, &tol)? {
        println!(
            "  r = {:.6}, coexisting u = {:.6} and {:.6}, jumps = {:?}",
            pt.beta2, pt.u_low, pt.u_high, pt.jumps
        );
    }

    let grid: Vec<f64> = (0..8).map(|k| -5.0 + k as f64).collect();
    let trace = trace_surface(&[0.0, 1.0, 2.0], &grid, &spec, false, &tol);
    for b3 in [0.0, 1.0, 2.0] {
        let r: Vec<String> = trace.slice(b3).map(|p| format!("{:.3}", p.beta2)).collect();
        println!("b3 = {b3}: r = [{}]", r.join(", "));
    }
    println!("failed grid points: {}", trace.failures.len());

    let c1 = c1_curve(&[-3.0, -1.0], &spec, &tol);
    let c2 = c2_curve(&[-3.0, -1.0], &spec, &tol);
    for (a, b) in c1.points.iter().zip(&c2.points) {
        println!("b1 = {}: C1 at b2 = {:.6}, C2 at b3 = {:.6}", a.beta1, a.beta2, b.beta3);
    }

    for (p, q) in [(3, 5), (2, 3)] {
        let spec = ModelSpec::new(p, q)?;
        let gaps: Vec<String> = [-5.0, -10.0, -20.0]
            .iter()
            .map(|&b1| universality_gap(b1, 2.0, &spec, &tol).map(|g| format!("{g:.2e}")))
            .collect::<Result<_, _>>()?;
        println!("(p, q) = ({p}, {q}), b3 = 2: gap at b1 = -5, -10, -20: {}", gaps.join(", "));
    }
    Ok(())
}
