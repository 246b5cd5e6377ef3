//! Exact finite-n free energy by summing over every graph on n <= 6
//! vertices, against the limiting variational value.

use ergm_phase::{free_energy, hom_density, BetaPoint, GraphEnsemble, GraphState, ModelSpec, SubgraphSpec, ToleranceConfig};

fn main() -> ergm_phase::Result<()> {
    let tri = SubgraphSpec::triangle();
    let c5 = SubgraphSpec::cycle(5)?;
    let k4 = GraphState::complete(4)?;
    println!("t(triangle, K4) = {}", hom_density(&tri, &k4)?);
    println!("t(C5, K4) = {}", hom_density(&c5, &k4)?);

    let beta = BetaPoint::new(0.2, 0.1, 0.1)?;
    let limit = free_energy(&beta, &ModelSpec::new(3, 5)?, &ToleranceConfig::default())?;
    println!("limit psi = {:.6}, u* = {:.6}", limit.psi, limit.maximizers.best().u);
    for n in 2..=6 {
        let ens = GraphEnsemble::new(n, &tri, &c5)?;
        let m = ens.mean_densities(&beta);
        println!(
            "n = {n}: {:>6} graphs  psi_n = {:.6}  E t(edge) = {:.6}  E t(tri) = {:.6}  E t(C5) = {:.6}",
            ens.len(),
            ens.psi(&beta),
            m[0],
            m[1],
            m[2]
        );
    }
    Ok(())
}
