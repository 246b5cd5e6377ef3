//! Heat-bath chain at n = 20 compared with the limiting edge probability.

use ergm_phase::{find_maximizers, run_chain, BetaPoint, ChainConfig, ModelSpec, SubgraphSpec, ToleranceConfig};

fn main() -> ergm_phase::Result<()> {
    let spec = ModelSpec::new(3, 5)?;
    let beta = BetaPoint::new(0.2, 0.1, 0.1)?;
    let u_star = find_maximizers(&beta, &spec, &ToleranceConfig::default())?.best().u;

    let sweeps: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let config = ChainConfig {
        n: 20,
        beta,
        h2: SubgraphSpec::triangle(),
        h3: SubgraphSpec::cycle(5)?,
        sweeps,
        burn_in: sweeps / 10,
        thin: 1,
        seed: 2024,
    };
    let trace = run_chain(&config)?;
    let [t_edge, t_h2, t_h3] = trace.means();
    let frac = t_edge * 20.0 / 19.0;
    println!("limit u* = {u_star:.5}");
    println!("mean edge fraction = {frac:.5}  (t_edge = {t_edge:.5})");
    println!("mean t(triangle) = {t_h2:.5}, mean t(C5) = {t_h3:.5}");
    println!("toggle rate = {:.4}", trace.toggle_rate());
    Ok(())
}
