//! Single-edge heat-bath sampler for the finite-n model.
//!
//! Each update resamples one pair from its exact conditional law: present
//! with probability `logistic(dH)`, where `dH` is the change in
//! `n^2 (b1 t(H1,G) + b2 t(H2,G) + b3 t(H3,G))` when the pair is added.
//! Homomorphism counts are tracked as exact integers.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{hom_count, pairs, DeltaPlan, GraphState, SubgraphSpec, HOM_BUDGET, MAX_GRAPH_N};
use crate::model::BetaPoint;

/// Generator identifier written into every trace header. The state is
/// seeded from the 64-bit seed through SplitMix64.
pub const RNG_ID: &str = "xoshiro256starstar-splitmix64";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainConfig {
    pub n: usize,
    pub beta: BetaPoint,
    pub h2: SubgraphSpec,
    pub h3: SubgraphSpec,
    pub sweeps: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > MAX_GRAPH_N {
            return Err(Error::Domain(format!("n = {} outside 2..={MAX_GRAPH_N}", self.n)));
        }
        self.beta.check_finite()?;
        if self.sweeps <= self.burn_in {
            return Err(Error::Domain(format!(
                "sweeps ({}) must exceed burn_in ({})",
                self.sweeps, self.burn_in
            )));
        }
        if self.thin == 0 {
            return Err(Error::Domain("thin must be at least 1".into()));
        }
        for h in [&self.h2, &self.h3] {
            let cost = DeltaPlan::new(h).cost(self.n);
            if cost > HOM_BUDGET {
                return Err(Error::Resource(format!(
                    "pattern {h} needs {cost} maps per update at n = {}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// Number of recorded samples, `(sweeps - burn_in) / thin`.
    pub fn sample_count(&self) -> usize {
        (self.sweeps - self.burn_in) / self.thin
    }

    /// `key=value` pairs describing the chain, in a fixed order.
    pub fn header(&self) -> Vec<(&'static str, String)> {
        vec![
            ("rng", RNG_ID.to_string()),
            ("seed", self.seed.to_string()),
            ("n", self.n.to_string()),
            ("beta", self.beta.to_string()),
            ("h2", self.h2.to_string()),
            ("h3", self.h3.to_string()),
            ("sweeps", self.sweeps.to_string()),
            ("burn_in", self.burn_in.to_string()),
            ("thin", self.thin.to_string()),
        ]
    }
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub sweep: usize,
    pub t_edge: f64,
    pub t_h2: f64,
    pub t_h3: f64,
}

/// A running chain: graph, exact homomorphism counts, and generator.
pub struct Chain {
    n: usize,
    beta: [f64; 3],
    patterns: [SubgraphSpec; 3],
    plans: [DeltaPlan; 3],
    state: GraphState,
    minus: GraphState,
    plus: GraphState,
    counts: [u64; 3],
    rng: Xoshiro256StarStar,
    order: Vec<(usize, usize)>,
    image: Vec<usize>,
    updates: u64,
    toggles: u64,
}

impl Chain {
    /// Starts from a uniformly random graph drawn with the chain's own
    /// generator.
    pub fn new(config: &ChainConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = Xoshiro256StarStar::seed_from_u64(config.seed);
        let mut state = GraphState::empty(config.n)?;
        for (i, j) in pairs(config.n) {
            if rng.gen::<bool>() {
                state.set_edge(i, j, true);
            }
        }
        Self::from_state(config, state, rng)
    }

    /// Starts from a given graph.
    pub fn with_state(config: &ChainConfig, state: GraphState) -> Result<Self> {
        config.validate()?;
        if state.n() != config.n {
            return Err(Error::Domain(format!("state has {} vertices, config {}", state.n(), config.n)));
        }
        Self::from_state(config, state, Xoshiro256StarStar::seed_from_u64(config.seed))
    }

    fn from_state(config: &ChainConfig, state: GraphState, rng: Xoshiro256StarStar) -> Result<Self> {
        let patterns = [SubgraphSpec::edge(), config.h2.clone(), config.h3.clone()];
        let plans = [
            DeltaPlan::new(&patterns[0]),
            DeltaPlan::new(&patterns[1]),
            DeltaPlan::new(&patterns[2]),
        ];
        let counts = [
            hom_count(&patterns[0], &state)?,
            hom_count(&patterns[1], &state)?,
            hom_count(&patterns[2], &state)?,
        ];
        let image_len = patterns.iter().map(|h| h.n_vertices()).max().unwrap_or(2).max(2);
        Ok(Chain {
            n: config.n,
            beta: config.beta.as_array(),
            patterns,
            plans,
            minus: state.clone(),
            plus: state.clone(),
            state,
            counts,
            rng,
            order: pairs(config.n).collect(),
            image: vec![0; image_len],
            updates: 0,
            toggles: 0,
        })
    }

    pub fn state(&self) -> &GraphState {
        &self.state
    }

    /// Tracked homomorphism counts of (edge, H2, H3).
    pub fn counts(&self) -> [u64; 3] {
        self.counts
    }

    fn scale(&self, k: usize) -> f64 {
        (self.n as f64).powi(self.patterns[k].n_vertices() as i32)
    }

    /// Tracked densities `(t_edge, t_h2, t_h3)`.
    pub fn densities(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| self.counts[k] as f64 / self.scale(k))
    }

    /// Densities recomputed from the current graph.
    pub fn recomputed_densities(&self) -> Result<[f64; 3]> {
        let mut t = [0.0; 3];
        for k in 0..3 {
            t[k] = hom_count(&self.patterns[k], &self.state)? as f64 / self.scale(k);
        }
        Ok(t)
    }

    /// Resamples the pair `ij`.
    fn update(&mut self, i: usize, j: usize) {
        let present = self.state.has_edge(i, j);
        self.minus.clone_from(&self.state);
        self.minus.set_edge(i, j, false);
        self.plus.clone_from(&self.state);
        self.plus.set_edge(i, j, true);
        let n2 = (self.n * self.n) as f64;
        let mut delta = [0u64; 3];
        let mut dh = 0.0;
        for k in 0..3 {
            delta[k] = self.plans[k].count(&self.minus, &self.plus, i, j, &mut self.image);
            if self.beta[k] != 0.0 {
                dh += self.beta[k] * n2 * delta[k] as f64 / self.scale(k);
            }
        }
        let want = self.rng.gen::<f64>() < logistic(dh);
        self.updates += 1;
        if want != present {
            self.toggles += 1;
            self.state.set_edge(i, j, want);
            for k in 0..3 {
                if want {
                    self.counts[k] += delta[k];
                } else {
                    self.counts[k] -= delta[k];
                }
            }
        }
    }

    /// One pass over every pair, in a fresh random order.
    pub fn sweep(&mut self) {
        let mut order = std::mem::take(&mut self.order);
        order.shuffle(&mut self.rng);
        for &(i, j) in &order {
            self.update(i, j);
        }
        self.order = order;
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn toggles(&self) -> u64 {
        self.toggles
    }
}

/// Runs one sweep from `state` with a generator seeded from `config.seed`.
pub fn gibbs_sweep(state: &GraphState, config: &ChainConfig) -> Result<GraphState> {
    let mut chain = Chain::with_state(config, state.clone())?;
    chain.sweep();
    Ok(chain.state)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainTrace {
    pub rng: &'static str,
    pub samples: Vec<Sample>,
    /// Pair updates performed, burn-in included.
    pub updates: u64,
    /// Updates that changed the graph.
    pub toggles: u64,
    pub final_state: GraphState,
}

impl ChainTrace {
    pub fn toggle_rate(&self) -> f64 {
        if self.updates == 0 {
            0.0
        } else {
            self.toggles as f64 / self.updates as f64
        }
    }

    /// Mean of each density over the recorded samples.
    pub fn means(&self) -> [f64; 3] {
        let m = self.samples.len().max(1) as f64;
        self.samples.iter().fold([0.0; 3], |acc, s| {
            [acc[0] + s.t_edge / m, acc[1] + s.t_h2 / m, acc[2] + s.t_h3 / m]
        })
    }

    /// CSV body: `sweep,t_edge,t_h2,t_h3` and one row per sample.
    pub fn csv_rows(&self) -> String {
        let mut out = String::from("sweep,t_edge,t_h2,t_h3\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{},{},{}", s.sweep, s.t_edge, s.t_h2, s.t_h3);
        }
        out
    }

    /// Full CSV with a `# key=value` header describing `config`.
    pub fn to_csv(&self, config: &ChainConfig) -> String {
        let mut out = String::new();
        for (k, v) in config.header() {
            let _ = writeln!(out, "# {k}={v}");
        }
        out + &self.csv_rows()
    }
}

/// Burn-in, then one sample every `thin` sweeps.
pub fn run_chain(config: &ChainConfig) -> Result<ChainTrace> {
    let mut chain = Chain::new(config)?;
    let mut samples = Vec::with_capacity(config.sample_count());
    for sweep in 1..=config.sweeps {
        chain.sweep();
        if sweep > config.burn_in && (sweep - config.burn_in).is_multiple_of(config.thin) {
            let [t_edge, t_h2, t_h3] = chain.densities();
            samples.push(Sample { sweep, t_edge, t_h2, t_h3 });
        }
    }
    Ok(ChainTrace {
        rng: RNG_ID,
        samples,
        updates: chain.updates,
        toggles: chain.toggles,
        final_state: chain.state,
    })
}
