//! Exact finite-n computations: homomorphism densities and the partition
//! function by enumeration of every graph on a few vertices.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::BetaPoint;

/// Default cap on the number of vertex maps a homomorphism count may visit.
pub const HOM_BUDGET: u64 = 100_000_000;

/// Largest `n` for which [`GraphEnsemble`] enumerates all graphs.
pub const MAX_ENUMERATION_N: usize = 6;

/// Largest graph a [`GraphState`] can hold (one `u64` row per vertex).
pub const MAX_GRAPH_N: usize = 64;

/// A small pattern graph `H` on vertices `0..n_vertices`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SubgraphSpec {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl SubgraphSpec {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::Domain("a subgraph needs at least one vertex".into()));
        }
        if n_vertices > MAX_GRAPH_N {
            return Err(Error::Domain(format!("subgraph has {n_vertices} vertices, limit {MAX_GRAPH_N}")));
        }
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &edges {
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::Domain(format!("edge {a}-{b} out of range for {n_vertices} vertices")));
            }
            if a == b {
                return Err(Error::Domain(format!("loop at vertex {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Domain(format!("duplicate edge {a}-{b}")));
            }
        }
        Ok(SubgraphSpec { n_vertices, edges })
    }

    pub fn edge() -> Self {
        SubgraphSpec { n_vertices: 2, edges: vec![(0, 1)] }
    }

    pub fn triangle() -> Self {
        Self::cycle(3).expect("valid cycle")
    }

    /// Cycle on `k >= 3` vertices.
    pub fn cycle(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::Domain(format!("a cycle needs at least 3 vertices, got {k}")));
        }
        Self::new(k, (0..k).map(|i| (i, (i + 1) % k)).collect())
    }

    /// Path with `k >= 1` edges.
    pub fn path(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("a path needs at least one edge".into()));
        }
        Self::new(k + 1, (0..k).map(|i| (i, i + 1)).collect())
    }

    /// Pattern used when only an edge count is given: the single edge, the
    /// two-edge path, or the `k`-cycle.
    pub fn default_for_edges(k: usize) -> Result<Self> {
        match k {
            0 => Err(Error::Domain("edge count must be positive".into())),
            1 => Ok(Self::edge()),
            2 => Self::path(2),
            _ => Self::cycle(k),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `n^|V(H)|`, saturating.
    fn map_count(&self, n: usize) -> u64 {
        (n as u64).saturating_pow(self.n_vertices as u32)
    }
}

impl fmt::Display for SubgraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.n_vertices)?;
        for (k, (a, b)) in self.edges.iter().enumerate() {
            write!(f, "{}{a}-{b}", if k == 0 { " " } else { "," })?;
        }
        Ok(())
    }
}

impl FromStr for SubgraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected 'n; i-j,i-j,...', got '{s}'"));
        let (n, rest) = s.split_once(';').ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let mut edges = Vec::new();
        for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = tok.split_once('-').ok_or_else(bad)?;
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            edges.push((a, b));
        }
        Self::new(n, edges)
    }
}

/// A simple graph on `n <= 64` vertices stored as adjacency bit rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphState {
    n: usize,
    rows: Vec<u64>,
}

impl GraphState {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GRAPH_N {
            return Err(Error::Domain(format!("graph size {n} outside 1..={MAX_GRAPH_N}")));
        }
        Ok(GraphState { n, rows: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for i in 0..n {
            g.rows[i] = g.full_mask() & !(1u64 << i);
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(i, j) in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::Domain(format!("invalid edge {i}-{j} for n = {n}")));
            }
            g.set_edge(i, j, true);
        }
        Ok(g)
    }

    pub fn from_adjacency(adj: &[Vec<bool>]) -> Result<Self> {
        let n = adj.len();
        let mut g = Self::empty(n)?;
        for (i, row) in adj.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if row[i] {
                return Err(Error::Domain(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                if row[j] != adj[j][i] {
                    return Err(Error::Domain(format!("asymmetric entry at ({i}, {j})")));
                }
                if row[j] {
                    g.rows[i] |= 1 << j;
                }
            }
        }
        Ok(g)
    }

    /// Graph whose edges are the set bits of `bits`, pairs in lexicographic
    /// order `(0,1), (0,2), ..., (n-2,n-1)`.
    pub fn from_edge_bits(n: usize, bits: u64) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for (k, (i, j)) in pairs(n).enumerate() {
            if k < 64 && bits >> k & 1 == 1 {
                g.set_edge(i, j, true);
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub(crate) fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// Panics if `i == j` or either index is out of range.
    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        assert!(i != j && i < self.n && j < self.n, "invalid pair {i}-{j}");
        if present {
            self.rows[i] |= 1 << j;
            self.rows[j] |= 1 << i;
        } else {
            self.rows[i] &= !(1 << j);
            self.rows[j] &= !(1 << i);
        }
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        pairs(self.n).filter(|&(i, j)| self.has_edge(i, j)).collect()
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.has_edge(i, j)).collect())
            .collect()
    }
}

impl Serialize for GraphState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GraphState", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("edges", &self.edges())?;
        st.end()
    }
}

/// Unordered vertex pairs `i < j` in lexicographic order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> + Clone {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// A vertex-by-vertex homomorphism search plan. Each placed vertex lists the
/// earlier positions it must be adjacent to and in which of two host graphs.
struct Plan {
    order: Vec<usize>,
    constraints: Vec<Vec<(usize, bool)>>,
    /// Leaf constraints split into those on positions before the
    /// penultimate one, and which hosts tie the leaf to the penultimate.
    leaf_split: (Vec<(usize, bool)>, [bool; 2]),
}

impl Plan {
    /// `graph_of(edge_index)` picks the host graph (false/true) per H-edge;
    /// `None` drops the edge from the plan. `head` vertices come first.
    fn new(h: &SubgraphSpec, head: &[usize], graph_of: impl Fn(usize) -> Option<bool>) -> Plan {
        let v = h.n_vertices;
        let mut order: Vec<usize> = head.to_vec();
        let mut placed = vec![false; v];
        for &x in head {
            placed[x] = true;
        }
        // greedy: next vertex with most already-placed neighbours
        while order.len() < v {
            let next = (0..v)
                .filter(|&x| !placed[x])
                .max_by_key(|&x| {
                    let links = h
                        .edges
                        .iter()
                        .filter(|&&(a, b)| (a == x && placed[b]) || (b == x && placed[a]))
                        .count();
                    (links, std::cmp::Reverse(x))
                })
                .expect("unplaced vertex exists");
            placed[next] = true;
            order.push(next);
        }
        let mut pos = vec![0; v];
        for (k, &x) in order.iter().enumerate() {
            pos[x] = k;
        }
        let mut constraints = vec![Vec::new(); v];
        for (e, &(a, b)) in h.edges.iter().enumerate() {
            if let Some(g) = graph_of(e) {
                let (lo, hi) = if pos[a] < pos[b] { (pos[a], pos[b]) } else { (pos[b], pos[a]) };
                constraints[hi].push((lo, g));
            }
        }
        let mut leaf_split = (Vec::new(), [false; 2]);
        if v >= 2 {
            for &(lo, g) in &constraints[v - 1] {
                if lo == v - 2 {
                    leaf_split.1[g as usize] = true;
                } else {
                    leaf_split.0.push((lo, g));
                }
            }
        }
        Plan { order, constraints, leaf_split }
    }

    /// Counts extensions of the images fixed in `image[..start]`.
    fn count(&self, graphs: [&GraphState; 2], image: &mut [usize], start: usize) -> u64 {
        let full = graphs[0].full_mask();
        let depth = self.order.len();
        if start == depth {
            return 1;
        }
        let mask = |k: usize, image: &[usize]| {
            self.constraints[k]
                .iter()
                .fold(full, |m, &(lo, g)| m & graphs[g as usize].row(image[lo]))
        };
        if start + 1 == depth {
            return mask(start, image).count_ones() as u64;
        }
        let mut total = 0;
        let mut m = mask(start, image);
        if start + 2 == depth {
            // last two levels: the leaf's constraints not tied to the vertex
            // placed now are fixed for the whole loop
            let (earlier, tied) = &self.leaf_split;
            let fixed = earlier
                .iter()
                .fold(full, |acc, &(lo, g)| acc & graphs[g as usize].row(image[lo]));
            while m != 0 {
                let x = m.trailing_zeros() as usize;
                m &= m - 1;
                let mut leaf_mask = fixed;
                if tied[0] {
                    leaf_mask &= graphs[0].row(x);
                }
                if tied[1] {
                    leaf_mask &= graphs[1].row(x);
                }
                total += leaf_mask.count_ones() as u64;
            }
            return total;
        }
        while m != 0 {
            let x = m.trailing_zeros() as usize;
            m &= m - 1;
            image[start] = x;
            total += self.count(graphs, image, start + 1);
        }
        total
    }
}

/// `|hom(H, G)|` with an explicit budget on `n^|V(H)|`.
pub fn hom_count_with_budget(h: &SubgraphSpec, g: &GraphState, budget: u64) -> Result<u64> {
    let maps = h.map_count(g.n);
    if maps > budget {
        return Err(Error::Resource(format!(
            "{}^{} = {maps} vertex maps exceed the budget of {budget}",
            g.n, h.n_vertices
        )));
    }
    let plan = Plan::new(h, &[], |_| Some(false));
    let mut image = vec![0; h.n_vertices];
    Ok(plan.count([g, g], &mut image, 0))
}

/// Number of edge-preserving maps `V(H) -> V(G)`.
pub fn hom_count(h: &SubgraphSpec, g: &GraphState) -> Result<u64> {
    hom_count_with_budget(h, g, HOM_BUDGET)
}

/// `|hom(H, G)| / n^|V(H)|`.
pub fn hom_density(h: &SubgraphSpec, g: &GraphState) -> Result<f64> {
    let c = hom_count(h, g)?;
    Ok(c as f64 / (g.n as f64).powi(h.n_vertices as i32))
}

/// Precomputed search plans for [`hom_delta`], one per edge of `H`.
///
/// Only maps sending some edge of H onto `{i, j}` differ between `G + ij`
/// and `G - ij`. Each is counted once, through the first such edge: earlier
/// edges go to `G - ij`, later ones to `G + ij`.
pub(crate) struct DeltaPlan {
    plans: Vec<Plan>,
    n_vertices: usize,
}

impl DeltaPlan {
    pub(crate) fn new(h: &SubgraphSpec) -> Self {
        let plans = h
            .edges
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| {
                Plan::new(h, &[a, b], |e| match e.cmp(&k) {
                    std::cmp::Ordering::Less => Some(false),
                    std::cmp::Ordering::Equal => None,
                    std::cmp::Ordering::Greater => Some(true),
                })
            })
            .collect();
        DeltaPlan { plans, n_vertices: h.n_vertices }
    }

    /// Vertex maps visited per call on `n` vertices, saturating.
    pub(crate) fn cost(&self, n: usize) -> u64 {
        (2 * self.plans.len() as u64).saturating_mul((n as u64).saturating_pow(self.n_vertices.saturating_sub(2) as u32))
    }

    /// `minus` and `plus` are the host without and with the pair `ij`.
    pub(crate) fn count(&self, minus: &GraphState, plus: &GraphState, i: usize, j: usize, image: &mut [usize]) -> u64 {
        let mut total = 0;
        for plan in &self.plans {
            for (x, y) in [(i, j), (j, i)] {
                image[0] = x;
                image[1] = y;
                total += plan.count([minus, plus], image, 2);
            }
        }
        total
    }
}

/// `|hom(H, G + ij)| - |hom(H, G - ij)|`.
pub fn hom_delta_with_budget(h: &SubgraphSpec, g: &GraphState, i: usize, j: usize, budget: u64) -> Result<u64> {
    if i == j || i >= g.n || j >= g.n {
        return Err(Error::Domain(format!("invalid pair {i}-{j} for n = {}", g.n)));
    }
    let plan = DeltaPlan::new(h);
    let maps = plan.cost(g.n);
    if maps > budget {
        return Err(Error::Resource(format!("hom delta needs {maps} vertex maps, budget {budget}")));
    }
    let mut minus = g.clone();
    minus.set_edge(i, j, false);
    let mut plus = g.clone();
    plus.set_edge(i, j, true);
    let mut image = vec![0; h.n_vertices.max(2)];
    Ok(plan.count(&minus, &plus, i, j, &mut image))
}

pub fn hom_delta(h: &SubgraphSpec, g: &GraphState, i: usize, j: usize) -> Result<u64> {
    hom_delta_with_budget(h, g, i, j, HOM_BUDGET)
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Every graph on `n <= 6` vertices with its three model densities.
#[derive(Debug, Clone)]
pub struct GraphEnsemble {
    n: usize,
    patterns: [SubgraphSpec; 3],
    densities: Vec<[f64; 3]>,
}

impl GraphEnsemble {
    pub fn new(n: usize, h2: &SubgraphSpec, h3: &SubgraphSpec) -> Result<Self> {
        let patterns = [SubgraphSpec::edge(), h2.clone(), h3.clone()];
        let densities = Self::densities_of(n, &patterns)?;
        Ok(GraphEnsemble { n, patterns, densities })
    }

    fn check_n(n: usize) -> Result<u64> {
        if n < 2 {
            return Err(Error::Domain(format!("enumeration needs n >= 2, got {n}")));
        }
        if n > MAX_ENUMERATION_N {
            return Err(Error::Resource(format!(
                "exact enumeration limited to n <= {MAX_ENUMERATION_N}, got {n}"
            )));
        }
        Ok(1u64 << (n * (n - 1) / 2))
    }

    fn densities_of<const K: usize>(n: usize, patterns: &[SubgraphSpec; K]) -> Result<Vec<[f64; K]>> {
        let graphs = Self::check_n(n)?;
        for h in patterns {
            if h.map_count(n) > HOM_BUDGET {
                return Err(Error::Resource(format!("pattern {h} exceeds the budget at n = {n}")));
            }
        }
        (0..graphs)
            .into_par_iter()
            .map(|bits| {
                let g = GraphState::from_edge_bits(n, bits)?;
                let mut t = [0.0; K];
                for (k, h) in patterns.iter().enumerate() {
                    t[k] = hom_density(h, &g)?;
                }
                Ok(t)
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.densities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.densities.is_empty()
    }

    /// `(t(H1,G), t(H2,G), t(H3,G))` per graph, in edge-bit order.
    pub fn densities(&self) -> &[[f64; 3]] {
        &self.densities
    }

    fn exponents(&self, beta: &BetaPoint) -> impl Iterator<Item = f64> + Clone + '_ {
        let n2 = (self.n * self.n) as f64;
        let b = beta.as_array();
        self.densities
            .iter()
            .map(move |t| n2 * (b[0] * t[0] + b[1] * t[1] + b[2] * t[2]))
    }

    /// `psi_n = log(Z_n) / n^2`.
    pub fn psi(&self, beta: &BetaPoint) -> f64 {
        log_sum_exp(self.exponents(beta)) / (self.n * self.n) as f64
    }

    /// Gibbs weights, normalized.
    pub fn weights(&self, beta: &BetaPoint) -> Vec<f64> {
        let x: Vec<f64> = self.exponents(beta).collect();
        let m = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = x.iter().map(|&e| (e - m).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|e| e / z).collect()
    }

    /// Gibbs means of the three model densities.
    pub fn mean_densities(&self, beta: &BetaPoint) -> [f64; 3] {
        let w = self.weights(beta);
        let mut m = [0.0; 3];
        for (wk, t) in w.iter().zip(&self.densities) {
            for k in 0..3 {
                m[k] += wk * t[k];
            }
        }
        m
    }

    /// Gibbs mean of `t(target, G)`.
    pub fn expectation(&self, beta: &BetaPoint, target: &SubgraphSpec) -> Result<f64> {
        if let Some(k) = self.patterns.iter().position(|h| h == target) {
            return Ok(self.mean_densities(beta)[k]);
        }
        let t = Self::densities_of(self.n, std::array::from_ref(target))?;
        Ok(self.weights(beta).iter().zip(&t).map(|(w, t)| w * t[0]).sum())
    }
}

/// `psi_n` by summing over all `2^(n(n-1)/2)` graphs on `n <= 6` vertices.
pub fn exact_psi_n(n: usize, beta: &BetaPoint, h2: &SubgraphSpec, h3: &SubgraphSpec) -> Result<f64> {
    beta.check_finite()?;
    Ok(GraphEnsemble::new(n, h2, h3)?.psi(beta))
}

/// Exact Gibbs mean of `t(h_target, G)` on `n <= 6` vertices.
pub fn exact_expectation(
    n: usize,
    beta: &BetaPoint,
    h_target: &SubgraphSpec,
    h2: &SubgraphSpec,
    h3: &SubgraphSpec,
) -> Result<f64> {
    beta.check_finite()?;
    GraphEnsemble::new(n, h2, h3)?.expectation(beta, h_target)
}
