//! Model specification and the scalar variational function
//!
//! ```text
//! l(u) = b1 u + b2 u^p + b3 u^q - u log(u)/2 - (1-u) log(1-u)/2,   0 <= u <= 1
//! ```
//!
//! whose supremum is the limiting free energy density for non-negative
//! `b2`, `b3`. Internally every point of `[0, 1]` is carried together with
//! `1 - u` and the logit `log(u / (1 - u))`, so maximizers that sit
//! exponentially close to an endpoint (deep in the `b1 -> -inf` regime)
//! keep full relative precision.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::{bisect_root, expand};

/// Edge counts of the two non-trivial subgraphs. The first subgraph is a
/// single edge and is implicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ModelSpec {
    p: u32,
    q: u32,
}

/// Checks `2 <= p < q <= 5p - 1` and returns the spec.
pub fn validate_spec(p: u32, q: u32) -> Result<ModelSpec> {
    ModelSpec::new(p, q)
}

impl ModelSpec {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::AssumptionViolation(format!("p = {p} fails 2 <= p")));
        }
        if q < p {
            return Err(Error::AssumptionViolation(format!(
                "p = {p}, q = {q} fails p <= q"
            )));
        }
        if q > 5 * p - 1 {
            return Err(Error::AssumptionViolation(format!(
                "q = {q} fails q <= 5p - 1 = {}",
                5 * p - 1
            )));
        }
        if p == q {
            return Err(Error::DegenerateModel(format!(
                "p = q = {p}: the two subgraph terms merge into (b2 + b3) u^{p}; \
                 analyse the 2-parameter model with coupling b2 + b3 instead"
            )));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// The same model with the roles of the second and third subgraphs
    /// exchanged. The result has `p > q` and is only meaningful for
    /// phase-geometry computations whose third coupling is zero (this is
    /// how the `b2 = 0` boundary curve is obtained).
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q,
            q: self.p,
        }
    }

    pub fn is_swapped(&self) -> bool {
        self.p > self.q
    }

    fn ordered(&self) -> (f64, f64) {
        let (lo, hi) = if self.p <= self.q {
            (self.p, self.q)
        } else {
            (self.q, self.p)
        };
        (lo as f64, hi as f64)
    }

    /// Discriminant of the numerator of `f'(u)`, as a quadratic in `q`:
    /// `q^2 + 2(1 - 3p) q + (p + 1)^2`. Non-positive for every valid spec,
    /// which makes `f` monotone and fixes the maximizer structure.
    pub fn discriminant(&self) -> f64 {
        let (p, q) = self.ordered();
        q * q + 2.0 * (1.0 - 3.0 * p) * q + (p + 1.0) * (p + 1.0)
    }

    /// Zeros `(3p - 1) -+ 2 sqrt(2(p^2 - p))` of the discriminant in `q`.
    pub fn discriminant_roots(&self) -> (f64, f64) {
        let (p, _) = self.ordered();
        let c = 3.0 * p - 1.0;
        let w = 2.0 * (2.0 * (p * p - p)).sqrt();
        (c - w, c + w)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, q={})", self.p, self.q)
    }
}

/// A coupling triple `(b1, b2, b3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaPoint {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
}

impl BetaPoint {
    pub fn new(beta1: f64, beta2: f64, beta3: f64) -> Result<Self> {
        let b = Self { beta1, beta2, beta3 };
        b.check_finite()?;
        Ok(b)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.beta1, self.beta2, self.beta3]
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.as_array().iter().all(|b| b.is_finite()) {
            Ok(())
        } else {
            Err(Error::Domain(format!("non-finite coupling in {self}")))
        }
    }

    /// Errors unless `b2 >= 0` and `b3 >= 0`, where the variational
    /// formula for the free energy holds.
    pub fn require_attractive(&self) -> Result<()> {
        if self.beta2 < 0.0 || self.beta3 < 0.0 {
            return Err(Error::HypothesisViolation(format!(
                "{self}: the variational free energy requires b2 >= 0 and b3 >= 0"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for BetaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.beta1, self.beta2, self.beta3)
    }
}

impl FromStr for BetaPoint {
    type Err = Error;

    /// Parses the comma-joined form `b1,b2,b3`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "expected three comma-separated couplings, got {s:?}"
            )));
        }
        let mut v = [0.0; 3];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad coupling {part:?}")))?;
        }
        BetaPoint::new(v[0], v[1], v[2])
    }
}

/// Numerical knobs shared by every solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceConfig {
    /// Points of the uniform bracketing grid on `[margin, 1 - margin]`.
    pub grid_points: usize,
    pub grid_margin: f64,
    /// Bracket width at which a bisection stops (logit units).
    pub root_tol: f64,
    /// Relative tolerance under which two local maxima are co-global.
    pub tie_tol: f64,
    pub bisection_cap: usize,
    /// `|b2 - r(b1)|` below which a point is reported on the surface.
    pub surface_tol: f64,
    /// Distance in the `(b1, b2)` plane below which a point is critical.
    pub critical_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            grid_points: 4096,
            grid_margin: 1e-9,
            root_tol: 1e-13,
            tie_tol: 1e-9,
            bisection_cap: 2000,
            surface_tol: 1e-7,
            critical_tol: 1e-6,
        }
    }
}

impl ToleranceConfig {
    pub(crate) fn ties(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.tie_tol * (1.0 + a.abs().max(b.abs()))
    }
}

/// A point of `(0, 1)` with its complement and logit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Site {
    pub u: f64,
    pub v: f64,
    pub s: f64,
    pub ln_u: f64,
    pub ln_v: f64,
}

impl Site {
    pub fn from_logit(s: f64) -> Self {
        if s >= 0.0 {
            let e = (-s).exp();
            let l = e.ln_1p();
            Site {
                u: 1.0 / (1.0 + e),
                v: e / (1.0 + e),
                s,
                ln_u: -l,
                ln_v: -s - l,
            }
        } else {
            let e = s.exp();
            let l = e.ln_1p();
            Site {
                u: e / (1.0 + e),
                v: 1.0 / (1.0 + e),
                s,
                ln_u: s - l,
                ln_v: -l,
            }
        }
    }

    /// Requires `0 < u < 1`.
    pub fn from_u(u: f64) -> Self {
        let v = 1.0 - u;
        let ln_u = u.ln();
        let ln_v = (-u).ln_1p();
        Site {
            u,
            v,
            s: ln_u - ln_v,
            ln_u,
            ln_v,
        }
    }
}

/// `e (e-1) ... (e-k+1)`.
fn falling(e: u32, k: u32) -> f64 {
    (0..k).map(|i| e as f64 - i as f64).product()
}

/// `l` and its derivatives for fixed couplings.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Landscape {
    /// `(exponent, coupling)` sorted by exponent so that swapping the two
    /// subgraphs sums the same terms in the same order.
    terms: [(u32, f64); 3],
}

impl Landscape {
    pub fn new(beta: &BetaPoint, spec: &ModelSpec) -> Self {
        let mut terms = [(1, beta.beta1), (spec.p, beta.beta2), (spec.q, beta.beta3)];
        terms.sort_by_key(|t| t.0);
        Self { terms }
    }

    fn poly(&self, u: f64, k: u32) -> f64 {
        self.terms
            .iter()
            .map(|&(e, b)| {
                if e < k || b == 0.0 {
                    0.0
                } else {
                    falling(e, k) * b * u.powi((e - k) as i32)
                }
            })
            .sum()
    }

    pub fn value(&self, x: &Site) -> f64 {
        let entropy = -0.5 * (x.u * x.ln_u + x.v * x.ln_v);
        self.poly(x.u, 0) + entropy
    }

    pub fn d1(&self, x: &Site) -> f64 {
        self.poly(x.u, 1) - 0.5 * x.s
    }

    pub fn d2(&self, x: &Site) -> f64 {
        self.poly(x.u, 2) - 0.5 / (x.u * x.v)
    }

    pub fn d3(&self, x: &Site) -> f64 {
        let uv = x.u * x.v;
        self.poly(x.u, 3) + 0.5 * (x.v - x.u) / (uv * uv)
    }

    pub fn derivative(&self, x: &Site, order: u8) -> f64 {
        match order {
            0 => self.value(x),
            1 => self.d1(x),
            2 => self.d2(x),
            _ => self.d3(x),
        }
    }

    /// Sum of `|b| e` over the terms: `l'` is positive for logits below
    /// `-2 B - 2` and negative above `2 B + 2`.
    fn slope_bound(&self) -> f64 {
        self.terms.iter().map(|&(e, b)| b.abs() * e as f64).sum()
    }
}

/// Evaluates `l` (order 0) or its first three derivatives at `u`.
///
/// At the endpoints the derivatives are returned as the signed infinities
/// they diverge to, e.g. `l'(0) = +inf` and `l'(1) = -inf`.
pub fn eval_l(u: f64, beta: &BetaPoint, spec: &ModelSpec, order: u8) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("u = {u} outside [0, 1]")));
    }
    if order > 3 {
        return Err(Error::Domain(format!("derivative order {order} not in 0..=3")));
    }
    let land = Landscape::new(beta, spec);
    if u == 0.0 || u == 1.0 {
        if order == 0 {
            // 0 log 0 = 0
            return Ok(land.poly(u, 0));
        }
        let at_zero = u == 0.0;
        return Ok(match (order, at_zero) {
            (1, true) => f64::INFINITY,
            (1, false) => f64::NEG_INFINITY,
            (2, _) => f64::NEG_INFINITY,
            (_, true) => f64::INFINITY,
            (_, false) => f64::NEG_INFINITY,
        });
    }
    Ok(land.derivative(&Site::from_u(u), order))
}

/// One local maximizer of `l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalMax {
    pub u: f64,
    /// `log(u / (1 - u))`; resolves maximizers that round to 0 or 1.
    pub logit: f64,
    pub value: f64,
    pub second_derivative: f64,
}

impl LocalMax {
    fn at(land: &Landscape, x: &Site) -> Self {
        LocalMax {
            u: x.u,
            logit: x.s,
            value: land.value(x),
            second_derivative: land.d2(x),
        }
    }
}

/// Local maximizers of `l` in increasing `u`, and which of them are global.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximizerSet {
    pub locals: Vec<LocalMax>,
    pub globals: Vec<usize>,
}

impl MaximizerSet {
    /// The global maximizer with the largest value (the first on ties).
    pub fn best(&self) -> &LocalMax {
        let mut best = &self.locals[self.globals[0]];
        for &i in &self.globals[1..] {
            if self.locals[i].value > best.value {
                best = &self.locals[i];
            }
        }
        best
    }

    pub fn is_coexisting(&self) -> bool {
        self.globals.len() > 1
    }

    pub fn psi(&self) -> f64 {
        self.best().value
    }
}

/// Logit of the unique maximum of `F(u) = l''(u) / u^(p-2)`, i.e. the root
/// of `2q(q-1)(q-p) b3 + f(u)` with `f(u) = ((p-1) - p u) / (u^(q-1) (1-u)^2)`.
/// Computed through the sign of `c b3 u^(q-1) (1-u)^2 + (p-1) - p u`, which is
/// positive at `u = 0` and equals `-1` at `u = 1`.
pub(crate) fn curvature_peak(beta3: f64, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<Site> {
    let (p, q) = (spec.p as f64, spec.q as f64);
    let c = 2.0 * q * (q - 1.0) * (q - p) * beta3;
    let h = |s: f64| {
        let x = Site::from_logit(s);
        c * x.u.powi(spec.q as i32 - 1) * x.v * x.v + (p - 1.0) - p * x.u
    };
    // the root for b3 = 0 is (p-1)/p; start there
    let s_start = (p - 1.0).ln();
    let positive = |s: f64| h(s) > 0.0;
    if h(s_start) == 0.0 {
        return Ok(Site::from_logit(s_start));
    }
    let s = if positive(s_start) {
        let hi = expand(s_start, 1.0, |s| !positive(s))?;
        bisect_root(s_start, hi, tol.root_tol, tol.bisection_cap, positive)
    } else {
        let lo = expand(s_start, -1.0, positive)?;
        bisect_root(lo, s_start, tol.root_tol, tol.bisection_cap, positive)
    };
    Ok(Site::from_logit(s))
}

/// The two zeros of `l''` (on either side of the curvature peak), or
/// `None` when `l'' <= 0` everywhere.
pub(crate) fn curvature_zeros(
    land: &Landscape,
    beta3: f64,
    spec: &ModelSpec,
    tol: &ToleranceConfig,
) -> Result<Option<(Site, Site)>> {
    let peak = curvature_peak(beta3, spec, tol)?;
    if land.d2(&peak) <= 0.0 {
        return Ok(None);
    }
    let convex = |s: f64| land.d2(&Site::from_logit(s)) > 0.0;
    let lo = expand(peak.s, -1.0, |s| !convex(s))?;
    let hi = expand(peak.s, 1.0, |s| !convex(s))?;
    let s1 = bisect_root(peak.s, lo, tol.root_tol, tol.bisection_cap, convex);
    let s2 = bisect_root(peak.s, hi, tol.root_tol, tol.bisection_cap, convex);
    Ok(Some((Site::from_logit(s1), Site::from_logit(s2))))
}

/// Brackets every sign change of `l'` between the given logit nodes and
/// polishes it by bisection. Nodes must include the zeros of `l''` so that
/// `l'` is monotone between consecutive nodes.
fn maxima_between(land: &Landscape, mut nodes: Vec<f64>, tol: &ToleranceConfig) -> Result<MaximizerSet> {
    let bound = 2.0 * land.slope_bound() + 2.0;
    nodes.push(-bound);
    nodes.push(bound);
    nodes.retain(|s| s.is_finite() && s.abs() <= bound);
    nodes.sort_by(|a, b| a.total_cmp(b));
    nodes.dedup();

    let rising = |s: f64| land.d1(&Site::from_logit(s)) > 0.0;
    let signs: Vec<bool> = nodes.iter().map(|&s| rising(s)).collect();
    let mut n_roots = 0;
    let mut locals = Vec::new();
    for (w, sw) in nodes.windows(2).zip(signs.windows(2)) {
        if sw[0] == sw[1] {
            continue;
        }
        n_roots += 1;
        let s = if sw[0] {
            bisect_root(w[0], w[1], tol.root_tol, tol.bisection_cap, rising)
        } else {
            bisect_root(w[1], w[0], tol.root_tol, tol.bisection_cap, rising)
        };
        if sw[0] {
            locals.push(LocalMax::at(land, &Site::from_logit(s)));
        }
    }
    if n_roots > 3 {
        return Err(Error::NumericalFailure(format!(
            "{n_roots} critical points of l bracketed; at most 3 are possible"
        )));
    }
    if locals.is_empty() {
        return Err(Error::NumericalFailure("no local maximizer bracketed".into()));
    }
    let top = locals.iter().map(|m| m.value).fold(f64::NEG_INFINITY, f64::max);
    let globals = (0..locals.len())
        .filter(|&i| tol.ties(locals[i].value, top))
        .collect();
    Ok(MaximizerSet { locals, globals })
}

/// Maximizers using only the structural nodes (zeros of `l''`).
pub(crate) fn structural_maxima(
    beta: &BetaPoint,
    spec: &ModelSpec,
    tol: &ToleranceConfig,
) -> Result<MaximizerSet> {
    let land = Landscape::new(beta, spec);
    let mut nodes = Vec::with_capacity(4);
    if let Some((a, b)) = curvature_zeros(&land, beta.beta3, spec, tol)? {
        nodes.push(a.s);
        nodes.push(b.s);
    }
    maxima_between(&land, nodes, tol)
}

/// Locates all local maximizers of `l` on `[0, 1]`.
///
/// Sign changes of `l'` are bracketed on a uniform grid in `u` (mapped to
/// logits), extended by the zeros of `l''` and by logit bounds outside of
/// which `l'` has a fixed sign.
pub fn find_maximizers(beta: &BetaPoint, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<MaximizerSet> {
    beta.check_finite()?;
    let land = Landscape::new(beta, spec);
    let n = tol.grid_points.max(2);
    let lo = tol.grid_margin;
    let step = (1.0 - 2.0 * lo) / (n - 1) as f64;
    let mut nodes: Vec<f64> = (0..n).map(|k| Site::from_u(lo + step * k as f64).s).collect();
    if let Some((a, b)) = curvature_zeros(&land, beta.beta3, spec, tol)? {
        nodes.push(a.s);
        nodes.push(b.s);
    }
    maxima_between(&land, nodes, tol)
}

/// Limiting free energy density and the maximizers attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreeEnergy {
    pub psi: f64,
    pub maximizers: MaximizerSet,
}

/// `psi = sup_u l(u)`; requires `b2, b3 >= 0`.
pub fn free_energy(beta: &BetaPoint, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<FreeEnergy> {
    beta.check_finite()?;
    beta.require_attractive()?;
    let maximizers = find_maximizers(beta, spec, tol)?;
    Ok(FreeEnergy {
        psi: maximizers.psi(),
        maximizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec35() -> ModelSpec {
        ModelSpec::new(3, 5).unwrap()
    }

    fn beta(b1: f64, b2: f64, b3: f64) -> BetaPoint {
        BetaPoint::new(b1, b2, b3).unwrap()
    }

    #[test]
    fn validate_spec_cases() {
        let s = validate_spec(3, 5).unwrap();
        assert_eq!(s.discriminant(), -39.0);
        assert!(matches!(validate_spec(2, 2), Err(Error::DegenerateModel(_))));
        match validate_spec(2, 10) {
            Err(Error::AssumptionViolation(m)) => assert!(m.contains("5p - 1 = 9")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(validate_spec(1, 3), Err(Error::AssumptionViolation(_))));
        assert!(matches!(validate_spec(4, 3), Err(Error::AssumptionViolation(_))));
    }

    #[test]
    fn discriminant_nonpositive_on_valid_specs() {
        for p in 2..12 {
            for q in (p + 1)..=(5 * p - 1) {
                let s = ModelSpec::new(p, q).unwrap();
                assert!(s.discriminant() <= 0.0, "{s}");
                let (q1, q2) = s.discriminant_roots();
                assert!(q1 <= p as f64 && q2 >= (5 * p - 1) as f64);
            }
        }
    }

    #[test]
    fn entropy_at_half() {
        let b = beta(0.0, 0.0, 0.0);
        let v = eval_l(0.5, &b, &spec35(), 0).unwrap();
        assert!((v - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(eval_l(0.5, &b, &spec35(), 1).unwrap(), 0.0);
        assert!((eval_l(0.5, &b, &spec35(), 2).unwrap() + 2.0).abs() < 1e-14);
    }

    #[test]
    fn endpoints() {
        let b = beta(0.3, 1.0, 2.0);
        let s = spec35();
        assert_eq!(eval_l(0.0, &b, &s, 0).unwrap(), 0.0);
        assert_eq!(eval_l(1.0, &b, &s, 0).unwrap(), 3.3);
        assert_eq!(eval_l(0.0, &b, &s, 1).unwrap(), f64::INFINITY);
        assert_eq!(eval_l(1.0, &b, &s, 1).unwrap(), f64::NEG_INFINITY);
        assert_eq!(eval_l(0.0, &b, &s, 2).unwrap(), f64::NEG_INFINITY);
        assert!(matches!(eval_l(1.5, &b, &s, 0), Err(Error::Domain(_))));
        assert!(matches!(eval_l(-0.1, &b, &s, 0), Err(Error::Domain(_))));
        assert!(matches!(eval_l(0.5, &b, &s, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn figure4_value() {
        // term-by-term at u = 0.3, b = (2, -4, 2)
        let u: f64 = 0.3;
        let expect = 2.0 * u - 4.0 * u.powi(3) + 2.0 * u.powi(5)
            - 0.5 * u * u.ln()
            - 0.5 * (1.0 - u) * (1.0 - u).ln();
        let got = eval_l(u, &beta(2.0, -4.0, 2.0), &spec35(), 0).unwrap();
        assert!((got - 0.8022921510274467).abs() < 1e-14, "{got}");
        assert!((got - expect).abs() < 1e-15);
    }

    #[test]
    fn site_round_trip() {
        for &s in &[-700.0, -40.0, -1.0, 0.0, 0.3, 10.0, 88.0, 700.0] {
            let x = Site::from_logit(s);
            assert!((x.u + x.v - 1.0).abs() < 1e-15);
            assert!((x.ln_u - x.u.ln()).abs() < 1e-12 || x.u == 0.0);
        }
        let x = Site::from_u(0.25);
        assert!((x.s - (1.0f64 / 3.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn symmetric_maximizer() {
        let m = find_maximizers(&beta(0.0, 0.0, 0.0), &spec35(), &ToleranceConfig::default()).unwrap();
        assert_eq!(m.locals.len(), 1);
        assert!((m.best().u - 0.5).abs() < 1e-13);
    }

    #[test]
    fn figure4_unique_maximizer() {
        let m = find_maximizers(&beta(2.0, -4.0, 2.0), &spec35(), &ToleranceConfig::default()).unwrap();
        assert_eq!(m.locals.len(), 1);
        assert_eq!(m.globals, vec![0]);
    }

    #[test]
    fn two_local_maxima_inside_v() {
        let m = find_maximizers(&beta(2.0, -2.95, 2.0), &spec35(), &ToleranceConfig::default()).unwrap();
        assert_eq!(m.locals.len(), 2);
        assert!(m.locals[0].u < m.locals[1].u);
        // the caption value is rounded: the lower branch still wins here
        assert_eq!(m.globals, vec![0]);
        for l in &m.locals {
            assert!(l.second_derivative < 0.0);
        }
    }

    #[test]
    fn free_energy_logistic() {
        let tol = ToleranceConfig::default();
        let fe = free_energy(&beta(1.0, 0.0, 0.0), &spec35(), &tol).unwrap();
        let rho = 2f64.exp() / (1.0 + 2f64.exp());
        assert!((fe.maximizers.best().u - rho).abs() < 1e-12);
        assert!((fe.maximizers.best().u - 0.880797).abs() < 1e-6);
        let zero = free_energy(&beta(0.0, 0.0, 0.0), &spec35(), &tol).unwrap();
        assert!((zero.psi - 0.346574).abs() < 1e-6);
        assert!(matches!(
            free_energy(&beta(0.0, -1.0, 0.0), &spec35(), &tol),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn extreme_maximizers_keep_logit_precision() {
        // both maxima beyond double resolution in u near the ends
        let tol = ToleranceConfig::default();
        let m = structural_maxima(&beta(-20.0, 18.0, 2.0), &spec35(), &tol).unwrap();
        assert_eq!(m.locals.len(), 2);
        assert!((m.locals[0].logit + 40.0).abs() < 1e-6);
        assert!(m.locals[1].logit > 80.0);
    }

    #[test]
    fn parse_beta() {
        let b: BetaPoint = "2, -2.95,2".parse().unwrap();
        assert_eq!(b, beta(2.0, -2.95, 2.0));
        assert!("1,2".parse::<BetaPoint>().is_err());
        assert!("1,x,2".parse::<BetaPoint>().is_err());
        assert!("1,inf,2".parse::<BetaPoint>().is_err());
    }
}
