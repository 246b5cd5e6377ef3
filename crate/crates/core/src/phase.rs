//! Phase geometry for fixed `b3 >= 0`: the corner of the V-shaped region
//! where `l` has two local maxima, the bounding curves of that region, the
//! transition curve `b2 = r(b1)` inside it, and the critical curve traced
//! by the corners as `b3` varies.
//!
//! Every solve is a bisection on a branch that is monotone by construction:
//! `b3(u0)` on `[(p-1)/p, 1)`, `m(u)` and `n(u)` on each side of `u0`, and
//! the difference of the two local maxima as a function of `b2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    find_maximizers, structural_maxima, BetaPoint, Landscape, LocalMax, MaximizerSet, ModelSpec, Site,
    ToleranceConfig,
};
use crate::roots::{bisect, bisect_root, expand};

/// One point of the critical curve: the corner `(b1c, b2c)` of the V-region
/// at coupling `b3`, where the two maxima of `l` merge at `u0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub u0: f64,
    pub beta1_c: f64,
    pub beta2_c: f64,
    pub beta3: f64,
}

impl CriticalPoint {
    /// Closed-form corner coordinates at `u0`, with `b3` given by the
    /// parametrization.
    fn at(x: &Site, spec: &ModelSpec) -> Self {
        let (beta1_c, beta2_c, beta3) = parametrization(x, spec);
        CriticalPoint {
            u0: x.u,
            beta1_c,
            beta2_c,
            beta3,
        }
    }

    pub fn beta(&self) -> BetaPoint {
        BetaPoint {
            beta1: self.beta1_c,
            beta2: self.beta2_c,
            beta3: self.beta3,
        }
    }

    /// `|l'(u0)|`, `|l''(u0)|`, `|l'''(u0)|` at the corner couplings.
    pub fn residuals(&self, spec: &ModelSpec) -> [f64; 3] {
        let land = Landscape::new(&self.beta(), spec);
        let x = Site::from_u(self.u0);
        [land.d1(&x).abs(), land.d2(&x).abs(), land.d3(&x).abs()]
    }
}

/// `(b1(u), b2(u), b3(u))` of the critical curve.
fn parametrization(x: &Site, spec: &ModelSpec) -> (f64, f64, f64) {
    let (p, q) = (spec.p() as f64, spec.q() as f64);
    let (u, v) = (x.u, x.v);
    let v2 = v * v;
    let beta1 = 0.5 * x.s - 1.0 / (2.0 * (p - 1.0) * v)
        + (p * u - (p - 1.0)) / (2.0 * (p - 1.0) * (q - 1.0) * v2);
    let beta2 = (q * u - (q - 1.0)) / (2.0 * p * (p - 1.0) * (p - q) * u.powi(spec.p() as i32 - 1) * v2);
    (beta1, beta2, beta3_at(x, spec))
}

fn beta3_at(x: &Site, spec: &ModelSpec) -> f64 {
    let (p, q) = (spec.p() as f64, spec.q() as f64);
    (p * x.u - (p - 1.0))
        / (2.0 * q * (q - 1.0) * (q - p) * x.u.powi(spec.q() as i32 - 1) * x.v * x.v)
}

fn check_slice(beta3: f64, spec: &ModelSpec) -> Result<()> {
    if !beta3.is_finite() || beta3 < 0.0 {
        return Err(Error::Domain(format!("b3 = {beta3} must be finite and >= 0")));
    }
    if spec.is_swapped() && beta3 != 0.0 {
        return Err(Error::Domain(format!(
            "swapped spec {spec} only supports a zero third coupling"
        )));
    }
    Ok(())
}

fn u0_site(beta3: f64, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<Site> {
    check_slice(beta3, spec)?;
    let p = spec.p() as f64;
    // logit((p-1)/p)
    let s_start = (p - 1.0).ln();
    if beta3 == 0.0 {
        let mut x = Site::from_logit(s_start);
        x.u = (p - 1.0) / p;
        x.v = 1.0 / p;
        return Ok(x);
    }
    let below = |s: f64| beta3_at(&Site::from_logit(s), spec) < beta3;
    let hi = expand(s_start, 1.0, |s| !below(s))?;
    let s = bisect_root(s_start, hi, tol.root_tol, tol.bisection_cap, below);
    Ok(Site::from_logit(s))
}

/// The unique `u0` in `[(p-1)/p, 1)` at which `b3(u0) = beta3`.
pub fn u0_from_beta3(beta3: f64, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<f64> {
    Ok(u0_site(beta3, spec, tol)?.u)
}

/// Corner of the V-region at `beta3`. Verifies that `l'`, `l''` and `l'''`
/// all vanish at `u0` before returning.
pub fn corner_point(beta3: f64, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<CriticalPoint> {
    let x = u0_site(beta3, spec, tol)?;
    let (beta1_c, beta2_c, _) = parametrization(&x, spec);
    let cp = CriticalPoint {
        u0: x.u,
        beta1_c,
        beta2_c,
        beta3,
    };
    let land = Landscape::new(&cp.beta(), spec);
    let r = [land.d1(&x), land.d2(&x), land.d3(&x)];
    // scale of the terms each derivative is a cancellation of
    let scale = [
        1.0 + beta1_c.abs() + x.s.abs(),
        1.0 + 0.5 / (x.u * x.v),
        1.0 + 0.5 / (x.u * x.u * x.v * x.v),
    ];
    for k in 0..3 {
        if r[k].abs() > 1e-7 * scale[k] {
            return Err(Error::NumericalFailure(format!(
                "corner at b3 = {beta3}: derivative {} of l is {} at u0 = {}",
                k + 1,
                r[k],
                x.u
            )));
        }
    }
    Ok(cp)
}

/// Samples the critical curve for `u` uniform on `[(p-1)/p, (q-1)/q]`,
/// the range where both `b2` and `b3` are non-negative.
pub fn critical_curve(spec: &ModelSpec, n_samples: usize) -> Result<Vec<CriticalPoint>> {
    if n_samples < 2 {
        return Err(Error::Domain(format!("n_samples = {n_samples} < 2")));
    }
    if spec.is_swapped() {
        return Err(Error::Domain("critical curve needs p < q".into()));
    }
    let (p, q) = (spec.p() as f64, spec.q() as f64);
    let (a, b) = ((p - 1.0) / p, (q - 1.0) / q);
    Ok((0..n_samples)
        .map(|k| {
            let u = if k + 1 == n_samples {
                b
            } else {
                a + (b - a) * k as f64 / (n_samples - 1) as f64
            };
            CriticalPoint::at(&Site::from_u(u), spec)
        })
        .collect())
}

/// Value of `b2` at which `u` is a zero of `l''`.
fn m_at(x: &Site, beta3: f64, spec: &ModelSpec) -> f64 {
    let (p, q) = (spec.p() as f64, spec.q() as f64);
    let mut num = 0.5 / (x.u.powi(spec.p() as i32 - 1) * x.v);
    if beta3 != 0.0 {
        num -= q * (q - 1.0) * beta3 * x.u.powi(spec.q() as i32 - spec.p() as i32);
    }
    num / (p * (p - 1.0))
}

/// `l'(u) - b1` with `b2 = m(u)`, so that `l'(u_i) = b1 + n(u_i)` at the
/// zeros of `l''`.
fn n_at(x: &Site, beta3: f64, spec: &ModelSpec) -> f64 {
    let (p, q) = (spec.p() as f64, spec.q() as f64);
    let mut n = p * m_at(x, beta3, spec) * x.u.powi(spec.p() as i32 - 1) - 0.5 * x.s;
    if beta3 != 0.0 {
        n += q * beta3 * x.u.powi(spec.q() as i32 - 1);
    }
    n
}

/// Solves `g(u) = level` on one side of `u0` where `g` decreases away
/// from the side (`m` and `n` both blow up at 0 and 1).
fn solve_branch<G>(g: G, level: f64, s0: f64, dir: f64, tol: &ToleranceConfig) -> Result<Site>
where
    G: Fn(&Site) -> f64,
{
    let under = |s: f64| g(&Site::from_logit(s)) <= level;
    let far = expand(s0, dir, |s| !under(s))?;
    let s = bisect_root(s0, far, tol.root_tol, tol.bisection_cap, under);
    Ok(Site::from_logit(s))
}

/// Zeros `u1 < u0 < u2` of `l''` at couplings `(beta2, beta3)` (they do not
/// depend on `b1`). `None` below the corner value `b2c`; the merged pair
/// `(u0, u0)` at `b2c` itself.
pub fn inflection_points(
    beta2: f64,
    beta3: f64,
    spec: &ModelSpec,
    tol: &ToleranceConfig,
) -> Result<Option<(f64, f64)>> {
    Ok(inflection_sites(beta2, beta3, spec, tol)?.map(|(a, b)| (a.u, b.u)))
}

fn inflection_sites(
    beta2: f64,
    beta3: f64,
    spec: &ModelSpec,
    tol: &ToleranceConfig,
) -> Result<Option<(Site, Site)>> {
    let x0 = u0_site(beta3, spec, tol)?;
    let floor = parametrization(&x0, spec).1;
    if beta2 < floor {
        return Ok(None);
    }
    if beta2 == floor {
        return Ok(Some((x0, x0)));
    }
    let m = |x: &Site| m_at(x, beta3, spec);
    let u1 = solve_branch(m, beta2, x0.s, -1.0, tol)?;
    let u2 = solve_branch(m, beta2, x0.s, 1.0, tol)?;
    Ok(Some((u1, u2)))
}

/// The V-shaped region at fixed `(b1, b3)`: for `lower < b2 < upper`, `l`
/// has two local maxima.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VRegion {
    pub beta1: f64,
    pub beta3: f64,
    /// `m(b(b1))`: on it the upper maximizer degenerates to an inflection.
    pub lower: f64,
    /// `m(a(b1))`: on it the lower maximizer degenerates.
    pub upper: f64,
    /// `a(b1) < u0`, with `n(a) = -b1`.
    pub a: f64,
    /// `b(b1) > u0`, with `n(b) = -b1`.
    pub b: f64,
    pub corner: CriticalPoint,
}

/// Bounds of the V-region at `b1`, or `None` when `b1 >= b1c`.
pub fn v_region(beta1: f64, beta3: f64, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<Option<VRegion>> {
    if !beta1.is_finite() {
        return Err(Error::Domain(format!("b1 = {beta1} not finite")));
    }
    let corner = corner_point(beta3, spec, tol)?;
    if beta1 >= corner.beta1_c {
        return Ok(None);
    }
    let x0 = u0_site(beta3, spec, tol)?;
    let n = |x: &Site| n_at(x, beta3, spec);
    let a = solve_branch(n, -beta1, x0.s, -1.0, tol)?;
    let b = solve_branch(n, -beta1, x0.s, 1.0, tol)?;
    let upper = m_at(&a, beta3, spec);
    let lower = m_at(&b, beta3, spec);
    if !(lower < upper) {
        if lower == upper {
            return Ok(None);
        }
        return Err(Error::NumericalFailure(format!(
            "V-region at b1 = {beta1}, b3 = {beta3}: lower {lower} > upper {upper}"
        )));
    }
    Ok(Some(VRegion {
        beta1,
        beta3,
        lower,
        upper,
        a: a.u,
        b: b.u,
        corner,
    }))
}

/// A point of the transition surface: `l` has two global maximizers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub beta1: f64,
    /// `r(b1)` at this `b3`.
    pub beta2: f64,
    pub beta3: f64,
    pub u_low: f64,
    pub u_high: f64,
    pub logit_low: f64,
    pub logit_high: f64,
    /// Common value of `l` at both maximizers (the free energy).
    pub value: f64,
    /// `u_high^e - u_low^e` for `e = 1, p, q`.
    pub jumps: [f64; 3],
    /// Bounds of the enclosing V-region.
    pub lower: f64,
    pub upper: f64,
}

impl SurfacePoint {
    pub fn beta(&self) -> BetaPoint {
        BetaPoint {
            beta1: self.beta1,
            beta2: self.beta2,
            beta3: self.beta3,
        }
    }

    /// Inside the region where the free energy is the variational supremum.
    pub fn admissible(&self) -> bool {
        self.beta2 >= 0.0 && self.beta3 >= 0.0
    }
}

pub(crate) fn jumps(u_low: f64, u_high: f64, spec: &ModelSpec) -> [f64; 3] {
    let d = |e: u32| u_high.powi(e as i32) - u_low.powi(e as i32);
    [d(1), d(spec.p()), d(spec.q())]
}

/// Whether the maximizer above `u0` beats the one below at `b2`. When only
/// one local maximizer exists its side decides.
fn upper_branch_wins(
    beta1: f64,
    beta2: f64,
    beta3: f64,
    s0: f64,
    spec: &ModelSpec,
    tol: &ToleranceConfig,
) -> Result<bool> {
    let ms = structural_maxima(&BetaPoint { beta1, beta2, beta3 }, spec, tol)?;
    Ok(match ms.locals.as_slice() {
        [only] => only.logit > s0,
        [lo, hi] => hi.value > lo.value,
        _ => {
            return Err(Error::NumericalFailure(format!(
                "{} local maxima at b = ({beta1}, {beta2}, {beta3})",
                ms.locals.len()
            )))
        }
    })
}

/// `r(b1)`: the unique `b2` inside the V-region at which both local
/// maxima of `l` are global. `None` when `b1 >= b1c`.
pub fn transition_beta2(
    beta1: f64,
    beta3: f64,
    spec: &ModelSpec,
    tol: &ToleranceConfig,
) -> Result<Option<SurfacePoint>> {
    let Some(region) = v_region(beta1, beta3, spec, tol)? else {
        return Ok(None);
    };
    let s0 = u0_site(beta3, spec, tol)?.s;
    let wins = |b2: f64| upper_branch_wins(beta1, b2, beta3, s0, spec, tol);

    // The maximum difference is monotone in b2. The bracket ends sit on the
    // bounding curves, where one maximizer is degenerate and the side test
    // above still gives the right sign.
    let (lo, hi) = (region.lower, region.upper);
    if wins(lo)? || !wins(hi)? {
        return Err(Error::NumericalFailure(format!(
            "maximum difference does not change sign over [{lo}, {hi}] at b1 = {beta1}, b3 = {beta3}"
        )));
    }
    let mut failure = None;
    let (a, b) = bisect(lo, hi, 0.0, tol.bisection_cap, |b2| match wins(b2) {
        Ok(w) => !w,
        Err(e) => {
            failure.get_or_insert(e);
            false
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let r = 0.5 * (a + b);
    let beta = BetaPoint {
        beta1,
        beta2: r,
        beta3,
    };
    let ms = structural_maxima(&beta, spec, tol)?;
    let [low, high] = ms.locals.as_slice() else {
        return Err(Error::NumericalFailure(format!(
            "expected two maximizers on the transition curve at {beta}, found {}",
            ms.locals.len()
        )));
    };
    if !tol.ties(low.value, high.value) {
        return Err(Error::NumericalFailure(format!(
            "maxima at {beta} differ by {} after bisection",
            high.value - low.value
        )));
    }
    Ok(Some(SurfacePoint {
        beta1,
        beta2: r,
        beta3,
        u_low: low.u,
        u_high: high.u,
        logit_low: low.logit,
        logit_high: high.logit,
        value: low.value.max(high.value),
        jumps: jumps(low.u, high.u, spec),
        lower: region.lower,
        upper: region.upper,
    }))
}

/// A grid point of [`trace_surface`] that failed.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFailure {
    pub beta1: f64,
    pub beta3: f64,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SurfaceTrace {
    /// Sorted by `(b3, b1)`.
    pub points: Vec<SurfacePoint>,
    pub failures: Vec<TraceFailure>,
}

impl SurfaceTrace {
    /// Points of one `b3` slice, in increasing `b1`.
    pub fn slice(&self, beta3: f64) -> impl Iterator<Item = &SurfacePoint> {
        self.points.iter().filter(move |p| p.beta3 == beta3)
    }
}

/// Solves [`transition_beta2`] on the product grid. Grid points at or past
/// the corner produce nothing. With `constrain_nonneg`, points with
/// `r(b1) < 0` are dropped.
pub fn trace_surface(
    beta3_values: &[f64],
    beta1_grid: &[f64],
    spec: &ModelSpec,
    constrain_nonneg: bool,
    tol: &ToleranceConfig,
) -> SurfaceTrace {
    let jobs: Vec<(f64, f64)> = beta3_values
        .iter()
        .flat_map(|&b3| beta1_grid.iter().map(move |&b1| (b3, b1)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(b3, b1)| (b3, b1, transition_beta2(b1, b3, spec, tol)))
        .collect();
    let mut trace = SurfaceTrace::default();
    for (beta3, beta1, r) in results {
        match r {
            Ok(Some(pt)) if !constrain_nonneg || pt.beta2 >= 0.0 => trace.points.push(pt),
            Ok(_) => {}
            Err(error) => trace.failures.push(TraceFailure { beta1, beta3, error }),
        }
    }
    trace
        .points
        .sort_by(|a, b| a.beta3.total_cmp(&b.beta3).then(a.beta1.total_cmp(&b.beta1)));
    trace
}

/// The curve `C1`: the surface restricted to `b3 = 0`.
pub fn c1_curve(beta1_grid: &[f64], spec: &ModelSpec, tol: &ToleranceConfig) -> SurfaceTrace {
    trace_surface(&[0.0], beta1_grid, spec, false, tol)
}

/// The curve `C2`: the surface restricted to `b2 = 0`. Solved as the
/// `b3 = 0` slice of the swapped model and mapped back, so `beta3` holds
/// the transition value and `beta2` is zero.
pub fn c2_curve(beta1_grid: &[f64], spec: &ModelSpec, tol: &ToleranceConfig) -> SurfaceTrace {
    let mut t = trace_surface(&[0.0], beta1_grid, &spec.swapped(), false, tol);
    for pt in &mut t.points {
        pt.beta3 = pt.beta2;
        pt.beta2 = 0.0;
        pt.jumps = [pt.jumps[0], pt.jumps[2], pt.jumps[1]];
    }
    t
}

/// `|r(b1) + b1 + b3|`, the distance of the transition curve from the
/// plane `b1 + b2 + b3 = 0` that it approaches as `b1 -> -inf`.
pub fn universality_gap(beta1: f64, beta3: f64, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<f64> {
    match transition_beta2(beta1, beta3, spec, tol)? {
        Some(pt) => Ok((pt.beta2 + beta1 + beta3).abs()),
        None => Err(Error::Domain(format!(
            "b1 = {beta1} is at or beyond the corner; no transition curve there"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum PhaseClassification {
    /// A unique global maximizer; the free energy is analytic here.
    OffSurface { maximizer: LocalMax },
    /// Two coexisting global maximizers (first-order transition).
    OnSurface { u_low: f64, u_high: f64, r: f64 },
    /// On the critical curve (second-order transition).
    Critical { u0: f64 },
}

/// Locates `beta` relative to the transition surface and critical curve.
pub fn classify(beta: &BetaPoint, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<PhaseClassification> {
    Ok(classify_with_maximizers(beta, spec, tol)?.0)
}

pub(crate) fn classify_with_maximizers(
    beta: &BetaPoint,
    spec: &ModelSpec,
    tol: &ToleranceConfig,
) -> Result<(PhaseClassification, Option<MaximizerSet>)> {
    beta.check_finite()?;
    check_slice(beta.beta3, spec)?;
    let corner = corner_point(beta.beta3, spec, tol)?;
    let dist = (beta.beta1 - corner.beta1_c).hypot(beta.beta2 - corner.beta2_c);
    if dist <= tol.critical_tol {
        return Ok((PhaseClassification::Critical { u0: corner.u0 }, None));
    }
    if beta.beta1 < corner.beta1_c {
        if let Some(pt) = transition_beta2(beta.beta1, beta.beta3, spec, tol)? {
            if (beta.beta2 - pt.beta2).abs() <= tol.surface_tol {
                return Ok((
                    PhaseClassification::OnSurface {
                        u_low: pt.u_low,
                        u_high: pt.u_high,
                        r: pt.beta2,
                    },
                    None,
                ));
            }
        }
    }
    let ms = find_maximizers(beta, spec, tol)?;
    let maximizer = *ms.best();
    Ok((PhaseClassification::OffSurface { maximizer }, Some(ms)))
}
