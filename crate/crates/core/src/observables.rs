//! Limiting observables from the derivatives of the free energy.
//!
//! With `u*` the global maximizer of `l`, the first derivatives of the free
//! energy are `(u*, u*^p, u*^q)` and the second derivatives are the rank-one
//! matrix `-g g^T / l''(u*)` with `g = (1, p u*^(p-1), q u*^(q-1))`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BetaPoint, ModelSpec, ToleranceConfig};
use crate::phase::{classify_with_maximizers, jumps, CriticalPoint, PhaseClassification, SurfacePoint};

pub type Matrix3 = [[f64; 3]; 3];

fn powers(u: f64, spec: &ModelSpec) -> [f64; 3] {
    [u, u.powi(spec.p() as i32), u.powi(spec.q() as i32)]
}

/// Gradient of the free energy. On the transition surface both one-sided
/// limits are returned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstDerivatives {
    Single([f64; 3]),
    Coexisting { low: [f64; 3], high: [f64; 3] },
}

pub fn first_derivatives(beta: &BetaPoint, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<FirstDerivatives> {
    beta.require_attractive()?;
    let (class, _) = classify_with_maximizers(beta, spec, tol)?;
    Ok(match class {
        PhaseClassification::OffSurface { maximizer } => FirstDerivatives::Single(powers(maximizer.u, spec)),
        PhaseClassification::Critical { u0 } => FirstDerivatives::Single(powers(u0, spec)),
        PhaseClassification::OnSurface { u_low, u_high, .. } => FirstDerivatives::Coexisting {
            low: powers(u_low, spec),
            high: powers(u_high, spec),
        },
    })
}

fn hessian(u: f64, l2: f64, spec: &ModelSpec) -> Matrix3 {
    let (p, q) = (spec.p() as i32, spec.q() as i32);
    let g = [1.0, p as f64 * u.powi(p - 1), q as f64 * u.powi(q - 1)];
    let mut h = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            h[i][j] = -g[i] * g[j] / l2;
        }
    }
    h
}

/// Second derivatives of the free energy, defined off the transition
/// surface and the critical curve.
pub fn second_derivatives(beta: &BetaPoint, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<Matrix3> {
    beta.require_attractive()?;
    match classify_with_maximizers(beta, spec, tol)?.0 {
        PhaseClassification::OffSurface { maximizer } => {
            if !(maximizer.second_derivative < 0.0) {
                return Err(Error::Surface(format!(
                    "l'' = {} at the maximizer of {beta}",
                    maximizer.second_derivative
                )));
            }
            Ok(hessian(maximizer.u, maximizer.second_derivative, spec))
        }
        other => Err(Error::Surface(format!("{beta} classified as {other:?}"))),
    }
}

/// `(u_high - u_low, u_high^p - u_low^p, u_high^q - u_low^q)`.
pub fn jump_sizes(point: &SurfacePoint, spec: &ModelSpec) -> [f64; 3] {
    jumps(point.u_low, point.u_high, spec)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableReport {
    pub first: FirstDerivatives,
    /// `None` on the surface or critical curve, where it diverges.
    pub second: Option<Matrix3>,
    pub maximizer: f64,
    pub on_surface: bool,
}

pub fn observables(beta: &BetaPoint, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<ObservableReport> {
    beta.require_attractive()?;
    let (class, _) = classify_with_maximizers(beta, spec, tol)?;
    let report = match class {
        PhaseClassification::OffSurface { maximizer } => ObservableReport {
            first: FirstDerivatives::Single(powers(maximizer.u, spec)),
            second: (maximizer.second_derivative < 0.0)
                .then(|| hessian(maximizer.u, maximizer.second_derivative, spec)),
            maximizer: maximizer.u,
            on_surface: false,
        },
        PhaseClassification::Critical { u0 } => ObservableReport {
            first: FirstDerivatives::Single(powers(u0, spec)),
            second: None,
            maximizer: u0,
            on_surface: false,
        },
        PhaseClassification::OnSurface { u_low, u_high, .. } => ObservableReport {
            first: FirstDerivatives::Coexisting {
                low: powers(u_low, spec),
                high: powers(u_high, spec),
            },
            second: None,
            maximizer: u_low,
            on_surface: true,
        },
    };
    Ok(report)
}

/// Unit direction in the `(b1, b2)` plane leaving a corner away from the
/// V-region along which `l'(u0)` stays zero, so that only `l''(u*)` moves.
pub fn critical_approach_direction(corner: &CriticalPoint, spec: &ModelSpec) -> (f64, f64) {
    let p = spec.p() as i32;
    let d1 = p as f64 * corner.u0.powi(p - 1);
    let norm = d1.hypot(1.0);
    (d1 / norm, -1.0 / norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceSample {
    pub distance: f64,
    pub beta: BetaPoint,
    /// `d^2 psi / d b1^2`.
    pub d2_beta1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceProbe {
    pub samples: Vec<DivergenceSample>,
    /// Least-squares slope of `log d2_beta1` against `log distance`.
    pub loglog_slope: Option<f64>,
}

/// Samples `d^2 psi / d b1^2` at `corner + d * direction` for the geometric
/// sequence `d = start * ratio^k`, `k < steps`.
pub fn divergence_probe(
    corner: &CriticalPoint,
    direction: (f64, f64),
    start: f64,
    ratio: f64,
    steps: usize,
    spec: &ModelSpec,
    tol: &ToleranceConfig,
) -> Result<DivergenceProbe> {
    if !(0.0 < ratio && ratio < 1.0) || !(start > 0.0) {
        return Err(Error::Domain(format!("need start > 0 and 0 < ratio < 1, got {start}, {ratio}")));
    }
    let mut samples = Vec::with_capacity(steps);
    let mut d = start;
    for _ in 0..steps {
        let beta = BetaPoint::new(
            corner.beta1_c + d * direction.0,
            corner.beta2_c + d * direction.1,
            corner.beta3,
        )?;
        let h = second_derivatives(&beta, spec, tol)?;
        samples.push(DivergenceSample {
            distance: d,
            beta,
            d2_beta1: h[0][0],
        });
        d *= ratio;
    }
    Ok(DivergenceProbe {
        loglog_slope: loglog_slope(&samples),
        samples,
    })
}

fn loglog_slope(samples: &[DivergenceSample]) -> Option<f64> {
    if samples.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| (s.distance.ln(), s.d2_beta1.abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{corner_point, transition_beta2};

    fn spec35() -> ModelSpec {
        ModelSpec::new(3, 5).unwrap()
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn first_derivatives_at_origin_and_logistic() {
        let s = spec35();
        let f = first_derivatives(&BetaPoint::new(0.0, 0.0, 0.0).unwrap(), &s, &tol()).unwrap();
        match f {
            FirstDerivatives::Single(g) => {
                assert!((g[0] - 0.5).abs() < 1e-13);
                assert!((g[1] - 0.125).abs() < 1e-13);
                assert!((g[2] - 0.03125).abs() < 1e-13);
            }
            other => panic!("{other:?}"),
        }
        let rho = 2f64.exp() / (1.0 + 2f64.exp());
        match first_derivatives(&BetaPoint::new(1.0, 0.0, 0.0).unwrap(), &s, &tol()).unwrap() {
            FirstDerivatives::Single(g) => {
                assert!((g[0] - rho).abs() < 1e-12);
                assert!((g[1] - rho.powi(3)).abs() < 1e-12);
                assert!((g[2] - rho.powi(5)).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            first_derivatives(&BetaPoint::new(0.0, -1.0, 0.0).unwrap(), &s, &tol()),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn coexisting_branches() {
        // a surface point with non-negative couplings, on C1
        let s = spec35();
        let pt = transition_beta2(-1.0, 0.0, &s, &tol()).unwrap().unwrap();
        match first_derivatives(&pt.beta(), &s, &tol()).unwrap() {
            FirstDerivatives::Coexisting { low, high } => {
                assert!((low[0] - pt.u_low).abs() < 1e-15);
                assert!((high[0] - pt.u_high).abs() < 1e-15);
                assert!(high.iter().zip(&low).all(|(h, l)| h > l));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(second_derivatives(&pt.beta(), &s, &tol()), Err(Error::Surface(_))));
        let rep = observables(&pt.beta(), &s, &tol()).unwrap();
        assert!(rep.on_surface && rep.second.is_none());
    }

    #[test]
    fn hessian_at_origin() {
        let s = spec35();
        let h = second_derivatives(&BetaPoint::new(0.0, 0.0, 0.0).unwrap(), &s, &tol()).unwrap();
        assert!((h[0][0] - 0.5).abs() < 1e-12);
        // rank one
        assert!((h[0][1] * h[0][1] - h[0][0] * h[1][1]).abs() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h[i][j], h[j][i]);
            }
            assert!(h[i][i] > 0.0);
        }
    }

    #[test]
    fn jumps_match_surface_point() {
        let s = spec35();
        let pt = transition_beta2(2.0, 2.0, &s, &tol()).unwrap().unwrap();
        let j = jump_sizes(&pt, &s);
        assert_eq!(j, pt.jumps);
        assert!(j.iter().all(|&x| x > 0.0));
        let c = corner_point(2.0, &s, &tol()).unwrap();
        let near = transition_beta2(c.beta1_c - 1e-4, 2.0, &s, &tol()).unwrap().unwrap();
        assert!(jump_sizes(&near, &s).iter().all(|&x| x > 0.0 && x < 0.1));
    }

    #[test]
    fn probe_diverges() {
        let s = spec35();
        let c = corner_point(0.158, &s, &tol()).unwrap();
        let dir = critical_approach_direction(&c, &s);
        let probe = divergence_probe(&c, dir, 1e-2, 0.1, 3, &s, &tol()).unwrap();
        let last = probe.samples.last().unwrap();
        assert!((last.distance - 1e-4).abs() < 1e-12);
        assert!(last.d2_beta1 > 1e3, "{}", last.d2_beta1);
        assert!(probe.loglog_slope.unwrap() < -0.5);
        assert!(divergence_probe(&c, dir, 1e-2, 2.0, 3, &s, &tol()).is_err());
    }
}
