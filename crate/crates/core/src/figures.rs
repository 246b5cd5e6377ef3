//! Datasets behind the eight phase-diagram figures for `(p, q) = (3, 5)`
//! or any other admissible pair.
//!
//! | id | content |
//! |----|---------|
//! | 1 | critical curve `C3` |
//! | 2 | V-region bounds and `r(b1)` at `b3 = 2` |
//! | 3 | `r(b1)` for `b3 = 0, 1, 2` |
//! | 4 | `l(u)` below the V-region, `b = (2, -4, 2)` |
//! | 5 | `l(u)` on the lower bounding curve at `b1 = b3 = 2` |
//! | 6 | `l(u)` on the upper bounding curve at `b1 = b3 = 2` |
//! | 7 | `l(u)` above the V-region, `b = (2, -2.5, 2)` |
//! | 8 | `l(u)` on the transition curve at `b1 = b3 = 2` |
//!
//! Figures 5, 6 and 8 are drawn at the computed curve value by default.
//! The rounded values printed in the figure captions (-3.24, -2.7, -2.95)
//! are available through [`CouplingChoice::Caption`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{eval_l, find_maximizers, BetaPoint, ModelSpec, ToleranceConfig};
use crate::output::{Cell, Table};
use crate::phase::{corner_point, critical_curve, transition_beta2, trace_surface, v_region};

pub const FIGURE_BETA1: f64 = 2.0;
pub const FIGURE_BETA3: f64 = 2.0;
pub const SLICE_BETA3: [f64; 3] = [0.0, 1.0, 2.0];
/// Left end of the `b1` grids of figures 2 and 3.
pub const FIGURE_BETA1_MIN: f64 = -5.0;

/// Caption values of `b2` for figures 4 to 8.
pub fn caption_beta2(id: u32) -> Option<f64> {
    match id {
        4 => Some(-4.0),
        5 => Some(-3.24),
        6 => Some(-2.7),
        7 => Some(-2.5),
        8 => Some(-2.95),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingChoice {
    /// The curve value computed for the model at hand.
    Computed,
    /// The rounded value printed in the caption.
    Caption,
}

/// Point kinds in the `kind` column of figures 4 to 8.
pub mod kind {
    pub const GRID: i64 = 0;
    pub const LOCAL_MAX: i64 = 1;
    pub const GLOBAL_MAX: i64 = 2;
    /// `l' = l'' = 0`: a maximizer merging with a minimizer on a bounding curve.
    pub const DEGENERATE: i64 = 3;
}

/// `b2` used for figure `id` (4 to 8).
pub fn figure_beta2(id: u32, choice: CouplingChoice, spec: &ModelSpec, tol: &ToleranceConfig) -> Result<f64> {
    let caption = caption_beta2(id).ok_or(Error::UnknownFigure(id))?;
    if choice == CouplingChoice::Caption || matches!(id, 4 | 7) {
        return Ok(caption);
    }
    let missing = || Error::Domain(format!("b1 = {FIGURE_BETA1} is past the corner for {spec}"));
    match id {
        5 | 6 => {
            let region = v_region(FIGURE_BETA1, FIGURE_BETA3, spec, tol)?.ok_or_else(missing)?;
            Ok(if id == 5 { region.lower } else { region.upper })
        }
        _ => Ok(transition_beta2(FIGURE_BETA1, FIGURE_BETA3, spec, tol)?
            .ok_or_else(missing)?
            .beta2),
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |k| if k + 1 == n && n > 1 { b } else { a + step * k as f64 })
}

/// Figure 1: `(u0, b1c, b2c, b3)` along the critical curve.
fn critical_table(spec: &ModelSpec, resolution: usize) -> Result<Table> {
    let mut t = Table::new(&["u0", "beta1_c", "beta2_c", "beta3"]);
    for c in critical_curve(spec, resolution)? {
        t.push(vec![c.u0.into(), c.beta1_c.into(), c.beta2_c.into(), c.beta3.into()]);
    }
    Ok(t)
}

/// Figure 2: bounds of the V-region and `r(b1)` on `[-5, b1c]`; the last
/// row is the corner.
fn vshape_table(spec: &ModelSpec, resolution: usize, tol: &ToleranceConfig) -> Result<Table> {
    let corner = corner_point(FIGURE_BETA3, spec, tol)?;
    let mut t = Table::new(&["beta1", "lower", "upper", "r"]);
    let n = resolution.max(2);
    for b1 in linspace(FIGURE_BETA1_MIN.min(corner.beta1_c - 1.0), corner.beta1_c, n).take(n - 1) {
        let (Some(region), Some(pt)) = (
            v_region(b1, FIGURE_BETA3, spec, tol)?,
            transition_beta2(b1, FIGURE_BETA3, spec, tol)?,
        ) else {
            continue;
        };
        t.push(vec![b1.into(), region.lower.into(), region.upper.into(), pt.beta2.into()]);
    }
    let c = corner.beta2_c;
    t.push(vec![corner.beta1_c.into(), c.into(), c.into(), c.into()]);
    Ok(t)
}

/// Figure 3: `r(b1)` for each `b3` slice, ending at that slice's corner.
fn curves_table(spec: &ModelSpec, resolution: usize, tol: &ToleranceConfig) -> Result<Table> {
    let mut t = Table::new(&["beta3", "beta1", "r", "u_low", "u_high", "admissible"]);
    let n = resolution.max(2);
    for b3 in SLICE_BETA3 {
        let corner = corner_point(b3, spec, tol)?;
        let grid: Vec<f64> = linspace(FIGURE_BETA1_MIN.min(corner.beta1_c - 1.0), corner.beta1_c, n)
            .take(n - 1)
            .collect();
        let trace = trace_surface(&[b3], &grid, spec, false, tol);
        if let Some(f) = trace.failures.first() {
            return Err(f.error.clone());
        }
        for p in &trace.points {
            t.push(vec![
                b3.into(),
                p.beta1.into(),
                p.beta2.into(),
                p.u_low.into(),
                p.u_high.into(),
                p.admissible().into(),
            ]);
        }
        t.push(vec![
            b3.into(),
            corner.beta1_c.into(),
            corner.beta2_c.into(),
            corner.u0.into(),
            corner.u0.into(),
            (corner.beta2_c >= 0.0).into(),
        ]);
    }
    Ok(t)
}

/// Figures 4 to 8: `(u, l(u), l'(u), kind)` on a uniform grid of the open
/// interval, merged with the critical points of `l`.
pub fn landscape_table(beta: &BetaPoint, spec: &ModelSpec, resolution: usize, tol: &ToleranceConfig) -> Result<Table> {
    let mut points: Vec<(f64, i64)> = (1..=resolution)
        .map(|k| (k as f64 / (resolution + 1) as f64, kind::GRID))
        .collect();
    let ms = find_maximizers(beta, spec, tol)?;
    for (i, m) in ms.locals.iter().enumerate() {
        let k = if ms.globals.contains(&i) { kind::GLOBAL_MAX } else { kind::LOCAL_MAX };
        points.push((m.u, k));
    }
    // degenerate critical points on the bounding curves
    if beta.beta1 < corner_point(beta.beta3, spec, tol)?.beta1_c {
        if let Some(region) = v_region(beta.beta1, beta.beta3, spec, tol)? {
            if beta.beta2 == region.lower {
                points.push((region.b, kind::DEGENERATE));
            }
            if beta.beta2 == region.upper {
                points.push((region.a, kind::DEGENERATE));
            }
        }
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut t = Table::new(&["u", "l", "dl", "kind"]);
    for (u, k) in points {
        t.push(vec![
            u.into(),
            eval_l(u, beta, spec, 0)?.into(),
            eval_l(u, beta, spec, 1)?.into(),
            Cell::Int(k),
        ]);
    }
    Ok(t)
}

/// A figure's dataset and the couplings it was drawn at (figures 4 to 8).
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub id: u32,
    pub beta: Option<BetaPoint>,
    pub table: Table,
}

/// Dataset of figure `id`. `resolution` is the number of grid points.
pub fn figure(
    id: u32,
    spec: &ModelSpec,
    resolution: usize,
    choice: CouplingChoice,
    tol: &ToleranceConfig,
) -> Result<FigureData> {
    if resolution < 2 {
        return Err(Error::Domain(format!("resolution must be at least 2, got {resolution}")));
    }
    let (beta, table) = match id {
        1 => (None, critical_table(spec, resolution)?),
        2 => (None, vshape_table(spec, resolution, tol)?),
        3 => (None, curves_table(spec, resolution, tol)?),
        4..=8 => {
            let beta = BetaPoint::new(FIGURE_BETA1, figure_beta2(id, choice, spec, tol)?, FIGURE_BETA3)?;
            (Some(beta), landscape_table(&beta, spec, resolution, tol)?)
        }
        _ => return Err(Error::UnknownFigure(id)),
    };
    Ok(FigureData { id, beta, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec35() -> ModelSpec {
        ModelSpec::new(3, 5).unwrap()
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn rows_of_kind(t: &Table, k: i64) -> Vec<(f64, f64)> {
        let (u, l, kd) = (t.values("u"), t.values("l"), t.values("kind"));
        (0..t.rows.len())
            .filter(|&i| kd[i] == Some(k as f64))
            .map(|i| (u[i].unwrap(), l[i].unwrap()))
            .collect()
    }

    #[test]
    fn unknown_ids() {
        for id in [0, 9] {
            assert_eq!(
                figure(id, &spec35(), 10, CouplingChoice::Computed, &tol()).unwrap_err(),
                Error::UnknownFigure(id)
            );
        }
    }

    #[test]
    fn transition_figure_has_two_tied_maxima() {
        let f = figure(8, &spec35(), 200, CouplingChoice::Computed, &tol()).unwrap();
        let g = rows_of_kind(&f.table, kind::GLOBAL_MAX);
        assert_eq!(g.len(), 2);
        assert!((g[0].1 - g[1].1).abs() < 1e-9);
        assert!((f.beta.unwrap().beta2 + 2.95).abs() < 0.01);
    }

    #[test]
    fn lower_curve_figure() {
        let f = figure(5, &spec35(), 200, CouplingChoice::Computed, &tol()).unwrap();
        let g = rows_of_kind(&f.table, kind::GLOBAL_MAX);
        let d = rows_of_kind(&f.table, kind::DEGENERATE);
        assert_eq!((g.len(), d.len()), (1, 1));
        assert!(d[0].0 > g[0].0 && d[0].1 < g[0].1);
        // caption value: a single maximizer below the V-region
        let c = figure(5, &spec35(), 50, CouplingChoice::Caption, &tol()).unwrap();
        assert_eq!(c.beta.unwrap().beta2, -3.24);
    }

    #[test]
    fn upper_curve_figure() {
        let f = figure(6, &spec35(), 200, CouplingChoice::Computed, &tol()).unwrap();
        let g = rows_of_kind(&f.table, kind::GLOBAL_MAX);
        let d = rows_of_kind(&f.table, kind::DEGENERATE);
        assert_eq!((g.len(), d.len()), (1, 1));
        assert!(d[0].0 < g[0].0 && d[0].1 < g[0].1);
    }

    #[test]
    fn grid_figures() {
        let s = spec35();
        let f1 = figure(1, &s, 20, CouplingChoice::Computed, &tol()).unwrap().table;
        assert_eq!(f1.rows.len(), 20);
        assert_eq!(f1.values("beta3")[0], Some(0.0));
        assert!(f1.values("beta2_c")[19].unwrap().abs() < 1e-12);
        let f2 = figure(2, &s, 30, CouplingChoice::Computed, &tol()).unwrap().table;
        for row in f2.rows.iter().take(f2.rows.len() - 1) {
            let (lo, hi, r) = (row[1].as_f64().unwrap(), row[2].as_f64().unwrap(), row[3].as_f64().unwrap());
            assert!(lo < r && r < hi);
        }
        let f3 = figure(3, &s, 15, CouplingChoice::Computed, &tol()).unwrap().table;
        assert_eq!(f3.rows.len(), 3 * 15);
    }
}
