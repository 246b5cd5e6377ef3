//! Bracketing helpers shared by every scalar solve in the crate.
//!
//! All curve computations reduce to locating the sign change of a
//! function that is known to be monotone on the bracket, so plain
//! bisection on a boolean predicate is all that is needed.

use crate::error::{Error, Result};

/// Bisect a bracket `[lo, hi]` on which `inside(lo)` is true and
/// `inside(hi)` is false. `lo` may be larger than `hi`.
///
/// Stops when the bracket is narrower than `tol`, when the midpoint is no
/// longer representable strictly between the ends, or after `cap`
/// halvings. Returns the final `(lo, hi)` pair.
pub(crate) fn bisect<F>(mut lo: f64, mut hi: f64, tol: f64, cap: usize, mut inside: F) -> (f64, f64)
where
    F: FnMut(f64) -> bool,
{
    for _ in 0..cap {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Midpoint of the bisected bracket.
pub(crate) fn bisect_root<F>(lo: f64, hi: f64, tol: f64, cap: usize, inside: F) -> f64
where
    F: FnMut(f64) -> bool,
{
    let (a, b) = bisect(lo, hi, tol, cap, inside);
    0.5 * (a + b)
}

/// Walk away from `start` in direction `dir` (+1 or -1) with doubling
/// steps until `reached` holds. Used to bracket roots of functions that
/// diverge at the ends of the logit axis.
pub(crate) fn expand<F>(start: f64, dir: f64, mut reached: F) -> Result<f64>
where
    F: FnMut(f64) -> bool,
{
    let mut step = 1.0;
    for _ in 0..1100 {
        let x = start + dir * step;
        if !x.is_finite() {
            break;
        }
        if reached(x) {
            return Ok(x);
        }
        step *= 2.0;
    }
    Err(Error::NumericalFailure(format!(
        "could not bracket a sign change starting from {start} in direction {dir}"
    )))
}
