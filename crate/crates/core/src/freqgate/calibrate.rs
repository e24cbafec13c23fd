//! Choice of the modulation depth that realizes the 50/50 beam splitter.
//!
//! At φ = π the gate is real symmetric and its Hadamard fidelity peaks where
//! `c1 = 2 c2`. The operating point is not that peak: it is the depth with
//! the largest retained probability `f(Θ)` among those whose fidelity still
//! meets [`HADAMARD_FIDELITY_TARGET`]. Because `f` falls monotonically
//! across the feasible window, this lands on the low-Θ edge of the window.

use super::{closed_form_gate, hadamard_fidelity, unitarity_factor, GateSettings};
use crate::error::{Error, Result};
use crate::scalar::{as_f64, lit, Real};

pub const HADAMARD_FIDELITY_TARGET: f64 = 0.9999;

const ITERATION_CAP: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationOptions<T> {
    pub lower: T,
    pub upper: T,
    /// Final bracket width.
    pub tol: T,
    pub fidelity_target: T,
}

impl<T: Real> Default for CalibrationOptions<T> {
    fn default() -> Self {
        Self {
            lower: lit(0.4),
            upper: lit(1.2),
            tol: lit(1e-6),
            fidelity_target: lit(HADAMARD_FIDELITY_TARGET),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration<T> {
    pub theta: T,
    pub fidelity: T,
    pub success_probability: T,
    /// Depth of maximal fidelity, where `c1 = 2 c2`.
    pub theta_peak_fidelity: T,
}

fn fidelity_at<T: Real>(theta: T) -> Result<T> {
    let m = closed_form_gate(GateSettings::new(theta, T::PI())?)?;
    hadamard_fidelity(&m)
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
fn golden_max<T, F>(mut a: T, mut b: T, tol: T, mut f: F) -> Result<(T, T)>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let ratio = (lit::<T>(5.0).sqrt() - T::one()) / lit(2.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..ITERATION_CAP {
        if b - a <= tol {
            let x = (a + b) / lit(2.0);
            return Ok((x, f(x)?));
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1)?;
        }
    }
    Err(Error::NonConvergence(format!(
        "golden-section bracket still {} wide after {ITERATION_CAP} iterations",
        as_f64(b - a)
    )))
}

/// Bisection for the crossing of `g` through zero on `[a, b]`, returning the
/// endpoint of the final bracket on which `g ≥ 0`.
fn bisect_feasible<T, G>(mut a: T, mut b: T, tol: T, mut g: G) -> Result<T>
where
    T: Real,
    G: FnMut(T) -> Result<T>,
{
    let ga = g(a)? >= T::zero();
    let gb = g(b)? >= T::zero();
    if ga == gb {
        return Ok(if ga { a } else { b });
    }
    for _ in 0..ITERATION_CAP {
        if b - a <= tol {
            return Ok(if ga { a } else { b });
        }
        let mid = (a + b) / lit(2.0);
        if (g(mid)? >= T::zero()) == ga {
            a = mid;
        } else {
            b = mid;
        }
    }
    Err(Error::NonConvergence("fidelity threshold bisection".into()))
}

/// Calibrates Θ at φ = π.
///
/// Fails with [`Error::NonConvergence`] when the fidelity peak sits on an
/// end of the search interval, which means the objective is not unimodal
/// there.
pub fn calibrate_theta<T: Real>(opts: CalibrationOptions<T>) -> Result<Calibration<T>> {
    if !(opts.tol >= lit(1e-8)) {
        return Err(Error::invalid(
            "calibration tolerance must be at least 1e-8",
        ));
    }
    if !(opts.lower < opts.upper) {
        return Err(Error::invalid("calibration interval is empty"));
    }
    let (lo, hi, tol) = (opts.lower, opts.upper, opts.tol);

    let (peak, peak_fidelity) = golden_max(lo, hi, tol, fidelity_at)?;
    if peak - lo <= tol || hi - peak <= tol {
        return Err(Error::NonConvergence(format!(
            "fidelity maximum at interval end {}",
            as_f64(peak)
        )));
    }
    if peak_fidelity < opts.fidelity_target {
        return Err(Error::NonConvergence(format!(
            "fidelity target {} unreachable (best {})",
            as_f64(opts.fidelity_target),
            as_f64(peak_fidelity)
        )));
    }

    let margin = |theta: T| fidelity_at(theta).map(|f| f - opts.fidelity_target);
    let left = bisect_feasible(lo, peak, tol, margin)?;
    let right = bisect_feasible(peak, hi, tol, margin)?;

    let (mut theta, _) = golden_max(left, right, tol, unitarity_factor)?;
    // The search may stop a hair outside the feasible window; clamp onto it.
    theta = theta.max(left).min(right);

    Ok(Calibration {
        theta,
        fidelity: fidelity_at(theta)?,
        success_probability: unitarity_factor(theta)?,
        theta_peak_fidelity: peak,
    })
}
