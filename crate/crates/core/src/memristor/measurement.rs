//! Finite-shot photon counting on the environment port and inversion of
//! the measured mean back to a control value.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::{drive_control, DriveSignal, InputModel};
use crate::error::{Error, Result};
use crate::scalar::{as_f64, lit, Real};

/// Reflectivities below this make the environment count uninformative.
const MIN_REFLECTION: f64 = 1e-12;

const FOCK_GRID: usize = 256;

/// Mean of `shots` independent Poisson counts with mean `expected_n1`.
///
/// The sum of `shots` Poisson(λ) draws is Poisson(shots·λ), so a single draw
/// is taken and divided by `shots`.
pub fn estimate_n1<T: Real, R: Rng + ?Sized>(expected_n1: T, shots: u64, rng: &mut R) -> Result<T> {
    if !(expected_n1 >= T::zero() && expected_n1.is_finite()) {
        return Err(Error::invalid(format!(
            "expected photon number must be finite and non-negative, got {expected_n1}"
        )));
    }
    if shots == 0 {
        return Err(Error::invalid("at least one shot is required"));
    }
    let lambda = as_f64(expected_n1) * shots as f64;
    if lambda == 0.0 {
        return Ok(T::zero());
    }
    let poisson = Poisson::new(lambda).map_err(|e| Error::invalid(format!("poisson: {e}")))?;
    let total: f64 = poisson.sample(rng);
    Ok(T::from_f64(total / shots as f64).unwrap_or_else(T::nan))
}

/// Control value consistent with a measured environment mean `n1`.
///
/// The count fixes only the magnitude of the control; signs, and for the
/// Fock state the branch, come from the known drive phase. Values are kept
/// inside the range the drive can produce.
pub fn infer_control<T: Real>(
    model: &InputModel<T>,
    gate: &super::Couplings<T>,
    drive: &DriveSignal<T>,
    phi: T,
    t: T,
    n1: T,
) -> T {
    let phase = drive.omega * t;
    let reflection = gate.reflection(phi);
    let informative = reflection > lit(MIN_REFLECTION);
    match *model {
        InputModel::Coherent { x_max } => {
            let magnitude = if informative {
                (n1.max(T::zero()) / reflection).sqrt().min(x_max)
            } else {
                x_max
            };
            if phase.cos() < T::zero() {
                -magnitude
            } else {
                magnitude
            }
        }
        InputModel::SqueezedVacuum => {
            let quarter = lit::<T>(0.25);
            let floor = (T::one() - drive.alpha_depth) * quarter;
            if !informative {
                return floor;
            }
            let photons = n1.max(T::zero()) / reflection;
            let r = photons.sqrt().asinh();
            ((-(r + r)).exp() * quarter).max(floor).min(quarter)
        }
        InputModel::FockSuperposition => infer_fock_alpha(model, gate, drive, phi, t, n1),
    }
}

fn infer_fock_alpha<T: Real>(
    model: &InputModel<T>,
    gate: &super::Couplings<T>,
    drive: &DriveSignal<T>,
    phi: T,
    t: T,
    n1: T,
) -> T {
    let phase = drive.omega * t;
    let alpha_sign = if phase.cos() < T::zero() {
        -T::one()
    } else {
        T::one()
    };
    let beta_sign = if phase.sin() < T::zero() {
        -T::one()
    } else {
        T::one()
    };
    let predicted = drive_control(model, drive, t).abs();
    let residual = |m: T| {
        let beta = beta_sign * (T::one() - m * m).max(T::zero()).sqrt();
        gate.fock(phi, alpha_sign * m, beta).1 - n1
    };

    let grid: Vec<T> = (0..=FOCK_GRID)
        .map(|i| T::from_usize(i).unwrap() / T::from_usize(FOCK_GRID).unwrap())
        .collect();
    let values: Vec<T> = grid.iter().map(|&m| residual(m)).collect();

    let mut best: Option<T> = None;
    let mut consider = |m: T| {
        if best.is_none_or(|b| (m - predicted).abs() < (b - predicted).abs()) {
            best = Some(m);
        }
    };
    for i in 0..FOCK_GRID {
        let (mut lo, mut hi) = (grid[i], grid[i + 1]);
        let (mut vlo, vhi) = (values[i], values[i + 1]);
        if vlo == T::zero() {
            consider(lo);
            continue;
        }
        if (vlo < T::zero()) == (vhi < T::zero()) {
            continue;
        }
        for _ in 0..60 {
            let mid = (lo + hi) / lit(2.0);
            let vm = residual(mid);
            if (vm < T::zero()) == (vlo < T::zero()) {
                lo = mid;
                vlo = vm;
            } else {
                hi = mid;
            }
        }
        consider((lo + hi) / lit(2.0));
    }
    if values[FOCK_GRID] == T::zero() {
        consider(T::one());
    }

    let magnitude = best.unwrap_or_else(|| {
        // No exact solution: the count fell outside the attainable range.
        let mut arg = 0;
        for i in 1..=FOCK_GRID {
            if values[i].abs() < values[arg].abs() {
                arg = i;
            }
        }
        grid[arg]
    });
    alpha_sign * magnitude
}
