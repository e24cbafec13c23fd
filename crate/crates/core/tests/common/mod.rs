//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use fqm::memristor::{DriveSignal, InputModel};

/// Bessel-product couplings from a plain f64 power series, independent of
/// the library summation.
pub fn couplings_oracle(theta: f64) -> (f64, f64) {
    let j = |n: i32| -> f64 {
        let half = theta / 2.0;
        let mut term = half.powi(n) / (1..=n).map(f64::from).product::<f64>();
        let mut sum = term;
        for k in 1..80 {
            term *= -half * half / (k as f64 * (k + n) as f64);
            sum += term;
        }
        sum
    };
    let c1 = j(0) * j(0);
    let c2 = (1..40).map(|k| j(k) * j(k - 1)).sum();
    (c1, c2)
}

/// `|B00|²` from the couplings, written out directly.
pub fn transmission(c1: f64, phi: f64) -> f64 {
    let s2 = (phi / 2.0).sin().powi(2);
    1.0 - s2 + c1 * c1 * s2
}

/// Response on the branch where `sin ωt` has sign `sign`, as a function of control.
pub fn branch_response(
    model: &InputModel<f64>,
    drive: &DriveSignal<f64>,
    (c1, c2): (f64, f64),
    control: f64,
    sign: f64,
) -> f64 {
    let a = drive.omega0 / drive.omega;
    match *model {
        InputModel::Coherent { x_max } => {
            let sin_wt = sign * (1.0 - (control / x_max).powi(2)).max(0.0).sqrt();
            control * control * transmission(c1, drive.phi0 + a * sin_wt)
        }
        InputModel::SqueezedVacuum => {
            let cos2 = ((1.0 - 4.0 * control) / drive.alpha_depth).clamp(0.0, 1.0);
            let sin_wt = sign * (1.0 - cos2).sqrt();
            let phi = drive.phi0 + a * drive.alpha_depth.sqrt() * sin_wt;
            let sinh2 = (1.0 - 4.0 * control).powi(2) / (16.0 * control);
            sinh2 * transmission(c1, phi)
        }
        InputModel::FockSuperposition => {
            let beta = sign * (1.0 - control * control).max(0.0).sqrt();
            let phi = drive.phi0 + a * beta;
            let s2 = (phi / 2.0).sin().powi(2);
            control * control * (1.0 - s2) + (c1 * control + 2.0 * c2 * beta).powi(2) * s2
        }
    }
}

/// Area between the two branches of the loop by composite Simpson over the control.
pub fn loop_area_oracle(model: &InputModel<f64>, drive: &DriveSignal<f64>, theta: f64) -> f64 {
    let (lo, hi) = match *model {
        InputModel::Coherent { x_max } => (-x_max, x_max),
        InputModel::SqueezedVacuum => ((1.0 - drive.alpha_depth) / 4.0, 0.25),
        InputModel::FockSuperposition => (-1.0, 1.0),
    };
    // Substitute control = mid + half·sin(u) to tame the square-root ends.
    let couplings = couplings_oracle(theta);
    let mid = (lo + hi) / 2.0;
    let half = (hi - lo) / 2.0;
    let n = 200_000;
    let h = 2.0 * FRAC_PI_2 / n as f64;
    let f = |u: f64| {
        let c = mid + half * u.sin();
        let gap = branch_response(model, drive, couplings, c, 1.0)
            - branch_response(model, drive, couplings, c, -1.0);
        gap.abs() * half * u.cos()
    };
    let mut sum = f(-FRAC_PI_2) + f(FRAC_PI_2);
    for k in 1..n {
        let u = -FRAC_PI_2 + k as f64 * h;
        sum += if k % 2 == 1 { 4.0 } else { 2.0 } * f(u);
    }
    sum * h / 3.0
}

pub fn coherent_drive(omega: f64) -> DriveSignal<f64> {
    DriveSignal::new(omega, 1.0, FRAC_PI_2, 0.5).unwrap()
}

pub fn squeezed_drive(omega: f64) -> DriveSignal<f64> {
    DriveSignal::new(omega, 5.0, FRAC_PI_2, 0.5).unwrap()
}

pub fn fock_drive(omega: f64) -> DriveSignal<f64> {
    DriveSignal::new(omega, 1.0, FRAC_PI_2, 0.5).unwrap()
}
