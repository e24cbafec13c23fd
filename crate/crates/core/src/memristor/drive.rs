use super::{DriveSignal, InputModel};
use crate::scalar::{lit, Real};

/// Control observable imposed by the engineered drive at time `t`.
pub fn drive_control<T: Real>(model: &InputModel<T>, drive: &DriveSignal<T>, t: T) -> T {
    let c = (drive.omega * t).cos();
    match *model {
        InputModel::Coherent { x_max } => x_max * c,
        InputModel::SqueezedVacuum => (T::one() - drive.alpha_depth * c * c) * lit(0.25),
        InputModel::FockSuperposition => c,
    }
}

/// `dφ/dt` given the control value the feedback believes in.
///
/// The squeezed law `(ω0/x0) √(x0² − <x²>)` only fixes the magnitude; its
/// sign follows `cos ωt`, which makes `φ` track the closed form globally.
pub fn feedback_rate<T: Real>(
    model: &InputModel<T>,
    drive: &DriveSignal<T>,
    t: T,
    measured_control: T,
) -> T {
    match *model {
        InputModel::Coherent { x_max } => drive.omega0 / x_max * measured_control,
        InputModel::SqueezedVacuum => {
            let x0_sq = InputModel::<T>::vacuum_second_moment();
            let x0 = x0_sq.sqrt();
            let magnitude = drive.omega0 / x0 * (x0_sq - measured_control).max(T::zero()).sqrt();
            let c = (drive.omega * t).cos();
            if c < T::zero() {
                -magnitude
            } else {
                magnitude
            }
        }
        InputModel::FockSuperposition => drive.omega0 * measured_control,
    }
}

/// `φ(t) = φ(0) + κ (ω0/ω) sin ωt`, with `κ = √α` for squeezed input and 1 otherwise.
pub fn phi_closed_form<T: Real>(model: &InputModel<T>, drive: &DriveSignal<T>, t: T) -> T {
    drive.phi0 + model.feedback_gain(drive) * drive.omega0 / drive.omega * (drive.omega * t).sin()
}
