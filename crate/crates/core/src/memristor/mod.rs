//! Measurement-and-feedback memristor built on the tunable beam splitter.
//!
//! Bin 0 carries the input state; its output is the memristor response.
//! Bin 1 output is the environment, whose mean photon number is measured
//! and fed back into the shaper phase `phi`, the memory variable.
//!
//! In the voltage-controlled memristor picture `I = G(μ) V`, `μ̇ = f(μ, V)`:
//! the control observable plays `V`, the bin-0 photon number plays `I`, and
//! `phi` plays `μ`.

mod drive;
mod measurement;
mod response;
mod simulate;

use serde::{Deserialize, Serialize};

pub use drive::{drive_control, feedback_rate, phi_closed_form};
pub use measurement::{estimate_n1, infer_control};
pub use response::{
    coherent_response, fock_response, squeezed_photon_number, squeezed_response, Couplings,
};
pub use simulate::{simulate, simulate_with_rng, SimulationConfig};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Vacuum second moment of the x quadrature, `x0² = 1/4`.
pub const VACUUM_SECOND_MOMENT: f64 = 0.25;

/// `τ_k ω` above which the continuous feedback approximation is flagged.
pub const MAX_UPDATE_PHASE: f64 = 0.05;

/// Periodic drive of the input state and feedback gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSignal<T> {
    /// Drive angular frequency ω.
    pub omega: T,
    /// Feedback gain frequency ω0.
    pub omega0: T,
    /// Initial shaper phase φ(0).
    pub phi0: T,
    /// Squeezed-drive depth α; only the squeezed model reads it.
    pub alpha_depth: T,
}

impl<T: Real> DriveSignal<T> {
    pub fn new(omega: T, omega0: T, phi0: T, alpha_depth: T) -> Result<Self> {
        let d = Self {
            omega,
            omega0,
            phi0,
            alpha_depth,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > T::zero() && self.omega.is_finite()) {
            return Err(Error::invalid(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if !(self.omega0 >= T::zero() && self.omega0.is_finite()) {
            return Err(Error::invalid(format!(
                "omega0 must be non-negative, got {}",
                self.omega0
            )));
        }
        if !self.phi0.is_finite() {
            return Err(Error::invalid("phi0 must be finite"));
        }
        if !(self.alpha_depth > T::zero() && self.alpha_depth < T::one()) {
            return Err(Error::invalid(format!(
                "alpha_depth must lie in (0, 1), got {}",
                self.alpha_depth
            )));
        }
        Ok(())
    }

    pub fn period(&self) -> T {
        T::TAU() / self.omega
    }
}

/// Input state family fed into bin 0, with vacuum in bin 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputModel<T> {
    /// Real coherent amplitude; control is `<x> = x_max cos ωt`.
    Coherent { x_max: T },
    /// x-squeezed vacuum; control is `<x²> = (1 − α cos²ωt)/4`.
    SqueezedVacuum,
    /// Single photon `cos ωt |1,0> + sin ωt |0,1>`; control is `cos ωt`.
    FockSuperposition,
}

impl<T: Real> InputModel<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            InputModel::Coherent { x_max } if !(x_max > T::zero() && x_max.is_finite()) => Err(
                Error::invalid(format!("coherent x_max must be positive, got {x_max}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InputModel::Coherent { .. } => "coherent",
            InputModel::SqueezedVacuum => "squeezed",
            InputModel::FockSuperposition => "fock",
        }
    }

    /// Ratio between the amplitude of `φ − φ(0)` and `ω0/ω`.
    pub fn feedback_gain(&self, drive: &DriveSignal<T>) -> T {
        match self {
            InputModel::SqueezedVacuum => drive.alpha_depth.sqrt(),
            _ => T::one(),
        }
    }

    /// Input energy scale `E_in` at a given control value and drive phase:
    /// `<x>²`, `sinh² r`, or 1.
    pub fn input_photons(&self, control: T) -> Result<T> {
        match self {
            InputModel::Coherent { .. } => Ok(control * control),
            InputModel::SqueezedVacuum => squeezed_photon_number(control),
            InputModel::FockSuperposition => Ok(T::one()),
        }
    }

    /// Mean photon numbers `(n0, n1)` for the given control and drive phase `ωt`.
    pub fn respond(
        &self,
        gate: &Couplings<T>,
        phi: T,
        control: T,
        drive_phase: T,
    ) -> Result<(T, T)> {
        match self {
            InputModel::Coherent { .. } => Ok(gate.coherent(phi, control)),
            InputModel::SqueezedVacuum => gate.squeezed(phi, control),
            InputModel::FockSuperposition => Ok(gate.fock(phi, control, drive_phase.sin())),
        }
    }

    pub(crate) fn vacuum_second_moment() -> T {
        lit(VACUUM_SECOND_MOMENT)
    }
}

/// How the feedback learns the control value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum MeasurementMode {
    /// Feedback sees the true control.
    Exact,
    /// Feedback sees a control inferred from a `shots`-repetition photon
    /// count average on the environment port.
    Sampled { shots: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementConfig<T> {
    pub mode: MeasurementMode,
    pub seed: u64,
    /// Feedback update interval, standing in for the experiment duration τ_k.
    /// `None` updates once per recorded sample.
    pub update_dt: Option<T>,
}

impl<T: Real> MeasurementConfig<T> {
    pub fn exact() -> Self {
        Self {
            mode: MeasurementMode::Exact,
            seed: 0,
            update_dt: None,
        }
    }

    pub fn sampled(shots: u64, seed: u64) -> Self {
        Self {
            mode: MeasurementMode::Sampled { shots },
            seed,
            update_dt: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let MeasurementMode::Sampled { shots } = self.mode {
            if shots == 0 {
                return Err(Error::invalid(
                    "sampled measurement needs at least one shot",
                ));
            }
        }
        if let Some(dt) = self.update_dt {
            if !(dt > T::zero() && dt.is_finite()) {
                return Err(Error::invalid("update_dt must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Euler,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint<T> {
    pub t: T,
    pub control: T,
    /// `<n0_out>`.
    pub response: T,
    pub phi: T,
    /// `<n1_out>`.
    pub n_env: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub points: Vec<TrajectoryPoint<T>>,
    pub model: InputModel<T>,
    pub drive: DriveSignal<T>,
    pub theta: T,
    pub config: SimulationConfig,
    pub measurement: MeasurementConfig<T>,
    /// Integration substeps per recorded sample.
    pub substeps: usize,
    pub warnings: Vec<String>,
}

impl<T: Real> Trajectory<T> {
    pub fn samples_per_period(&self) -> usize {
        self.config.samples_per_period
    }

    pub fn period(&self) -> T {
        self.drive.period()
    }
}
