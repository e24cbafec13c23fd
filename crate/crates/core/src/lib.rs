//! Simulator for a frequency-bin tunable beam splitter (electro-optic
//! modulator, pulse shaper, modulator) and the measurement-feedback quantum
//! memristor built on it.
//!
//! Numeric code is generic over [`scalar::Real`]; the aliases below fix the
//! scalar to `f64` or `f32`.

// Negated comparisons are how argument checks reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod freqgate;
pub mod hysteresis;
pub mod memristor;
pub mod scalar;
pub mod specfun;

pub use error::{Error, Result};

pub type GateSettingsF64 = freqgate::GateSettings<f64>;
pub type GateSettingsF32 = freqgate::GateSettings<f32>;
pub type TransferMatrixF64 = freqgate::TransferMatrix2<f64>;
pub type TransferMatrixF32 = freqgate::TransferMatrix2<f32>;
pub type CombSpecF64 = freqgate::CombSpec<f64>;
pub type CouplingsF64 = memristor::Couplings<f64>;
pub type CouplingsF32 = memristor::Couplings<f32>;
pub type DriveSignalF64 = memristor::DriveSignal<f64>;
pub type DriveSignalF32 = memristor::DriveSignal<f32>;
pub type InputModelF64 = memristor::InputModel<f64>;
pub type InputModelF32 = memristor::InputModel<f32>;
pub type MeasurementConfigF64 = memristor::MeasurementConfig<f64>;
pub type TrajectoryF64 = memristor::Trajectory<f64>;
pub type TrajectoryF32 = memristor::Trajectory<f32>;
pub type LoopF64 = hysteresis::Loop<f64>;
pub type LoopF32 = hysteresis::Loop<f32>;
pub type SweepReportF64 = hysteresis::SweepReport<f64>;
