use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    drive_control, estimate_n1, feedback_rate, infer_control, Couplings, DriveSignal, InputModel,
    Integrator, MeasurementConfig, MeasurementMode, Trajectory, TrajectoryPoint, MAX_UPDATE_PHASE,
};
use crate::error::{Error, Result};
use crate::scalar::{as_f64, count, lit, Real};

/// Fewest recorded samples per drive period.
pub const MIN_SAMPLES_PER_PERIOD: usize = 100;

/// Length and resolution of a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Number of drive periods covered.
    pub periods: usize,
    pub samples_per_period: usize,
    pub integrator: Integrator,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            periods: 1,
            samples_per_period: 2000,
            integrator: Integrator::Rk4,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.periods < 1 {
            return Err(Error::invalid("duration must cover at least one period"));
        }
        if self.samples_per_period < MIN_SAMPLES_PER_PERIOD {
            return Err(Error::invalid(format!(
                "samples_per_period must be at least {MIN_SAMPLES_PER_PERIOD}, got {}",
                self.samples_per_period
            )));
        }
        Ok(())
    }
}

/// Runs the feedback loop with an RNG seeded from `meas.seed`.
pub fn simulate<T: Real>(
    model: &InputModel<T>,
    theta: T,
    drive: &DriveSignal<T>,
    meas: &MeasurementConfig<T>,
    config: &SimulationConfig,
) -> Result<Trajectory<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(meas.seed);
    simulate_with_rng(model, theta, drive, meas, config, &mut rng)
}

/// Runs the feedback loop drawing photon counts from `rng`.
///
/// Samples sit at `t_k = k T / N` for `k = 0..=periods·N`. Between samples
/// `φ` advances in `substeps` equal steps, one feedback update each; in
/// sampled mode every rate evaluation performs a fresh measurement.
pub fn simulate_with_rng<T: Real, R: Rng + ?Sized>(
    model: &InputModel<T>,
    theta: T,
    drive: &DriveSignal<T>,
    meas: &MeasurementConfig<T>,
    config: &SimulationConfig,
    rng: &mut R,
) -> Result<Trajectory<T>> {
    model.validate()?;
    drive.validate()?;
    meas.validate()?;
    config.validate()?;
    let gate = Couplings::new(theta)?;

    let period = drive.period();
    let n = config.samples_per_period;
    let dt_sample = period / count(n);
    let substeps = match meas.update_dt {
        Some(update) => as_f64(dt_sample / update).ceil().max(1.0) as usize,
        None => 1,
    };
    let h = dt_sample / count(substeps);

    let mut warnings = Vec::new();
    let update_phase = as_f64(meas.update_dt.unwrap_or(h) * drive.omega);
    if update_phase > MAX_UPDATE_PHASE {
        let msg = format!(
            "feedback update interval times omega is {update_phase:.4}, above {MAX_UPDATE_PHASE}; \
             the continuous-feedback approximation is poor"
        );
        warn!("{msg}");
        warnings.push(msg);
    }

    let mut rate = |t: T, phi: T| -> Result<T> {
        let control = drive_control(model, drive, t);
        let measured = match meas.mode {
            MeasurementMode::Exact => control,
            MeasurementMode::Sampled { shots } => {
                let (_, n1) = model.respond(&gate, phi, control, drive.omega * t)?;
                let estimate = estimate_n1(n1, shots, rng)?;
                infer_control(model, &gate, drive, phi, t, estimate)
            }
        };
        Ok(feedback_rate(model, drive, t, measured))
    };

    let total = config.periods * n;
    let mut points = Vec::with_capacity(total + 1);
    let mut phi = drive.phi0;
    for k in 0..=total {
        let t = period * count(k) / count(n);
        let control = drive_control(model, drive, t);
        let (response, n_env) = model.respond(&gate, phi, control, drive.omega * t)?;
        points.push(TrajectoryPoint {
            t,
            control,
            response,
            phi,
            n_env,
        });
        if k == total {
            break;
        }
        for s in 0..substeps {
            let ts = t + h * count(s);
            phi = match config.integrator {
                Integrator::Euler => phi + h * rate(ts, phi)?,
                Integrator::Rk4 => {
                    let half = h / lit(2.0);
                    let k1 = rate(ts, phi)?;
                    let k2 = rate(ts + half, phi + half * k1)?;
                    let k3 = rate(ts + half, phi + half * k2)?;
                    let k4 = rate(ts + h, phi + h * k3)?;
                    phi + h / lit(6.0) * (k1 + lit::<T>(2.0) * (k2 + k3) + k4)
                }
            };
            if !phi.is_finite() {
                return Err(Error::Integration { t: as_f64(ts + h) });
            }
        }
    }

    Ok(Trajectory {
        points,
        model: *model,
        drive: *drive,
        theta,
        config: *config,
        measurement: *meas,
        substeps,
        warnings,
    })
}
