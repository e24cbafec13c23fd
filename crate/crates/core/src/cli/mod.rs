//! `fqm` command line: gate reports, calibration, oracle verification,
//! single simulations, frequency sweeps and re-classification.

mod output;

use std::f64::consts::{FRAC_PI_2, PI};
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use output::{format_value, read_trajectory_csv, write_json, write_trajectory_csv, CSV_HEADER};

use crate::error::Error;
use crate::freqgate::{
    calibrate_theta, closed_form_gate, composed_gate_oracle, hadamard_fidelity, port_probabilities,
    unitarity_factor, CalibrationOptions, CombSpec, GateSettings, TransferMatrix2,
};
use crate::hysteresis::{sweep_frequencies, SweepReport, DEFAULT_PINCH_TOL};
use crate::memristor::{
    simulate, DriveSignal, InputModel, Integrator, MeasurementConfig, MeasurementMode,
    SimulationConfig,
};

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "FQM_SEED";

/// Depth grid of the oracle check.
pub const VERIFY_THETAS: [f64; 3] = [0.2, 0.8169, 1.5];
/// Phase grid of the oracle check.
pub const VERIFY_PHIS: [f64; 5] = [0.0, PI / 3.0, FRAC_PI_2, PI, 4.5];

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const DOMAIN: i32 = 2;
    pub const VERIFY_FAILED: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(
    name = "fqm",
    version,
    about = "Frequency-bin beam splitter and quantum memristor simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the 2x2 transfer matrix and its figures of merit.
    Gate(GateArgs),
    /// Find the modulation depth that best approximates a Hadamard gate.
    Calibrate(CalibrateArgs),
    /// Compare the closed-form gate with the cascaded comb model.
    Verify(VerifyArgs),
    /// Simulate one trajectory and write it as CSV.
    Run(RunArgs),
    /// Simulate a frequency sweep and write the loop report as JSON.
    Sweep(SweepArgs),
    /// Recompute the verdict of a sweep report file.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GateArgs {
    /// Modulation depth in radians.
    #[arg(long, default_value_t = 0.8169, allow_negative_numbers = true)]
    pub theta: f64,
    /// Shaper phase in radians.
    #[arg(long, default_value_t = PI, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Final bracket width of the searches.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 0.4)]
    pub lower: f64,
    #[arg(long, default_value_t = 1.2)]
    pub upper: f64,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comb half-width k_max (bins -k_max ..= k_max + 1).
    #[arg(long, default_value_t = 25)]
    pub bins: usize,
    /// Largest admissible entrywise error.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Coherent,
    Squeezed,
    Fock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegratorArg {
    Euler,
    Rk4,
}

/// Model, drive, measurement and integration settings shared by `run` and `sweep`.
#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 0.8169)]
    pub theta: f64,
    /// Feedback gain frequency; 1 for coherent and Fock input, 5 for squeezed.
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Initial shaper phase in radians.
    #[arg(long, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
    pub phi0: f64,
    /// Squeezed-drive depth in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    pub alpha_depth: f64,
    /// Peak coherent quadrature.
    #[arg(long, default_value_t = 1.0)]
    pub x_max: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Photon-count repetitions per feedback update in sampled mode.
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    /// RNG seed; FQM_SEED takes precedence.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Feedback update interval; one update per sample when absent.
    #[arg(long)]
    pub update_dt: Option<f64>,
    #[arg(long, value_enum, default_value_t = IntegratorArg::Rk4)]
    pub integrator: IntegratorArg,
    #[arg(long, default_value_t = 1)]
    pub periods: usize,
    #[arg(long, default_value_t = 2000)]
    pub samples_per_period: usize,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Drive angular frequency.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated, strictly increasing drive frequencies.
    #[arg(long, value_delimiter = ',', required = true)]
    pub omegas: Vec<f64>,
    /// Self-contact tolerance of the pinch search.
    #[arg(long, default_value_t = DEFAULT_PINCH_TOL)]
    pub pinch_tol: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Sweep report written by `fqm sweep`.
    pub input: PathBuf,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Failure of a subcommand with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: exit::USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_numeric_domain() {
            exit::DOMAIN
        } else {
            exit::USAGE
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::usage(format!("i/o: {e}"))
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Parses `args`, runs the command and returns the process exit code.
///
/// `seed_env` is the value of `FQM_SEED`, if set.
pub fn main_with<I, S>(
    args: I,
    seed_env: Option<String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, seed_env, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(command: Command, seed_env: Option<String>, stdout: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Gate(a) => with_output(&a.out, stdout, |w| cmd_gate(&a, w)).map(|_| exit::OK),
        Command::Calibrate(a) => {
            with_output(&a.out, stdout, |w| cmd_calibrate(&a, w)).map(|_| exit::OK)
        }
        Command::Verify(a) => with_output(&a.out, stdout, |w| cmd_verify(&a, w)),
        Command::Run(a) => {
            let seed = resolve_seed(a.model.seed, seed_env.as_deref())?;
            with_output(&a.out, stdout, |w| cmd_run(&a, seed, w)).map(|_| exit::OK)
        }
        Command::Sweep(a) => {
            let seed = resolve_seed(a.model.seed, seed_env.as_deref())?;
            with_output(&a.out, stdout, |w| cmd_sweep(&a, seed, w)).map(|_| exit::OK)
        }
        Command::Classify(a) => {
            with_output(&a.out, stdout, |w| cmd_classify(&a, w)).map(|_| exit::OK)
        }
    }
}

fn resolve_seed(flag: u64, env: Option<&str>) -> CliResult<u64> {
    match env {
        Some(v) => v.trim().parse().map_err(|_| {
            CliError::usage(format!("{SEED_ENV} must be an unsigned integer, got {v:?}"))
        }),
        None => Ok(flag),
    }
}

/// Runs `body` against the `--out` file or standard output. The file is
/// only created once the command has succeeded up to its first write.
fn with_output<T>(
    out: &OutArgs,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> CliResult<T>,
) -> CliResult<T> {
    match &out.out {
        Some(path) => {
            let mut buf = Vec::new();
            let value = body(&mut buf)?;
            write_file(path, &buf)?;
            Ok(value)
        }
        None => {
            let value = body(stdout)?;
            stdout.flush()?;
            Ok(value)
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(bytes)?;
    w.flush()?;
    Ok(())
}

fn complex_json(z: num_complex::Complex<f64>) -> serde_json::Value {
    json!([z.re, z.im])
}

fn cmd_gate(a: &GateArgs, w: &mut dyn Write) -> CliResult {
    let settings = GateSettings::new(a.theta, a.phi)?;
    let m = closed_form_gate(settings)?;
    let (transmission, reflection) = port_probabilities(settings)?;
    let f = unitarity_factor(a.theta)?;
    let fidelity = hadamard_fidelity(&m)?;
    if a.json {
        let report = json!({
            "theta": a.theta,
            "phi": a.phi,
            "b00": complex_json(m.b00),
            "b01": complex_json(m.b01),
            "b10": complex_json(m.b10),
            "b11": complex_json(m.b11),
            "transmission": transmission,
            "reflection": reflection,
            "unitarity_factor": f,
            "hadamard_fidelity": fidelity,
        });
        write_json(&report, w)?;
        return Ok(());
    }
    writeln!(w, "theta = {}", a.theta)?;
    writeln!(w, "phi = {}", a.phi)?;
    for (name, z) in [
        ("B00", m.b00),
        ("B01", m.b01),
        ("B10", m.b10),
        ("B11", m.b11),
    ] {
        writeln!(
            w,
            "{name} = {} {:+}i",
            format_value(z.re),
            format_value(z.im)
        )?;
    }
    writeln!(w, "transmission |B00|^2 = {transmission:.6}")?;
    writeln!(w, "reflection |B01|^2 = {reflection:.6}")?;
    writeln!(w, "f(theta) = {f:.6}")?;
    writeln!(w, "hadamard fidelity = {fidelity:.6}")?;
    Ok(())
}

fn cmd_calibrate(a: &CalibrateArgs, w: &mut dyn Write) -> CliResult {
    let cal = calibrate_theta(CalibrationOptions {
        lower: a.lower,
        upper: a.upper,
        tol: a.tol,
        ..CalibrationOptions::default()
    })?;
    if a.json {
        let report = json!({
            "theta": cal.theta,
            "fidelity": cal.fidelity,
            "success_probability": cal.success_probability,
            "theta_peak_fidelity": cal.theta_peak_fidelity,
        });
        write_json(&report, w)?;
        return Ok(());
    }
    writeln!(w, "theta* = {:.6}", cal.theta)?;
    writeln!(w, "hadamard fidelity = {:.6}", cal.fidelity)?;
    writeln!(
        w,
        "success probability f(theta*) = {:.6}",
        cal.success_probability
    )?;
    writeln!(w, "fidelity peak at theta = {:.6}", cal.theta_peak_fidelity)?;
    Ok(())
}

/// Worst deviations found by the oracle check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOutcome {
    pub oracle_error: f64,
    pub worst_theta: f64,
    pub worst_phi: f64,
    pub unitarity_error: f64,
}

/// Entrywise closed-form vs cascaded-comb error on the verification grid,
/// and `max |B†B − f I|` at `φ = π`.
pub fn verify_oracle(k_max: usize) -> crate::error::Result<VerifyOutcome> {
    let comb = CombSpec::new(k_max)?;
    let mut out = VerifyOutcome {
        oracle_error: 0.0,
        worst_theta: VERIFY_THETAS[0],
        worst_phi: VERIFY_PHIS[0],
        unitarity_error: 0.0,
    };
    for &theta in &VERIFY_THETAS {
        for &phi in &VERIFY_PHIS {
            let settings = GateSettings::new(theta, phi)?;
            let err =
                closed_form_gate(settings)?.max_abs_diff(&composed_gate_oracle(&comb, settings)?);
            if err > out.oracle_error {
                out.oracle_error = err;
                out.worst_theta = theta;
                out.worst_phi = phi;
            }
        }
        let m = closed_form_gate(GateSettings::new(theta, PI)?)?;
        let f = unitarity_factor(theta)?;
        let target = TransferMatrix2::identity().scale(num_complex::Complex::new(f, 0.0));
        out.unitarity_error = out.unitarity_error.max(m.gram().max_abs_diff(&target));
    }
    Ok(out)
}

fn cmd_verify(a: &VerifyArgs, w: &mut dyn Write) -> CliResult<i32> {
    if !(a.tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let v = verify_oracle(a.bins)?;
    let oracle_ok = v.oracle_error <= a.tol;
    let unitarity_ok = v.unitarity_error <= a.tol;
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    writeln!(
        w,
        "{} oracle equivalence: max entry error {:.3e} at theta = {}, phi = {} (tol {:.1e}, k_max {})",
        verdict(oracle_ok),
        v.oracle_error,
        v.worst_theta,
        v.worst_phi,
        a.tol,
        a.bins
    )?;
    writeln!(
        w,
        "{} scalar unitarity at phi = pi: max |B^dag B - f I| = {:.3e} (tol {:.1e})",
        verdict(unitarity_ok),
        v.unitarity_error,
        a.tol
    )?;
    Ok(if oracle_ok && unitarity_ok {
        exit::OK
    } else {
        exit::VERIFY_FAILED
    })
}

type ModelSetup = (
    InputModel<f64>,
    DriveSignal<f64>,
    MeasurementConfig<f64>,
    SimulationConfig,
);

fn model_setup(m: &ModelArgs, omega: f64, seed: u64) -> CliResult<ModelSetup> {
    let (model, default_omega0) = match m.model {
        ModelArg::Coherent => (InputModel::Coherent { x_max: m.x_max }, 1.0),
        ModelArg::Squeezed => (InputModel::SqueezedVacuum, 5.0),
        ModelArg::Fock => (InputModel::FockSuperposition, 1.0),
    };
    let drive = DriveSignal::new(
        omega,
        m.omega0.unwrap_or(default_omega0),
        m.phi0,
        m.alpha_depth,
    )?;
    let meas = MeasurementConfig {
        mode: match m.mode {
            ModeArg::Exact => MeasurementMode::Exact,
            ModeArg::Sampled => MeasurementMode::Sampled { shots: m.shots },
        },
        seed,
        update_dt: m.update_dt,
    };
    let config = SimulationConfig {
        periods: m.periods,
        samples_per_period: m.samples_per_period,
        integrator: match m.integrator {
            IntegratorArg::Euler => Integrator::Euler,
            IntegratorArg::Rk4 => Integrator::Rk4,
        },
    };
    Ok((model, drive, meas, config))
}

fn cmd_run(a: &RunArgs, seed: u64, w: &mut dyn Write) -> CliResult {
    let (model, drive, meas, config) = model_setup(&a.model, a.omega, seed)?;
    let traj = simulate(&model, a.model.theta, &drive, &meas, &config)?;
    write_trajectory_csv(&traj.points, w)?;
    Ok(())
}

fn cmd_sweep(a: &SweepArgs, seed: u64, w: &mut dyn Write) -> CliResult {
    let first = *a
        .omegas
        .first()
        .ok_or_else(|| CliError::usage("--omegas needs at least one value"))?;
    if !(a.pinch_tol > 0.0) {
        return Err(CliError::usage("--pinch-tol must be positive"));
    }
    let (model, drive, meas, config) = model_setup(&a.model, first, seed)?;
    let report = sweep_frequencies(
        &model,
        a.model.theta,
        &drive,
        &a.omegas,
        &meas,
        &config,
        a.pinch_tol,
    )?;
    write_json(&report, w)?;
    Ok(())
}

fn cmd_classify(a: &ClassifyArgs, w: &mut dyn Write) -> CliResult {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", a.input.display())))?;
    let report: SweepReport<f64> = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("malformed sweep report: {e}")))?;
    write_json(&report.reclassify()?, w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("fqm").chain(args.iter().copied());
        let code = main_with(argv, None, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn seed_override() {
        assert_eq!(resolve_seed(3, None).unwrap(), 3);
        assert_eq!(resolve_seed(3, Some("11")).unwrap(), 11);
        assert_eq!(resolve_seed(3, Some("x")).unwrap_err().code, exit::USAGE);
    }

    #[test]
    fn gate_report_and_domain_guard() {
        let (code, out, _) = run(&["gate", "--theta", "0", "--phi", "1.0", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["reflection"].as_f64().unwrap(), 0.0);
        assert_eq!(run(&["gate", "--theta", "99"]).0, exit::DOMAIN);
        assert_eq!(run(&["gate", "--theta", "abc"]).0, exit::USAGE);
    }

    #[test]
    fn help_is_not_an_error() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("sweep"));
        assert_eq!(run(&[]).0, exit::USAGE);
    }

    #[test]
    fn verify_exit_codes() {
        assert_eq!(
            run(&["verify", "--bins", "25", "--tol", "1e-10"]).0,
            exit::OK
        );
        assert_eq!(run(&["verify", "--bins", "5"]).0, exit::USAGE);
        let (code, out, _) = run(&["verify", "--bins", "25", "--tol", "1e-16"]);
        assert_eq!(code, exit::VERIFY_FAILED);
        assert!(out.contains("FAIL"));
    }
}
