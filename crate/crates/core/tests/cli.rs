use std::f64::consts::FRAC_PI_2;
use std::process::{Command, Output};

use fqm::cli::read_trajectory_csv;
use fqm::memristor::{
    simulate, Couplings, DriveSignal, InputModel, MeasurementConfig, SimulationConfig,
};

fn fqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqm"))
        .args(args)
        .env_remove("FQM_SEED")
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn gate_report_at_the_calibration_point() {
    let v = json(&fqm(&[
        "gate",
        "--theta",
        "0.8169",
        "--phi",
        "3.141592653589793",
        "--json",
    ]));
    assert!((v["unitarity_factor"].as_f64().unwrap() - 0.9760).abs() < 5e-4);
    assert!(v["hadamard_fidelity"].as_f64().unwrap() >= 0.99985);
    assert!((v["transmission"].as_f64().unwrap() - 0.4979).abs() < 5e-4);
    let text = String::from_utf8(fqm(&["gate"]).stdout).unwrap();
    assert!(text.contains("f(theta) = 0.976003"));
}

#[test]
fn calibrate_reports_the_operating_point() {
    let v = json(&fqm(&["calibrate", "--json"]));
    assert!((v["theta"].as_f64().unwrap() - 0.8169).abs() < 1e-3);
    assert!(v["fidelity"].as_f64().unwrap() >= 0.9999);
    assert!((v["success_probability"].as_f64().unwrap() - 0.9760).abs() < 5e-4);
    assert_eq!(fqm(&["calibrate", "--tol", "1e-12"]).status.code(), Some(1));
}

#[test]
fn run_csv_round_trips_the_trajectory() {
    let out = fqm(&["run", "--model", "squeezed", "--omega", "2"]);
    assert!(out.status.success());
    assert!(!out.stdout.contains(&b'\r'));
    let parsed = read_trajectory_csv(out.stdout.as_slice()).unwrap();
    let drive = DriveSignal::new(2.0, 5.0, FRAC_PI_2, 0.5).unwrap();
    let traj = simulate(
        &InputModel::SqueezedVacuum,
        0.8169,
        &drive,
        &MeasurementConfig::exact(),
        &SimulationConfig::default(),
    )
    .unwrap();
    assert_eq!(parsed.len(), traj.points.len());
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-11 * a.abs().max(b.abs()) + 1e-300;
    for (p, q) in parsed.iter().zip(&traj.points) {
        assert!(close(p.t, q.t) && close(p.control, q.control) && close(p.response, q.response));
        assert!(close(p.phi, q.phi) && close(p.n_env, q.n_env));
    }
}

#[test]
fn frozen_memory_gives_a_quadratic_response() {
    let out = fqm(&["run", "--model", "coherent", "--omega0", "0"]);
    let h = Couplings::new(0.8169).unwrap().transmission(FRAC_PI_2);
    for p in read_trajectory_csv(out.stdout.as_slice()).unwrap() {
        assert!((p.response - h * p.control * p.control).abs() <= 1e-11 * p.response.max(1e-300));
        assert!((p.phi - FRAC_PI_2).abs() < 1e-11);
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let args = [
        "run", "--model", "fock", "--omega", "10", "--mode", "sampled", "--shots", "1000",
        "--seed", "7",
    ];
    let stdout = fqm(&args).stdout;
    let mut with_out = args.to_vec();
    let path_str = path.to_str().unwrap();
    with_out.extend(["--out", path_str]);
    let out = fqm(&with_out);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn sweep_schema_and_classify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("squeezed.json");
    let path_str = path.to_str().unwrap();
    let out = fqm(&[
        "sweep", "--model", "squeezed", "--omegas", "1,2,5", "--out", path_str,
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["model"], "squeezed");
    assert_eq!(v["verdict"], "memristive");
    assert_eq!(v["params"]["omega0"].as_f64(), Some(5.0));
    let results = v["results"].as_array().unwrap();
    let areas: Vec<f64> = results
        .iter()
        .map(|r| r["total_area"].as_f64().unwrap())
        .collect();
    assert!(areas.windows(2).all(|w| w[1] < w[0]));
    for r in results {
        for key in [
            "omega",
            "total_area",
            "pinch",
            "lobes",
            "pinches",
            "control_range",
        ] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert_eq!(r["pinch"]["control"].as_f64(), Some(0.25));
    }

    let reclassified = fqm(&["classify", path_str]);
    assert!(reclassified.status.success());
    assert_eq!(reclassified.stdout, std::fs::read(&path).unwrap());
}

#[test]
fn fock_sweep_is_rejected() {
    let v = json(&fqm(&["sweep", "--model", "fock", "--omegas", "1,2,10"]));
    assert_eq!(v["verdict"], "non-memristive");
    let reasons: Vec<&str> = v["reasons"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_str().unwrap())
        .collect();
    assert!(reasons.contains(&"moving-pinch"));
    assert!(v["results"][0]["pinch"].is_object());
}

#[test]
fn tampered_report_is_reclassified() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut v = json(&fqm(&["sweep", "--model", "squeezed", "--omegas", "1,2,5"]));
    v["results"][2]["total_area"] = serde_json::json!(1.0);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let out = json(&fqm(&["classify", path.to_str().unwrap()]));
    assert_eq!(out["verdict"], "non-memristive");
    assert_eq!(out["reasons"][0], "non-decreasing-area");

    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(
        fqm(&["classify", path.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn exit_code_contract() {
    let cases: [(&[&str], i32); 10] = [
        (&["--version"], 0),
        (&["verify"], 0),
        (&["gate", "--theta", "-1"], 2),
        (&["gate", "--phi", "inf"], 2),
        (&["run", "--model", "coherent", "--omega", "-1"], 1),
        (&["run", "--model", "squeezed", "--alpha-depth", "1.5"], 1),
        (
            &[
                "run", "--model", "fock", "--mode", "sampled", "--shots", "0",
            ],
            1,
        ),
        (&["run", "--model", "fock", "--periods", "0"], 1),
        (
            &["sweep", "--model", "coherent", "--omegas", "1,0.5,0.2"],
            1,
        ),
        (&["frobnicate"], 1),
    ];
    for (args, want) in cases {
        assert_eq!(fqm(args).status.code(), Some(want), "{args:?}");
    }
}

#[test]
fn seed_environment_variable() {
    let args = [
        "run",
        "--model",
        "coherent",
        "--mode",
        "sampled",
        "--shots",
        "50",
        "--samples-per-period",
        "100",
    ];
    let run_env = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_fqm"))
            .args(args)
            .env("FQM_SEED", seed)
            .output()
            .unwrap()
    };
    assert_eq!(run_env("5").stdout, run_env("5").stdout);
    assert_ne!(run_env("5").stdout, run_env("6").stdout);
    assert_eq!(run_env("five").status.code(), Some(1));
}
