//! End-to-end checks of the `dmmlab` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dmmlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmmlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("DMMLAB_OUT_DIR")
        .env_remove("DMMLAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn generate_solve_walksat_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dmmlab(
        &[
            "generate", "--n", "40", "--ratio", "7", "--seed", "5",
            "--output", "inst.cnf", "--plant-out", "plant.txt",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let cnf = fs::read_to_string(dir.path().join("inst.cnf")).unwrap();
    assert!(cnf.starts_with("p cnf 40 280\n"), "header: {}", &cnf[..20]);
    let plant = fs::read_to_string(dir.path().join("plant.txt")).unwrap();
    assert_eq!(plant.trim().len(), 40);

    let out = dmmlab(
        &["solve", "--cnf", "inst.cnf", "--seed", "3", "--trajectory", "traj.csv"],
        dir.path(),
    );
    let outcome: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(outcome["solved"], true);
    let traj = fs::read_to_string(dir.path().join("traj.csv")).unwrap();
    assert!(traj.starts_with("step,time,var_index,v\n"));

    let out = dmmlab(
        &["walksat", "--cnf", "inst.cnf", "--seed", "3", "--model"],
        dir.path(),
    );
    let text = stdout(&out);
    let (json_part, model) = text.rsplit_once('\n').map(|(a, _)| a.rsplit_once('\n').unwrap()).unwrap();
    let outcome: serde_json::Value = serde_json::from_str(json_part).unwrap();
    assert_eq!(outcome["solved"], true);
    assert_eq!(model.trim().len(), 40);
}

#[test]
fn deterministic_generation() {
    let dir = tempfile::tempdir().unwrap();
    let a = stdout(&dmmlab(&["generate", "--n", "12", "--seed", "9"], dir.path()));
    let b = stdout(&dmmlab(&["generate", "--n", "12", "--seed", "9"], dir.path()));
    assert_eq!(a, b);
    let c = stdout(&dmmlab(&["generate", "--n", "12", "--seed", "10"], dir.path()));
    assert_ne!(a, c);
}

#[test]
fn experiment_run_and_analyze_from_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = serde_json::json!({
        "name": "mini",
        "solver": "dmm",
        "instance_source": {"type": "generator", "ratio": 6.0},
        "n_list": [20, 30, 40],
        "runs_per_n": 12,
        "run_mode": "fresh_instance",
        "master_seed": 7,
    });
    fs::write(dir.path().join("spec.json"), spec.to_string()).unwrap();
    let out = dmmlab(
        &["experiment", "run", "spec.json", "--out", "results", "--analyze"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["results.csv", "timings.csv", "manifest.json", "analysis.json"] {
        assert!(dir.path().join("results").join(file).exists(), "{file}");
    }
    assert!(dir.path().join("results/plots/relative_variance.csv").exists());

    let out = dmmlab(
        &["analyze", "--results", "results", "--family", "exponential", "--out", "re"],
        dir.path(),
    );
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["family"], "exponential");
    assert_eq!(report["groups"].as_array().unwrap().len(), 3);
}

#[test]
fn experiment_presets_listed_and_unknown_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let list = stdout(&dmmlab(&["experiment", "presets"], dir.path()));
    assert!(list.lines().any(|l| l == "fig3-desk"));
    let out = dmmlab(&["experiment", "run", "--preset", "nope"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));
}

#[test]
fn fit_and_ingest_timings() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("times.csv"),
        "instance,tts_seconds\na,1.5\nb,2.5\nc,9.0\nd,4.0\n",
    )
    .unwrap();
    let out = dmmlab(
        &[
            "fit", "--input", "times.csv", "--format", "csv", "--column", "tts_seconds",
            "--family", "exponential", "--solver", "minisat",
        ],
        dir.path(),
    );
    let fit: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(fit["family"], "exponential");
    assert_eq!(fit["solver"], "minisat");
    assert_eq!(fit["n"], 4);
    // lambda = 1 / mean = 1 / 4.25
    let lambda = fit["lambda"].as_f64().unwrap();
    assert!((lambda - 1.0 / 4.25).abs() < 1e-12);

    fs::write(dir.path().join("bad.txt"), "1.0\n0.0\n").unwrap();
    let out = dmmlab(&["ingest-timings", "--input", "bad.txt"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-positive"));

    fs::write(dir.path().join("good.txt"), "1.5\n2.0\n0.7\n").unwrap();
    let out = dmmlab(
        &["ingest-timings", "--input", "good.txt", "--solver", "kissat", "--censored", "2"],
        dir.path(),
    );
    let ingested: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(ingested["solver"], "kissat");
    assert_eq!(ingested["censored_count"], 2);
    assert_eq!(ingested["times"].as_array().unwrap().len(), 3);
}

#[test]
fn rk4_rejects_noise_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let out = dmmlab(&["generate", "--n", "10", "--ratio", "5", "--output", "i.cnf"], dir.path());
    assert!(out.status.success());
    let out = dmmlab(
        &["solve", "--cnf", "i.cnf", "--method", "rk4", "--noise", "0.12"],
        dir.path(),
    );
    assert!(!out.status.success());
    let out = dmmlab(
        &["solve", "--cnf", "i.cnf", "--method", "rk4", "--noise", "0"],
        dir.path(),
    );
    assert!(out.status.success());
}
