use std::path::{Path, PathBuf};

use gkp::config::parse_override;
use gkp::formats::{decode_field, encode_field, read_field, trajectory_columns, FIELD_HEADER_BYTES};
use gkp::manifest::{verify, Artifact, MANIFEST_FILE};
use gkp::{resolve, run_cli, Cli, Command, RunConfig};
use gkp_core::{Field, GridSpec, PhysicalParams};
use serde_json::Value;
use tempfile::TempDir;

const SMALL: [&str; 2] = ["grid.n=64", "grid.l=32"];

fn run(cmd: &str, out: &Path, sets: &[&str]) -> i32 {
    let mut args = vec!["gkp".to_string(), cmd.to_string(), "--out".into(), out.display().to_string()];
    for s in sets {
        args.push("--set".into());
        args.push(s.to_string());
    }
    run_cli(args)
}

fn json(path: impl AsRef<Path>) -> Value {
    serde_json::from_slice(&std::fs::read(path.as_ref()).expect("file exists")).expect("valid json")
}

fn artifacts(dir: &Path) -> Vec<Artifact> {
    serde_json::from_value(json(dir.join(MANIFEST_FILE))["artifacts"].clone()).unwrap()
}

fn with_small<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = SMALL.to_vec();
    v.extend_from_slice(extra);
    v
}

#[test]
fn config_file_then_overrides() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        "seed = 7\n[params]\nalpha = 0.75\np1 = 3.0\n[grid]\nnx = 32\nny = 64\n[stepper]\ndt = 0.002\n",
    )
    .unwrap();
    let over = vec!["params.p1=2.5".to_string(), "stepper.scheme=\"etd-rk4\"".into()];
    let cfg = RunConfig::load(Command::Evolve, Some(&path), &over).unwrap();
    assert_eq!(cfg.params.alpha, 0.75);
    assert_eq!(cfg.params.p1, 2.5);
    assert_eq!((cfg.grid.nx, cfg.grid.ny), (32, 64));
    assert_eq!(cfg.stepper.dt, 0.002);
    assert_eq!(cfg.seed, 7);

    // Flat dotted keys are the same TOML.
    std::fs::write(&path, "params.alpha = 0.5\ngrid.n = 16\n").unwrap();
    let cfg = RunConfig::load(Command::Evolve, Some(&path), &[]).unwrap();
    assert_eq!(cfg.params.alpha, 0.5);
    assert_eq!((cfg.grid.nx, cfg.grid.ny), (16, 16));
}

#[test]
fn overrides_parse_as_toml_literals() {
    let (k, v) = parse_override("params.mu2=-0.1").unwrap();
    assert_eq!(k, "params.mu2");
    assert_eq!(v.as_float(), Some(-0.1));
    let (_, v) = parse_override("initial.kind=mode").unwrap();
    assert_eq!(v.as_str(), Some("mode"));
    assert!(parse_override("no-equals-sign").is_err());
}

#[test]
fn unknown_key_is_invalid_input() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    assert_eq!(run("groundstate", &out, &["params.beta=1"]), 2);
    let e = json(out.join("error.json"));
    assert_eq!(e["exitCode"], 2);
    assert_eq!(e["kind"], "invalidInput");
}

#[test]
fn unknown_command_is_invalid_input() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run("frobnicate", dir.path(), &[]), 2);
}

#[test]
fn nonpositive_alpha_names_the_field() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    assert_eq!(run("groundstate", &out, &["params.alpha=-1"]), 2);
    let e = json(out.join("error.json"));
    assert_eq!(e["field"], "params.alpha");
    assert_eq!(run("groundstate", &out, &["params.alpha=0"]), 2);
}

#[test]
fn env_workers_beats_the_flag() {
    let cli = Cli {
        command: "validate".into(),
        config: None,
        set: vec![],
        out: Some(PathBuf::from("x")),
        seed: Some(3),
        workers: Some(2),
    };
    assert_eq!(resolve(&cli, None).unwrap().workers, 2);
    assert_eq!(resolve(&cli, Some("5".into())).unwrap().workers, 5);
    assert_eq!(resolve(&cli, None).unwrap().seed, 3);
    assert_eq!(resolve(&cli, Some("many".into())).unwrap_err().exit_code(), 2);
}

#[test]
fn field_binary_round_trip() {
    let g = GridSpec::new(8, 10, 10.0, 12.0).unwrap();
    let vals: Vec<f64> = (0..g.len()).map(|k| (k as f64).sin()).collect();
    let u = Field::from_values(g, vals.clone()).unwrap();
    let p = PhysicalParams { alpha: 0.5, p1: 2.0, p2: 3.0, mu1: 1.0, mu2: -0.5, eps: -1.0 };
    let bytes = encode_field(&u, &p);
    assert_eq!(FIELD_HEADER_BYTES, 80);
    assert_eq!(bytes.len(), 80 + 8 * 80);
    assert_eq!(u64::from_le_bytes(bytes[0..8].try_into().unwrap()), 8);
    assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 10);
    assert_eq!(f64::from_le_bytes(bytes[16..24].try_into().unwrap()), 10.0);
    assert_eq!(f64::from_le_bytes(bytes[72..80].try_into().unwrap()), -1.0);
    // Row-major with y fastest.
    assert_eq!(f64::from_le_bytes(bytes[80 + 8 * 11..80 + 8 * 12].try_into().unwrap()), u.at(1, 1));
    let (v, q) = decode_field(&bytes).unwrap();
    assert_eq!(v.values(), &vals[..]);
    assert_eq!(q, p);
    assert!(decode_field(&bytes[..100]).is_err());
}

#[test]
fn groundstate_artifacts_and_manifest() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("gs");
    assert_eq!(run("groundstate", &out, &SMALL), 0);
    let arts = artifacts(&out);
    let mut names: Vec<_> = arts.iter().map(|a| a.file_name.as_str()).collect();
    names.sort();
    assert_eq!(names, ["diagnostics.json", "profile.bin", "profile.csv", "slices.csv"]);
    assert!(verify(&out, &arts).is_empty());

    let d = json(out.join("diagnostics.json"));
    assert_eq!(d["converged"], true);
    assert!(d["residualNorm"].as_f64().unwrap() < 1e-8);
    let (u, p) = read_field(&out.join("profile.bin")).unwrap();
    assert_eq!((u.grid().nx, u.grid().ny, u.grid().lx), (64, 64, 32.0));
    assert_eq!(p.alpha, 1.0);

    std::fs::write(out.join("profile.csv"), "tampered").unwrap();
    assert_eq!(verify(&out, &arts), ["profile.csv"]);
}

#[test]
fn merged_powers_scale_the_profile() {
    // With p1 = p2 only mu1 + mu2 enters; phi scales like 1/(mu1 + mu2).
    let dir = TempDir::new().unwrap();
    let peak = |name: &str, mu1: &str, mu2: &str| {
        let out = dir.path().join(name);
        let sets = with_small(&["params.p2=2", mu1, mu2]);
        assert_eq!(run("groundstate", &out, &sets), 0);
        let d = json(out.join("diagnostics.json"));
        (d["peak"].as_f64().unwrap(), d["polarity"].as_f64().unwrap())
    };
    let (a, sa) = peak("a", "params.mu1=1", "params.mu2=-0.1");
    let (b, sb) = peak("b", "params.mu1=-0.1", "params.mu2=1");
    let (c, _) = peak("c", "params.mu1=1", "params.mu2=1");
    assert!((a - b).abs() <= 1e-8 * a);
    assert_eq!(sa, sb);
    assert!((a / c - 2.0 / 0.9).abs() < 1e-6, "{a} {c}");
}

#[test]
fn evolve_linear_mode_matches_exactly() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("ev");
    let sets =
        with_small(&["params.mu1=0", "initial.kind=mode", "initial.modeA=2", "initial.modeB=3", "stepper.tEnd=0.5"]);
    assert_eq!(run("evolve", &out, &sets), 0);
    let s = json(out.join("summary.json"));
    assert_eq!(s["reference"]["kind"], "linearMode");
    assert!(s["reference"]["maxError"].as_f64().unwrap() < 1e-8);

    let text = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(header, trajectory_columns());
}

#[test]
fn evolve_ground_state_travels() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("ev");
    let sets =
        with_small(&["initial.kind=groundstate", "stepper.tEnd=0.5", "stepper.dt=0.005", "stepper.snapshotEvery=2"]);
    assert_eq!(run("evolve", &out, &sets), 0);
    let s = json(out.join("summary.json"));
    assert_eq!(s["reference"]["kind"], "travelingWave");
    assert!(s["reference"]["maxError"].as_f64().unwrap() < 1e-2);
    // Every second sample, counting the initial one.
    let samples = s["trajectory"]["samples"].as_u64().unwrap();
    assert_eq!(s["snapshots"].as_u64().unwrap(), samples.div_ceil(2));
    assert!(out.join("snapshot_00002.bin").exists());
    assert!(verify(&out, &artifacts(&out)).is_empty());
}

#[test]
fn evolve_from_file_round_trips_and_rejects_missing() {
    let dir = TempDir::new().unwrap();
    let gs = dir.path().join("gs");
    assert_eq!(run("groundstate", &gs, &SMALL), 0);
    let file = format!("initial.file={:?}", gs.join("profile.bin").display().to_string());
    let out = dir.path().join("ev");
    assert_eq!(run("evolve", &out, &with_small(&["initial.kind=file", &file, "stepper.tEnd=0.1"])), 0);
    // A file on another grid is refused.
    assert_eq!(run("evolve", &out, &["grid.n=32", "initial.kind=file", &file]), 2);
    let missing = dir.path().join("missing");
    assert_eq!(run("evolve", &missing, &["initial.kind=file", "initial.file=\"/nonexistent.bin\""]), 2);
    assert!(json(missing.join("error.json"))["message"].as_str().unwrap().contains("nonexistent"));
}

#[test]
fn classify_small_quadratic_datum_is_bounded() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c");
    let sets = with_small(&["initial.amplitude=0.5", "stepper.tEnd=5.0", "classify.confirm=true"]);
    assert_eq!(run("classify", &out, &sets), 0);
    let r = json(out.join("classify.json"));
    assert_eq!(r["thresholdReport"]["verdict"], "boundedGuaranteed");
    let c = &r["confirmation"];
    assert_eq!(c["predicted"], "bounded");
    assert_eq!(c["observedFlag"], false);
    assert_eq!(c["agrees"], true);
    assert_eq!(c["trajectory"]["finalTime"].as_f64().unwrap(), 5.0);
}

#[test]
fn classify_negative_energy_quintic_blows_up() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c");
    let sets = with_small(&[
        "params.p1=5",
        "params.p2=6",
        "params.mu2=1",
        "initial.amplitude=4",
        "stepper.tEnd=2.0",
        "stepper.dt=1e-3",
        "classify.confirm=true",
    ]);
    assert_eq!(run("classify", &out, &sets), 0);
    let r = json(out.join("classify.json"));
    let b = &r["blowupConditions"];
    assert_eq!(b["caseLabel"], "i");
    assert!(b["energy"].as_f64().unwrap() <= 0.0);
    assert_eq!(b["verdict"], "blowupGuaranteed");
    assert_eq!(r["confirmation"]["observedFlag"], true);
    assert_eq!(r["confirmation"]["agrees"], true);
}

#[test]
fn classify_case_three_needs_negative_mu2() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c");
    let sets = with_small(&["params.p2=3", "params.mu2=1", "classify.case=\"iii\""]);
    assert_eq!(run("classify", &out, &sets), 0);
    let r = json(out.join("classify.json"));
    assert_eq!(r["blowupConditions"]["verdict"], "hypothesesNotMet");
    assert_eq!(r["confirmation"], Value::Null);
}

#[test]
fn instability_rejects_bd_at_one() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("i");
    assert_eq!(run("instability", &out, &with_small(&["params.p1=3", "instability.bd=1.0"])), 2);
    assert_eq!(json(out.join("error.json"))["field"], "instability.bd");
}

#[test]
fn sweep_overlays_ground_states() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("s");
    let sets = with_small(&[
        "sweep.command=\"groundstate\"",
        "params.mu2=1",
        "params.p2=2",
        "sweep.axes.params.mu1=[-0.1, -0.05, 0.05, 0.1, 1.0]",
    ]);
    assert_eq!(run("sweep", &out, &sets), 0);
    let idx = json(out.join("index.json"));
    assert_eq!(idx["failures"], 0);
    assert_eq!(idx["cells"].as_array().unwrap().len(), 5);
    let text = std::fs::read_to_string(out.join("overlay.csv")).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(header, ["x", "cell_0000", "cell_0001", "cell_0002", "cell_0003", "cell_0004"]);
    assert_eq!(text.lines().count(), 65);
    for c in idx["cells"].as_array().unwrap() {
        let d = out.join(c["directory"].as_str().unwrap());
        assert!(verify(&d, &artifacts(&d)).is_empty());
    }
}

#[test]
fn sweep_records_failed_cells() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("s");
    let sets = with_small(&["sweep.command=\"groundstate\"", "sweep.axes.params.alpha=[1.0, -1.0]"]);
    assert_eq!(run("sweep", &out, &sets), 0);
    let idx = json(out.join("index.json"));
    assert_eq!(idx["failures"], 1);
    let bad = &idx["cells"][1];
    assert_eq!(bad["status"], "failed");
    assert_eq!(bad["exitCode"], 2);
    assert_eq!(idx["cells"][0]["status"], "ok");
}

#[test]
fn sweep_refuses_past_the_memory_cap() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("s");
    let sets = ["grid.n=1024", "sweep.memoryCapMb=100", "sweep.axes.params.mu1=[1.0, 2.0]"];
    let mut args: Vec<String> = ["gkp", "sweep", "--workers", "4", "--out"].map(String::from).to_vec();
    args.push(out.display().to_string());
    for s in sets {
        args.extend(["--set".to_string(), s.to_string()]);
    }
    assert_eq!(run_cli(args), 2);
    assert_eq!(json(out.join("error.json"))["field"], "sweep.memoryCapMb");
}

#[test]
fn validate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let sets = with_small(&["validate.randomFields=5", "validate.identitySamples=20", "stepper.tEnd=0.2"]);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(run("validate", &a, &sets), 0);
    assert_eq!(run("validate", &b, &sets), 0);
    let strip = |d: &Path| {
        let mut arts = artifacts(d);
        arts.sort_by(|x, y| x.file_name.cmp(&y.file_name));
        arts
    };
    assert_eq!(strip(&a), strip(&b));
    let r = json(a.join("validate.json"));
    assert_eq!(r["passed"], true);

    // Another seed changes the random samples and so the report.
    let c = dir.path().join("c");
    let mut args: Vec<String> = ["gkp", "validate", "--seed", "99", "--out"].map(String::from).to_vec();
    args.push(c.display().to_string());
    for s in &sets {
        args.extend(["--set".to_string(), s.to_string()]);
    }
    assert_eq!(run_cli(args), 0);
    assert_ne!(strip(&a), strip(&c));
}
