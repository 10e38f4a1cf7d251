//! Run configuration: one text file of flat dotted keys plus `--set`
//! overrides.
//!
//! The file is read as TOML, so `params.alpha = 1.0` and a `[params]`
//! table with `alpha = 1.0` mean the same thing. Every leaf is flattened to
//! its dotted key before it is applied, and unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use gkp_core::criteria::{BlowupCase, YoungExponents};
use gkp_core::evolution::{Scheme, TimeStepperConfig};
use gkp_core::ground_state::PetviashviliConfig;
use gkp_core::{GridSpec, PhysicalParams};
use serde::Serialize;
use toml::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Command {
    Groundstate,
    Evolve,
    Classify,
    Instability,
    Sweep,
    Validate,
}

impl Command {
    pub fn parse(s: &str) -> CliResult<Self> {
        Ok(match s {
            "groundstate" => Command::Groundstate,
            "evolve" => Command::Evolve,
            "classify" => Command::Classify,
            "instability" => Command::Instability,
            "sweep" => Command::Sweep,
            "validate" => Command::Validate,
            _ => return Err(CliError::invalid(format!("unknown command {s:?}"))),
        })
    }
}

/// Initial data for `evolve` and `classify`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InitialData {
    /// `gaussian`, `groundstate`, `gardner`, `zaitsev`, `mode` or `file`.
    pub kind: String,
    pub amplitude: f64,
    pub width: f64,
    pub file: Option<PathBuf>,
    pub mode_a: i64,
    pub mode_b: i64,
    pub gardner_a: f64,
    pub gardner_varsigma: f64,
    pub zaitsev_beta0: f64,
    pub zaitsev_beta: f64,
    pub zaitsev_delta: f64,
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData {
            kind: "gaussian".into(),
            amplitude: 1.0,
            width: 2.0,
            file: None,
            mode_a: 1,
            mode_b: 1,
            gardner_a: 0.1,
            gardner_varsigma: 0.0,
            zaitsev_beta0: 1.0,
            zaitsev_beta: 0.5,
            zaitsev_delta: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyOptions {
    /// `None` picks the case from the sign pattern of μ₁, μ₂.
    pub case: Option<BlowupCase>,
    pub theta: Option<f64>,
    pub tau: Option<f64>,
    pub young: YoungExponents,
    /// Run the flow when a verdict is guaranteed and compare.
    pub confirm: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { case: None, theta: None, tau: None, young: YoungExponents::Shifted, confirm: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InstabilityOptions {
    pub b: f64,
    pub bd: f64,
    /// Largest accepted `‖w − φ‖_X`.
    pub delta: f64,
    /// Amplitude factor λ of the control datum λφ.
    pub control_scale: f64,
}

impl Default for InstabilityOptions {
    fn default() -> Self {
        InstabilityOptions { b: 0.35, bd: 1.01, delta: 0.1, control_scale: 0.95 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidateOptions {
    pub pohozaev_tol: f64,
    pub nehari_tol: f64,
    pub sharp_tol: f64,
    pub random_fields: usize,
    pub identity_samples: usize,
    pub energy_drift_tol: f64,
    pub mass_drift_tol: f64,
    pub reversal_tol: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            pohozaev_tol: 5e-2,
            nehari_tol: 1e-3,
            sharp_tol: 1e-2,
            random_fields: 20,
            identity_samples: 100,
            energy_drift_tol: 1e-6,
            mass_drift_tol: 1e-5,
            reversal_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    pub command: Command,
    pub params: PhysicalParams,
    pub grid: GridSpec,
    pub solver: PetviashviliConfig,
    /// Wave speed c of the profile equation.
    pub speed: f64,
    pub stepper: TimeStepperConfig,
    pub outputs: PathBuf,
    pub seed: u64,
    pub workers: usize,
    pub sweep_axes: Vec<SweepAxis>,
    pub sweep_command: Command,
    /// Refuse a sweep whose estimated footprint exceeds this.
    pub memory_cap_mb: f64,
    /// Write every n-th trajectory sample as a field snapshot (0 = none).
    pub snapshot_every: usize,
    pub initial: InitialData,
    pub classify: ClassifyOptions,
    pub instability: InstabilityOptions,
    pub validate: ValidateOptions,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            params: PhysicalParams::default(),
            grid: GridSpec { nx: 128, ny: 128, lx: 64.0, ly: 64.0 },
            solver: PetviashviliConfig::default(),
            speed: 1.0,
            stepper: TimeStepperConfig { dt: 1e-2, ..TimeStepperConfig::default() },
            outputs: PathBuf::from("out"),
            seed: 0,
            workers: default_workers(),
            sweep_axes: Vec::new(),
            sweep_command: Command::Groundstate,
            memory_cap_mb: 4096.0,
            snapshot_every: 0,
            initial: InitialData::default(),
            classify: ClassifyOptions::default(),
            instability: InstabilityOptions::default(),
            validate: ValidateOptions::default(),
        }
    }

    /// Reads `path` (if any) and applies `overrides` (`key=value`) on top.
    pub fn load(command: Command, path: Option<&Path>, overrides: &[String]) -> CliResult<Self> {
        let mut cfg = RunConfig::new(command);
        if let Some(p) = path {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::read(p, e))?;
            for (k, v) in parse_flat(&text)? {
                cfg.set(&k, &v)?;
            }
        }
        for o in overrides {
            let (k, v) = parse_override(o)?;
            cfg.set(&k, &v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.params.validate()?;
        self.grid.validate()?;
        self.solver.validate()?;
        self.stepper.validate()?;
        if !(self.speed > 0.0) {
            return Err(CliError::invalid_field("solver.speed", "must be positive"));
        }
        if self.workers == 0 {
            return Err(CliError::invalid_field("workers", "must be at least 1"));
        }
        Ok(())
    }

    /// Applies one dotted key.
    pub fn set(&mut self, key: &str, v: &Value) -> CliResult<()> {
        if let Some(axis) = key.strip_prefix("sweep.axes.") {
            let values = match v {
                Value::Array(a) => a.clone(),
                _ => return Err(CliError::invalid_field(key, "expects an array of values")),
            };
            // Validate the key now rather than in every cell.
            let mut probe = self.clone();
            for x in &values {
                probe.set(axis, x)?;
            }
            self.sweep_axes.retain(|a| a.key != axis);
            self.sweep_axes.push(SweepAxis { key: axis.into(), values });
            return Ok(());
        }
        let c = self;
        match key {
            "params.alpha" => c.params.alpha = real(key, v)?,
            "params.p1" => c.params.p1 = real(key, v)?,
            "params.p2" => c.params.p2 = real(key, v)?,
            "params.mu1" => c.params.mu1 = real(key, v)?,
            "params.mu2" => c.params.mu2 = real(key, v)?,
            "params.eps" => c.params.eps = real(key, v)?,
            "grid.n" => {
                let n = count(key, v)?;
                c.grid.nx = n;
                c.grid.ny = n;
            }
            "grid.nx" => c.grid.nx = count(key, v)?,
            "grid.ny" => c.grid.ny = count(key, v)?,
            "grid.l" => {
                let l = real(key, v)?;
                c.grid.lx = l;
                c.grid.ly = l;
            }
            "grid.lx" => c.grid.lx = real(key, v)?,
            "grid.ly" => c.grid.ly = real(key, v)?,
            "solver.tol" => c.solver.tol = real(key, v)?,
            "solver.maxIter" => c.solver.max_iter = count(key, v)?,
            "solver.gamma" => c.solver.gamma = Some(real(key, v)?),
            "solver.relaxation" => c.solver.relaxation = real(key, v)?,
            "solver.dealias" => c.solver.dealias = flag(key, v)?,
            "solver.boundaryThreshold" => c.solver.boundary_threshold = real(key, v)?,
            "solver.speed" => c.speed = real(key, v)?,
            "stepper.dt" => c.stepper.dt = real(key, v)?,
            "stepper.tEnd" => c.stepper.t_end = real(key, v)?,
            "stepper.scheme" => {
                c.stepper.scheme = match text(key, v)? {
                    "if-rk4" => Scheme::IfRk4,
                    "etd-rk4" => Scheme::EtdRk4,
                    _ => return Err(CliError::invalid_field(key, "expects if-rk4 or etd-rk4")),
                }
            }
            "stepper.dealias" => c.stepper.dealias = flag(key, v)?,
            "stepper.diagnosticsEvery" => c.stepper.diagnostics_every = count(key, v)?,
            "stepper.blowupNormCap" => c.stepper.blowup_norm_cap = Some(real(key, v)?),
            "stepper.bandGuard" => c.stepper.band_guard = real(key, v)?,
            "stepper.snapshotEvery" => c.snapshot_every = count(key, v)?,
            "outputs.dir" => c.outputs = PathBuf::from(text(key, v)?),
            "seed" => c.seed = count(key, v)? as u64,
            "workers" => c.workers = count(key, v)?,
            "sweep.command" => {
                let cmd = Command::parse(text(key, v)?)?;
                if cmd == Command::Sweep {
                    return Err(CliError::invalid_field(key, "a sweep cannot nest sweeps"));
                }
                c.sweep_command = cmd;
            }
            "sweep.memoryCapMb" => c.memory_cap_mb = real(key, v)?,
            "initial.kind" => {
                let k = text(key, v)?;
                if !["gaussian", "groundstate", "gardner", "zaitsev", "mode", "file"].contains(&k) {
                    return Err(CliError::invalid_field(key, "unknown generator"));
                }
                c.initial.kind = k.into();
            }
            "initial.amplitude" => c.initial.amplitude = real(key, v)?,
            "initial.width" => c.initial.width = real(key, v)?,
            "initial.file" => c.initial.file = Some(PathBuf::from(text(key, v)?)),
            "initial.modeA" => c.initial.mode_a = integer(key, v)?,
            "initial.modeB" => c.initial.mode_b = integer(key, v)?,
            "initial.gardnerA" => c.initial.gardner_a = real(key, v)?,
            "initial.gardnerVarsigma" => c.initial.gardner_varsigma = real(key, v)?,
            "initial.zaitsevBeta0" => c.initial.zaitsev_beta0 = real(key, v)?,
            "initial.zaitsevBeta" => c.initial.zaitsev_beta = real(key, v)?,
            "initial.zaitsevDelta" => c.initial.zaitsev_delta = real(key, v)?,
            "classify.case" => {
                c.classify.case = match text(key, v)? {
                    "auto" => None,
                    "i" => Some(BlowupCase::I),
                    "ii" => Some(BlowupCase::Ii),
                    "iii" => Some(BlowupCase::Iii),
                    _ => return Err(CliError::invalid_field(key, "expects auto, i, ii or iii")),
                }
            }
            "classify.theta" => c.classify.theta = Some(real(key, v)?),
            "classify.tau" => c.classify.tau = Some(real(key, v)?),
            "classify.young" => {
                c.classify.young = match text(key, v)? {
                    "shifted" => YoungExponents::Shifted,
                    "literal" => YoungExponents::Literal,
                    _ => return Err(CliError::invalid_field(key, "expects shifted or literal")),
                }
            }
            "classify.confirm" => c.classify.confirm = flag(key, v)?,
            "instability.b" => c.instability.b = real(key, v)?,
            "instability.bd" => c.instability.bd = real(key, v)?,
            "instability.delta" => c.instability.delta = real(key, v)?,
            "instability.controlScale" => c.instability.control_scale = real(key, v)?,
            "validate.pohozaevTol" => c.validate.pohozaev_tol = real(key, v)?,
            "validate.nehariTol" => c.validate.nehari_tol = real(key, v)?,
            "validate.sharpTol" => c.validate.sharp_tol = real(key, v)?,
            "validate.randomFields" => c.validate.random_fields = count(key, v)?,
            "validate.identitySamples" => c.validate.identity_samples = count(key, v)?,
            "validate.energyDriftTol" => c.validate.energy_drift_tol = real(key, v)?,
            "validate.massDriftTol" => c.validate.mass_drift_tol = real(key, v)?,
            "validate.reversalTol" => c.validate.reversal_tol = real(key, v)?,
            _ => return Err(CliError::invalid_field(key, "unknown configuration key")),
        }
        Ok(())
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Flattens a TOML document to `(dotted key, leaf)` pairs in key order.
pub fn parse_flat(text: &str) -> CliResult<Vec<(String, Value)>> {
    let table: toml::Table = text.parse().map_err(|e| CliError::invalid(format!("config: {e}")))?;
    let mut out = BTreeMap::new();
    flatten("", &Value::Table(table), &mut out);
    Ok(out.into_iter().collect())
}

fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, Value>) {
    match v {
        Value::Table(t) => {
            for (k, x) in t {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        leaf => {
            out.insert(prefix.into(), leaf.clone());
        }
    }
}

/// `key=value`, the value read as a TOML literal and otherwise as a bare
/// string.
pub fn parse_override(s: &str) -> CliResult<(String, Value)> {
    let (k, v) = s.split_once('=').ok_or_else(|| CliError::invalid(format!("--set expects key=value, got {s:?}")))?;
    let (k, v) = (k.trim(), v.trim());
    let value = match format!("v = {v}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => Value::String(v.into()),
    };
    Ok((k.into(), value))
}

fn real(key: &str, v: &Value) -> CliResult<f64> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(CliError::invalid_field(key, "expects a number")),
    }
}

fn integer(key: &str, v: &Value) -> CliResult<i64> {
    match v {
        Value::Integer(i) => Ok(*i),
        _ => Err(CliError::invalid_field(key, "expects an integer")),
    }
}

fn count(key: &str, v: &Value) -> CliResult<usize> {
    let i = integer(key, v)?;
    usize::try_from(i).map_err(|_| CliError::invalid_field(key, "expects a nonnegative integer"))
}

fn flag(key: &str, v: &Value) -> CliResult<bool> {
    v.as_bool().ok_or_else(|| CliError::invalid_field(key, "expects true or false"))
}

fn text<'a>(key: &str, v: &'a Value) -> CliResult<&'a str> {
    v.as_str().ok_or_else(|| CliError::invalid_field(key, "expects a string"))
}
