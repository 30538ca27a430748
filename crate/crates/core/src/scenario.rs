//! Runnable scenarios: config documents, validation, and the artifacts each
//! run writes (CSV data, `summary.json`, `plots.md`).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::channels::{herald_noclick, herald_zero, inject, trace_out, BeamSplitter};
use crate::density::DensityOperator;
use crate::error::Error;
use crate::fock::{FockKet, MultiModeKet, DEFAULT_CUTOFF};
use crate::interferometer::{
    visibility, visibility_vs_efficiency, write_efficiency_csv, ArmResolution, Interferometer, MziConfig,
    DEFAULT_MZI_CUTOFF,
};
use crate::output::write_atomic;
use crate::wigner::{
    fit_gaussian, negativity_volume, wigner_density, wigner_pure, GaussianFit, PhaseSpaceGrid, WignerGrid,
    MAX_WIGNER_CUTOFF,
};

pub const DEFAULT_ALPHA: f64 = 2.0;
pub const DEFAULT_KEEP: f64 = std::f64::consts::FRAC_1_SQRT_2;
pub const DEFAULT_MZI_XI: f64 = 0.5;
/// s = 3, i.e. ξ = ln √3.
pub const DEFAULT_SMSV_S: f64 = 3.0;
pub const DEFAULT_ETAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
pub const DEFAULT_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Wigner,
    CatAtten,
    SmsvAtten,
    MziSweep,
    EtaSweep,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Wigner => "wigner",
            ScenarioKind::CatAtten => "cat-atten",
            ScenarioKind::SmsvAtten => "smsv-atten",
            ScenarioKind::MziSweep => "mzi-sweep",
            ScenarioKind::EtaSweep => "eta-sweep",
        }
    }

    fn accepts(&self) -> &'static [&'static str] {
        match self {
            ScenarioKind::Wigner => &["state", "alpha", "photons", "s", "xi", "cutoff"],
            ScenarioKind::CatAtten => &["alpha", "keep", "mode", "eta", "cutoff"],
            ScenarioKind::SmsvAtten => &["s", "xi", "keep", "mode", "eta", "cutoff"],
            ScenarioKind::MziSweep => &["s", "xi", "keep", "mode", "eta", "samples", "cutoff"],
            ScenarioKind::EtaSweep => &["s", "xi", "keep", "etas", "samples", "cutoff"],
        }
    }

    fn uses_grid(&self) -> bool {
        matches!(self, ScenarioKind::Wigner | ScenarioKind::CatAtten | ScenarioKind::SmsvAtten)
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Ordinary,
    Heralded,
    Efficiency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Vacuum,
    Number,
    Coherent,
    Cat,
    Smsv,
}

/// `(min, max, points)` of a square phase-space grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec(pub f64, pub f64, pub usize);

impl GridSpec {
    pub fn build(&self) -> crate::Result<PhaseSpaceGrid> {
        PhaseSpaceGrid::square(self.0, self.1, self.2)
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec(-5.0, 5.0, 201)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, points] = parts.as_slice() else {
            return Err(format!("grid `{s}` is not MIN:MAX:POINTS"));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("grid value `{v}`: {e}"));
        let points = points
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("grid points `{points}`: {e}"))?;
        Ok(GridSpec(num(min)?, num(max)?, points))
    }
}

/// Scenario-specific parameters. Absent values take the scenario defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub photons: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keep: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub etas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
}

impl Parameters {
    fn present(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let mut add = |set: bool, key| {
            if set {
                keys.push(key)
            }
        };
        add(self.state.is_some(), "state");
        add(self.alpha.is_some(), "alpha");
        add(self.photons.is_some(), "photons");
        add(self.s.is_some(), "s");
        add(self.xi.is_some(), "xi");
        add(self.keep.is_some(), "keep");
        add(self.mode.is_some(), "mode");
        add(self.eta.is_some(), "eta");
        add(self.etas.is_some(), "etas");
        add(self.samples.is_some(), "samples");
        add(self.cutoff.is_some(), "cutoff");
        keys
    }

    /// Fields set in `other` replace those in `self`.
    pub fn merge(&mut self, other: Parameters) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(state, alpha, photons, s, xi, keep, mode, eta, etas, samples, cutoff);
        // s and xi describe one quantity; the override wins outright.
        if other.s.is_some() && other.xi.is_none() {
            self.xi = None;
        }
        if other.xi.is_some() && other.s.is_none() {
            self.s = None;
        }
    }
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// A run manifest, as read from `--config` and completed by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

impl ScenarioConfig {
    pub fn new(scenario: ScenarioKind) -> Self {
        ScenarioConfig {
            scenario,
            parameters: Parameters::default(),
            output: default_output(),
            grid: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("config: {e}"))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
        Self::from_json(&text)
    }
}

/// Why a run did not complete.
#[derive(Debug)]
pub enum RunError {
    /// Violated constraints, reported before any computation.
    Config(Vec<String>),
    /// The computation itself failed.
    Compute(Error),
}

impl RunError {
    /// 2 for invalid configs, 3 for numerical validation failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Compute(e) if e.is_numerical() => 3,
            RunError::Compute(Error::Io(_)) => 1,
            RunError::Compute(_) => 2,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(diags) => {
                for (i, d) in diags.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "invalid config: {d}")?;
                }
                Ok(())
            }
            RunError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Compute(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum StateSpec {
    Vacuum,
    Number(usize),
    Coherent(f64),
    Cat(f64),
    Smsv(f64),
}

impl StateSpec {
    fn build(&self, cutoff: usize) -> crate::Result<FockKet> {
        match *self {
            StateSpec::Vacuum => FockKet::vacuum(cutoff),
            StateSpec::Number(n) => FockKet::number(n, cutoff),
            StateSpec::Coherent(a) => FockKet::coherent(a, cutoff),
            StateSpec::Cat(a) => FockKet::even_cat(a, cutoff),
            StateSpec::Smsv(xi) => FockKet::smsv(xi, cutoff),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Job {
    Wigner {
        state: StateSpec,
        cutoff: usize,
        grid: PhaseSpaceGrid,
    },
    CatAtten {
        alpha: f64,
        keep: f64,
        mode: ArmResolution,
        cutoff: usize,
        grid: PhaseSpaceGrid,
    },
    SmsvAtten {
        xi: f64,
        keep: f64,
        mode: ArmResolution,
        cutoff: usize,
        grid: PhaseSpaceGrid,
    },
    MziSweep(MziConfig),
    EtaSweep {
        template: MziConfig,
        etas: Vec<f64>,
    },
}

/// A validated config with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    resolved: ScenarioConfig,
    job: Job,
}

struct Checker {
    diags: Vec<String>,
    /// Truncation failures predicted from the input state; runs report
    /// them as numerical failures rather than config errors.
    numerical: Option<Error>,
}

impl Checker {
    fn range(&mut self, name: &str, v: f64, lo: f64, hi: f64) {
        if !(v.is_finite() && v >= lo && v <= hi) {
            let (lo, hi) = (fmt_bound(lo), fmt_bound(hi));
            self.diags.push(format!("{name} = {v} is outside [{lo}, {hi}]"));
        }
    }

    fn finite(&mut self, name: &str, v: f64) {
        if !v.is_finite() {
            self.diags.push(format!("{name} = {v} is not finite"));
        }
    }

    fn at_least(&mut self, name: &str, v: usize, min: usize) {
        if v < min {
            self.diags.push(format!("{name} = {v} must be at least {min}"));
        }
    }

    fn tail<T>(&mut self, built: crate::Result<T>) {
        match built {
            Ok(_) => {}
            Err(e @ Error::TailTooLarge { .. }) => self.numerical = Some(e),
            Err(e) => self.diags.push(e.to_string()),
        }
    }
}

fn fmt_bound(v: f64) -> String {
    if v == f64::MAX {
        "inf".into()
    } else {
        format!("{v}")
    }
}

fn resolve_mode(p: &Parameters, c: &mut Checker) -> (ModeName, ArmResolution) {
    let name = p.mode.unwrap_or(ModeName::Ordinary);
    let mode = match name {
        ModeName::Ordinary => ArmResolution::Ordinary,
        ModeName::Heralded => ArmResolution::Heralded,
        ModeName::Efficiency => match p.eta {
            Some(eta) => {
                c.range("eta", eta, 0.0, 1.0);
                ArmResolution::Efficiency { eta }
            }
            None => {
                c.diags.push("mode efficiency needs eta".into());
                ArmResolution::Efficiency { eta: 1.0 }
            }
        },
    };
    if name != ModeName::Efficiency && p.eta.is_some() {
        c.diags.push(format!("eta only applies to mode efficiency, not {name:?}").to_lowercase());
    }
    (name, mode)
}

fn resolve_xi(p: &Parameters, c: &mut Checker, default_xi: f64) -> f64 {
    match (p.s, p.xi) {
        (Some(_), Some(_)) => {
            c.diags.push("give either s or xi, not both".into());
            default_xi
        }
        (Some(s), None) => {
            c.range("s", s, f64::MIN_POSITIVE, f64::MAX);
            0.5 * s.ln()
        }
        (None, Some(xi)) => {
            c.finite("xi", xi);
            xi
        }
        (None, None) => default_xi,
    }
}

impl Plan {
    /// Checks every constraint without running the scenario.
    pub fn resolve(config: &ScenarioConfig) -> Result<Plan, RunError> {
        let kind = config.scenario;
        let p = &config.parameters;
        let mut c = Checker {
            diags: Vec::new(),
            numerical: None,
        };
        for key in p.present() {
            if !kind.accepts().contains(&key) {
                c.diags.push(format!("parameter `{key}` does not apply to {kind}"));
            }
        }
        if config.grid.is_some() && !kind.uses_grid() {
            c.diags.push(format!("{kind} does not use a phase-space grid"));
        }
        let grid_spec = config.grid.unwrap_or_default();
        let grid = match grid_spec.build() {
            Ok(g) => g,
            Err(e) => {
                c.diags.push(format!("grid {}:{}:{}: {e}", grid_spec.0, grid_spec.1, grid_spec.2));
                PhaseSpaceGrid::default()
            }
        };
        let default_cutoff = match kind {
            ScenarioKind::MziSweep | ScenarioKind::EtaSweep => DEFAULT_MZI_CUTOFF,
            _ => DEFAULT_CUTOFF,
        };
        let cutoff = p.cutoff.unwrap_or(default_cutoff);
        c.at_least("cutoff", cutoff, 1);
        if kind.uses_grid() && cutoff > MAX_WIGNER_CUTOFF {
            c.diags.push(format!("cutoff = {cutoff} exceeds the Wigner limit {MAX_WIGNER_CUTOFF}"));
        }
        let keep = p.keep.unwrap_or(DEFAULT_KEEP);
        if kind.accepts().contains(&"keep") {
            c.range("keep", keep, 0.0, 1.0);
        }

        let mut resolved = ScenarioConfig {
            scenario: kind,
            parameters: Parameters {
                cutoff: Some(cutoff),
                ..Parameters::default()
            },
            output: config.output.clone(),
            grid: kind.uses_grid().then_some(grid_spec),
        };
        let r = &mut resolved.parameters;

        let job = match kind {
            ScenarioKind::Wigner => {
                let kind = p.state.unwrap_or(StateKind::Cat);
                r.state = Some(kind);
                let state = match kind {
                    StateKind::Vacuum => StateSpec::Vacuum,
                    StateKind::Number => {
                        let n = p.photons.unwrap_or(1);
                        r.photons = Some(n);
                        if n >= cutoff {
                            c.diags.push(format!("photons = {n} needs a cutoff above {n}"));
                        }
                        StateSpec::Number(n)
                    }
                    StateKind::Coherent | StateKind::Cat => {
                        let a = p.alpha.unwrap_or(DEFAULT_ALPHA);
                        c.finite("alpha", a);
                        r.alpha = Some(a);
                        if kind == StateKind::Cat {
                            StateSpec::Cat(a)
                        } else {
                            StateSpec::Coherent(a)
                        }
                    }
                    StateKind::Smsv => {
                        let xi = resolve_xi(p, &mut c, 0.5 * DEFAULT_SMSV_S.ln());
                        r.xi = Some(xi);
                        r.s = Some((2.0 * xi).exp());
                        StateSpec::Smsv(xi)
                    }
                };
                let unused = match kind {
                    StateKind::Vacuum => &["alpha", "photons", "s", "xi"][..],
                    StateKind::Number => &["alpha", "s", "xi"][..],
                    StateKind::Coherent | StateKind::Cat => &["photons", "s", "xi"][..],
                    StateKind::Smsv => &["alpha", "photons"][..],
                };
                for key in p.present() {
                    if unused.contains(&key) {
                        c.diags.push(format!("parameter `{key}` does not apply to state {kind:?}").to_lowercase());
                    }
                }
                if c.diags.is_empty() {
                    c.tail(state.build(cutoff));
                }
                Job::Wigner { state, cutoff, grid }
            }
            ScenarioKind::CatAtten => {
                let alpha = p.alpha.unwrap_or(DEFAULT_ALPHA);
                c.finite("alpha", alpha);
                let (name, mode) = resolve_mode(p, &mut c);
                r.alpha = Some(alpha);
                r.keep = Some(keep);
                r.mode = Some(name);
                r.eta = p.eta.filter(|_| name == ModeName::Efficiency);
                if c.diags.is_empty() {
                    c.tail(FockKet::even_cat(alpha, cutoff));
                }
                Job::CatAtten {
                    alpha,
                    keep,
                    mode,
                    cutoff,
                    grid,
                }
            }
            ScenarioKind::SmsvAtten => {
                let xi = resolve_xi(p, &mut c, 0.5 * DEFAULT_SMSV_S.ln());
                let (name, mode) = resolve_mode(p, &mut c);
                c.at_least("cutoff", cutoff, 2);
                r.xi = Some(xi);
                r.s = Some((2.0 * xi).exp());
                r.keep = Some(keep);
                r.mode = Some(name);
                r.eta = p.eta.filter(|_| name == ModeName::Efficiency);
                if c.diags.is_empty() {
                    c.tail(FockKet::smsv(xi, cutoff));
                }
                Job::SmsvAtten {
                    xi,
                    keep,
                    mode,
                    cutoff,
                    grid,
                }
            }
            ScenarioKind::MziSweep | ScenarioKind::EtaSweep => {
                let xi = resolve_xi(p, &mut c, DEFAULT_MZI_XI);
                let samples = p.samples.unwrap_or(DEFAULT_SAMPLES);
                c.at_least("samples", samples, 8);
                r.xi = Some(xi);
                r.keep = Some(keep);
                r.samples = Some(samples);
                let mut template = MziConfig {
                    xi,
                    keep,
                    phase_samples: samples,
                    cutoff,
                    ..MziConfig::default()
                };
                if c.diags.is_empty() {
                    c.tail(MultiModeKet::tmsv(xi, cutoff));
                }
                if kind == ScenarioKind::MziSweep {
                    let (name, mode) = resolve_mode(p, &mut c);
                    r.mode = Some(name);
                    r.eta = p.eta.filter(|_| name == ModeName::Efficiency);
                    template.resolution = mode;
                    Job::MziSweep(template)
                } else {
                    let etas = p.etas.clone().unwrap_or_else(|| DEFAULT_ETAS.to_vec());
                    if etas.is_empty() {
                        c.diags.push("etas is empty".into());
                    }
                    for &eta in &etas {
                        c.range("eta", eta, 0.0, 1.0);
                    }
                    r.etas = Some(etas.clone());
                    Job::EtaSweep { template, etas }
                }
            }
        };

        if !c.diags.is_empty() {
            return Err(RunError::Config(c.diags));
        }
        match c.numerical {
            Some(e) => Err(RunError::Compute(e)),
            None => Ok(Plan { resolved, job }),
        }
    }

    /// The config echoed into `summary.json`, defaults included.
    pub fn resolved(&self) -> &ScenarioConfig {
        &self.resolved
    }

    pub fn run(&self) -> Result<Artifacts, RunError> {
        let (results, mut files) = match &self.job {
            Job::Wigner { state, cutoff, grid } => run_wigner(state, *cutoff, grid)?,
            Job::CatAtten {
                alpha,
                keep,
                mode,
                cutoff,
                grid,
            } => run_cat(*alpha, *keep, mode, *cutoff, grid)?,
            Job::SmsvAtten {
                xi,
                keep,
                mode,
                cutoff,
                grid,
            } => run_smsv(*xi, *keep, mode, *cutoff, grid)?,
            Job::MziSweep(config) => run_mzi(config)?,
            Job::EtaSweep { template, etas } => run_eta(template, etas)?,
        };
        let summary = json!({
            "tool": "fock-atten",
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.resolved,
            "results": results,
        });
        let mut text = serde_json::to_string_pretty(&summary).map_err(Error::from)?;
        text.push('\n');
        files.push(("summary.json".into(), text.into_bytes()));
        let names: Vec<String> = files.iter().map(|(n, _)| n.clone()).collect();
        files.push(("plots.md".into(), plots_md(self.resolved.scenario, &names).into_bytes()));
        Ok(Artifacts { files })
    }
}

/// Validation diagnostics for a config; empty when it would run.
pub fn validate(config: &ScenarioConfig) -> Vec<String> {
    match Plan::resolve(config) {
        Ok(_) => Vec::new(),
        Err(RunError::Config(d)) => d,
        Err(RunError::Compute(e)) => vec![e.to_string()],
    }
}

/// Files produced by a run, in write order.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub files: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_slice())
    }

    pub fn summary(&self) -> Option<Value> {
        serde_json::from_slice(self.get("summary.json")?).ok()
    }

    /// Writes every file into `dir` (created if missing), each through a
    /// temporary file and rename.
    pub fn write(&self, dir: &Path) -> crate::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, bytes) in &self.files {
            write_atomic(&dir.join(name), bytes)?;
        }
        Ok(())
    }
}

/// Resolves, runs and writes a scenario.
pub fn run(config: &ScenarioConfig) -> Result<Artifacts, RunError> {
    let plan = Plan::resolve(config)?;
    let artifacts = plan.run()?;
    artifacts.write(&config.output)?;
    Ok(artifacts)
}

type Output = (Value, Vec<(String, Vec<u8>)>);

fn csv(w: &WignerGrid) -> Vec<u8> {
    w.to_csv().into_bytes()
}

fn grid_stats(w: &WignerGrid) -> Value {
    json!({
        "integral": w.integral(),
        "min": w.min(),
        "max": w.max(),
        "negativity": negativity_volume(w),
    })
}

fn run_wigner(state: &StateSpec, cutoff: usize, grid: &PhaseSpaceGrid) -> crate::Result<Output> {
    let ket = state.build(cutoff)?;
    let w = wigner_pure(&ket, grid)?;
    let mut stats = grid_stats(&w);
    stats["mean_photon_number"] = json!(ket.mean_photon_number());
    let gaussian = matches!(state, StateSpec::Vacuum | StateSpec::Smsv(_));
    stats["fit"] = if gaussian { json!(fit_gaussian(&w)?) } else { Value::Null };
    Ok((stats, vec![("wigner.csv".into(), csv(&w))]))
}

enum Attenuated {
    Pure(FockKet),
    Mixed(DensityOperator),
}

impl Attenuated {
    fn wigner(&self, grid: &PhaseSpaceGrid) -> crate::Result<WignerGrid> {
        match self {
            Attenuated::Pure(k) => wigner_pure(k, grid),
            Attenuated::Mixed(rho) => wigner_density(rho, grid),
        }
    }
}

fn attenuate(input: &FockKet, keep: f64, mode: &ArmResolution) -> crate::Result<(Attenuated, f64)> {
    let split = inject(input, &BeamSplitter::with_transmission(keep)?)?;
    Ok(match *mode {
        ArmResolution::Ordinary => (Attenuated::Mixed(trace_out(&split, 1)?), 1.0),
        ArmResolution::Heralded => {
            let out = herald_zero(&split)?;
            (Attenuated::Pure(out.state), out.probability)
        }
        ArmResolution::Efficiency { eta } => {
            let out = herald_noclick(&split, eta)?;
            (Attenuated::Mixed(out.state), out.probability)
        }
    })
}

fn run_cat(alpha: f64, keep: f64, mode: &ArmResolution, cutoff: usize, grid: &PhaseSpaceGrid) -> crate::Result<Output> {
    let input = FockKet::even_cat(alpha, cutoff)?;
    let (output, probability) = attenuate(&input, keep, mode)?;
    let w_in = wigner_pure(&input, grid)?;
    let w_out = output.wigner(grid)?;
    let mut results = json!({
        "herald_probability": probability,
        "input": grid_stats(&w_in),
        "output": grid_stats(&w_out),
    });
    if let Attenuated::Pure(ket) = &output {
        let reference = FockKet::even_cat(keep * alpha, cutoff)?;
        let w_ref = wigner_pure(&reference, grid)?;
        results["reference"] = json!({
            "alpha": keep * alpha,
            "overlap_sqr": ket.overlap(&reference)?.norm_sqr(),
            "max_abs_diff": w_out.max_abs_diff(&w_ref)?,
            "negativity": negativity_volume(&w_ref),
        });
    }
    Ok((
        results,
        vec![
            ("wigner_input.csv".into(), csv(&w_in)),
            ("wigner_output.csv".into(), csv(&w_out)),
        ],
    ))
}

/// Fit parameters after a 50-50-style loss with kept amplitude `keep` acting
/// on the squeezed vacuum of strength `xi`: V′ = κ²V + (1 − κ²)/2 per quadrature.
pub fn smsv_loss_prediction(xi: f64, keep: f64) -> GaussianFit {
    let k2 = keep * keep;
    let vx = k2 * 0.5 * (-2.0 * xi).exp() + (1.0 - k2) * 0.5;
    let vp = k2 * 0.5 * (2.0 * xi).exp() + (1.0 - k2) * 0.5;
    gaussian_from_variances(vx, vp)
}

/// Fit parameters after heralding zero lost photons: tanh ξ′ = κ² tanh ξ.
pub fn smsv_herald_prediction(xi: f64, keep: f64) -> GaussianFit {
    let xi_out = (keep * keep * xi.tanh()).atanh();
    gaussian_from_variances(0.5 * (-2.0 * xi_out).exp(), 0.5 * (2.0 * xi_out).exp())
}

fn gaussian_from_variances(vx: f64, vp: f64) -> GaussianFit {
    let sigma = (vx * vp).powf(0.25);
    GaussianFit {
        amplitude: 1.0 / (2.0 * std::f64::consts::PI * sigma * sigma),
        s: (vp / vx).sqrt(),
        sigma,
    }
}

fn run_smsv(xi: f64, keep: f64, mode: &ArmResolution, cutoff: usize, grid: &PhaseSpaceGrid) -> crate::Result<Output> {
    let input = FockKet::smsv(xi, cutoff)?;
    let (output, probability) = attenuate(&input, keep, mode)?;
    let w_in = wigner_pure(&input, grid)?;
    let w_out = output.wigner(grid)?;
    let predicted = match mode {
        ArmResolution::Ordinary => json!(smsv_loss_prediction(xi, keep)),
        ArmResolution::Heralded => json!(smsv_herald_prediction(xi, keep)),
        ArmResolution::Efficiency { .. } => Value::Null,
    };
    let mut out_stats = grid_stats(&w_out);
    out_stats["fit"] = json!(fit_gaussian(&w_out)?);
    out_stats["predicted_fit"] = predicted;
    let mut in_stats = grid_stats(&w_in);
    in_stats["fit"] = json!(fit_gaussian(&w_in)?);
    Ok((
        json!({
            "herald_probability": probability,
            "input": in_stats,
            "output": out_stats,
        }),
        vec![
            ("wigner_input.csv".into(), csv(&w_in)),
            ("wigner_output.csv".into(), csv(&w_out)),
        ],
    ))
}

fn run_mzi(config: &MziConfig) -> crate::Result<Output> {
    let mzi = Interferometer::new(config.clone())?;
    let curve = mzi.sweep()?;
    let p = curve.probability();
    Ok((
        json!({
            "herald_probability": mzi.herald_probability(),
            "visibility": visibility(&curve)?,
            "p_max": p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            "p_min": p.iter().copied().fold(f64::INFINITY, f64::min),
        }),
        vec![("curve.csv".into(), curve.to_csv().into_bytes())],
    ))
}

fn run_eta(template: &MziConfig, etas: &[f64]) -> crate::Result<Output> {
    let table = visibility_vs_efficiency(template, etas)?;
    let ordinary = visibility(&Interferometer::new(template.with_resolution(ArmResolution::Ordinary))?.sweep()?)?;
    let mut buf = Vec::new();
    write_efficiency_csv(&table, &mut buf)?;
    let rows: Vec<Value> = table
        .iter()
        .map(|r| {
            json!({
                "eta": r.eta,
                "visibility": r.visibility,
                "herald_probability": r.herald_probability,
            })
        })
        .collect();
    Ok((
        json!({ "efficiency": rows, "ordinary_visibility": ordinary }),
        vec![("efficiency.csv".into(), buf)],
    ))
}

fn plots_md(kind: ScenarioKind, files: &[String]) -> String {
    let mut out = format!("# {kind} output\n\n");
    out.push_str("All CSV values use `%.12e` formatting. Run parameters and derived numbers are in `summary.json`.\n\n");
    for name in files {
        let line = match name.as_str() {
            "wigner.csv" => {
                "Wigner distribution W(x, p). Columns `x,p,w`, x outer and p inner. Plot w as a surface or heat map over the (x, p) grid."
            }
            "wigner_input.csv" => {
                "Wigner distribution of the state before attenuation. Columns `x,p,w`; plot as a surface over (x, p)."
            }
            "wigner_output.csv" => {
                "Wigner distribution after attenuation, conditioned on the accepted herald outcome. Columns `x,p,w`. Compare against `wigner_input.csv` on the same axes; the interference fringes near the origin show how much coherence survives."
            }
            "curve.csv" => {
                "Coincidence probability against the phase shift. Columns `phi,p_coincidence`, φ uniform on [0, 2π). Plot as a line; the visibility in `summary.json` is (max − min)/(max + min) of this curve."
            }
            "efficiency.csv" => {
                "Fringe visibility against detector efficiency. Columns `eta,visibility`. Plot as points joined by a line."
            }
            "summary.json" => {
                "Resolved configuration (defaults included), tool version, herald probabilities and the derived scalars."
            }
            _ => continue,
        };
        out.push_str(&format!("- `{name}`: {line}\n"));
    }
    out
}
