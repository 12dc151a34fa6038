use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::counting::suites::Suite;
use crate::error::{Error, Result};
use crate::manybody::ScalingMode;
use crate::scattering::RadialProfile;
use crate::spinor::{FieldForm, Grid, MatrixPotential, RabiParams, SpatialForm};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    pub scenario: Scenario,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario {
    Rabi(RabiScenario),
    GpRun(GpRunScenario),
    ScatteringSweep(ScatteringSweepScenario),
    ConvergenceTrend(ConvergenceTrendScenario),
    LemmaSuite(LemmaSuiteScenario),
    ProtocolDemo(ProtocolDemoScenario),
}

impl Scenario {
    pub const KINDS: [&'static str; 6] =
        ["rabi", "gp_run", "scattering_sweep", "convergence_trend", "lemma_suite", "protocol_demo"];

    /// The scenario of the given kind with every parameter at its default.
    pub fn default_for(kind: &str) -> Option<Self> {
        Some(match kind {
            "rabi" => Scenario::Rabi(RabiScenario::default()),
            "gp_run" => Scenario::GpRun(GpRunScenario::default()),
            "scattering_sweep" => Scenario::ScatteringSweep(ScatteringSweepScenario::default()),
            "convergence_trend" => Scenario::ConvergenceTrend(ConvergenceTrendScenario::default()),
            "lemma_suite" => Scenario::LemmaSuite(LemmaSuiteScenario::default()),
            "protocol_demo" => Scenario::ProtocolDemo(ProtocolDemoScenario::default()),
            _ => return None,
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::Rabi(_) => "rabi",
            Scenario::GpRun(_) => "gp_run",
            Scenario::ScatteringSweep(_) => "scattering_sweep",
            Scenario::ConvergenceTrend(_) => "convergence_trend",
            Scenario::LemmaSuite(_) => "lemma_suite",
            Scenario::ProtocolDemo(_) => "protocol_demo",
        }
    }
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self { schema_version: SCHEMA_VERSION, seed: 0, output_dir: default_output_dir(), scenario }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match &self.scenario {
            Scenario::Rabi(s) => s.validate(),
            Scenario::GpRun(s) => s.validate(),
            Scenario::ScatteringSweep(s) => s.validate(),
            Scenario::ConvergenceTrend(s) => s.validate(),
            Scenario::LemmaSuite(s) => s.validate(),
            Scenario::ProtocolDemo(s) => s.validate(),
        }
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {x}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dim: usize,
    pub points: usize,
    pub length: f64,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Grid::cubic(self.dim, self.points, self.length)
    }
}

/// Initial spinor `(√p · φ, √(1−p) · φ)` before normalization, `p = up_fraction`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Uniform {
        #[serde(default = "one")]
        up_fraction: f64,
    },
    Gaussian {
        width: f64,
        #[serde(default)]
        center: Vec<f64>,
        #[serde(default = "one")]
        up_fraction: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl InitialState {
    pub fn validate(&self) -> Result<()> {
        let p = match self {
            InitialState::Uniform { up_fraction } => *up_fraction,
            InitialState::Gaussian { width, up_fraction, .. } => {
                positive("gaussian width", *width)?;
                *up_fraction
            }
        };
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!("up_fraction must lie in [0, 1], got {p}")));
        }
        Ok(())
    }
}

/// Uniform resonant drive on a small periodic box with no trap and no
/// interaction, so the orbital stays uniform and only the spin rotates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RabiScenario {
    pub points: usize,
    pub length: f64,
    pub omega_rabi: f64,
    pub omega_drive: f64,
    pub t_end: f64,
    pub steps: usize,
    pub record_every: usize,
    pub tolerance: f64,
}

impl Default for RabiScenario {
    fn default() -> Self {
        Self {
            points: 8,
            length: 1.0,
            omega_rabi: 1.0,
            omega_drive: 2.0,
            t_end: 2.0 * PI,
            steps: 1 << 17,
            record_every: 512,
            tolerance: 1e-8,
        }
    }
}

impl RabiScenario {
    fn validate(&self) -> Result<()> {
        positive("length", self.length)?;
        positive("t_end", self.t_end)?;
        positive("tolerance", self.tolerance)?;
        if !(self.omega_rabi >= 0.0 && self.omega_drive >= 0.0) {
            return Err(Error::Config("Rabi and drive frequencies must be nonnegative".into()));
        }
        if self.steps == 0 || self.record_every == 0 {
            return Err(Error::Config("steps and record_every must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GpRunScenario {
    pub grid: GridSpec,
    pub initial: InitialState,
    pub potential: MatrixPotential,
    pub scattering_length: f64,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    /// Also run at `dt/2` and `dt/4` and report the successive-difference ratio.
    pub richardson: bool,
    pub write_snapshot: bool,
}

impl Default for GpRunScenario {
    fn default() -> Self {
        let potential = MatrixPotential { b1: FieldForm::constant(0.3), ..MatrixPotential::zero() }.with_traps(
            SpatialForm::Harmonic { strength: 0.25, center: vec![] },
            SpatialForm::Harmonic { strength: 0.25, center: vec![0.5] },
        );
        Self {
            grid: GridSpec { dim: 1, points: 128, length: 24.0 },
            initial: InitialState::Gaussian { width: 1.4, center: vec![], up_fraction: 1.0 },
            potential,
            scattering_length: 0.05,
            dt: 1e-3,
            t_end: 10.0,
            record_every: 100,
            richardson: true,
            write_snapshot: true,
        }
    }
}

impl GpRunScenario {
    fn validate(&self) -> Result<()> {
        self.grid.build()?;
        self.initial.validate()?;
        if !(self.scattering_length >= 0.0) {
            return Err(Error::Config("scattering length must be nonnegative".into()));
        }
        if self.record_every == 0 {
            return Err(Error::Config("record_every must be at least 1".into()));
        }
        positive("dt", self.dt)?;
        positive("t_end", self.t_end)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScatteringSweepScenario {
    pub base: RadialProfile,
    pub betas: Vec<f64>,
    pub n_values: Vec<u64>,
    /// `(height, radius)` square wells checked against the closed form.
    pub wells: Vec<[f64; 2]>,
    /// `N` values for the `a_N · N / a` scaling check.
    pub scaling_n: Vec<u64>,
}

impl Default for ScatteringSweepScenario {
    fn default() -> Self {
        Self {
            base: RadialProfile::SquareWell { height: 2.0, radius: 1.0 },
            betas: vec![0.4],
            n_values: vec![100, 1_000, 10_000, 100_000],
            wells: vec![[0.5, 1.0], [2.0, 1.0], [8.0, 0.5]],
            scaling_n: vec![2, 10, 100],
        }
    }
}

impl ScatteringSweepScenario {
    fn validate(&self) -> Result<()> {
        if self.betas.iter().any(|b| !(*b > 0.0 && *b < 1.0)) {
            return Err(Error::Config("every β must lie in (0, 1)".into()));
        }
        if self.n_values.len() < 2 {
            return Err(Error::Config("a slope fit needs at least two N values".into()));
        }
        if self.n_values.iter().chain(&self.scaling_n).any(|&n| n == 0) {
            return Err(Error::Config("N must be positive".into()));
        }
        for [h, r] in &self.wells {
            positive("well height", *h)?;
            positive("well radius", *r)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum LatticeInitial {
    /// Gaussian amplitudes drawn from the experiment seed.
    Random,
    /// `[re, im]` pairs, up block then down block; normalized on use.
    Amplitudes { values: Vec<[f64; 2]> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergyIdentitySpec {
    pub n: usize,
    pub t: f64,
    pub deltas: Vec<f64>,
    pub substeps: usize,
}

impl Default for EnergyIdentitySpec {
    fn default() -> Self {
        Self { n: 4, t: 0.5, deltas: vec![0.04, 0.02, 0.01], substeps: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceTrendScenario {
    pub sites: usize,
    pub spacing: f64,
    pub hopping: f64,
    pub potential: MatrixPotential,
    pub pair_by_distance: Vec<f64>,
    pub scaling: ScalingMode,
    pub n_values: Vec<usize>,
    pub sample_times: Vec<f64>,
    pub dt: f64,
    pub hartree_dt: f64,
    pub initial: LatticeInitial,
    /// Required upper bound on the fitted exponent of `α̃_N` at the last time.
    pub max_slope: f64,
    pub energy_identity: Option<EnergyIdentitySpec>,
}

impl Default for ConvergenceTrendScenario {
    fn default() -> Self {
        Self {
            sites: 4,
            spacing: 1.0,
            hopping: 1.0,
            potential: MatrixPotential::rabi_drive(RabiParams::resonant(1.0, 1.0)),
            pair_by_distance: vec![1.0, 0.5, 0.25],
            scaling: ScalingMode::MeanField,
            n_values: vec![2, 3, 4, 5, 6, 8],
            sample_times: vec![0.25, 0.5, 0.75, 1.0],
            dt: 0.01,
            hartree_dt: 1e-3,
            initial: LatticeInitial::Random,
            max_slope: -0.7,
            energy_identity: Some(EnergyIdentitySpec::default()),
        }
    }
}

impl ConvergenceTrendScenario {
    fn validate(&self) -> Result<()> {
        positive("dt", self.dt)?;
        positive("hartree_dt", self.hartree_dt)?;
        if self.n_values.len() < 2 || self.n_values.iter().any(|&n| n < 2) {
            return Err(Error::Config("need at least two particle numbers, each ≥ 2".into()));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("particle numbers must increase".into()));
        }
        if self.sample_times.is_empty()
            || self.sample_times[0] <= 0.0
            || self.sample_times.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::Config("sample times must be positive and increasing".into()));
        }
        if self.pair_by_distance.iter().any(|v| *v < 0.0) {
            return Err(Error::Config("the pair potential must be nonnegative".into()));
        }
        if let LatticeInitial::Amplitudes { values } = &self.initial {
            if values.len() != 2 * self.sites {
                return Err(Error::Structural(format!("initial orbital needs {} amplitudes", 2 * self.sites)));
            }
        }
        if let Some(e) = &self.energy_identity {
            if e.n < 2 || e.substeps == 0 || e.deltas.len() < 2 || e.t <= 0.0 {
                return Err(Error::Config("energy identity needs N ≥ 2, t > 0, two offsets and a substep".into()));
            }
            if e.deltas.iter().any(|d| !(*d > 0.0 && *d < e.t)) {
                return Err(Error::Config("energy identity offsets must lie in (0, t)".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmaSuiteScenario {
    pub suites: Vec<Suite>,
    pub cases: usize,
    pub xi: f64,
    pub beta: f64,
}

impl Default for LemmaSuiteScenario {
    fn default() -> Self {
        let o = crate::counting::suites::SuiteOptions::default();
        Self { suites: Suite::ALL.to_vec(), cases: o.cases, xi: o.xi, beta: o.beta }
    }
}

impl LemmaSuiteScenario {
    fn validate(&self) -> Result<()> {
        if self.suites.is_empty() || self.cases == 0 {
            return Err(Error::Config("need at least one suite and one case".into()));
        }
        if !(self.xi > 0.0 && self.xi < 0.5) {
            return Err(Error::Config(format!("ξ must lie in (0, 1/2), got {}", self.xi)));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::Config(format!("β must lie in (0, 1), got {}", self.beta)));
        }
        Ok(())
    }
}

/// Laboratory frequencies and pulse length mapped to solver units with the
/// Rabi frequency as the unit of inverse time. The drive frequency only
/// enters through the resonance condition, so it is replaced by
/// `drive_solver`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolDemoScenario {
    pub grid: GridSpec,
    pub initial: InitialState,
    pub trap_strength: f64,
    pub scattering_length: f64,
    pub rabi_hz: f64,
    pub drive_hz: f64,
    pub drive_solver: f64,
    pub pulse_us: f64,
    pub max_dt: f64,
}

impl Default for ProtocolDemoScenario {
    fn default() -> Self {
        Self {
            grid: GridSpec { dim: 1, points: 128, length: 24.0 },
            initial: InitialState::Gaussian { width: 1.4, center: vec![], up_fraction: 1.0 },
            trap_strength: 0.25,
            scattering_length: 0.0,
            rabi_hz: 625.0,
            drive_hz: 6.8e9,
            drive_solver: 4.0,
            pulse_us: 200.0,
            max_dt: 1e-3,
        }
    }
}

impl ProtocolDemoScenario {
    fn validate(&self) -> Result<()> {
        self.grid.build()?;
        self.initial.validate()?;
        positive("rabi_hz", self.rabi_hz)?;
        positive("drive_hz", self.drive_hz)?;
        positive("drive_solver", self.drive_solver)?;
        positive("pulse_us", self.pulse_us)?;
        positive("max_dt", self.max_dt)?;
        if !(self.trap_strength >= 0.0 && self.scattering_length >= 0.0) {
            return Err(Error::Config("trap strength and scattering length must be nonnegative".into()));
        }
        Ok(())
    }

    /// Seconds per solver time unit, `1 / (2π · rabi_hz)`.
    pub fn time_unit_seconds(&self) -> f64 {
        1.0 / (2.0 * PI * self.rabi_hz)
    }

    pub fn pulse_solver(&self) -> f64 {
        self.pulse_us * 1e-6 / self.time_unit_seconds()
    }
}
