//! Scenario files.
//!
//! A scenario is a TOML document with `[system]`, `[[baths]]`, `[options]`,
//! `[run]` and `[output]` sections plus top-level `variants` and
//! `observables` lists. See `presets/*.toml` for annotated examples.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qpair::bath::{Attachment, BathSpec, SpectralDensity};
use qpair::dynamics::{DensityMatrix, Observable};
use qpair::liouvillian::{BuildOptions, SecularPolicy, Variant};
use qpair::ops::{Op, C64};
use qpair::system::{CouplingKind, QubitPairSpec};
use qpair::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub system: SystemConfig,
    pub baths: Vec<BathConfig>,
    pub variants: Vec<Variant>,
    #[serde(default)]
    pub observables: Vec<Observable>,
    #[serde(default)]
    pub options: OptionsConfig,
    #[serde(default)]
    pub initial_state: InitialState,
    pub run: RunConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Second qubit frequency in units of the first; `omega_- = 1 - omega2`.
    pub omega2: f64,
    #[serde(default = "no_coupling")]
    pub coupling: CouplingKind,
}

fn no_coupling() -> CouplingKind {
    CouplingKind::IsingXx { lambda: 0.0 }
}

impl SystemConfig {
    pub fn spec(&self) -> Result<QubitPairSpec> {
        QubitPairSpec::new(self.omega2, self.coupling)
    }
}

/// One bath. Effective couplings are `weight * mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub attachment: Attachment,
    pub beta: f64,
    #[serde(default = "default_cutoff")]
    pub cutoff: f64,
    #[serde(default = "default_mu")]
    pub mu: f64,
    #[serde(default)]
    pub gx: [f64; 2],
    #[serde(default)]
    pub gz: [f64; 2],
    #[serde(default)]
    pub split: bool,
}

fn default_cutoff() -> f64 {
    20.0
}

fn default_mu() -> f64 {
    1e-2
}

impl BathConfig {
    pub fn spec(&self) -> BathSpec {
        BathSpec::new(self.attachment, self.beta, SpectralDensity::ohmic(self.cutoff), self.mu)
            .with_dissipation(self.gx)
            .with_dephasing(self.gz)
            .split(self.split)
    }
}

/// Secular rule for the partial variants, written `full`, `paper` or
/// `threshold:EPS`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SecularRule(pub SecularPolicy);

impl Default for SecularRule {
    fn default() -> Self {
        SecularRule(SecularPolicy::PaperGroups)
    }
}

impl FromStr for SecularRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let policy = match s {
            "full" => SecularPolicy::Full,
            "paper" => SecularPolicy::PaperGroups,
            _ => {
                let eps = s
                    .strip_prefix("threshold:")
                    .and_then(|e| e.parse::<f64>().ok())
                    .filter(|e| e.is_finite() && *e >= 0.0)
                    .ok_or_else(|| Error::Config(format!("unknown secular rule `{s}` (full, paper, threshold:EPS)")))?;
                SecularPolicy::Threshold { epsilon: eps }
            }
        };
        Ok(SecularRule(policy))
    }
}

impl TryFrom<String> for SecularRule {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SecularRule> for String {
    fn from(r: SecularRule) -> String {
        r.to_string()
    }
}

impl fmt::Display for SecularRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            SecularPolicy::Full => f.write_str("full"),
            SecularPolicy::PaperGroups => f.write_str("paper"),
            SecularPolicy::Threshold { epsilon } => write!(f, "threshold:{epsilon}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsConfig {
    #[serde(default = "yes")]
    pub lamb_shift: bool,
    #[serde(default)]
    pub secular: SecularRule,
    #[serde(default)]
    pub override_validity_guard: bool,
    #[serde(default)]
    pub strict_local: bool,
}

fn yes() -> bool {
    true
}

impl Default for OptionsConfig {
    fn default() -> Self {
        OptionsConfig {
            lamb_shift: true,
            secular: SecularRule::default(),
            override_validity_guard: false,
            strict_local: false,
        }
    }
}

impl OptionsConfig {
    pub fn build_options(&self) -> BuildOptions {
        BuildOptions {
            lamb_shift: self.lamb_shift,
            partial_rule: self.secular.0,
            strict_local: self.strict_local,
            override_validity_guard: self.override_validity_guard,
            ..Default::default()
        }
    }
}

/// Initial state: a named state or an explicit matrix in the basis
/// `{|11>, |10>, |01>, |00>}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Named(NamedState),
    Matrix {
        re: [[f64; 4]; 4],
        #[serde(default)]
        im: [[f64; 4]; 4],
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedState {
    /// `rho_OV (x) rho_OV` with `rho_OV = |+><+|`.
    Overlapped,
    MaximallyMixed,
    /// `|00>`.
    Ground,
    /// `|11>`.
    Excited,
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Named(NamedState::Overlapped)
    }
}

impl InitialState {
    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        match self {
            InitialState::Named(NamedState::Overlapped) => Ok(DensityMatrix::overlapped()),
            InitialState::Named(NamedState::MaximallyMixed) => Ok(DensityMatrix::maximally_mixed()),
            InitialState::Named(NamedState::Ground) => Self::projector(3),
            InitialState::Named(NamedState::Excited) => Self::projector(0),
            InitialState::Matrix { re, im } => {
                let m = Op::from_fn(|i, j| C64::new(re[i][j], im[i][j]));
                DensityMatrix::new(m)
            }
        }
    }

    fn projector(k: usize) -> Result<DensityMatrix> {
        let mut m = Op::zeros();
        m[(k, k)] = C64::new(1.0, 0.0);
        DensityMatrix::new(m)
    }
}

/// What to compute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum RunConfig {
    /// Time evolution on the grid `0, dt, ..., t_max`.
    Trajectory {
        t_max: f64,
        dt: f64,
        /// Pairs `[reference, other]` whose fidelity is tabulated.
        #[serde(default)]
        fidelity: Vec<[Variant; 2]>,
        /// Amplitude spectrum of this observable per variant.
        #[serde(default)]
        spectrum: Option<Observable>,
        #[serde(default)]
        synchronization: Option<SyncConfig>,
    },
    /// Steady states as one system parameter varies.
    SteadySweep {
        #[serde(default)]
        parameter: SweepParameter,
        grid: Grid,
        #[serde(default)]
        fidelity: Vec<[Variant; 2]>,
    },
    /// Steady-state heat currents as one system parameter varies.
    HeatSweep {
        #[serde(default)]
        parameter: SweepParameter,
        grid: Grid,
    },
    /// Steady-state fidelity against a reference variant over a
    /// `(omega_-, lambda)` grid.
    ValidityScan {
        lambda: Grid,
        omega_minus: Grid,
        #[serde(default = "default_reference")]
        reference: Variant,
        #[serde(default = "default_threshold")]
        threshold: f64,
    },
}

fn default_reference() -> Variant {
    Variant::GP
}

fn default_threshold() -> f64 {
    0.999
}

impl RunConfig {
    pub fn mode(&self) -> &'static str {
        match self {
            RunConfig::Trajectory { .. } => "trajectory",
            RunConfig::SteadySweep { .. } => "steady_sweep",
            RunConfig::HeatSweep { .. } => "heat_sweep",
            RunConfig::ValidityScan { .. } => "validity_scan",
        }
    }
}

/// Sliding-window correlation between two observables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyncConfig {
    /// Window length; defaults to five beat periods `10 pi / omega_-`.
    #[serde(default)]
    pub window: Option<f64>,
    #[serde(default = "sx1")]
    pub a: Observable,
    #[serde(default = "sx2")]
    pub b: Observable,
}

fn sx1() -> Observable {
    Observable::Sx1
}

fn sx2() -> Observable {
    Observable::Sx2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// The main coupling constant (`lx` for Heisenberg).
    #[default]
    Lambda,
    Omega2,
    OmegaMinus,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::Lambda => "lambda",
            SweepParameter::Omega2 => "omega2",
            SweepParameter::OmegaMinus => "omega_minus",
        }
    }

    pub fn apply(&self, system: &SystemConfig, value: f64) -> Result<QubitPairSpec> {
        match self {
            SweepParameter::Lambda => QubitPairSpec::new(system.omega2, system.coupling.with_lambda(value)),
            SweepParameter::Omega2 => QubitPairSpec::new(value, system.coupling),
            SweepParameter::OmegaMinus => QubitPairSpec::new(1.0 - value, system.coupling),
        }
    }
}

/// A strictly monotone list of parameter values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Grid {
    /// `points` values evenly spaced in `log10` from `start` to `stop`.
    Log { start: f64, stop: f64, points: usize },
    Linear { start: f64, stop: f64, points: usize },
    Values(Vec<f64>),
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let spaced = |a: f64, b: f64, n: usize| -> Vec<f64> {
            match n {
                0 => vec![],
                1 => vec![a],
                _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
            }
        };
        match self {
            Grid::Log { start, stop, points } => spaced(start.log10(), stop.log10(), *points)
                .into_iter()
                .map(|e| 10f64.powf(e))
                .collect(),
            Grid::Linear { start, stop, points } => spaced(*start, *stop, *points),
            Grid::Values(v) => v.clone(),
        }
    }

    pub fn is_log(&self) -> bool {
        matches!(self, Grid::Log { .. })
    }

    fn validate(&self, what: &str) -> Result<()> {
        if let Grid::Log { start, stop, .. } = self {
            if !(*start > 0.0 && *stop > 0.0) {
                return Err(Error::Config(format!("{what}: log grid bounds must be positive")));
            }
        }
        let v = self.values();
        if v.is_empty() {
            return Err(Error::Config(format!("{what}: grid is empty")));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config(format!("{what}: grid values must be finite")));
        }
        let up = v.windows(2).all(|w| w[1] > w[0]);
        let down = v.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(Error::Config(format!("{what}: grid is not strictly monotone")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::Config(format!("unknown format `{other}` (csv, json, svg)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Defaults to `out/<name>`.
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv]
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: None,
            formats: default_formats(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn spec(&self) -> Result<QubitPairSpec> {
        self.system.spec()
    }

    pub fn baths(&self) -> Vec<BathSpec> {
        self.baths.iter().map(BathConfig::spec).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.variants.is_empty() {
            return Err(Error::Config("at least one variant is required".into()));
        }
        for (k, v) in self.variants.iter().enumerate() {
            if self.variants[..k].contains(v) {
                return Err(Error::Config(format!("variant {v} is listed twice")));
            }
        }
        if self.baths.is_empty() {
            return Err(Error::Config("at least one bath is required".into()));
        }
        self.spec()?;
        for b in self.baths() {
            b.validate()?;
        }
        self.initial_state.density_matrix()?;
        let listed = |pairs: &[[Variant; 2]]| -> Result<()> {
            for [a, b] in pairs {
                for v in [a, b] {
                    if !self.variants.contains(v) {
                        return Err(Error::Config(format!("fidelity pair uses {v}, which is not in `variants`")));
                    }
                }
            }
            Ok(())
        };
        match &self.run {
            RunConfig::Trajectory {
                t_max,
                dt,
                fidelity,
                synchronization,
                ..
            } => {
                if !(*dt > 0.0 && t_max.is_finite() && *t_max >= 3.0 * dt) {
                    return Err(Error::Config(format!(
                        "trajectory needs dt > 0 and t_max >= 3 dt (got t_max = {t_max}, dt = {dt})"
                    )));
                }
                listed(fidelity)?;
                if let Some(SyncConfig { window: None, .. }) = synchronization {
                    if self.system.omega2 >= 1.0 {
                        return Err(Error::Config(
                            "synchronization window must be given explicitly when omega_- = 0".into(),
                        ));
                    }
                }
            }
            RunConfig::SteadySweep {
                parameter,
                grid,
                fidelity,
            } => {
                grid.validate(parameter.name())?;
                listed(fidelity)?;
            }
            RunConfig::HeatSweep { parameter, grid } => grid.validate(parameter.name())?,
            RunConfig::ValidityScan {
                lambda,
                omega_minus,
                reference,
                threshold,
            } => {
                lambda.validate("lambda")?;
                omega_minus.validate("omega_minus")?;
                if !self.variants.contains(reference) {
                    return Err(Error::Config(format!("reference {reference} is not in `variants`")));
                }
                if !(0.0..=1.0).contains(threshold) {
                    return Err(Error::Config(format!("threshold must lie in [0, 1], got {threshold}")));
                }
            }
        }
        if self.output.formats.is_empty() {
            return Err(Error::Config("at least one output format is required".into()));
        }
        Ok(())
    }
}
