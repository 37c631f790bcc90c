//! TOML run configuration. See the README for the full schema.

use std::path::Path;

use serde::{Deserialize, Serialize};

use fracqm::foxh::SeriesControl;
use fracqm::spectra::Model;
use fracqm::{FqmParams, Grid1D, Potential, Regularization};

use super::error::CliError;

/// A scalar or a list; lists turn into sweeps.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub params: Option<ParamsConfig>,
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub series: SeriesControl,
    #[serde(default)]
    pub regularization: Regularization,
    pub potential: Option<Potential>,
    pub evolve: Option<EvolveConfig>,
    pub kernel: Option<KernelConfig>,
    pub spectra: Option<SpectraConfig>,
    pub eigen: Option<EigenConfig>,
    pub statmech: Option<StatmechConfig>,
    pub validate: Option<ValidateConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub alpha: OneOrMany<f64>,
    #[serde(default = "one")]
    pub d_alpha: f64,
    #[serde(default = "one")]
    pub hbar: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_points: usize,
    pub length: f64,
    #[serde(default)]
    pub x_center: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvolveMethod {
    Spectral,
    SplitStep,
    Kernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Gaussian {
        #[serde(default)]
        x0: f64,
        sigma: f64,
        #[serde(default)]
        p0: f64,
    },
    /// FFT mode index k.
    PlaneWave { k: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    #[serde(default = "spectral")]
    pub method: EvolveMethod,
    /// Final time; a list sweeps.
    pub t: OneOrMany<f64>,
    /// Frames after the initial one.
    #[serde(default = "ten")]
    pub n_frames: usize,
    /// Split-step count over the whole run; must be a multiple of n_frames.
    #[serde(default = "thousand")]
    pub n_steps: usize,
    pub initial: InitialState,
}

fn spectral() -> EvolveMethod {
    EvolveMethod::Spectral
}
fn ten() -> usize {
    10
}
fn thousand() -> usize {
    1000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// Free propagator K(x, t).
    Time,
    /// Free density matrix rho(x, beta).
    Thermal,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Samples {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Samples {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n).map(|k| self.min + k as f64 * h).collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    #[serde(default = "time_kind")]
    pub kind: KernelKind,
    /// t for `time`, beta for `thermal`; a list sweeps.
    pub at: OneOrMany<f64>,
    pub x: Samples,
}

fn time_kind() -> KernelKind {
    KernelKind::Time
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectraConfig {
    #[serde(default = "five")]
    pub n_max: u32,
    pub models: Vec<Model>,
}

fn five() -> u32 {
    5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    Dense,
    ImaginaryTime,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenConfig {
    #[serde(default = "dense")]
    pub method: EigenMethod,
    #[serde(default = "five_usize")]
    pub k: usize,
    /// Also write eigenfunctions as CSV.
    #[serde(default)]
    pub states: bool,
    /// Imaginary-time settings.
    #[serde(default = "beta_max")]
    pub beta_max: f64,
    #[serde(default = "steps")]
    pub n_steps: usize,
}

fn dense() -> EigenMethod {
    EigenMethod::Dense
}
fn five_usize() -> usize {
    5
}
fn beta_max() -> f64 {
    30.0
}
fn steps() -> usize {
    30_000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatmechConfig {
    pub beta: OneOrMany<f64>,
    /// Bloch steps per unit beta.
    #[serde(default = "steps_per_beta")]
    pub steps_per_beta: f64,
    /// Also write the density-matrix diagonal as CSV.
    #[serde(default)]
    pub diagonal: bool,
}

fn steps_per_beta() -> f64 {
    200.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    #[serde(default = "all_criteria")]
    pub criteria: Vec<u32>,
}

fn all_criteria() -> Vec<u32> {
    fracqm::validation::CRITERIA.iter().map(|c| c.0).collect()
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self { criteria: all_criteria() }
    }
}

pub fn load(path: &Path) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Config, CliError> {
    let de = toml::Deserializer::parse(text).map_err(|e| CliError::Schema { path: String::new(), message: e.to_string() })?;
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
        path: e.path().to_string(),
        message: e.inner().message().to_string(),
    })
}

impl Config {
    /// Every alpha in the sweep, validated together with D and hbar.
    pub fn params(&self) -> Result<Vec<FqmParams>, CliError> {
        let params = self.params.as_ref().ok_or_else(|| CliError::missing("params"))?;
        let alphas = params.alpha.values();
        if alphas.is_empty() {
            return Err(CliError::domain("params.alpha", "empty sweep"));
        }
        alphas
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                FqmParams::new(a, params.d_alpha, params.hbar).map_err(|e| {
                    let path = match (&params.alpha, e.field()) {
                        (OneOrMany::Many(_), Some("alpha")) => format!("params.alpha[{i}]"),
                        (_, Some(f)) => format!("params.{f}"),
                        (_, None) => "params".into(),
                    };
                    CliError::domain(path, e.to_string())
                })
            })
            .collect()
    }

    pub fn grid(&self) -> Result<Grid1D, CliError> {
        let g = self.grid.ok_or_else(|| CliError::missing("grid"))?;
        Grid1D::new(g.n_points, g.length, g.x_center).map_err(|e| CliError::domain("grid", e.to_string()))
    }

    pub fn potential(&self) -> Result<Potential, CliError> {
        let v = self.potential.clone().unwrap_or(Potential::Free);
        v.validate().map_err(|e| CliError::domain(field_path("potential", &e), e.to_string()))?;
        Ok(v)
    }

    pub fn series(&self) -> Result<SeriesControl, CliError> {
        self.series.validate().map_err(|e| CliError::domain(field_path("series", &e), e.to_string()))?;
        Ok(self.series)
    }
}

pub fn field_path(section: &str, e: &fracqm::FqmError) -> String {
    match e.field() {
        Some(f) => format!("{section}.{f}"),
        None => section.to_string(),
    }
}
