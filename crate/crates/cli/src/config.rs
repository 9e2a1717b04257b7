//! Strict JSON configuration blocks. Unknown keys are errors.

use crate::failure::BadConfig;
use anyhow::{Context, Result};
use cylnlw::admissibility::{G2Variant, ScanSpec};
use cylnlw::diagnostics::{DataSet, EmbeddingSpec, StrichartzSpec};
use cylnlw::random::{Flavor, TailFunctional};
use cylnlw::solver::SolverConfig;
use cylnlw::{build_modes, ModeSet};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).map_err(|e| BadConfig(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

fn default_dealias() -> f64 {
    2.0
}

fn default_flavor() -> Flavor {
    Flavor::ComplexHalfwave
}

fn default_amplitude() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZerosConfig {
    pub n_max: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    pub n_max: usize,
    pub nprime_max: usize,
    #[serde(default)]
    pub z_max: Option<f64>,
}

impl Truncation {
    pub fn build(&self) -> cylnlw::Result<ModeSet> {
        build_modes(self.n_max, self.nprime_max, self.z_max)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesConfig {
    pub n_max: usize,
    pub nprime_max: usize,
    #[serde(default)]
    pub z_max: Option<f64>,
    /// Histogram of `⌊z⌋` up to this bound over a covering mode set.
    #[serde(default)]
    pub k_max: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub alpha: f64,
    #[serde(default = "default_flavor")]
    pub flavor: Flavor,
    /// Modes with `z` below this are zero.
    #[serde(default)]
    pub min_z: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub modes: Truncation,
    pub ensemble: EnsembleConfig,
    pub count: usize,
    /// Sobolev exponents reported per sample.
    #[serde(default = "default_sobolev")]
    pub s: Vec<f64>,
    /// Also write every half-wave sample as a binary snapshot.
    #[serde(default)]
    pub snapshots: bool,
}

fn default_sobolev() -> Vec<f64> {
    vec![0.0]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailsConfig {
    pub modes: Truncation,
    pub ensemble: EnsembleConfig,
    pub functional: TailFunctional,
    pub samples: usize,
    pub lambda_grid: Vec<f64>,
    #[serde(default = "default_dealias")]
    pub dealias: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Ensemble {
        alpha: f64,
        seed: u64,
        #[serde(default)]
        sample_index: u64,
        #[serde(default = "default_flavor")]
        flavor: Flavor,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
    Mode {
        n: usize,
        nprime: i64,
        re: f64,
        #[serde(default)]
        im: f64,
    },
    /// A snapshot written by an earlier run on the same truncation.
    Snapshot { path: std::path::PathBuf },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub modes: Truncation,
    pub data: InitialData,
    #[serde(default)]
    pub t0: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    #[serde(default)]
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsistencyConfig {
    pub alpha_points: usize,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub gamma_points: usize,
    #[serde(default)]
    pub variant: G2Variant,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdmissibleConfig {
    pub scan: ScanSpec,
    #[serde(default)]
    pub consistency: Option<ConsistencyConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrichartzJob {
    pub spec: StrichartzSpec,
    pub data: DataSet,
    /// Truncations compared in the stabilization trend, coarsest first.
    pub levels: Vec<Truncation>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingJob {
    pub spec: EmbeddingSpec,
    pub samples: usize,
    pub seed: u64,
    pub levels: Vec<Truncation>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseConfig {
    #[serde(default = "default_dealias")]
    pub dealias: f64,
    #[serde(default)]
    pub strichartz: Option<StrichartzJob>,
    #[serde(default)]
    pub embedding: Option<EmbeddingJob>,
}
