//! Experiment configuration files.
//!
//! ```toml
//! experiment = "symmetry"        # toy | train | sweep | symmetry | zne
//! model = "eqnn-xy"              # or a list; "eqnn-hwe-<z|xy|xyz|xyzz>[-native]" uses `n`
//! n = 2
//! depths = [1, 2, 3, 4]
//! seeds = [0, 1, 2]
//! shots = 4000                   # optional; exact expectations when absent
//! output_dir = "results"
//! jobs = 4                       # optional; defaults to the logical core count
//!
//! [noise]
//! kind = "amplitude_damping"     # bitflip | phaseflip | depolarizing | amplitude_damping
//! values = [0.01, 0.05]
//!
//! [dataset]                      # optional
//! size = 400
//! seed = 7
//! margin = 0.1
//!
//! [training]                     # optional
//! epochs = 100
//! lr = 0.01
//! adaptive_threshold = false
//!
//! [toy]                          # optional, toy experiment only
//! xs = [0.3, 1.2]
//! thetas = [0.4]
//!
//! [zne]                          # optional, zne experiment only
//! scale_factors = [1.0, 1.5, 2.0, 2.5, 3.0]
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use eqnn_noise_core::circuit::{build_eqnn_hwe, Circuit, HweObservable, HWE_MAX_QUBITS};
use eqnn_noise_core::trainer::{generate_dataset, SymmetricDataset};
use eqnn_noise_core::zne::ZneSchedule;
use eqnn_noise_core::{ModelKind, NoiseKind};

use crate::error::{io_err, HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Toy,
    Train,
    Sweep,
    Symmetry,
    Zne,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [Self::Toy, Self::Train, Self::Sweep, Self::Symmetry, Self::Zne];

    pub fn name(self) -> &'static str {
        match self {
            Self::Toy => "toy",
            Self::Train => "train",
            Self::Sweep => "sweep",
            Self::Symmetry => "symmetry",
            Self::Zne => "zne",
        }
    }
}

impl FromStr for Experiment {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown experiment '{s}'")))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A two-qubit model from the zoo, or the hardware-efficient family on `n`
/// qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    Zoo(ModelKind),
    Hwe { observable: HweObservable, native: bool },
}

impl ModelSpec {
    pub fn build(self, n: usize, d: usize) -> Result<Circuit> {
        Ok(match self {
            Self::Zoo(kind) => kind.build(d)?,
            Self::Hwe { observable, native } => build_eqnn_hwe(n, d, observable, native)?,
        })
    }

    pub fn name(self) -> String {
        match self {
            Self::Zoo(kind) => kind.name().to_string(),
            Self::Hwe { observable, native } => {
                format!("eqnn-hwe-{}{}", observable.name(), if native { "-native" } else { "" })
            }
        }
    }

    /// Whether the readout is `(Z0+Z1)/2`, the observable adaptive
    /// thresholding targets.
    pub fn z_observable(self) -> bool {
        match self {
            Self::Zoo(kind) => kind.z_observable(),
            Self::Hwe { observable, .. } => observable == HweObservable::Z,
        }
    }
}

impl FromStr for ModelSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(kind) = s.parse::<ModelKind>() {
            return Ok(Self::Zoo(kind));
        }
        let unknown = || HarnessError::Config(format!("unknown model '{s}'"));
        let rest = s.strip_prefix("eqnn-hwe-").ok_or_else(unknown)?;
        let (obs, native) = match rest.strip_suffix("-native") {
            Some(o) => (o, true),
            None => (rest, false),
        };
        let observable = [HweObservable::Z, HweObservable::Xy, HweObservable::Xyz, HweObservable::Xyzz]
            .into_iter()
            .find(|o| o.name() == obs)
            .ok_or_else(unknown)?;
        Ok(Self::Hwe { observable, native })
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    fn items(&self) -> Vec<&str> {
        match self {
            Self::One(s) => vec![s.as_str()],
            Self::Many(v) => v.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub kind: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DatasetConfig {
    pub size: usize,
    pub seed: u64,
    pub margin: f64,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            size: 400,
            seed: 7,
            margin: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainingConfig {
    pub epochs: usize,
    pub lr: f64,
    pub adaptive_threshold: bool,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            epochs: 100,
            lr: 0.01,
            adaptive_threshold: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToyGrid {
    pub xs: Vec<f64>,
    pub thetas: Vec<f64>,
}

impl Default for ToyGrid {
    fn default() -> Self {
        Self {
            xs: vec![-2.0, -0.7, 0.3, 1.2, 2.5],
            thetas: vec![0.2, 0.8, 1.4],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZneConfig {
    pub scale_factors: Vec<f64>,
}

impl Default for ZneConfig {
    fn default() -> Self {
        Self {
            scale_factors: ZneSchedule::default().scale_factors().to_vec(),
        }
    }
}

fn default_n() -> usize {
    2
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

/// Parsed config file. `output_dir` and `jobs` do not affect results and are
/// left out of the serialized (hashed) form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub model: Option<OneOrMany>,
    #[serde(default = "default_n")]
    pub n: usize,
    pub depths: Vec<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    pub shots: Option<u64>,
    pub noise: NoiseConfig,
    #[serde(default)]
    pub dataset: DatasetConfig,
    #[serde(default)]
    pub training: TrainingConfig,
    #[serde(default)]
    pub toy: ToyGrid,
    #[serde(default)]
    pub zne: ZneConfig,
    #[serde(default = "default_output_dir", skip_serializing)]
    pub output_dir: PathBuf,
    #[serde(default, skip_serializing)]
    pub jobs: Option<usize>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn models(&self) -> Result<Vec<ModelSpec>> {
        match &self.model {
            Some(m) => m.items().into_iter().map(str::parse).collect(),
            None => Ok(Vec::new()),
        }
    }

    pub fn noise_kind(&self) -> Result<NoiseKind> {
        self.noise
            .kind
            .parse()
            .map_err(|_| HarnessError::Config(format!("unknown noise kind '{}'", self.noise.kind)))
    }

    pub fn dataset(&self) -> Result<SymmetricDataset> {
        Ok(generate_dataset(self.dataset.size, self.dataset.seed, self.dataset.margin)?)
    }

    pub fn jobs(&self) -> usize {
        self.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    /// Every check runs before any computation or file output.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.depths.is_empty() {
            return bad("depths must not be empty".into());
        }
        if self.depths.contains(&0) {
            return bad("depths must be positive".into());
        }
        if self.seeds.is_empty() {
            return bad("seeds must not be empty".into());
        }
        if self.shots == Some(0) {
            return bad("shots must be positive when given".into());
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1".into());
        }
        let kind = self.noise_kind()?;
        if self.noise.values.is_empty() {
            return bad("noise.values must not be empty".into());
        }
        for &v in &self.noise.values {
            kind.channel(v)
                .map_err(|e| HarnessError::Config(format!("noise value {v}: {e}")))?;
        }
        let models = self.models()?;
        if self.experiment == Experiment::Toy {
            if self.toy.xs.is_empty() || self.toy.thetas.is_empty() {
                return bad("toy.xs and toy.thetas must not be empty".into());
            }
            if self.depths.iter().any(|&d| d > u32::MAX as usize) {
                return bad("toy depth too large".into());
            }
            return Ok(());
        }
        if models.is_empty() {
            return bad(format!("experiment '{}' needs a model", self.experiment));
        }
        for m in &models {
            match m {
                ModelSpec::Zoo(_) if self.n != 2 => {
                    return bad(format!("model {m} has 2 qubits, config says n = {}", self.n))
                }
                ModelSpec::Hwe { .. } if matches!(self.experiment, Experiment::Train | Experiment::Sweep) => {
                    return bad(format!("{} supports the two-qubit models only", self.experiment))
                }
                ModelSpec::Hwe { observable, .. } => {
                    if self.n > HWE_MAX_QUBITS {
                        return Err(HarnessError::ResourceLimit(format!(
                            "n = {} exceeds the {HWE_MAX_QUBITS}-qubit limit",
                            self.n
                        )));
                    }
                    if self.n < observable.letters().len().max(2) {
                        return bad(format!("model {m} needs more than n = {} qubits", self.n));
                    }
                }
                _ => {}
            }
        }
        let ds = &self.dataset;
        if ds.size == 0 || ds.size % 2 != 0 || ds.size < 4 {
            return bad(format!("dataset.size must be even and at least 4, got {}", ds.size));
        }
        if !(0.0..1.0).contains(&ds.margin) {
            return bad(format!("dataset.margin {} outside [0, 1)", ds.margin));
        }
        let tr = &self.training;
        if tr.epochs == 0 || !(tr.lr > 0.0 && tr.lr.is_finite()) {
            return bad("training.epochs and training.lr must be positive".into());
        }
        if self.experiment == Experiment::Zne {
            if kind != NoiseKind::AmplitudeDamping {
                return bad("zne scales amplitude damping; set noise.kind = \"amplitude_damping\"".into());
            }
            for &g in &self.noise.values {
                ZneSchedule::new(g, self.zne.scale_factors.clone())
                    .map_err(|e| HarnessError::Config(format!("zne schedule at γ = {g}: {e}")))?;
            }
        }
        Ok(())
    }

    /// Canonical TOML of every result-affecting field.
    pub fn resolved_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of [`resolved_toml`](Self::resolved_toml), hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.resolved_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
