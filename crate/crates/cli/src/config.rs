//! Experiment configuration files and run records.
//!
//! An experiment is one JSON document: a kind tag, kind-specific
//! parameters, a seed, and an output base path. Running it writes
//! `<out>.csv` (the rows; byte-reproducible for a given config and seed)
//! and `<out>.json` (a summary; contains wall-clock time, so not
//! byte-stable). The summary carries a digest of the config so records
//! can be traced back to exactly what produced them.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use unipred_core::bits::FiniteString;
use unipred_core::hypotheses::{default_pool, HypothesisPool, HypothesisSpec};
use unipred_core::prob::Prob;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Where a pool comes from: `{"default": 8}`, `{"path": "pool.json"}`,
/// or an inline pool document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PoolSource {
    Default { default: usize },
    Path { path: PathBuf },
    Inline(HypothesisPool),
}

impl PoolSource {
    pub fn load(&self) -> Result<HypothesisPool> {
        match self {
            PoolSource::Default { default } => {
                if *default == 0 {
                    bail!("default pool size must be at least 1");
                }
                Ok(default_pool(*default))
            }
            PoolSource::Path { path } => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read pool file {}", path.display()))?;
                HypothesisPool::from_json(&text)
                    .with_context(|| format!("cannot parse pool file {}", path.display()))
            }
            PoolSource::Inline(pool) => Ok(pool.clone()),
        }
    }

    /// CLI form: `default:<n>` or a file path.
    pub fn from_token(token: &str) -> PoolSource {
        match token.strip_prefix("default:").and_then(|n| n.parse().ok()) {
            Some(n) => PoolSource::Default { default: n },
            None => PoolSource::Path { path: PathBuf::from(token) },
        }
    }
}

/// Which computation backs an algorithmic-probability table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgProbRoute {
    /// Minimal-description enumeration (the definition).
    #[default]
    Descriptions,
    /// Machine-index mixture; must agree with the other route exactly.
    MixtureForm,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Posterior concentration: sample from `truth`, fold the aggregator,
    /// and check the final predictive probability of a one against
    /// `target` within `tolerance` (exact comparison), over many seeded
    /// runs.
    Consistency {
        pool: PoolSource,
        truth: HypothesisSpec,
        horizon: usize,
        runs: usize,
        tolerance: Prob,
        target: Prob,
    },
    /// Regret-bound rows for every member on seeded uniform strings.
    Regret { pool: PoolSource, length: usize, samples: usize },
    /// The regret bound checked on every string up to a length.
    BoundExhaustive { pool: PoolSource, max_len: usize },
    /// Aggregator-vs-mixture prediction identity on seeded strings.
    Identity { pool: PoolSource, length: usize, samples: usize },
    /// A diagonal-adversary trace against a victim token.
    Diagonal { victim: String, horizon: usize, tie: u8 },
    /// The block adversary against a victim's exact approximant.
    AntiLimit { victim: String, block_budget: u64, max_blocks: usize },
    /// The algorithmic-probability table at a bound.
    Algoprob {
        max_len: usize,
        max_steps: u64,
        depth: usize,
        #[serde(default)]
        route: AlgProbRoute,
    },
    /// LZ complexity vs algorithmic probability over given strings.
    LzCompare { strings: Vec<FiniteString>, max_len: usize, max_steps: u64 },
    /// Per-step predictor-vs-truth error along one sampled path.
    ReliabilityTrace { pool: PoolSource, truth: HypothesisSpec, horizon: usize },
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Consistency { .. } => "consistency",
            ExperimentKind::Regret { .. } => "regret",
            ExperimentKind::BoundExhaustive { .. } => "bound-exhaustive",
            ExperimentKind::Identity { .. } => "identity",
            ExperimentKind::Diagonal { .. } => "diagonal",
            ExperimentKind::AntiLimit { .. } => "anti-limit",
            ExperimentKind::Algoprob { .. } => "algoprob",
            ExperimentKind::LzCompare { .. } => "lz-compare",
            ExperimentKind::ReliabilityTrace { .. } => "reliability-trace",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub kind: ExperimentKind,
    pub seed: u64,
    /// Base path; the run writes `<out>.csv` and `<out>.json`.
    pub out: PathBuf,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("cannot parse config {}", path.display()))
    }

    /// Digest of the canonical JSON form, recorded in every summary.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        let bytes = hasher.finalize();
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Paths and counters from one completed experiment.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub config_digest: String,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
    pub rows: usize,
    pub violations: usize,
}
