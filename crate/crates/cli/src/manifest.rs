use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use l2p_core::weights::PolicyRegistry;
use l2p_core::SolverConfig;
use serde::{Deserialize, Serialize};

use crate::args::SolverArgs;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to repeat a run. Outputs depend only on these fields
/// and the input file contents; the timestamp is carried over on reruns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    /// Seconds since the Unix epoch when the original run started.
    pub timestamp: u64,
    pub out_dir: PathBuf,
    pub seed: u64,
    #[serde(flatten)]
    pub command: CommandManifest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum CommandManifest {
    Solve {
        m: PathBuf,
        b: PathBuf,
        p: f64,
        solver: SolverManifest,
    },
    Select {
        data: PathBuf,
        label_column: String,
        p: Vec<f64>,
        k: Vec<usize>,
        gamma: f64,
        bias: bool,
        test_fraction: f64,
        true_support: Option<Vec<usize>>,
        population_std: bool,
        solver: SolverManifest,
    },
    TracePlotData {
        inputs: Vec<TraceInput>,
    },
    Synth {
        samples: usize,
        features: usize,
        classes: usize,
        informative: usize,
        separation: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceInput {
    pub p: f64,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverManifest {
    pub max_iters: usize,
    pub tol_rho: f64,
    pub epsilon: f64,
    pub policy: String,
}

impl From<&SolverArgs> for SolverManifest {
    fn from(a: &SolverArgs) -> Self {
        Self {
            max_iters: a.max_iters,
            tol_rho: a.tol,
            epsilon: a.epsilon,
            policy: a.policy.clone(),
        }
    }
}

impl SolverManifest {
    pub fn to_config(&self) -> anyhow::Result<SolverConfig> {
        let policy = PolicyRegistry::with_builtins().get(&self.policy).with_context(|| {
            format!(
                "available policies: {}",
                PolicyRegistry::with_builtins().names().collect::<Vec<_>>().join(", ")
            )
        })?;
        let config = SolverConfig {
            max_iters: self.max_iters,
            tol_rho: self.tol_rho,
            epsilon: self.epsilon,
            policy,
            record_trace: true,
        };
        config.validate()?;
        Ok(config)
    }
}

impl RunManifest {
    pub fn new(out_dir: PathBuf, seed: u64, command: CommandManifest) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            timestamp,
            out_dir,
            seed,
            command,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let m: Self = serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))?;
        if m.tool_version != env!("CARGO_PKG_VERSION") {
            bail!(
                "manifest was written by version {}, this is {}",
                m.tool_version,
                env!("CARGO_PKG_VERSION")
            );
        }
        Ok(m)
    }
}

/// Input paths are stored absolute so a manifest can be replayed from any
/// working directory.
pub fn absolute(path: &Path) -> anyhow::Result<PathBuf> {
    std::path::absolute(path).with_context(|| format!("resolving {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let m = RunManifest::new(
            PathBuf::from("/tmp/out"),
            9,
            CommandManifest::Select {
                data: PathBuf::from("/tmp/data.csv"),
                label_column: "label".into(),
                p: vec![0.25, 1.0],
                k: vec![3],
                gamma: 0.1,
                bias: true,
                test_fraction: 0.2,
                true_support: Some(vec![1, 4]),
                population_std: false,
                solver: SolverManifest {
                    max_iters: 100,
                    tol_rho: 1e-8,
                    epsilon: 1e-12,
                    policy: "smoothed-scaled".into(),
                },
            },
        );
        let text = m.to_json();
        assert_eq!(serde_json::from_str::<RunManifest>(&text).unwrap(), m);
        assert!(text.contains("\"command\": \"select\""));
    }

    #[test]
    fn unknown_policy_lists_choices() {
        let s = SolverManifest {
            max_iters: 10,
            tol_rho: 1e-8,
            epsilon: 0.0,
            policy: "nope".into(),
        };
        let msg = format!("{:#}", s.to_config().unwrap_err());
        assert!(msg.contains("invert-zero") && msg.contains("nope"), "{msg}");
    }
}
