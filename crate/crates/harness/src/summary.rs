//! The JSON run summary.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Saddle-point constants used by a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsEcho {
    pub c: f64,
    pub gamma: f64,
    pub z_star: f64,
    pub mu: f64,
    pub g_bar: f64,
}

impl From<&gamma_polymer::AsymptoticConstants> for ConstantsEcho {
    fn from(k: &gamma_polymer::AsymptoticConstants) -> Self {
        Self {
            c: k.c,
            gamma: k.gamma,
            z_star: k.z_star,
            mu: k.mu,
            g_bar: k.g_bar,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ValidationFailed,
}

/// Facts about the execution that do not affect results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Runtime {
    pub threads: usize,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
}

/// Everything needed to reproduce and interpret a run. All fields other
/// than `runtime` are a function of the configuration and seed alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub version: String,
    pub subcommand: String,
    pub seed: u64,
    pub generator: String,
    pub config: Value,
    pub constants: Vec<ConstantsEcho>,
    pub statistics: Value,
    pub status: Status,
    pub failures: Vec<String>,
    pub runtime: Runtime,
}

impl RunSummary {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip() {
        let s = RunSummary {
            version: gamma_polymer::VERSION.into(),
            subcommand: "lln".into(),
            seed: u64::MAX,
            generator: "chacha8".into(),
            config: json!({"alpha": 2.0, "n": [250, 500]}),
            constants: vec![ConstantsEcho {
                c: 2.0,
                gamma: 0.3,
                z_star: 0.551_782_450_460_422_4,
                mu: 0.025_409_727_659_873_926,
                g_bar: 5.215_985_867_894_205,
            }],
            statistics: json!({"mean": 0.1 + 0.2, "tiny": 1e-300, "flag": true}),
            status: Status::ValidationFailed,
            failures: vec!["x".into()],
            runtime: Runtime {
                threads: 3,
                wall_time_s: 1.5,
                outputs: vec!["a.csv".into()],
            },
        };
        let text = s.to_json().unwrap();
        assert_eq!(RunSummary::from_json(&text).unwrap(), s);
        assert!(text.contains("\"version\""));
    }
}
