//! Report types shared by the checkers and the corpus runner. Reports are
//! deterministic: given the same inputs and precision they serialize to
//! identical bytes (wall-clock timing is kept out of the serialized form).

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Outcome of one inequality check. `holds` means lhs <= rhs under the
/// recorded evaluation mode.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    /// rhs - lhs: exact rational string, or a certified decimal lower bound.
    pub margin: String,
    /// "exact" or "directed-(bits)bit".
    pub mode: String,
}

impl BoundReport {
    pub fn exact(name: &str, lhs: &BigRational, rhs: &BigRational, holds: bool) -> Self {
        BoundReport {
            name: name.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            holds,
            margin: (rhs - lhs).to_string(),
            mode: "exact".into(),
        }
    }

    pub fn directed(name: &str, lhs: String, rhs: String, holds: bool, margin: String, bits: u32) -> Self {
        BoundReport { name: name.into(), lhs, rhs, holds, margin, mode: format!("directed-{bits}bit") }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub suite: String,
    pub count: u32,
    pub seed: u64,
    pub digits: u32,
    /// Suite-specific knobs (q, prime set, size caps) as a JSON object.
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceResult {
    pub index: u32,
    pub pass: bool,
    /// Human-readable summary; on failure, enough to replay the instance.
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub config: CorpusConfig,
    pub results: Vec<InstanceResult>,
    pub passed: u32,
    pub failed: u32,
}

impl RunReport {
    pub fn new(config: CorpusConfig, results: Vec<InstanceResult>) -> Self {
        let passed = results.iter().filter(|r| r.pass).count() as u32;
        let failed = results.len() as u32 - passed;
        RunReport { schema_version: 1, config, results, passed, failed }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    /// Flat CSV projection of the JSON report.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,seed,index,pass,detail\n");
        for r in &self.results {
            let detail = r.detail.replace('"', "'").replace(['\n', ','], ";");
            out.push_str(&format!(
                "{},{},{},{},\"{}\"\n",
                self.config.suite, self.config.seed, r.index, r.pass, detail
            ));
        }
        out
    }
}
