use serde::{Deserialize, Serialize};
use strutforge::{Mode, Outcome, Space};

pub const CSV_HEADER: [&str; 13] = [
    "mode",
    "space",
    "k",
    "param",
    "num_diagrams",
    "num_relations_raw",
    "num_relations_effective",
    "rank",
    "quotient_dim",
    "primes",
    "elapsed_ms",
    "tool_version",
    "timestamp",
];

/// One finished dimension computation, as cached and reported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub mode: String,
    pub space: String,
    pub k: u8,
    pub param: usize,
    pub num_diagrams: usize,
    pub num_relations_raw: u64,
    pub num_relations_effective: usize,
    pub rank: usize,
    pub quotient_dim: usize,
    pub primes: Vec<u64>,
    pub elapsed_ms: u64,
    pub tool_version: String,
    pub timestamp: String,
}

impl ResultRecord {
    pub fn from_outcome(outcome: &Outcome) -> Self {
        ResultRecord {
            mode: outcome.mode.as_str().to_string(),
            space: outcome.space.name().to_string(),
            k: outcome.k,
            param: outcome.space.param(),
            num_diagrams: outcome.num_diagrams,
            num_relations_raw: outcome.num_relations_raw,
            num_relations_effective: outcome.num_relations_effective,
            rank: outcome.rank,
            quotient_dim: outcome.quotient_dim,
            primes: outcome.primes.clone(),
            elapsed_ms: u64::try_from(outcome.elapsed_ms).unwrap_or(u64::MAX),
            tool_version: strutforge::TOOL_VERSION.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn matches(&self, mode: Mode, space: Space, k: u8) -> bool {
        self.mode == mode.as_str()
            && self.space == space.name()
            && self.k == k
            && self.param == space.param()
            && self.tool_version == strutforge::TOOL_VERSION
    }

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.mode.clone(),
            self.space.clone(),
            self.k.to_string(),
            self.param.to_string(),
            self.num_diagrams.to_string(),
            self.num_relations_raw.to_string(),
            self.num_relations_effective.to_string(),
            self.rank.to_string(),
            self.quotient_dim.to_string(),
            join_primes(&self.primes),
            self.elapsed_ms.to_string(),
            self.tool_version.clone(),
            self.timestamp.clone(),
        ]
    }
}

pub fn join_primes(primes: &[u64]) -> String {
    primes.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
}

/// CSV row for a cell whose computation failed: every numeric column reads `ERROR`.
pub fn error_row(mode: Mode, space: Space, k: u8) -> Vec<String> {
    let mut row = vec![mode.as_str().to_string(), space.name().to_string(), k.to_string(), space.param().to_string()];
    row.extend(std::iter::repeat_n("ERROR".to_string(), 7));
    row.push(strutforge::TOOL_VERSION.to_string());
    row.push(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    row
}
