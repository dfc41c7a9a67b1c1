//! Dataset generators, splitting and statistics.
//!
//! A dataset file holds one record per line, `formula<TAB>answer`, UTF-8.
//! The answer field is empty for formula-only sets.

mod cnf;
mod engine;
mod patterns;
mod random;
mod sampler;
mod split;

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::Deadline;
use crate::formula::{Ltl, ParseError, Prop, Supply};
use crate::trace::MAX_TRACE_TOKENS;

pub use cnf::{gen_cnf_dataset, CnfParams};
pub use engine::{GenStats, Starvation};
pub use patterns::{
    gen_pattern_conjunctions, gen_unsolved_patterns, PatternCatalog, PatternError, PatternParams, TerminationStats,
};
pub use random::{gen_random_ltl, gen_random_prop};
pub use sampler::{NodeWeights, Op, Sampler, Tree};
pub use split::{dataset_stats, histogram_csv, split_dataset, DatasetStats, Split};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    LtlTrace,
    PropAssignment,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::LtlTrace => "ltl-trace",
            Task::PropAssignment => "prop-assignment",
        })
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Task, String> {
        match s {
            "ltl-trace" | "ltl" => Ok(Task::LtlTrace),
            "prop-assignment" | "prop" => Ok(Task::PropAssignment),
            _ => Err(format!("unknown task `{s}`, expected `ltl` or `prop`")),
        }
    }
}

/// Why a pattern conjunction stopped growing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// The next conjunct would push the formula over the size cap.
    SizeCap,
    /// The next conjunct would exceed the conjunct cap.
    ConjunctCap,
    /// Solving the extended formula hit the deadline.
    Timeout,
    /// The extended formula is unsatisfiable.
    Unsatisfiable,
}

impl Termination {
    pub const ALL: [Termination; 4] =
        [Termination::SizeCap, Termination::ConjunctCap, Termination::Timeout, Termination::Unsatisfiable];
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordMeta {
    pub size: usize,
    /// Seed of the run that produced the record; unknown for loaded files.
    pub seed: Option<u64>,
    pub termination: Option<Termination>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub task: Task,
    pub formula: String,
    pub answer: Option<String>,
    pub meta: RecordMeta,
}

impl DatasetRecord {
    /// The wire line without the trailing newline.
    pub fn to_line(&self) -> String {
        format!("{}\t{}", self.formula, self.answer.as_deref().unwrap_or(""))
    }

    /// Parses one dataset line. For LTL an empty answer field means no
    /// answer; for propositional records it is the empty assignment.
    pub fn parse_line(line: &str, task: Task) -> Result<DatasetRecord, ParseError> {
        let (formula, answer) = match line.split_once('\t') {
            Some((f, a)) => (f, Some(a)),
            None => (line, None),
        };
        let size = formula_size(formula, task)?;
        let answer = match (task, answer) {
            (Task::LtlTrace, Some("")) | (_, None) => None,
            (_, Some(a)) => Some(a.to_string()),
        };
        Ok(DatasetRecord {
            task,
            formula: formula.to_string(),
            answer,
            meta: RecordMeta { size, seed: None, termination: None },
        })
    }
}

/// Node count of `formula` under the grammar of `task`.
pub fn formula_size(formula: &str, task: Task) -> Result<usize, ParseError> {
    Ok(match task {
        Task::LtlTrace => Ltl::parse(formula)?.size(),
        Task::PropAssignment => Prop::parse(formula)?.size(),
    })
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
}

pub fn write_dataset<W: Write>(mut w: W, records: &[DatasetRecord]) -> io::Result<()> {
    for r in records {
        writeln!(w, "{}", r.to_line())?;
    }
    w.flush()
}

/// Reads a dataset file. Blank lines are skipped; line numbers in errors
/// are 1-based.
pub fn read_dataset<R: BufRead>(r: R, task: Task) -> Result<Vec<DatasetRecord>, DatasetError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        out.push(DatasetRecord::parse_line(line, task).map_err(|source| DatasetError::Parse { line: i + 1, source })?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> SplitRatios {
        SplitRatios { train: 0.8, val: 0.1, test: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub supply: Supply,
    pub min_size: usize,
    pub max_size: usize,
    pub weights: NodeWeights,
    pub count: usize,
    pub seed: u64,
    /// Per-formula solver budget in milliseconds; zero means unlimited.
    pub timeout_ms: u64,
    /// Per-formula solver budget in automaton steps; zero means unlimited.
    /// Unlike `timeout_ms` it makes timeouts reproducible.
    #[serde(default)]
    pub step_budget: u64,
    pub max_trace_tokens: usize,
    /// Consecutive draws without a new record before a size bucket or a
    /// generator gives up.
    pub retry_budget: usize,
    pub split: SplitRatios,
}

impl GenConfig {
    pub fn random_ltl() -> GenConfig {
        GenConfig {
            supply: Supply::first(5).expect("five propositions"),
            min_size: 1,
            max_size: 35,
            weights: NodeWeights::ltl(),
            count: 1000,
            seed: 0,
            timeout_ms: 0,
            step_budget: 0,
            max_trace_tokens: MAX_TRACE_TOKENS,
            retry_budget: 10_000,
            split: SplitRatios::default(),
        }
    }

    pub fn random_prop() -> GenConfig {
        GenConfig { weights: NodeWeights::prop(), ..GenConfig::random_ltl() }
    }

    pub fn patterns() -> GenConfig {
        GenConfig {
            supply: Supply::first(6).expect("six propositions"),
            max_size: 126,
            timeout_ms: 1000,
            ..GenConfig::random_ltl()
        }
    }

    pub fn unsolved() -> GenConfig {
        GenConfig { max_size: 254, timeout_ms: 60_000, ..GenConfig::patterns() }
    }

    pub fn cnf() -> GenConfig {
        GenConfig {
            supply: Supply::first(15).expect("fifteen propositions"),
            max_size: 250,
            ..GenConfig::random_prop()
        }
    }

    pub fn deadline(&self) -> Deadline {
        Deadline::from_millis(self.timeout_ms).with_steps(self.step_budget)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.min_size == 0 {
            return Err(ConfigError::new("min_size must be at least 1"));
        }
        if self.min_size > self.max_size {
            return Err(ConfigError::new(format!("min_size {} exceeds max_size {}", self.min_size, self.max_size)));
        }
        if self.retry_budget == 0 {
            return Err(ConfigError::new("retry_budget must be positive"));
        }
        let SplitRatios { train, val, test } = self.split;
        if [train, val, test].iter().any(|r| !(0.0..=1.0).contains(r)) || (train + val + test - 1.0).abs() > 1e-9 {
            return Err(ConfigError::new(format!(
                "split ratios must be in [0, 1] and sum to 1, got {train}/{val}/{test}"
            )));
        }
        self.weights.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid configuration: {0}")]
pub struct ConfigError(pub String);

impl ConfigError {
    pub fn new(msg: impl Into<String>) -> ConfigError {
        ConfigError(msg.into())
    }
}
