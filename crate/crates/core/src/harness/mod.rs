//! Classification of model predictions against the checkers, bucketed by
//! formula size.
//!
//! A prediction file has one record per line,
//! `formula<TAB>prediction[<TAB>reference]`. Beam candidates in the
//! prediction field are separated by `|` in rank order. Because `|` is also
//! the disjunction operator inside trace constraints, trace candidates are
//! split only after a closing `}`.

mod report;

use std::collections::BTreeMap;
use std::io::{self, BufRead};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::ContainmentChecker;
use crate::datagen::{DatasetRecord, Task};
use crate::formula::{Ltl, ParseError, Prop};
use crate::sat::{check_partial_assignment, PartialAssignment};
use crate::trace::SymbolicTrace;

pub use report::{Counts, EvalReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Syntactic,
    SemanticOnly,
    Incorrect,
    Invalid,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BeamMode {
    /// Classify the first candidate only.
    #[default]
    Rank1,
    /// Take the best class over all candidates.
    AnyBeam,
}

impl BeamMode {
    pub fn name(self) -> &'static str {
        match self {
            BeamMode::Rank1 => "rank1",
            BeamMode::AnyBeam => "any-beam",
        }
    }
}

impl FromStr for BeamMode {
    type Err = String;

    fn from_str(s: &str) -> Result<BeamMode, String> {
        match s {
            "rank1" => Ok(BeamMode::Rank1),
            "any-beam" => Ok(BeamMode::AnyBeam),
            _ => Err(format!("unknown beam mode `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Ltl(Ltl),
    Prop(Prop),
}

impl Formula {
    pub fn parse(text: &str, task: Task) -> Result<Formula, ParseError> {
        match task {
            Task::LtlTrace => Ltl::parse(text).map(Formula::Ltl),
            Task::PropAssignment => Prop::parse(text).map(Formula::Prop),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Ltl(f) => f.size(),
            Formula::Prop(f) => f.size(),
        }
    }

    pub fn task(&self) -> Task {
        match self {
            Formula::Ltl(_) => Task::LtlTrace,
            Formula::Prop(_) => Task::PropAssignment,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictionRecord {
    pub formula: Formula,
    pub prediction: String,
    pub reference: Option<String>,
}

impl PredictionRecord {
    pub fn parse_line(line: &str, task: Task) -> Result<PredictionRecord, String> {
        let mut fields = line.split('\t');
        let formula = fields.next().unwrap_or_default();
        let prediction = fields.next().ok_or("missing prediction field")?;
        let reference = fields.next().map(str::to_string);
        if fields.next().is_some() {
            return Err("more than three fields".into());
        }
        let formula = Formula::parse(formula, task).map_err(|e| format!("formula: {e}"))?;
        Ok(PredictionRecord { formula, prediction: prediction.to_string(), reference })
    }

    /// Beam candidates in rank order.
    pub fn candidates(&self) -> Vec<&str> {
        split_beams(&self.prediction, self.formula.task())
    }
}

pub fn split_beams(field: &str, task: Task) -> Vec<&str> {
    match task {
        Task::PropAssignment => field.split('|').collect(),
        Task::LtlTrace => {
            let mut out = Vec::new();
            let mut start = 0;
            for (i, _) in field.match_indices("}|") {
                out.push(&field[start..=i]);
                start = i + 2;
            }
            out.push(&field[start..]);
            out
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadError {
    pub line: usize,
    pub message: String,
}

/// Records of a prediction file plus the lines that were rejected.
#[derive(Clone, Debug, Default)]
pub struct PredictionFile {
    pub records: Vec<PredictionRecord>,
    pub errors: Vec<LoadError>,
}

pub fn read_predictions<R: BufRead>(r: R, task: Task) -> io::Result<PredictionFile> {
    let mut file = PredictionFile::default();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        match PredictionRecord::parse_line(line, task) {
            Ok(rec) => file.records.push(rec),
            Err(message) => file.errors.push(LoadError { line: i + 1, message }),
        }
    }
    Ok(file)
}

/// Caches the automaton of the negated formula across candidates.
enum Checker {
    Ltl(Box<ContainmentChecker>),
    Prop(Prop),
}

impl Checker {
    fn new(f: &Formula) -> Checker {
        match f {
            Formula::Ltl(f) => Checker::Ltl(Box::new(ContainmentChecker::new(f))),
            Formula::Prop(f) => Checker::Prop(f.clone()),
        }
    }

    /// `None` if `answer` does not parse, else whether it is correct.
    fn check(&mut self, answer: &str) -> Option<bool> {
        match self {
            Checker::Ltl(c) => {
                let t = SymbolicTrace::parse(answer).ok()?;
                Some(c.check(&t).holds())
            }
            // an assignment to a proposition outside the formula is incorrect
            Checker::Prop(f) => {
                let a = PartialAssignment::from_str(answer).ok()?;
                Some(check_partial_assignment(f, &a).unwrap_or(false))
            }
        }
    }
}

fn classify_with(checker: &mut Checker, candidate: &str, reference: Option<&str>) -> Class {
    match checker.check(candidate) {
        None => Class::Invalid,
        Some(_) if reference == Some(candidate) => Class::Syntactic,
        Some(true) => Class::SemanticOnly,
        Some(false) => Class::Incorrect,
    }
}

/// Classifies one output. Byte equality with the reference is syntactic
/// only when the output also parses.
pub fn classify_prediction(formula: &Formula, output: &str, reference: Option<&str>) -> Class {
    classify_with(&mut Checker::new(formula), output, reference)
}

pub fn classify_record(rec: &PredictionRecord, mode: BeamMode) -> Class {
    let mut checker = Checker::new(&rec.formula);
    let candidates = rec.candidates();
    let reference = rec.reference.as_deref();
    match mode {
        BeamMode::Rank1 => classify_with(&mut checker, candidates[0], reference),
        BeamMode::AnyBeam => {
            let mut best = Class::Invalid;
            for c in candidates {
                best = best.min(classify_with(&mut checker, c, reference));
                if best == Class::Syntactic {
                    break;
                }
            }
            best
        }
    }
}

/// Aggregates classes per size bucket. Bucket `b` holds sizes
/// `b..b + bucket_width`, with `b` a multiple of the width.
pub fn evaluate(file: &PredictionFile, bucket_width: usize, mode: BeamMode) -> EvalReport {
    let width = bucket_width.max(1);
    let buckets = file
        .records
        .par_iter()
        .map(|rec| {
            let mut m = BTreeMap::new();
            m.insert(rec.formula.size() / width * width, Counts::of(classify_record(rec, mode)));
            m
        })
        .reduce(BTreeMap::new, report::merge_buckets);
    EvalReport::new(mode, width, buckets, file.errors.len())
}

/// Records whose reference answer fails its checker. A sound generator
/// yields none, which makes every syntactic match also semantic.
pub fn audit_references(records: &[DatasetRecord]) -> Vec<String> {
    records
        .par_iter()
        .filter_map(|r| {
            let answer = r.answer.as_deref()?;
            let ok = match Formula::parse(&r.formula, r.task) {
                Ok(f) => Checker::new(&f).check(answer) == Some(true),
                Err(_) => false,
            };
            (!ok).then(|| r.to_line())
        })
        .collect()
}
