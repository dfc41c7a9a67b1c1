use std::collections::BTreeMap;
use std::fmt::Write;
use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use super::{BeamMode, Class};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub syntactic: usize,
    pub semantic_only: usize,
    pub incorrect: usize,
    pub invalid: usize,
}

impl Counts {
    pub fn of(c: Class) -> Counts {
        let mut n = Counts::default();
        match c {
            Class::Syntactic => n.syntactic = 1,
            Class::SemanticOnly => n.semantic_only = 1,
            Class::Incorrect => n.incorrect = 1,
            Class::Invalid => n.invalid = 1,
        }
        n
    }

    pub fn total(&self) -> usize {
        self.syntactic + self.semantic_only + self.incorrect + self.invalid
    }

    /// Percentages of the four classes in field order; zeros when empty.
    pub fn percentages(&self) -> [f64; 4] {
        let t = self.total();
        let pct = |c: usize| if t == 0 { 0.0 } else { 100.0 * c as f64 / t as f64 };
        [pct(self.syntactic), pct(self.semantic_only), pct(self.incorrect), pct(self.invalid)]
    }

    /// Syntactic plus semantic-only, as a percentage.
    pub fn semantic_accuracy(&self) -> f64 {
        let [s, so, _, _] = self.percentages();
        s + so
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        self.syntactic += o.syntactic;
        self.semantic_only += o.semantic_only;
        self.incorrect += o.incorrect;
        self.invalid += o.invalid;
    }
}

pub(super) fn merge_buckets(mut a: BTreeMap<usize, Counts>, b: BTreeMap<usize, Counts>) -> BTreeMap<usize, Counts> {
    for (k, c) in b {
        *a.entry(k).or_default() += c;
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub beam_mode: BeamMode,
    pub bucket_width: usize,
    pub buckets: BTreeMap<usize, Counts>,
    pub totals: Counts,
    /// Lines rejected before classification.
    pub errors: usize,
}

impl EvalReport {
    pub fn new(
        beam_mode: BeamMode,
        bucket_width: usize,
        buckets: BTreeMap<usize, Counts>,
        errors: usize,
    ) -> EvalReport {
        let mut totals = Counts::default();
        for c in buckets.values() {
            totals += *c;
        }
        EvalReport { beam_mode, bucket_width, buckets, totals, errors }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<EvalReport> {
        serde_json::from_str(text)
    }

    /// A `#` comment line naming the beam mode and bucket width, the
    /// header, one row per bucket and a `total` row.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# beam_mode={} bucket_width={} errors={}\nbucket,syntactic,semantic_only,incorrect,invalid\n",
            self.beam_mode.name(),
            self.bucket_width,
            self.errors
        );
        let mut row = |label: &str, c: &Counts| {
            writeln!(out, "{label},{},{},{},{}", c.syntactic, c.semantic_only, c.incorrect, c.invalid)
                .expect("writing to a string");
        };
        for (b, c) in &self.buckets {
            row(&b.to_string(), c);
        }
        row("total", &self.totals);
        out
    }
}
