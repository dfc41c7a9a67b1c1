use std::collections::BTreeMap;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::formula::tokenize;

use super::{DatasetRecord, SplitRatios};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split<T> {
    pub train: Vec<T>,
    pub val: Vec<T>,
    pub test: Vec<T>,
}

/// Shuffles under `seed` and cuts `floor(n * train)` and `floor(n * val)`
/// records; the rest is the test part.
pub fn split_dataset<T>(mut records: Vec<T>, ratios: SplitRatios, seed: u64) -> Split<T> {
    let n = records.len();
    records.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = (n as f64 * ratios.train).floor() as usize;
    let n_val = ((n as f64 * ratios.val).floor() as usize).min(n - n_train);
    let mut rest = records.split_off(n_train);
    let test = rest.split_off(n_val);
    Split { train: records, val: rest, test }
}

/// Histograms of formula size and answer token count.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub formula_sizes: BTreeMap<usize, usize>,
    pub answer_lengths: BTreeMap<usize, usize>,
}

pub fn dataset_stats(records: &[DatasetRecord]) -> DatasetStats {
    let mut s = DatasetStats::default();
    for r in records {
        *s.formula_sizes.entry(r.meta.size).or_default() += 1;
        if let Some(a) = &r.answer {
            let len = tokenize(a).map(|t| t.len()).unwrap_or(0);
            *s.answer_lengths.entry(len).or_default() += 1;
        }
    }
    s
}

/// `bucket,count` rows in bucket order with a header line.
pub fn histogram_csv(h: &BTreeMap<usize, usize>) -> String {
    let mut out = String::from("bucket,count\n");
    for (b, c) in h {
        writeln!(out, "{b},{c}").expect("writing to a string");
    }
    out
}
