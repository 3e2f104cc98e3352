use serde::{Deserialize, Serialize};

use super::MetricError;
use crate::template::{TemplateId, TemplateSet};

/// Multi-label template-selection output: bit `i` marks the `i`-th template
/// of the template set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelVector(Vec<bool>);

impl LabelVector {
    pub fn zeros(n: usize) -> Self {
        LabelVector(vec![false; n])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        LabelVector(bits)
    }

    /// Vector over `set` with the given templates switched on. Ids not in
    /// the set are ignored.
    pub fn from_ids<'a>(set: &TemplateSet, ids: impl IntoIterator<Item = &'a TemplateId>) -> Self {
        let mut v = Self::zeros(set.len());
        for id in ids {
            if let Some(i) = set.index_of(id) {
                v.0[i] = true;
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, on: bool) {
        self.0[i] = on;
    }

    pub fn union_with(&mut self, other: &LabelVector) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= *b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelPrf {
    pub label: String,
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultilabelReport {
    pub instances: usize,
    /// Mean per-instance |gold ∩ pred| / |gold ∪ pred| (1 when both empty).
    pub example_accuracy: f64,
    /// Share of instances predicted exactly.
    pub subset_accuracy: f64,
    pub micro_precision: f64,
    pub micro_recall: f64,
    pub micro_f1: f64,
    pub macro_f1: f64,
    pub per_label: Vec<LabelPrf>,
}

// Nothing predicted and nothing to find scores 1; otherwise an empty
// denominator scores 0.
fn prf(tp: u64, fp: u64, fn_: u64) -> (f64, f64, f64) {
    if tp + fp + fn_ == 0 {
        return (1.0, 1.0, 1.0);
    }
    let p = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let r = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f)
}

/// Multi-label evaluation of `pred` against `gold`.
///
/// Micro scores pool TP/FP/FN across labels. Macro-F1 averages per-label
/// F1, where a label absent from both gold and predictions over the whole
/// set scores F1 = 1. `label_names` names the per-label rows; when shorter
/// than the dimension, indices are used.
pub fn multilabel_eval(
    gold: &[LabelVector],
    pred: &[LabelVector],
    label_names: &[String],
) -> Result<MultilabelReport, MetricError> {
    if gold.len() != pred.len() {
        return Err(MetricError::DimensionMismatch(format!(
            "{} gold vs {} predicted instances",
            gold.len(),
            pred.len()
        )));
    }
    if gold.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let dim = gold[0].len();
    if let Some(bad) = gold.iter().chain(pred).find(|v| v.len() != dim) {
        return Err(MetricError::DimensionMismatch(format!(
            "vector of length {} in a {dim}-label evaluation",
            bad.len()
        )));
    }

    let mut counts = vec![(0u64, 0u64, 0u64); dim];
    let mut jaccard_sum = 0.0;
    let mut exact = 0usize;
    for (g, p) in gold.iter().zip(pred) {
        let mut inter = 0usize;
        let mut union = 0usize;
        for (i, c) in counts.iter_mut().enumerate() {
            let (gi, pi) = (g.get(i), p.get(i));
            match (gi, pi) {
                (true, true) => c.0 += 1,
                (false, true) => c.1 += 1,
                (true, false) => c.2 += 1,
                (false, false) => {}
            }
            inter += usize::from(gi && pi);
            union += usize::from(gi || pi);
        }
        jaccard_sum += if union == 0 { 1.0 } else { inter as f64 / union as f64 };
        exact += usize::from(g == p);
    }

    let (tp, fp, fn_) = counts
        .iter()
        .fold((0, 0, 0), |acc, c| (acc.0 + c.0, acc.1 + c.1, acc.2 + c.2));
    let (micro_precision, micro_recall, micro_f1) = prf(tp, fp, fn_);

    let per_label: Vec<LabelPrf> = counts
        .iter()
        .enumerate()
        .map(|(i, &(tp, fp, fn_))| {
            let (precision, recall, f1) = prf(tp, fp, fn_);
            LabelPrf {
                label: label_names.get(i).cloned().unwrap_or_else(|| i.to_string()),
                tp,
                fp,
                fn_,
                precision,
                recall,
                f1,
            }
        })
        .collect();
    let macro_f1 = if dim == 0 {
        1.0
    } else {
        per_label.iter().map(|l| l.f1).sum::<f64>() / dim as f64
    };
    let n = gold.len() as f64;
    Ok(MultilabelReport {
        instances: gold.len(),
        example_accuracy: jaccard_sum / n,
        subset_accuracy: exact as f64 / n,
        micro_precision,
        micro_recall,
        micro_f1,
        macro_f1,
        per_label,
    })
}
