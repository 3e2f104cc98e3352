use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{Fraction, MetricError};
use crate::corpus::{Extractability, Filler, TemplatedDiagnosis};
use crate::template::{Label, TemplateSet};

/// Share of diagnoses whose label is a template rather than `NotApplicable`.
pub fn coverage<'a>(
    diagnoses: impl IntoIterator<Item = &'a TemplatedDiagnosis>,
) -> Result<Fraction, MetricError> {
    let (mut hit, mut total) = (0u64, 0u64);
    for d in diagnoses {
        total += 1;
        hit += u64::from(d.label.is_applicable());
    }
    if total == 0 {
        return Err(MetricError::EmptyInput);
    }
    Ok(Fraction::new(hit, total))
}

/// Label counts, including `NotApplicable`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelHistogram {
    pub total: u64,
    pub counts: BTreeMap<Label, u64>,
}

impl LabelHistogram {
    pub fn get(&self, label: &Label) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn fraction(&self, label: &Label) -> Fraction {
        Fraction::new(self.get(label), self.total)
    }

    /// Tab-separated `label count fraction` rows in template-set order with
    /// `NotApplicable` last. Templates with no occurrences are listed with 0.
    pub fn to_tsv(&self, templates: &TemplateSet) -> String {
        let mut out = String::from("label\tcount\tfraction\n");
        let labels = templates
            .ids()
            .cloned()
            .map(Label::Template)
            .chain(std::iter::once(Label::NotApplicable));
        for label in labels {
            let f = self.fraction(&label);
            out.push_str(&format!("{label}\t{}\t{:.6}\n", f.num, f.value()));
        }
        out
    }
}

pub fn template_distribution<'a>(
    diagnoses: impl IntoIterator<Item = &'a TemplatedDiagnosis>,
) -> Result<LabelHistogram, MetricError> {
    let mut counts = BTreeMap::new();
    let mut total = 0;
    for d in diagnoses {
        *counts.entry(d.label.clone()).or_insert(0) += 1;
        total += 1;
    }
    if total == 0 {
        return Err(MetricError::EmptyInput);
    }
    Ok(LabelHistogram { total, counts })
}

/// For each group of labels assigned to one target, counts the distinct
/// labels k (`NotApplicable` counts as a label) and reports the fraction of
/// groups per k.
pub fn diagnoses_per_target(groups: &[Vec<Label>]) -> Result<BTreeMap<usize, Fraction>, MetricError> {
    if groups.is_empty() || groups.iter().any(Vec::is_empty) {
        return Err(MetricError::EmptyInput);
    }
    let mut by_k: BTreeMap<usize, u64> = BTreeMap::new();
    for g in groups {
        let k = g.iter().collect::<BTreeSet<_>>().len();
        *by_k.entry(k).or_default() += 1;
    }
    let n = groups.len() as u64;
    Ok(by_k.into_iter().map(|(k, c)| (k, Fraction::new(c, n))).collect())
}

/// Fraction of fillers per extractability class; all three classes appear.
pub fn extractability_distribution<'a>(
    fillers: impl IntoIterator<Item = &'a Filler>,
) -> Result<BTreeMap<Extractability, Fraction>, MetricError> {
    let mut counts: BTreeMap<Extractability, u64> = Extractability::ALL.iter().map(|&e| (e, 0)).collect();
    let mut total = 0;
    for f in fillers {
        *counts.get_mut(&f.extractability).expect("all classes present") += 1;
        total += 1;
    }
    if total == 0 {
        return Err(MetricError::EmptyInput);
    }
    Ok(counts.into_iter().map(|(e, c)| (e, Fraction::new(c, total))).collect())
}
