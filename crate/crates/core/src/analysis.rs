//! The template-set evaluation suite computed from one corpus.
//!
//! Expressiveness is coverage of the primary diagnoses of eval-split
//! comments (all comments when the corpus has no split). Uniqueness is κ
//! over overlap pairs plus slot agreement from the adjudication file.
//! Informativeness is the majority-voted score distribution with ordinal
//! α across judges. The analyses are the extractability distribution of
//! the filler sample and the number of distinct labels per target.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::corpus::{Corpus, Extractability, InformativenessJudgment};
use crate::metrics::{
    aggregate_judgments, cohen_kappa, coverage, diagnoses_per_target, extractability_distribution,
    informativeness_distribution, krippendorff_alpha, percent_agreement, slot_agreement, uniqueness_data, Distance,
    Fraction, MetricError, ReliabilityData,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Uniqueness {
    pub pairs: usize,
    pub kappa: f64,
    pub label_agreement: Fraction,
    /// `None` when the corpus has no adjudicated slot pairs.
    pub slot_agreement: Option<Fraction>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Informativeness {
    pub items: usize,
    pub judgments: usize,
    pub workers: usize,
    /// Majority-voted score → share of items; all three scores appear.
    pub distribution: BTreeMap<u8, Fraction>,
    pub alpha_ordinal: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub expressiveness: Option<Fraction>,
    pub uniqueness: Option<Uniqueness>,
    pub informativeness: Option<Informativeness>,
    pub extractability: Option<BTreeMap<Extractability, Fraction>>,
    /// Distinct labels per target group → share of groups.
    pub diagnoses_per_target: Option<BTreeMap<usize, Fraction>>,
}

/// Coverage of the eval comments' primary diagnoses.
pub fn expressiveness(corpus: &Corpus) -> Result<Fraction, MetricError> {
    let primary = corpus.primary_diagnoses();
    match corpus.split() {
        Some(split) => coverage(primary.into_iter().filter(|d| split.eval.contains(&d.comment_id))),
        None => coverage(primary),
    }
}

pub fn uniqueness(corpus: &Corpus) -> Result<Uniqueness, MetricError> {
    let pairs = corpus.overlap_pairs();
    let data = uniqueness_data(&pairs);
    let slot = match slot_agreement(corpus.slot_adjudication()) {
        Ok(f) => Some(f),
        Err(MetricError::EmptyInput) => None,
        Err(e) => return Err(e),
    };
    Ok(Uniqueness {
        pairs: pairs.len(),
        kappa: cohen_kappa(&data)?,
        label_agreement: percent_agreement(&data)?,
        slot_agreement: slot,
    })
}

/// Judges as raters, judged diagnoses as units.
pub fn judgment_reliability_data(judgments: &[InformativenessJudgment]) -> ReliabilityData<u8> {
    let mut by_item: BTreeMap<&str, Vec<(String, u8)>> = BTreeMap::new();
    for j in judgments {
        by_item.entry(&j.item_id).or_default().push((j.worker_id.clone(), j.score));
    }
    let mut data = ReliabilityData::new();
    for (item, ratings) in by_item {
        data.push(item, ratings);
    }
    data
}

pub fn informativeness(corpus: &Corpus) -> Result<Informativeness, MetricError> {
    let judgments = corpus.judgments();
    let aggregated = aggregate_judgments(judgments)?;
    let mut distribution: BTreeMap<u8, Fraction> = (1..=3).map(|s| (s, Fraction::new(0, aggregated.len() as u64))).collect();
    for (score, f) in informativeness_distribution(&aggregated)? {
        distribution.insert(score.get(), f);
    }
    let workers: BTreeSet<&str> = judgments.iter().map(|j| j.worker_id.as_str()).collect();
    Ok(Informativeness {
        items: aggregated.len(),
        judgments: judgments.len(),
        workers: workers.len(),
        distribution,
        alpha_ordinal: krippendorff_alpha(&judgment_reliability_data(judgments), Distance::Ordinal)?,
    })
}

pub fn extractability(corpus: &Corpus) -> Result<BTreeMap<Extractability, Fraction>, MetricError> {
    extractability_distribution(corpus.sampled_fillers())
}

pub fn targets(corpus: &Corpus) -> Result<BTreeMap<usize, Fraction>, MetricError> {
    let groups: Vec<_> = corpus.target_groups().iter().map(|g| g.labels()).collect();
    diagnoses_per_target(&groups)
}

/// Every part of the suite the corpus has data for.
pub fn evaluate_corpus(corpus: &Corpus) -> Evaluation {
    Evaluation {
        expressiveness: expressiveness(corpus).ok(),
        uniqueness: uniqueness(corpus).ok(),
        informativeness: informativeness(corpus).ok(),
        extractability: extractability(corpus).ok(),
        diagnoses_per_target: targets(corpus).ok(),
    }
}
