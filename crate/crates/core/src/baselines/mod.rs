//! Floor models for template selection and slot filling, and the harness
//! that scores them on a corpus split.
//!
//! Selection is multi-label over a target (one counterargument plus a set
//! of target sentences); the gold vector is the union of every annotator's
//! template for that target. Filling takes a selected template and returns
//! one filler per slot.

mod chunk;
mod evaluate;
mod fill;
mod select;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{Corpus, Filler};
use crate::metrics::{LabelVector, MetricError};
use crate::template::{SlotName, TemplateId, TemplateSet};

pub use chunk::{content_tokens, is_stopword, Chunker, PunctuationChunker};
pub use evaluate::{
    evaluate, evaluate_model, Benchmark, BenchmarkReport, FillingSummary, Model, ModelKind,
};
pub use fill::{extractive_filler, Documents, EmptyFiller, ExtractiveFiller, GoldFiller, SlotFiller};
pub use select::{EmptySelector, GoldSelector, KnnSelector, MajoritySelector, Selector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BaselineError {
    #[error("the dev set is empty")]
    EmptyDev,
    #[error("the eval split is empty")]
    EmptyEval,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("no candidate spans: the documents are empty")]
    NoCandidates,
    #[error("template {0} is not in the template set")]
    UnknownTemplate(TemplateId),
    #[error("corpus has no {0}")]
    MissingRecord(String),
    #[error("corpus has no dev/eval split")]
    NoSplit,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// One template-selection item: a counterargument and target sentences.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelectionInstance {
    pub topic_id: String,
    pub counterargument_id: String,
    pub target: Vec<usize>,
    pub target_text: String,
    pub gold: LabelVector,
}

/// One slot-filling item: a templated diagnosis with its gold fillers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FillingInstance {
    pub diagnosis_id: String,
    pub counterargument_id: String,
    pub target: Vec<usize>,
    pub template: TemplateId,
    pub gold: BTreeMap<SlotName, Filler>,
}

/// Selection instances over the targets of `comments`. Diagnoses of other
/// comments do not contribute to the gold vectors.
pub fn selection_instances(
    corpus: &Corpus,
    templates: &TemplateSet,
    comments: &BTreeSet<String>,
) -> Result<Vec<SelectionInstance>, BaselineError> {
    let mut out = Vec::new();
    for group in corpus.target_groups() {
        if !group.comments.iter().any(|c| comments.contains(&c.id)) {
            continue;
        }
        let ca = corpus
            .counterargument(group.counterargument_id)
            .ok_or_else(|| BaselineError::MissingRecord(format!("counterargument {}", group.counterargument_id)))?;
        let ids = group
            .diagnoses
            .iter()
            .filter(|d| comments.contains(&d.comment_id))
            .filter_map(|d| d.label.template());
        out.push(SelectionInstance {
            topic_id: ca.topic_id.clone(),
            counterargument_id: ca.id.clone(),
            target: group.target.to_vec(),
            target_text: ca.target_text(group.target),
            gold: LabelVector::from_ids(templates, ids),
        });
    }
    Ok(out)
}

/// Filling instances for every templated (non-`NotApplicable`) diagnosis of
/// `comments`, in corpus order.
pub fn filling_instances(corpus: &Corpus, comments: &BTreeSet<String>) -> Vec<FillingInstance> {
    corpus
        .diagnoses()
        .iter()
        .filter(|d| comments.contains(&d.comment_id))
        .filter_map(|d| {
            let template = d.label.template()?.clone();
            let comment = corpus.comment(&d.comment_id)?;
            Some(FillingInstance {
                diagnosis_id: d.id.clone(),
                counterargument_id: comment.counterargument_id.clone(),
                target: comment.target.clone(),
                template,
                gold: d.fillers.clone(),
            })
        })
        .collect()
}
