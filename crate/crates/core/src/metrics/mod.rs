//! Template-set evaluation and subtask benchmark metrics.
//!
//! Expressiveness is template coverage of unseen comments, informativeness
//! is the majority-voted 1–3 judgment (ties resolved to the worse score)
//! with Krippendorff's α for worker reliability, and uniqueness is Cohen's
//! κ over doubly annotated comments. Template selection is scored as
//! multi-label classification and slot filling by n-gram overlap.

mod agreement;
mod distribution;
mod fraction;
mod multilabel;
mod overlap;
mod vote;

use thiserror::Error;

pub use agreement::{
    cohen_kappa, krippendorff_alpha, percent_agreement, slot_agreement, uniqueness_data, Distance,
    ReliabilityData, Unit,
};
pub use distribution::{
    coverage, diagnoses_per_target, extractability_distribution, template_distribution,
    LabelHistogram,
};
pub use fraction::Fraction;
pub use multilabel::{multilabel_eval, LabelPrf, LabelVector, MultilabelReport};
pub use overlap::{slot_overlap, SlotOverlap};
pub use vote::{aggregate_judgments, informativeness_distribution, majority_vote, AggregatedScore, Score};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("no input")]
    EmptyInput,
    #[error("item {0:?} is missing a rating")]
    MissingRating(String),
    #[error("expected exactly 2 annotators, found {0}")]
    AnnotatorCount(usize),
    #[error("at least {needed} items are required, got {got}")]
    TooFewItems { needed: usize, got: usize },
    #[error("chance agreement is 1 but observed agreement is not")]
    DegenerateChance,
    #[error("no variation in the data: expected disagreement is 0")]
    NoVariation,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("score {0} outside 1..=3")]
    InvalidScore(u8),
}
