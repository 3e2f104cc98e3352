use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::template::{Label, SlotName};

/// Half-open `[start, end)` range of char offsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    /// Slices `text` by char offsets. Returns `None` when out of bounds.
    pub fn slice<'a>(&self, text: &'a str) -> Option<&'a str> {
        if self.start > self.end {
            return None;
        }
        let mut indices = text.char_indices().map(|(i, _)| i).chain(std::iter::once(text.len()));
        let start = indices.nth(self.start)?;
        let end = if self.end == self.start {
            start
        } else {
            indices.nth(self.end - self.start - 1)?
        };
        Some(&text[start..end])
    }
}

impl From<(usize, usize)> for Span {
    fn from((start, end): (usize, usize)) -> Self {
        Span { start, end }
    }
}

impl From<Span> for (usize, usize) {
    fn from(span: Span) -> Self {
        (span.start, span.end)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    pub id: String,
    pub text: String,
}

/// A debate motion with the points of its original (government) argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Topic {
    pub id: String,
    pub motion: String,
    pub points: Vec<Point>,
}

impl Topic {
    pub fn point(&self, id: &str) -> Option<&Point> {
        self.points.iter().find(|p| p.id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuthorKind {
    Expert,
    Crowd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counterargument {
    pub id: String,
    pub topic_id: String,
    pub author_kind: AuthorKind,
    pub text: String,
    /// Stored sentence segmentation; never recomputed.
    pub sentences: Vec<Span>,
}

impl Counterargument {
    pub fn sentence(&self, index: usize) -> Option<&str> {
        self.sentences.get(index).and_then(|s| s.slice(&self.text))
    }

    /// Sentences at `indices` joined by a single space.
    pub fn target_text(&self, indices: &[usize]) -> String {
        indices
            .iter()
            .filter_map(|&i| self.sentence(i))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticComment {
    pub id: String,
    pub counterargument_id: String,
    pub annotator_id: String,
    /// Sorted, distinct sentence indices.
    pub target: Vec<usize>,
    pub text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Extractability {
    Extractable,
    ExtractableWithChanges,
    NotExtractable,
}

impl Extractability {
    pub const ALL: [Extractability; 3] = [
        Extractability::Extractable,
        Extractability::ExtractableWithChanges,
        Extractability::NotExtractable,
    ];
}

impl fmt::Display for Extractability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Extractability::Extractable => "Extractable",
            Extractability::ExtractableWithChanges => "ExtractableWithChanges",
            Extractability::NotExtractable => "NotExtractable",
        })
    }
}

/// Which text a filler span points into.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DocumentRef {
    Counterargument,
    /// One point of the original argument, by point id.
    Original(String),
}

impl TryFrom<String> for DocumentRef {
    type Error = String;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        if value == "counterargument" {
            Ok(DocumentRef::Counterargument)
        } else if let Some(point) = value.strip_prefix("original:") {
            if point.is_empty() {
                Err("empty point id in document ref".into())
            } else {
                Ok(DocumentRef::Original(point.to_owned()))
            }
        } else {
            Err(format!("unknown document ref {value:?}"))
        }
    }
}

impl From<DocumentRef> for String {
    fn from(value: DocumentRef) -> Self {
        match value {
            DocumentRef::Counterargument => "counterargument".into(),
            DocumentRef::Original(p) => format!("original:{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpan {
    pub document: DocumentRef,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Filler {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_span: Option<SourceSpan>,
    pub extractability: Extractability,
}

impl Filler {
    pub fn extracted(text: impl Into<String>, source: SourceSpan) -> Self {
        Filler {
            text: text.into(),
            source_span: Some(source),
            extractability: Extractability::Extractable,
        }
    }

    pub fn typed(text: impl Into<String>, extractability: Extractability) -> Self {
        Filler {
            text: text.into(),
            source_span: None,
            extractability,
        }
    }
}

/// A diagnostic comment converted to a template label plus slot fillers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplatedDiagnosis {
    pub id: String,
    pub comment_id: String,
    pub annotator_id: String,
    pub label: Label,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fillers: BTreeMap<SlotName, Filler>,
}

/// One worker's 1–3 informativeness score for a templated diagnosis.
///
/// `item_id` is the id of the judged [`TemplatedDiagnosis`]; a comment
/// converted into several templated diagnoses yields several judged items.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InformativenessJudgment {
    pub item_id: String,
    pub worker_id: String,
    pub score: u8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Split {
    pub dev: BTreeSet<String>,
    pub eval: BTreeSet<String>,
}

/// Reference to one slot filler inside a templated diagnosis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FillerRef {
    pub diagnosis_id: String,
    pub slot: SlotName,
}

/// Paired fillers of a doubly annotated comment whose template selections
/// agree, with the adjudicator's lenient-match verdict (`None` until
/// adjudicated).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotAdjudication {
    pub comment_id: String,
    pub label: Label,
    pub slot: SlotName,
    pub annotator_a: String,
    pub filler_a: String,
    pub annotator_b: String,
    pub filler_b: String,
    pub lenient_match: Option<bool>,
}

pub const CORPUS_FORMAT: &str = "typic-corpus/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format: String,
    pub template_set_version: String,
    pub tokenizer: crate::tokenize::Tokenizer,
}
