use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use typic_core::corpus::{Counterargument, Filler, Topic};
use typic_core::template::SlotName;
use typic_core::Label;

/// Default number of judges per item in informativeness judging.
pub const DEFAULT_WORKERS_PER_ITEM: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Workflow {
    /// Free-text diagnostic comments on a counterargument.
    FreeTextDiagnosis,
    /// Converting a diagnostic comment into template labels and fillers.
    TemplateApplication,
    /// 1–3 informativeness scores for a templated diagnosis.
    InformativenessJudging,
}

impl fmt::Display for Workflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Workflow::FreeTextDiagnosis => "FreeTextDiagnosis",
            Workflow::TemplateApplication => "TemplateApplication",
            Workflow::InformativenessJudging => "InformativenessJudging",
        })
    }
}

fn default_workers() -> usize {
    DEFAULT_WORKERS_PER_ITEM
}

fn default_locale() -> String {
    "en".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    pub name: String,
    /// Corpus directory the items are drawn from.
    pub corpus: PathBuf,
    pub workflow: Workflow,
    /// Share of items given to a second annotator (free-text and template
    /// application only).
    #[serde(default)]
    pub overlap_fraction: f64,
    pub annotators: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    /// Restricts the project to these item ids, in this order. Items are
    /// counterarguments, comments or templated diagnoses depending on the
    /// workflow.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub items: Option<Vec<String>>,
    /// Items every annotator handles first. They are exported separately
    /// and do not count towards the overlap.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub calibration: Vec<String>,
    /// Judges per item in informativeness judging.
    #[serde(default = "default_workers")]
    pub workers_per_item: usize,
    /// Locale used to render templated diagnoses shown to judges.
    #[serde(default = "default_locale")]
    pub locale: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Open,
    InProgress,
    Done,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignee {
    pub annotator: String,
    pub status: Status,
    /// Number of accepted submissions; a submit must quote the current value.
    pub revision: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskAssignment {
    pub item_id: String,
    pub calibration: bool,
    pub overlap: bool,
    pub assignees: Vec<Assignee>,
}

impl TaskAssignment {
    pub fn assignee(&self, annotator: &str) -> Option<&Assignee> {
        self.assignees.iter().find(|a| a.annotator == annotator)
    }

    pub(crate) fn assignee_mut(&mut self, annotator: &str) -> Option<&mut Assignee> {
        self.assignees.iter_mut().find(|a| a.annotator == annotator)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Project {
    pub id: String,
    pub config: ProjectConfig,
    pub template_set_version: String,
    pub assignments: Vec<TaskAssignment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Progress {
    pub open: usize,
    pub in_progress: usize,
    pub done: usize,
}

/// Project metadata without any annotation content.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectSummary {
    pub id: String,
    pub name: String,
    pub workflow: Workflow,
    pub overlap_fraction: f64,
    pub annotators: Vec<String>,
    pub items: usize,
    pub overlap_items: usize,
    pub calibration_items: usize,
    pub progress: Progress,
}

impl Project {
    pub fn summary(&self) -> ProjectSummary {
        let mut progress = Progress::default();
        for a in self.assignments.iter().flat_map(|t| &t.assignees) {
            match a.status {
                Status::Open => progress.open += 1,
                Status::InProgress => progress.in_progress += 1,
                Status::Done => progress.done += 1,
            }
        }
        ProjectSummary {
            id: self.id.clone(),
            name: self.config.name.clone(),
            workflow: self.config.workflow,
            overlap_fraction: self.config.overlap_fraction,
            annotators: self.config.annotators.clone(),
            items: self.assignments.iter().filter(|t| !t.calibration).count(),
            overlap_items: self.assignments.iter().filter(|t| !t.calibration && t.overlap).count(),
            calibration_items: self.assignments.iter().filter(|t| t.calibration).count(),
            progress,
        }
    }

    pub fn assignment(&self, item_id: &str) -> Option<&TaskAssignment> {
        self.assignments.iter().find(|t| t.item_id == item_id)
    }
}

/// One comment written in free-text diagnosis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DraftComment {
    pub target: Vec<usize>,
    pub text: String,
}

/// One template application: a label plus its fillers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DraftDiagnosis {
    pub label: Label,
    #[serde(default)]
    pub fillers: BTreeMap<SlotName, Filler>,
}

/// Workflow-specific submission content.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    /// Free-text diagnosis: zero or more comments on the counterargument.
    Comments { comments: Vec<DraftComment> },
    /// Template application: one or more diagnoses for the comment.
    Diagnoses { diagnoses: Vec<DraftDiagnosis> },
    /// Informativeness judging: a 1–3 score.
    Judgment { score: u8 },
}

impl Payload {
    pub fn workflow(&self) -> Workflow {
        match self {
            Payload::Comments { .. } => Workflow::FreeTextDiagnosis,
            Payload::Diagnoses { .. } => Workflow::TemplateApplication,
            Payload::Judgment { .. } => Workflow::InformativenessJudging,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submission {
    pub item_id: String,
    pub annotator: String,
    /// Revision after this submission was accepted.
    pub revision: u64,
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmitRequest {
    pub item_id: String,
    pub revision: u64,
    pub payload: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ack {
    pub item_id: String,
    pub revision: u64,
}

/// The comment shown in template application, without its author.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskComment {
    pub id: String,
    pub target: Vec<usize>,
    pub text: String,
}

/// The templated diagnosis shown to a judge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskDiagnosis {
    pub id: String,
    pub label: Label,
    pub fillers: BTreeMap<SlotName, String>,
    pub rendered: String,
}

/// Everything an annotator needs for one item.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    pub project_id: String,
    pub item_id: String,
    pub workflow: Workflow,
    pub revision: u64,
    pub calibration: bool,
    pub topic: Topic,
    pub counterargument: Counterargument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<TaskComment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnosis: Option<TaskDiagnosis>,
}

/// An annotator's own view of one assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentView {
    pub item_id: String,
    pub calibration: bool,
    pub status: Status,
    pub revision: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CreatedProject {
    pub project: ProjectSummary,
    /// Bearer token per annotator.
    pub tokens: BTreeMap<String, String>,
}
