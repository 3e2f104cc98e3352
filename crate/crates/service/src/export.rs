//! Project export in the corpus directory format.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use typic_core::corpus::{
    corpus_from_files, parts_to_files, Corpus, CorpusParts, DiagnosticComment, InformativenessJudgment,
    SlotAdjudication, TemplatedDiagnosis,
};
use typic_core::TemplateSet;

use crate::model::{Payload, Project, Submission};
use crate::ServiceError;

/// Calibration submissions, one [`Submission`] per line. Not part of the
/// corpus format; the loader ignores it.
pub const CALIBRATION_FILE: &str = "calibration.jsonl";

/// Exported files keyed by file name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Export {
    pub files: BTreeMap<String, String>,
}

impl Export {
    pub fn write_dir(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, contents) in &self.files {
            std::fs::write(dir.join(name), contents)?;
        }
        Ok(())
    }

    pub fn to_corpus(&self, templates: &TemplateSet) -> Result<Corpus, ServiceError> {
        corpus_from_files(&self.files, templates).map_err(|errors| {
            ServiceError::Export(errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
        })
    }

    /// Calibration submissions carried by the export.
    pub fn calibration(&self) -> Result<Vec<Submission>, serde_json::Error> {
        self.files
            .get(CALIBRATION_FILE)
            .map(|s| s.lines().map(serde_json::from_str).collect())
            .unwrap_or(Ok(Vec::new()))
    }
}

/// Id of the `k`-th (1-based) record an annotator produced for an item.
pub fn record_id(item_id: &str, annotator: &str, k: usize) -> String {
    format!("{item_id}/{annotator}/{k}")
}

/// Latest submissions in assignment order: items as assigned, then
/// assignees in assignment order (primary annotator first).
pub(crate) fn latest<'a>(project: &Project, submissions: &'a [Submission]) -> Vec<(bool, &'a Submission)> {
    let mut last: HashMap<(&str, &str), &Submission> = HashMap::new();
    for s in submissions {
        last.insert((&s.item_id, &s.annotator), s);
    }
    project
        .assignments
        .iter()
        .flat_map(|t| t.assignees.iter().map(move |a| (t, a)))
        .filter_map(|(t, a)| last.get(&(t.item_id.as_str(), a.annotator.as_str())).map(|s| (t.calibration, *s)))
        .collect()
}

pub fn export_project(
    project: &Project,
    corpus: &Corpus,
    submissions: &[Submission],
    templates: &TemplateSet,
) -> Result<Export, ServiceError> {
    let mut parts = CorpusParts::empty(templates);
    parts.manifest = corpus.manifest().clone();
    parts.topics = corpus.topics().to_vec();
    parts.counterarguments = corpus.counterarguments().to_vec();
    let items: Vec<&str> = project
        .assignments
        .iter()
        .filter(|t| !t.calibration)
        .map(|t| t.item_id.as_str())
        .collect();

    let mut calibration = String::new();
    let mut seen_comments = HashSet::new();
    for (is_calibration, s) in latest(project, submissions) {
        if is_calibration {
            calibration.push_str(&serde_json::to_string(s).expect("submission serializes"));
            calibration.push('\n');
            continue;
        }
        match &s.payload {
            Payload::Comments { comments } => {
                for (k, c) in comments.iter().enumerate() {
                    parts.comments.push(DiagnosticComment {
                        id: record_id(&s.item_id, &s.annotator, k + 1),
                        counterargument_id: s.item_id.clone(),
                        annotator_id: s.annotator.clone(),
                        target: c.target.clone(),
                        text: c.text.clone(),
                    });
                }
            }
            Payload::Diagnoses { diagnoses } => {
                for (k, d) in diagnoses.iter().enumerate() {
                    parts.diagnoses.push(TemplatedDiagnosis {
                        id: record_id(&s.item_id, &s.annotator, k + 1),
                        comment_id: s.item_id.clone(),
                        annotator_id: s.annotator.clone(),
                        label: d.label.clone(),
                        fillers: d.fillers.clone(),
                    });
                }
            }
            Payload::Judgment { score } => {
                parts.judgments.push(InformativenessJudgment {
                    item_id: s.item_id.clone(),
                    worker_id: s.annotator.clone(),
                    score: *score,
                });
            }
        }
    }

    match project.config.workflow {
        crate::Workflow::FreeTextDiagnosis => {}
        crate::Workflow::TemplateApplication => {
            for id in &items {
                if let Some(c) = corpus.comment(id) {
                    parts.comments.push(c.clone());
                }
            }
        }
        crate::Workflow::InformativenessJudging => {
            for id in &items {
                let Some(d) = corpus.diagnosis(id) else { continue };
                if seen_comments.insert(d.comment_id.clone()) {
                    parts.comments.extend(corpus.comment(&d.comment_id).cloned());
                }
                parts.diagnoses.push(d.clone());
            }
        }
    }
    parts.slot_adjudication = adjudication_rows(&parts);

    let mut files: BTreeMap<String, String> =
        parts_to_files(&parts).into_iter().map(|(k, v)| (k.to_owned(), v)).collect();
    if !calibration.is_empty() {
        files.insert(CALIBRATION_FILE.into(), calibration);
    }
    let export = Export { files };
    export.to_corpus(templates)?;
    Ok(export)
}

/// Unadjudicated slot pairs for every doubly annotated comment whose two
/// first diagnoses share a template.
fn adjudication_rows(parts: &CorpusParts) -> Vec<SlotAdjudication> {
    let mut first_two: BTreeMap<&str, Vec<&TemplatedDiagnosis>> = BTreeMap::new();
    let mut order: Vec<&str> = Vec::new();
    for d in &parts.diagnoses {
        let entry = first_two.entry(&d.comment_id).or_insert_with(|| {
            order.push(&d.comment_id);
            Vec::new()
        });
        if entry.len() < 2 && entry.iter().all(|e| e.annotator_id != d.annotator_id) {
            entry.push(d);
        }
    }
    let mut rows = Vec::new();
    for comment in order {
        let pair = &first_two[comment];
        let [a, b] = pair.as_slice() else { continue };
        if a.label != b.label || !a.label.is_applicable() {
            continue;
        }
        for (slot, fa) in &a.fillers {
            let Some(fb) = b.fillers.get(slot) else { continue };
            rows.push(SlotAdjudication {
                comment_id: comment.to_owned(),
                label: a.label.clone(),
                slot: slot.clone(),
                annotator_a: a.annotator_id.clone(),
                filler_a: fa.text.clone(),
                annotator_b: b.annotator_id.clone(),
                filler_b: fb.text.clone(),
                lenient_match: None,
            });
        }
    }
    rows
}
