//! Corpus data model and its line-delimited storage format.
//!
//! A corpus directory holds one JSON-lines file per record type plus a
//! `manifest.json` pinning the template-set version and tokenizer id:
//!
//! | file                      | records                   | required |
//! |---------------------------|---------------------------|----------|
//! | `manifest.json`           | [`Manifest`]              | yes      |
//! | `topics.jsonl`            | [`Topic`]                 | yes      |
//! | `counterarguments.jsonl`  | [`Counterargument`]       | yes      |
//! | `comments.jsonl`          | [`DiagnosticComment`]     | yes      |
//! | `diagnoses.jsonl`         | [`TemplatedDiagnosis`]    | no       |
//! | `judgments.jsonl`         | [`InformativenessJudgment`] | no     |
//! | `split.json`              | [`Split`]                 | no       |
//! | `filler_sample.jsonl`     | [`FillerRef`]             | no       |
//! | `slot_adjudication.jsonl` | [`SlotAdjudication`]      | no       |
//!
//! Loading validates every record invariant and cross-reference. Writing
//! emits a canonical form, so load → write → load is the identity and
//! committed fixtures are byte-stable.

mod model;
mod split;
mod stats;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::template::{Label, TemplateSet};
use crate::tokenize::Tokenizer;

pub use model::*;
pub use split::{split_comments, SplitError};
pub use stats::{corpus_stats, StatsReport};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const TOPICS_FILE: &str = "topics.jsonl";
pub const COUNTERARGUMENTS_FILE: &str = "counterarguments.jsonl";
pub const COMMENTS_FILE: &str = "comments.jsonl";
pub const DIAGNOSES_FILE: &str = "diagnoses.jsonl";
pub const JUDGMENTS_FILE: &str = "judgments.jsonl";
pub const SPLIT_FILE: &str = "split.json";
pub const FILLER_SAMPLE_FILE: &str = "filler_sample.jsonl";
pub const SLOT_ADJUDICATION_FILE: &str = "slot_adjudication.jsonl";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{file}:{line}: schema error: {message}")]
    Schema {
        file: String,
        line: usize,
        message: String,
    },
    #[error("{file}:{line}: dangling reference to {kind} {id:?}")]
    DanglingReference {
        file: String,
        line: usize,
        kind: &'static str,
        id: String,
    },
    #[error("{file}:{line}: span error: {message}")]
    Span {
        file: String,
        line: usize,
        message: String,
    },
    #[error("{file}:{line}: {message}")]
    Invariant {
        file: String,
        line: usize,
        message: String,
    },
    #[error("manifest pins template set {expected:?} but {found:?} was supplied")]
    TemplateSetMismatch { expected: String, found: String },
}

/// Raw record lists, before cross-reference validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusParts {
    pub manifest: Manifest,
    pub topics: Vec<Topic>,
    pub counterarguments: Vec<Counterargument>,
    pub comments: Vec<DiagnosticComment>,
    pub diagnoses: Vec<TemplatedDiagnosis>,
    pub judgments: Vec<InformativenessJudgment>,
    pub split: Option<Split>,
    pub filler_sample: Vec<FillerRef>,
    pub slot_adjudication: Vec<SlotAdjudication>,
}

impl CorpusParts {
    pub fn empty(templates: &TemplateSet) -> Self {
        CorpusParts {
            manifest: Manifest {
                format: CORPUS_FORMAT.into(),
                template_set_version: templates.version().into(),
                tokenizer: Tokenizer::default(),
            },
            topics: Vec::new(),
            counterarguments: Vec::new(),
            comments: Vec::new(),
            diagnoses: Vec::new(),
            judgments: Vec::new(),
            split: None,
            filler_sample: Vec::new(),
            slot_adjudication: Vec::new(),
        }
    }
}

/// A validated, immutable corpus.
#[derive(Clone, Debug)]
pub struct Corpus {
    parts: CorpusParts,
    topic_index: HashMap<String, usize>,
    counterargument_index: HashMap<String, usize>,
    comment_index: HashMap<String, usize>,
    diagnosis_index: HashMap<String, usize>,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

/// Two annotators' template selections for the same comment.
#[derive(Clone, Copy, Debug)]
pub struct OverlapPair<'a> {
    pub comment_id: &'a str,
    pub first: &'a TemplatedDiagnosis,
    pub second: &'a TemplatedDiagnosis,
}

/// Templated diagnoses sharing one counterargument and target sentence set.
#[derive(Clone, Debug)]
pub struct TargetGroup<'a> {
    pub counterargument_id: &'a str,
    pub target: &'a [usize],
    pub comments: Vec<&'a DiagnosticComment>,
    pub diagnoses: Vec<&'a TemplatedDiagnosis>,
}

impl<'a> TargetGroup<'a> {
    pub fn labels(&self) -> Vec<Label> {
        self.diagnoses.iter().map(|d| d.label.clone()).collect()
    }
}

impl Corpus {
    /// Validates `parts` against `templates`, collecting every problem.
    pub fn from_parts(parts: CorpusParts, templates: &TemplateSet) -> Result<Corpus, Vec<CorpusError>> {
        let mut errors = Vec::new();
        validate(&parts, templates, &mut errors);
        if !errors.is_empty() {
            return Err(errors);
        }
        let index = |ids: Vec<&String>| -> HashMap<String, usize> {
            ids.into_iter().enumerate().map(|(i, id)| (id.clone(), i)).collect()
        };
        Ok(Corpus {
            topic_index: index(parts.topics.iter().map(|t| &t.id).collect()),
            counterargument_index: index(parts.counterarguments.iter().map(|c| &c.id).collect()),
            comment_index: index(parts.comments.iter().map(|c| &c.id).collect()),
            diagnosis_index: index(parts.diagnoses.iter().map(|d| &d.id).collect()),
            parts,
        })
    }

    pub fn parts(&self) -> &CorpusParts {
        &self.parts
    }

    pub fn into_parts(self) -> CorpusParts {
        self.parts
    }

    pub fn manifest(&self) -> &Manifest {
        &self.parts.manifest
    }

    pub fn topics(&self) -> &[Topic] {
        &self.parts.topics
    }

    pub fn counterarguments(&self) -> &[Counterargument] {
        &self.parts.counterarguments
    }

    pub fn comments(&self) -> &[DiagnosticComment] {
        &self.parts.comments
    }

    pub fn diagnoses(&self) -> &[TemplatedDiagnosis] {
        &self.parts.diagnoses
    }

    pub fn judgments(&self) -> &[InformativenessJudgment] {
        &self.parts.judgments
    }

    pub fn split(&self) -> Option<&Split> {
        self.parts.split.as_ref()
    }

    pub fn filler_sample(&self) -> &[FillerRef] {
        &self.parts.filler_sample
    }

    pub fn slot_adjudication(&self) -> &[SlotAdjudication] {
        &self.parts.slot_adjudication
    }

    pub fn topic(&self, id: &str) -> Option<&Topic> {
        self.topic_index.get(id).map(|&i| &self.parts.topics[i])
    }

    pub fn counterargument(&self, id: &str) -> Option<&Counterargument> {
        self.counterargument_index
            .get(id)
            .map(|&i| &self.parts.counterarguments[i])
    }

    pub fn comment(&self, id: &str) -> Option<&DiagnosticComment> {
        self.comment_index.get(id).map(|&i| &self.parts.comments[i])
    }

    pub fn diagnosis(&self, id: &str) -> Option<&TemplatedDiagnosis> {
        self.diagnosis_index.get(id).map(|&i| &self.parts.diagnoses[i])
    }

    /// Topic of the counterargument a comment belongs to.
    pub fn topic_of_comment(&self, comment_id: &str) -> Option<&Topic> {
        let comment = self.comment(comment_id)?;
        let ca = self.counterargument(&comment.counterargument_id)?;
        self.topic(&ca.topic_id)
    }

    /// Diagnoses whose comment satisfies `keep`, in file order.
    pub fn diagnoses_where<'a>(
        &'a self,
        keep: impl Fn(&str) -> bool + 'a,
    ) -> impl Iterator<Item = &'a TemplatedDiagnosis> + 'a {
        self.parts.diagnoses.iter().filter(move |d| keep(&d.comment_id))
    }

    /// Diagnoses by the first annotator of each comment (file order), i.e.
    /// one annotator's view with second opinions on overlap items removed.
    pub fn primary_diagnoses(&self) -> Vec<&TemplatedDiagnosis> {
        let mut first: HashMap<&str, &str> = HashMap::new();
        self.parts
            .diagnoses
            .iter()
            .filter(|d| *first.entry(&d.comment_id).or_insert(&d.annotator_id) == d.annotator_id)
            .collect()
    }

    /// Comments annotated by at least two distinct annotators, with the
    /// first record of each of the first two annotators.
    pub fn overlap_pairs(&self) -> Vec<OverlapPair<'_>> {
        let mut by_comment: BTreeMap<usize, Vec<&TemplatedDiagnosis>> = BTreeMap::new();
        for d in &self.parts.diagnoses {
            let order = self.comment_index.get(&d.comment_id).copied().unwrap_or(usize::MAX);
            let entry = by_comment.entry(order).or_default();
            if entry.len() < 2 && entry.iter().all(|e| e.annotator_id != d.annotator_id) {
                entry.push(d);
            }
        }
        by_comment
            .into_values()
            .filter(|v| v.len() == 2)
            .map(|v| OverlapPair {
                comment_id: &v[0].comment_id,
                first: v[0],
                second: v[1],
            })
            .collect()
    }

    /// Groups all diagnoses by (counterargument, target sentence set), in
    /// order of first appearance in the comments file.
    pub fn target_groups(&self) -> Vec<TargetGroup<'_>> {
        let mut order: Vec<TargetGroup<'_>> = Vec::new();
        let mut key_to_group: HashMap<(&str, &[usize]), usize> = HashMap::new();
        let mut comment_group: HashMap<&str, usize> = HashMap::new();
        for c in &self.parts.comments {
            let key = (c.counterargument_id.as_str(), c.target.as_slice());
            let g = *key_to_group.entry(key).or_insert_with(|| {
                order.push(TargetGroup {
                    counterargument_id: &c.counterargument_id,
                    target: &c.target,
                    comments: Vec::new(),
                    diagnoses: Vec::new(),
                });
                order.len() - 1
            });
            order[g].comments.push(c);
            comment_group.insert(&c.id, g);
        }
        for d in &self.parts.diagnoses {
            if let Some(&g) = comment_group.get(d.comment_id.as_str()) {
                order[g].diagnoses.push(d);
            }
        }
        order.retain(|g| !g.diagnoses.is_empty());
        order
    }

    /// Fillers listed in the filler sample, or every filler when no sample
    /// is present.
    pub fn sampled_fillers(&self) -> Vec<&Filler> {
        if self.parts.filler_sample.is_empty() {
            return self
                .parts
                .diagnoses
                .iter()
                .flat_map(|d| d.fillers.values())
                .collect();
        }
        self.parts
            .filler_sample
            .iter()
            .filter_map(|r| self.diagnosis(&r.diagnosis_id)?.fillers.get(&r.slot))
            .collect()
    }

    /// Text of the document a filler span points into.
    pub fn document_text(&self, comment_id: &str, doc: &DocumentRef) -> Option<&str> {
        match doc {
            DocumentRef::Counterargument => {
                let comment = self.comment(comment_id)?;
                Some(&self.counterargument(&comment.counterargument_id)?.text)
            }
            DocumentRef::Original(point) => {
                Some(&self.topic_of_comment(comment_id)?.point(point)?.text)
            }
        }
    }

    /// Canonical file contents keyed by file name.
    pub fn to_files(&self) -> BTreeMap<&'static str, String> {
        parts_to_files(&self.parts)
    }

    pub fn write_dir(&self, dir: &Path) -> Result<(), CorpusError> {
        write_files(dir, &self.to_files())
    }
}

pub fn parts_to_files(parts: &CorpusParts) -> BTreeMap<&'static str, String> {
    fn lines<T: Serialize>(records: &[T]) -> String {
        let mut out = String::new();
        for r in records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }
    let mut files = BTreeMap::new();
    let mut manifest = serde_json::to_string_pretty(&parts.manifest).expect("manifest serializes");
    manifest.push('\n');
    files.insert(MANIFEST_FILE, manifest);
    files.insert(TOPICS_FILE, lines(&parts.topics));
    files.insert(COUNTERARGUMENTS_FILE, lines(&parts.counterarguments));
    files.insert(COMMENTS_FILE, lines(&parts.comments));
    files.insert(DIAGNOSES_FILE, lines(&parts.diagnoses));
    files.insert(JUDGMENTS_FILE, lines(&parts.judgments));
    if let Some(split) = &parts.split {
        let mut s = serde_json::to_string(split).expect("split serializes");
        s.push('\n');
        files.insert(SPLIT_FILE, s);
    }
    if !parts.filler_sample.is_empty() {
        files.insert(FILLER_SAMPLE_FILE, lines(&parts.filler_sample));
    }
    if !parts.slot_adjudication.is_empty() {
        files.insert(SLOT_ADJUDICATION_FILE, lines(&parts.slot_adjudication));
    }
    files
}

pub fn write_files(dir: &Path, files: &BTreeMap<&'static str, String>) -> Result<(), CorpusError> {
    fs::create_dir_all(dir).map_err(|source| CorpusError::Io {
        path: dir.to_owned(),
        source,
    })?;
    for (name, contents) in files {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|source| CorpusError::Io { path, source })?;
    }
    Ok(())
}

/// Loads and validates a corpus directory, failing on the first problem.
pub fn load_corpus(dir: &Path, templates: &TemplateSet) -> Result<Corpus, CorpusError> {
    let parts = read_parts(dir).map_err(|mut e| e.remove(0))?;
    Corpus::from_parts(parts, templates).map_err(|mut e| e.remove(0))
}

/// Loads a corpus directory and reports every problem found.
pub fn validate_corpus_dir(dir: &Path, templates: &TemplateSet) -> Vec<CorpusError> {
    match read_parts(dir) {
        Ok(parts) => Corpus::from_parts(parts, templates).err().unwrap_or_default(),
        Err(errors) => errors,
    }
}

/// Parses a corpus from in-memory file contents (same names as on disk).
pub fn corpus_from_files(
    files: &BTreeMap<String, String>,
    templates: &TemplateSet,
) -> Result<Corpus, Vec<CorpusError>> {
    let parts = parse_parts(|name| Ok(files.get(name).cloned()))?;
    Corpus::from_parts(parts, templates)
}

fn read_parts(dir: &Path) -> Result<CorpusParts, Vec<CorpusError>> {
    parse_parts(|name| {
        let path = dir.join(name);
        match fs::read_to_string(&path) {
            Ok(s) => Ok(Some(s)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(source) => Err(CorpusError::Io { path, source }),
        }
    })
}

fn parse_parts(
    mut read: impl FnMut(&str) -> Result<Option<String>, CorpusError>,
) -> Result<CorpusParts, Vec<CorpusError>> {
    let mut errors = Vec::new();
    let mut required = |name: &str, errors: &mut Vec<CorpusError>| match read(name) {
        Ok(Some(s)) => Some(s),
        Ok(None) => {
            errors.push(CorpusError::Schema {
                file: name.into(),
                line: 0,
                message: "required file is missing".into(),
            });
            None
        }
        Err(e) => {
            errors.push(e);
            None
        }
    };
    let manifest_src = required(MANIFEST_FILE, &mut errors);
    let topics_src = required(TOPICS_FILE, &mut errors);
    let cas_src = required(COUNTERARGUMENTS_FILE, &mut errors);
    let comments_src = required(COMMENTS_FILE, &mut errors);
    let mut optional = |name: &str, errors: &mut Vec<CorpusError>| match read(name) {
        Ok(s) => s,
        Err(e) => {
            errors.push(e);
            None
        }
    };
    let diagnoses_src = optional(DIAGNOSES_FILE, &mut errors);
    let judgments_src = optional(JUDGMENTS_FILE, &mut errors);
    let split_src = optional(SPLIT_FILE, &mut errors);
    let sample_src = optional(FILLER_SAMPLE_FILE, &mut errors);
    let adjudication_src = optional(SLOT_ADJUDICATION_FILE, &mut errors);

    let manifest = manifest_src.and_then(|s| parse_document::<Manifest>(MANIFEST_FILE, &s, &mut errors));
    let split = split_src.and_then(|s| parse_document::<Split>(SPLIT_FILE, &s, &mut errors));
    let parts = CorpusParts {
        manifest: manifest.unwrap_or(Manifest {
            format: String::new(),
            template_set_version: String::new(),
            tokenizer: Tokenizer::default(),
        }),
        topics: parse_lines(TOPICS_FILE, topics_src.as_deref(), &mut errors),
        counterarguments: parse_lines(COUNTERARGUMENTS_FILE, cas_src.as_deref(), &mut errors),
        comments: parse_lines(COMMENTS_FILE, comments_src.as_deref(), &mut errors),
        diagnoses: parse_lines(DIAGNOSES_FILE, diagnoses_src.as_deref(), &mut errors),
        judgments: parse_lines(JUDGMENTS_FILE, judgments_src.as_deref(), &mut errors),
        split,
        filler_sample: parse_lines(FILLER_SAMPLE_FILE, sample_src.as_deref(), &mut errors),
        slot_adjudication: parse_lines(SLOT_ADJUDICATION_FILE, adjudication_src.as_deref(), &mut errors),
    };
    if errors.is_empty() {
        Ok(parts)
    } else {
        Err(errors)
    }
}

fn parse_document<T: DeserializeOwned>(file: &str, src: &str, errors: &mut Vec<CorpusError>) -> Option<T> {
    serde_json::from_str(src)
        .map_err(|e| {
            errors.push(CorpusError::Schema {
                file: file.into(),
                line: e.line(),
                message: e.to_string(),
            })
        })
        .ok()
}

fn parse_lines<T: DeserializeOwned>(file: &str, src: Option<&str>, errors: &mut Vec<CorpusError>) -> Vec<T> {
    let Some(src) = src else { return Vec::new() };
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(record) => out.push(record),
            Err(e) => errors.push(CorpusError::Schema {
                file: file.into(),
                line: i + 1,
                message: e.to_string(),
            }),
        }
    }
    out
}

fn validate(parts: &CorpusParts, templates: &TemplateSet, errors: &mut Vec<CorpusError>) {
    let invariant = |file: &str, line: usize, message: String| CorpusError::Invariant {
        file: file.into(),
        line,
        message,
    };
    let dangling = |file: &str, line: usize, kind: &'static str, id: &str| CorpusError::DanglingReference {
        file: file.into(),
        line,
        kind,
        id: id.into(),
    };

    if parts.manifest.format != CORPUS_FORMAT {
        errors.push(CorpusError::Schema {
            file: MANIFEST_FILE.into(),
            line: 0,
            message: format!("unsupported format {:?}, expected {CORPUS_FORMAT:?}", parts.manifest.format),
        });
    }
    if parts.manifest.template_set_version != templates.version() {
        errors.push(CorpusError::TemplateSetMismatch {
            expected: parts.manifest.template_set_version.clone(),
            found: templates.version().into(),
        });
    }

    let mut topics: HashMap<&str, &Topic> = HashMap::new();
    for (i, t) in parts.topics.iter().enumerate() {
        let line = i + 1;
        if topics.insert(&t.id, t).is_some() {
            errors.push(invariant(TOPICS_FILE, line, format!("duplicate topic id {:?}", t.id)));
        }
        if t.points.is_empty() || t.points.len() > 10 {
            errors.push(invariant(TOPICS_FILE, line, format!("topic has {} points, expected 1 to 10", t.points.len())));
        }
        let mut seen = HashSet::new();
        for p in &t.points {
            if !seen.insert(&p.id) {
                errors.push(invariant(TOPICS_FILE, line, format!("duplicate point id {:?}", p.id)));
            }
        }
    }

    let mut cas: HashMap<&str, &Counterargument> = HashMap::new();
    for (i, ca) in parts.counterarguments.iter().enumerate() {
        let line = i + 1;
        if cas.insert(&ca.id, ca).is_some() {
            errors.push(invariant(COUNTERARGUMENTS_FILE, line, format!("duplicate counterargument id {:?}", ca.id)));
        }
        if !topics.contains_key(ca.topic_id.as_str()) {
            errors.push(dangling(COUNTERARGUMENTS_FILE, line, "topic", &ca.topic_id));
        }
        let len = ca.text.chars().count();
        let mut prev_end = 0;
        for (k, s) in ca.sentences.iter().enumerate() {
            let span_error = |message: String| CorpusError::Span {
                file: COUNTERARGUMENTS_FILE.into(),
                line,
                message,
            };
            if s.is_empty() {
                errors.push(span_error(format!("sentence {k} span {:?} is empty", (s.start, s.end))));
            } else if s.end > len {
                errors.push(span_error(format!("sentence {k} span {:?} exceeds text length {len}", (s.start, s.end))));
            } else if s.start < prev_end {
                errors.push(span_error(format!("sentence {k} span {:?} overlaps or precedes the previous one", (s.start, s.end))));
            }
            prev_end = prev_end.max(s.end);
        }
    }

    let mut comments: HashMap<&str, &DiagnosticComment> = HashMap::new();
    for (i, c) in parts.comments.iter().enumerate() {
        let line = i + 1;
        if comments.insert(&c.id, c).is_some() {
            errors.push(invariant(COMMENTS_FILE, line, format!("duplicate comment id {:?}", c.id)));
        }
        if c.text.trim().is_empty() {
            errors.push(invariant(COMMENTS_FILE, line, "comment text is empty".into()));
        }
        if c.target.is_empty() {
            errors.push(invariant(COMMENTS_FILE, line, "comment has no target sentences".into()));
        }
        if c.target.windows(2).any(|w| w[0] >= w[1]) {
            errors.push(invariant(COMMENTS_FILE, line, "target indices must be sorted and distinct".into()));
        }
        match cas.get(c.counterargument_id.as_str()) {
            None => errors.push(dangling(COMMENTS_FILE, line, "counterargument", &c.counterargument_id)),
            Some(ca) => {
                if let Some(bad) = c.target.iter().find(|&&t| t >= ca.sentences.len()) {
                    errors.push(CorpusError::Span {
                        file: COMMENTS_FILE.into(),
                        line,
                        message: format!("target sentence {bad} out of range ({} sentences)", ca.sentences.len()),
                    });
                }
            }
        }
    }

    let mut diagnoses: HashMap<&str, &TemplatedDiagnosis> = HashMap::new();
    for (i, d) in parts.diagnoses.iter().enumerate() {
        let line = i + 1;
        if diagnoses.insert(&d.id, d).is_some() {
            errors.push(invariant(DIAGNOSES_FILE, line, format!("duplicate diagnosis id {:?}", d.id)));
        }
        let comment = comments.get(d.comment_id.as_str());
        if comment.is_none() {
            errors.push(dangling(DIAGNOSES_FILE, line, "comment", &d.comment_id));
        }
        match &d.label {
            Label::NotApplicable => {
                if !d.fillers.is_empty() {
                    errors.push(invariant(DIAGNOSES_FILE, line, "NotApplicable carries fillers".into()));
                }
            }
            Label::Template(id) => match templates.get(id) {
                None => errors.push(dangling(DIAGNOSES_FILE, line, "template", id.as_str())),
                Some(t) => {
                    let expected: BTreeSet<_> = t.slots().iter().collect();
                    let got: BTreeSet<_> = d.fillers.keys().collect();
                    if expected != got {
                        errors.push(invariant(
                            DIAGNOSES_FILE,
                            line,
                            format!(
                                "{id} fillers {:?} do not match slots {:?}",
                                got.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
                                expected.iter().map(|s| s.as_str()).collect::<Vec<_>>()
                            ),
                        ));
                    }
                }
            },
        }
        for (slot, f) in &d.fillers {
            if f.text.trim().is_empty() {
                errors.push(invariant(DIAGNOSES_FILE, line, format!("filler {slot} is empty")));
            }
            let extractable = f.extractability == Extractability::Extractable;
            match (&f.source_span, extractable) {
                (None, true) => errors.push(invariant(DIAGNOSES_FILE, line, format!("extractable filler {slot} has no source span"))),
                (Some(_), false) => errors.push(invariant(DIAGNOSES_FILE, line, format!("filler {slot} has a source span but is {}", f.extractability))),
                _ => {}
            }
            let (Some(src), Some(comment)) = (&f.source_span, comment) else { continue };
            let Some(ca) = cas.get(comment.counterargument_id.as_str()) else { continue };
            let text = match &src.document {
                DocumentRef::Counterargument => Some(ca.text.as_str()),
                DocumentRef::Original(point) => topics
                    .get(ca.topic_id.as_str())
                    .and_then(|t| t.point(point))
                    .map(|p| p.text.as_str()),
            };
            match text {
                None => errors.push(dangling(DIAGNOSES_FILE, line, "document", &String::from(src.document.clone()))),
                Some(text) => {
                    if src.span.is_empty() || src.span.slice(text).is_none() {
                        errors.push(CorpusError::Span {
                            file: DIAGNOSES_FILE.into(),
                            line,
                            message: format!("filler {slot} span {:?} outside its document", (src.span.start, src.span.end)),
                        });
                    }
                }
            }
        }
    }

    let mut judged = HashSet::new();
    for (i, j) in parts.judgments.iter().enumerate() {
        let line = i + 1;
        match diagnoses.get(j.item_id.as_str()) {
            None => errors.push(dangling(JUDGMENTS_FILE, line, "diagnosis", &j.item_id)),
            Some(d) if !d.label.is_applicable() => {
                errors.push(invariant(JUDGMENTS_FILE, line, "NotApplicable diagnoses cannot be judged".into()))
            }
            Some(_) => {}
        }
        if !(1..=3).contains(&j.score) {
            errors.push(invariant(JUDGMENTS_FILE, line, format!("score {} outside 1..=3", j.score)));
        }
        if !judged.insert((&j.item_id, &j.worker_id)) {
            errors.push(invariant(JUDGMENTS_FILE, line, format!("worker {:?} judged {:?} twice", j.worker_id, j.item_id)));
        }
    }

    if let Some(split) = &parts.split {
        if let Some(both) = split.dev.intersection(&split.eval).next() {
            errors.push(invariant(SPLIT_FILE, 0, format!("comment {both:?} is in both dev and eval")));
        }
        for id in split.dev.iter().chain(&split.eval) {
            if !comments.contains_key(id.as_str()) {
                errors.push(dangling(SPLIT_FILE, 0, "comment", id));
            }
        }
        if let Some(missing) = parts
            .comments
            .iter()
            .find(|c| !split.dev.contains(&c.id) && !split.eval.contains(&c.id))
        {
            errors.push(invariant(SPLIT_FILE, 0, format!("comment {:?} is in neither dev nor eval", missing.id)));
        }
    }

    for (i, r) in parts.filler_sample.iter().enumerate() {
        match diagnoses.get(r.diagnosis_id.as_str()) {
            None => errors.push(dangling(FILLER_SAMPLE_FILE, i + 1, "diagnosis", &r.diagnosis_id)),
            Some(d) if !d.fillers.contains_key(&r.slot) => {
                errors.push(dangling(FILLER_SAMPLE_FILE, i + 1, "slot", r.slot.as_str()))
            }
            Some(_) => {}
        }
    }

    for (i, a) in parts.slot_adjudication.iter().enumerate() {
        if !comments.contains_key(a.comment_id.as_str()) {
            errors.push(dangling(SLOT_ADJUDICATION_FILE, i + 1, "comment", &a.comment_id));
        }
    }
}

#[cfg(test)]
mod tests;
