use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use typic_core::corpus::{Corpus, CorpusParts, DiagnosticComment, InformativenessJudgment, TemplatedDiagnosis};
use typic_core::{load_corpus, Label, TemplateSet};

use crate::assign::assign;
use crate::export::{export_project, Export};
use crate::model::{
    Ack, AssignmentView, CreatedProject, DraftComment, DraftDiagnosis, Payload, Project, ProjectConfig,
    ProjectSummary, Status, SubmitRequest, Submission, Task, TaskComment, TaskDiagnosis, Workflow,
};
use crate::store::{Event, Log};
use crate::ServiceError;

#[derive(Default)]
struct State {
    projects: BTreeMap<String, ProjectState>,
    /// Bearer token → (project id, annotator id).
    tokens: HashMap<String, (String, String)>,
}

struct ProjectState {
    project: Project,
    corpus: Arc<Corpus>,
    submissions: Vec<Submission>,
}

/// Annotation projects over corpora on disk, persisted in an append-only
/// log. All methods are safe to call from many threads; each mutation is
/// applied and logged under one lock, so the log order is the apply order.
pub struct Service {
    templates: TemplateSet,
    state: RwLock<State>,
    log: Mutex<Log>,
    corpora: Mutex<HashMap<PathBuf, Arc<Corpus>>>,
}

impl Service {
    /// A service whose state is lost on drop.
    pub fn in_memory(templates: TemplateSet) -> Self {
        Service {
            templates,
            state: RwLock::new(State::default()),
            log: Mutex::new(Log::memory()),
            corpora: Mutex::new(HashMap::new()),
        }
    }

    /// Opens the store at `path`, replaying its history.
    pub fn open(path: &Path, templates: TemplateSet) -> Result<Self, ServiceError> {
        let (log, events) = Log::open(path)?;
        let service = Service {
            templates,
            state: RwLock::new(State::default()),
            log: Mutex::new(log),
            corpora: Mutex::new(HashMap::new()),
        };
        {
            let mut state = service.state.write();
            for event in events {
                service.apply(&mut state, event)?;
            }
        }
        Ok(service)
    }

    pub fn templates(&self) -> &TemplateSet {
        &self.templates
    }

    fn corpus(&self, path: &Path) -> Result<Arc<Corpus>, ServiceError> {
        let mut cache = self.corpora.lock();
        if let Some(c) = cache.get(path) {
            return Ok(c.clone());
        }
        let corpus = Arc::new(
            load_corpus(path, &self.templates).map_err(|e| ServiceError::Config(format!("corpus {}: {e}", path.display())))?,
        );
        cache.insert(path.to_owned(), corpus.clone());
        Ok(corpus)
    }

    fn apply(&self, state: &mut State, event: Event) -> Result<(), ServiceError> {
        match event {
            Event::ProjectCreated { project, tokens } => {
                let corpus = self.corpus(&project.config.corpus)?;
                for (annotator, token) in tokens {
                    state.tokens.insert(token, (project.id.clone(), annotator));
                }
                state.projects.insert(
                    project.id.clone(),
                    ProjectState {
                        project,
                        corpus,
                        submissions: Vec::new(),
                    },
                );
            }
            Event::TaskIssued {
                project,
                item_id,
                annotator,
            } => {
                let a = assignee_mut(state, &project, &item_id, &annotator)?;
                a.status = Status::InProgress;
            }
            Event::Submitted { project, submission } => {
                let a = assignee_mut(state, &project, &submission.item_id, &submission.annotator)?;
                a.status = Status::Done;
                a.revision = submission.revision;
                state
                    .projects
                    .get_mut(&project)
                    .expect("checked by assignee_mut")
                    .submissions
                    .push(submission);
            }
            Event::ProjectDeleted { project } => {
                state.projects.remove(&project);
                state.tokens.retain(|_, (p, _)| *p != project);
            }
        }
        Ok(())
    }

    fn commit(&self, state: &mut State, event: Event) -> Result<(), ServiceError> {
        self.log.lock().append(&event)?;
        self.apply(state, event)
    }

    pub fn create_project(&self, config: ProjectConfig) -> Result<CreatedProject, ServiceError> {
        if !(0.0..=1.0).contains(&config.overlap_fraction) {
            return Err(ServiceError::Config(format!(
                "overlap fraction {} outside [0, 1]",
                config.overlap_fraction
            )));
        }
        if config.annotators.is_empty() {
            return Err(ServiceError::Config("no annotators".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = config.annotators.iter().find(|a| !seen.insert(a.as_str())) {
            return Err(ServiceError::Config(format!("annotator {dup:?} listed twice")));
        }
        let corpus = self.corpus(&config.corpus)?;
        let available = workflow_items(&corpus, config.workflow);
        for id in config.items.iter().flatten().chain(&config.calibration) {
            if !available.contains(id) {
                return Err(ServiceError::Config(format!("{id:?} is not a {} item of the corpus", config.workflow)));
            }
        }
        let items: Vec<String> = match &config.items {
            Some(list) => list.clone(),
            None => available,
        }
        .into_iter()
        .filter(|i| !config.calibration.contains(i))
        .collect();
        let mut unique = std::collections::HashSet::new();
        if let Some(dup) = items.iter().chain(&config.calibration).find(|i| !unique.insert(i.as_str())) {
            return Err(ServiceError::Config(format!("item {dup:?} listed twice")));
        }
        let project = Project {
            id: uuid::Uuid::new_v4().to_string(),
            template_set_version: self.templates.version().into(),
            assignments: assign(&config, &items)?,
            config,
        };
        let tokens: Vec<(String, String)> = project
            .config
            .annotators
            .iter()
            .map(|a| (a.clone(), uuid::Uuid::new_v4().simple().to_string()))
            .collect();
        let created = CreatedProject {
            project: project.summary(),
            tokens: tokens.iter().cloned().collect(),
        };
        let mut state = self.state.write();
        self.commit(&mut state, Event::ProjectCreated { project, tokens })?;
        Ok(created)
    }

    pub fn projects(&self) -> Vec<ProjectSummary> {
        self.state.read().projects.values().map(|p| p.project.summary()).collect()
    }

    pub fn project(&self, id: &str) -> Result<ProjectSummary, ServiceError> {
        let state = self.state.read();
        Ok(project_state(&state, id)?.project.summary())
    }

    pub fn delete_project(&self, id: &str) -> Result<(), ServiceError> {
        let mut state = self.state.write();
        project_state(&state, id)?;
        self.commit(&mut state, Event::ProjectDeleted { project: id.into() })
    }

    /// Resolves a bearer token to its annotator within `project`.
    pub fn authenticate(&self, project: &str, token: &str) -> Result<String, ServiceError> {
        let state = self.state.read();
        project_state(&state, project)?;
        match state.tokens.get(token) {
            Some((p, annotator)) if p == project => Ok(annotator.clone()),
            _ => Err(ServiceError::Unauthorized),
        }
    }

    /// Issues the annotator's next open item and marks it in progress.
    /// Calibration items come first. `None` once nothing is open.
    pub fn next_task(&self, project: &str, annotator: &str) -> Result<Option<Task>, ServiceError> {
        let mut state = self.state.write();
        let ps = project_state(&state, project)?;
        if !ps.project.config.annotators.iter().any(|a| a == annotator) {
            return Err(ServiceError::UnknownAnnotator(annotator.into()));
        }
        let Some((item_id, calibration, revision)) = ps.project.assignments.iter().find_map(|t| {
            let a = t.assignee(annotator)?;
            (a.status == Status::Open).then(|| (t.item_id.clone(), t.calibration, a.revision))
        }) else {
            return Ok(None);
        };
        let task = self.task(ps, &item_id, calibration, revision)?;
        self.commit(
            &mut state,
            Event::TaskIssued {
                project: project.into(),
                item_id,
                annotator: annotator.into(),
            },
        )?;
        Ok(Some(task))
    }

    fn task(&self, ps: &ProjectState, item_id: &str, calibration: bool, revision: u64) -> Result<Task, ServiceError> {
        let corpus = &ps.corpus;
        let missing = || ServiceError::UnknownItem(item_id.into());
        let config = &ps.project.config;
        let (ca_id, comment, diagnosis) = match config.workflow {
            Workflow::FreeTextDiagnosis => (item_id.to_owned(), None, None),
            Workflow::TemplateApplication => {
                let c = corpus.comment(item_id).ok_or_else(missing)?;
                (c.counterargument_id.clone(), Some(task_comment(c)), None)
            }
            Workflow::InformativenessJudging => {
                let d = corpus.diagnosis(item_id).ok_or_else(missing)?;
                let c = corpus.comment(&d.comment_id).ok_or_else(missing)?;
                let template = d.label.template().and_then(|id| self.templates.get(id)).ok_or_else(missing)?;
                let fillers: BTreeMap<_, _> = d.fillers.iter().map(|(k, f)| (k.clone(), f.text.clone())).collect();
                let rendered = template
                    .render(&config.locale, &fillers)
                    .or_else(|_| template.primary_form().render(&fillers))?;
                let diag = TaskDiagnosis {
                    id: d.id.clone(),
                    label: d.label.clone(),
                    fillers,
                    rendered,
                };
                (c.counterargument_id.clone(), Some(task_comment(c)), Some(diag))
            }
        };
        let ca = corpus.counterargument(&ca_id).ok_or_else(missing)?;
        let topic = corpus.topic(&ca.topic_id).ok_or_else(missing)?;
        Ok(Task {
            project_id: ps.project.id.clone(),
            item_id: item_id.into(),
            workflow: config.workflow,
            revision,
            calibration,
            topic: topic.clone(),
            counterargument: ca.clone(),
            comment,
            diagnosis,
        })
    }

    /// The annotator's own assignments, in issue order.
    pub fn assignments(&self, project: &str, annotator: &str) -> Result<Vec<AssignmentView>, ServiceError> {
        let state = self.state.read();
        let ps = project_state(&state, project)?;
        Ok(ps
            .project
            .assignments
            .iter()
            .filter_map(|t| {
                let a = t.assignee(annotator)?;
                Some(AssignmentView {
                    item_id: t.item_id.clone(),
                    calibration: t.calibration,
                    status: a.status,
                    revision: a.revision,
                })
            })
            .collect())
    }

    /// Validates and records a submission. `request.revision` must equal
    /// the assignment's current revision; the new revision is returned.
    pub fn submit(&self, project: &str, annotator: &str, request: SubmitRequest) -> Result<Ack, ServiceError> {
        let mut state = self.state.write();
        let ps = project_state(&state, project)?;
        if !ps.project.config.annotators.iter().any(|a| a == annotator) {
            return Err(ServiceError::UnknownAnnotator(annotator.into()));
        }
        let assignment = ps
            .project
            .assignment(&request.item_id)
            .ok_or_else(|| ServiceError::UnknownItem(request.item_id.clone()))?;
        let current = assignment
            .assignee(annotator)
            .ok_or_else(|| ServiceError::NotAssigned {
                item_id: request.item_id.clone(),
                annotator: annotator.into(),
            })?
            .revision;
        if request.revision != current {
            return Err(ServiceError::RevisionConflict {
                item_id: request.item_id,
                expected: current,
                got: request.revision,
            });
        }
        let payload = parse_payload(ps.project.config.workflow, request.payload)?;
        validate_payload(&ps.corpus, &self.templates, &request.item_id, annotator, &payload)?;
        let submission = Submission {
            item_id: request.item_id,
            annotator: annotator.into(),
            revision: current + 1,
            payload,
        };
        let ack = Ack {
            item_id: submission.item_id.clone(),
            revision: submission.revision,
        };
        self.commit(
            &mut state,
            Event::Submitted {
                project: project.into(),
                submission,
            },
        )?;
        Ok(ack)
    }

    /// Every submission of the project in acceptance order.
    pub fn history(&self, project: &str) -> Result<Vec<Submission>, ServiceError> {
        let state = self.state.read();
        Ok(project_state(&state, project)?.submissions.clone())
    }

    pub fn export(&self, project: &str) -> Result<Export, ServiceError> {
        let state = self.state.read();
        let ps = project_state(&state, project)?;
        export_project(&ps.project, &ps.corpus, &ps.submissions, &self.templates)
    }
}

fn project_state<'a>(state: &'a State, id: &str) -> Result<&'a ProjectState, ServiceError> {
    state.projects.get(id).ok_or_else(|| ServiceError::UnknownProject(id.into()))
}

fn assignee_mut<'a>(
    state: &'a mut State,
    project: &str,
    item_id: &str,
    annotator: &str,
) -> Result<&'a mut crate::model::Assignee, ServiceError> {
    let ps = state
        .projects
        .get_mut(project)
        .ok_or_else(|| ServiceError::UnknownProject(project.into()))?;
    ps.project
        .assignments
        .iter_mut()
        .find(|t| t.item_id == item_id)
        .and_then(|t| t.assignee_mut(annotator))
        .ok_or_else(|| ServiceError::NotAssigned {
            item_id: item_id.into(),
            annotator: annotator.into(),
        })
}

fn task_comment(c: &DiagnosticComment) -> TaskComment {
    TaskComment {
        id: c.id.clone(),
        target: c.target.clone(),
        text: c.text.clone(),
    }
}

/// Item ids a workflow can draw from `corpus`, in file order.
pub fn workflow_items(corpus: &Corpus, workflow: Workflow) -> Vec<String> {
    match workflow {
        Workflow::FreeTextDiagnosis => corpus.counterarguments().iter().map(|c| c.id.clone()).collect(),
        Workflow::TemplateApplication => corpus.comments().iter().map(|c| c.id.clone()).collect(),
        Workflow::InformativenessJudging => corpus
            .diagnoses()
            .iter()
            .filter(|d| d.label.is_applicable())
            .map(|d| d.id.clone())
            .collect(),
    }
}

fn parse_payload(workflow: Workflow, value: serde_json::Value) -> Result<Payload, ServiceError> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Comments {
        comments: Vec<DraftComment>,
    }
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Diagnoses {
        diagnoses: Vec<DraftDiagnosis>,
    }
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Judgment {
        score: u8,
    }
    let invalid = |e: serde_json::Error| ServiceError::Validation(format!("{workflow} payload: {e}"));
    Ok(match workflow {
        Workflow::FreeTextDiagnosis => Payload::Comments {
            comments: serde_json::from_value::<Comments>(value).map_err(invalid)?.comments,
        },
        Workflow::TemplateApplication => Payload::Diagnoses {
            diagnoses: serde_json::from_value::<Diagnoses>(value).map_err(invalid)?.diagnoses,
        },
        Workflow::InformativenessJudging => Payload::Judgment {
            score: serde_json::from_value::<Judgment>(value).map_err(invalid)?.score,
        },
    })
}

/// Checks a payload with the corpus loader's own rules by building the
/// records it would export into a one-item corpus.
fn validate_payload(
    corpus: &Corpus,
    templates: &TemplateSet,
    item_id: &str,
    annotator: &str,
    payload: &Payload,
) -> Result<(), ServiceError> {
    let mut parts = CorpusParts::empty(templates);
    parts.manifest = corpus.manifest().clone();
    let ca_id = match payload {
        Payload::Comments { .. } => item_id.to_owned(),
        Payload::Diagnoses { .. } => corpus.comment(item_id).map(|c| c.counterargument_id.clone()).unwrap_or_default(),
        Payload::Judgment { .. } => corpus
            .diagnosis(item_id)
            .and_then(|d| corpus.comment(&d.comment_id))
            .map(|c| c.counterargument_id.clone())
            .unwrap_or_default(),
    };
    let ca = corpus
        .counterargument(&ca_id)
        .ok_or_else(|| ServiceError::UnknownItem(item_id.into()))?;
    parts.topics.extend(corpus.topic(&ca.topic_id).cloned());
    parts.counterarguments.push(ca.clone());
    match payload {
        Payload::Comments { comments } => {
            for (k, c) in comments.iter().enumerate() {
                parts.comments.push(DiagnosticComment {
                    id: format!("draft-{k}"),
                    counterargument_id: ca_id.clone(),
                    annotator_id: annotator.into(),
                    target: c.target.clone(),
                    text: c.text.clone(),
                });
            }
        }
        Payload::Diagnoses { diagnoses } => {
            if diagnoses.is_empty() {
                return Err(ServiceError::Validation("at least one diagnosis is required".into()));
            }
            let na = diagnoses.iter().filter(|d| d.label == Label::NotApplicable).count();
            if na > 0 && diagnoses.len() > 1 {
                return Err(ServiceError::Validation("NotApplicable cannot be combined with templates".into()));
            }
            parts.comments.extend(corpus.comment(item_id).cloned());
            for (k, d) in diagnoses.iter().enumerate() {
                parts.diagnoses.push(TemplatedDiagnosis {
                    id: format!("draft-{k}"),
                    comment_id: item_id.into(),
                    annotator_id: annotator.into(),
                    label: d.label.clone(),
                    fillers: d.fillers.clone(),
                });
            }
        }
        Payload::Judgment { score } => {
            let d = corpus.diagnosis(item_id).ok_or_else(|| ServiceError::UnknownItem(item_id.into()))?;
            parts.comments.extend(corpus.comment(&d.comment_id).cloned());
            parts.diagnoses.push(d.clone());
            parts.judgments.push(InformativenessJudgment {
                item_id: item_id.into(),
                worker_id: annotator.into(),
                score: *score,
            });
        }
    }
    Corpus::from_parts(parts, templates).map(drop).map_err(|errors| {
        ServiceError::Validation(
            errors
                .iter()
                .map(|e| strip_location(&e.to_string()))
                .collect::<Vec<_>>()
                .join("; "),
        )
    })
}

/// Drops the `file:line: ` prefix, which refers to the scratch corpus.
fn strip_location(message: &str) -> String {
    let mut parts = message.splitn(3, ": ");
    match (parts.next(), parts.next(), parts.next()) {
        (Some(loc), Some(a), Some(b)) if loc.contains(".json") => format!("{a}: {b}"),
        (Some(loc), Some(a), None) if loc.contains(".json") => a.to_owned(),
        _ => message.to_owned(),
    }
}
