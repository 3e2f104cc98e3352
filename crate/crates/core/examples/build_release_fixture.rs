//! Writes the synthetic release-scale corpus under `fixtures/release`.
//!
//! The texts are generated, but every count the evaluation suite reports on
//! (argument, sentence, token and comment totals, the overlap pairs, the
//! judgment vote patterns, the filler sample and the target groups) is laid
//! out to match the published corpus figures. Output is deterministic.
//!
//! Usage: `cargo run -p typic-core --example build_release_fixture [OUT_DIR]`

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use typic_core::corpus::{
    AuthorKind, Corpus, CorpusParts, Counterargument, DiagnosticComment, DocumentRef, Extractability, Filler,
    FillerRef, InformativenessJudgment, Point, SlotAdjudication, SourceSpan, Span, Split, TemplatedDiagnosis, Topic,
};
use typic_core::template::{Label, SlotName, TemplateSet};

const SEED: u64 = 20220712;
const ARGUMENTS_PER_TOPIC: usize = 500;
const EXPERT_ARGUMENTS: usize = 250;
const EIGHT_SENTENCE_ARGUMENTS: usize = 100;
const TOKENS_PER_ARGUMENT: usize = 124;
const ANNOTATED_WITH_FOUR_TARGETS: usize = 171;
const ANNOTATED_WITH_THREE_TARGETS: usize = 26;
const DEV_SINGLE_COMMENTS: usize = 259;
const WORKERS: usize = 30;

const AGREED: &[&str] = &[
    "VAL2", "CA3", "CLS1", "GR1", "VAL3", "CLS1", "CA3", "CLS1", "GS1", "GR1", "EX1", "EX1", "CLS1", "LR1", "CA2",
    "VAL4", "CMP1", "PR1", "CLS1", "GR2", "GR3", "CA2", "CLS1", "EX1", "GR1", "LR1", "GR2", "VAL4", "CA3", "VAL4",
    "VAL3", "CLS1", "GR1", "EX3", "CA4", "EX2", "CA1", "VAL1", "CA2", "CA2", "CA2",
];

const DISAGREED: &[(&str, &str)] = &[
    ("EX1", "NA"), ("CA1", "VAL1"), ("GS2", "GS1"), ("CMP1", "VAL1"), ("CLS1", "CA1"), ("NA", "EX1"),
    ("CA1", "CA2"), ("CLS1", "LR1"), ("CLS1", "NA"), ("CA2", "EX1"), ("CA3", "GR3"), ("NA", "CLS1"),
    ("CLS1", "VAL4"), ("CA2", "GR1"), ("NA", "CMP2"), ("EX1", "CA2"), ("EX1", "CLR2"), ("CLR2", "VAL2"),
    ("CA2", "CA1"), ("CA1", "CMP2"), ("EX1", "CLS2"), ("CLS1", "NA"), ("GR2", "CLS1"), ("CA2", "NA"),
    ("CA1", "CLS1"), ("CA1", "VAL4"), ("CLS1", "CA1"), ("CA3", "CLS1"), ("CLR2", "LR1"), ("NA", "CLS1"),
    ("VAL4", "CLS1"), ("LR1", "GR2"), ("GS1", "CLS1"),
];

/// Slot fillers of agreed overlap pairs judged not to match, out of 73.
const SLOT_MISMATCHES: usize = 8;

/// Five-worker vote patterns and how many judged items carry each.
const VOTE_PATTERNS: &[([u8; 5], usize)] = &[
    ([1, 1, 3, 3, 3], 150), ([1, 2, 3, 3, 3], 221), ([1, 3, 3, 3, 3], 37), ([2, 2, 3, 3, 3], 22),
    ([2, 3, 3, 3, 3], 210), ([3, 3, 3, 3, 3], 217), ([1, 1, 1, 1, 1], 31), ([1, 1, 1, 1, 2], 25),
    ([1, 1, 1, 1, 3], 13), ([1, 1, 1, 2, 2], 54), ([1, 1, 1, 2, 3], 1), ([1, 1, 1, 3, 3], 13),
    ([1, 1, 2, 2, 2], 1), ([1, 1, 2, 2, 3], 17), ([1, 1, 2, 3, 3], 9), ([1, 2, 2, 2, 2], 10),
    ([1, 2, 2, 2, 3], 9), ([1, 2, 2, 3, 3], 19), ([2, 2, 2, 2, 2], 4), ([2, 2, 2, 2, 3], 12),
    ([2, 2, 2, 3, 3], 15),
];

/// Target groups outside the overlap and double-record comments:
/// (distinct labels, groups, extra comments repeating a label).
const GROUP_PLAN: &[(usize, usize, usize)] = &[(1, 501, 30), (2, 109, 0), (3, 52, 0), (4, 19, 0), (5, 5, 0)];
const NA_SINGLE_GROUPS: usize = 40;
const NA_IN_MIXED_GROUPS: usize = 20;

/// Filler sample composition by extractability class.
const SAMPLE: [(Extractability, usize); 3] = [
    (Extractability::Extractable, 126),
    (Extractability::ExtractableWithChanges, 14),
    (Extractability::NotExtractable, 26),
];

const LABEL_WEIGHTS: &[(&str, u32, &str)] = &[
    ("CA1", 9, "benefits"), ("CA2", 10, "damages"), ("CA3", 5, "hinders"), ("CA4", 3, "reduces"),
    ("VAL1", 4, "valuable"), ("VAL2", 4, "harmful"), ("VAL3", 3, "required"), ("VAL4", 5, "forbidden"),
    ("CLS1", 14, "naturally"), ("CLS2", 2, "similar"), ("PR1", 2, "feasible"), ("EX1", 9, "example"),
    ("EX2", 3, "extent"), ("EX3", 3, "sometimes"), ("CMP1", 2, "preferable"), ("CMP2", 2, "method"),
    ("LR1", 4, "therefore"), ("CLR1", 1, "whatever"), ("CLR2", 2, "instance"), ("GR1", 5, "unrelated"),
    ("GR2", 3, "objection"), ("GR3", 2, "definition"), ("GS1", 2, "superior"), ("GS2", 2, "expected"),
];

const CONNECTIVES: &[&str] = &["because", "although", "while", "since", "so", "but", "when"];

const HW_WORDS: &[&str] = &[
    "homework", "students", "teachers", "parents", "school", "study", "time", "skills", "learning", "class",
    "children", "practice", "grades", "effort", "habits", "knowledge", "free", "clubs", "activities", "exams",
    "become", "improve", "need", "make", "spend", "develop", "lose", "gain", "help", "give", "many", "good",
    "passive", "active", "daily", "academic", "own", "more", "less", "the", "a", "to", "in", "of", "for",
    "and", "their", "they", "can", "will",
];

const DP_WORDS: &[&str] = &[
    "death", "penalty", "criminals", "society", "crime", "punishment", "justice", "victims", "families",
    "courts", "prison", "life", "law", "executions", "rehabilitation", "innocent", "people", "state",
    "deter", "protect", "prevent", "commit", "receive", "lose", "keep", "give", "serious", "violent",
    "cruel", "fair", "public", "severe", "many", "the", "a", "to", "in", "of", "for", "and", "their", "they",
    "can", "will", "more", "less", "safe", "order", "fear", "risk",
];

const NA_REMARKS: &[&str] = &[
    "The tone of this part is too aggressive for a rebuttal.",
    "This sentence repeats the previous point without adding anything.",
    "The wording is informal and weakens the speech.",
    "The rebuttal should come before the new argument.",
    "Too much time is spent on this point.",
];

fn topics() -> Vec<Topic> {
    let topic = |id: &str, motion: &str, points: [&str; 5]| Topic {
        id: id.into(),
        motion: motion.into(),
        points: points
            .iter()
            .enumerate()
            .map(|(i, t)| Point {
                id: format!("{id}{}", i + 1),
                text: (*t).into(),
            })
            .collect(),
    };
    vec![
        topic(
            "HW",
            "Homework should be abolished",
            [
                "Abolishing homework gives students more free time",
                "Forcing students to do homework makes them passive in character",
                "It is not good for students to be obliged to study by their teachers or parents",
                "Students have memorized the incorrect way to study with homework",
                "Schools should take responsibility for the academic skills of children, not parents at home",
            ],
        ),
        topic(
            "DP",
            "Death penalty should be abolished",
            [
                "Death penalty is an inhumane punishment",
                "Abolishing death penalty will prevent the ending the life of innocent people",
                "Because of the high stress on the executioner, death penalty should be abolished",
                "Death penalty deprives criminals of the opportunity for rehabilitation",
                "The society is brutalized by the use of death penalty",
            ],
        ),
    ]
}

fn label(s: &str) -> Label {
    if s == "NA" {
        Label::NotApplicable
    } else {
        s.parse().expect("known template id")
    }
}

fn cue_word(l: &Label) -> Option<&'static str> {
    let id = l.template()?;
    LABEL_WEIGHTS.iter().find(|(t, _, _)| *t == id.as_str()).map(|(_, _, w)| *w)
}

#[derive(Clone, Debug)]
enum CommentPlan {
    Single(Label),
    Overlap { first: Label, second: Label, agreed: bool },
    DevDouble(Label, Label),
}

fn plan_label(p: &CommentPlan) -> &Label {
    match p {
        CommentPlan::Single(l) | CommentPlan::Overlap { first: l, .. } | CommentPlan::DevDouble(l, _) => l,
    }
}

struct Sentence {
    clauses: [Span; 2],
}

struct Generator {
    rng: ChaCha8Rng,
    templates: TemplateSet,
    weights: WeightedIndex<u32>,
}

impl Generator {
    /// `n` distinct template labels, drawn by weight.
    fn distinct_labels(&mut self, n: usize) -> Vec<Label> {
        let mut out: Vec<Label> = Vec::new();
        while out.len() < n {
            let l = label(LABEL_WEIGHTS[self.weights.sample(&mut self.rng)].0);
            if !out.contains(&l) {
                out.push(l);
            }
        }
        out
    }

    fn words(&mut self, pool: &[&'static str], n: usize) -> Vec<&'static str> {
        (0..n).map(|_| *pool.choose(&mut self.rng).unwrap()).collect()
    }

    fn sentence_lengths(&mut self, n: usize) -> Vec<usize> {
        let mut lengths = vec![TOKENS_PER_ARGUMENT / n; n];
        for l in lengths.iter_mut().take(TOKENS_PER_ARGUMENT % n) {
            *l += 1;
        }
        for _ in 0..n {
            let (a, b) = (self.rng.random_range(0..n), self.rng.random_range(0..n));
            let d = self.rng.random_range(0..4);
            if a != b && lengths[a] >= 9 + d {
                lengths[a] -= d;
                lengths[b] += d;
            }
        }
        lengths
    }

    /// Text of `n` sentences of exactly `TOKENS_PER_ARGUMENT` words in total.
    /// `cues[i]` is worked into sentence `i`.
    fn argument_text(&mut self, pool: &[&'static str], cues: &[Option<&'static str>]) -> (String, Vec<Span>, Vec<Sentence>) {
        let lengths = self.sentence_lengths(cues.len());
        let mut text = String::new();
        let mut spans = Vec::new();
        let mut sentences = Vec::new();
        for (len, cue) in lengths.into_iter().zip(cues) {
            if !text.is_empty() {
                text.push(' ');
            }
            let start = text.chars().count();
            let first_len = self.rng.random_range(3..=len - 4);
            let mut first = self.words(pool, first_len);
            if let Some(cue) = cue {
                let at = self.rng.random_range(0..first_len);
                first[at] = cue;
            }
            let second = self.words(pool, len - 1 - first_len);
            let mut first_text = first.join(" ");
            first_text[..1].make_ascii_uppercase();
            let second_text = second.join(" ");
            let connective = CONNECTIVES.choose(&mut self.rng).unwrap();
            let c1 = Span::new(start, start + first_text.chars().count());
            text.push_str(&first_text);
            text.push_str(", ");
            text.push_str(connective);
            text.push(' ');
            let c2_start = text.chars().count();
            text.push_str(&second_text);
            let c2 = Span::new(c2_start, c2_start + second_text.chars().count());
            text.push('.');
            spans.push(Span::new(start, text.chars().count()));
            sentences.push(Sentence { clauses: [c1, c2] });
        }
        (text, spans, sentences)
    }

    fn pick_class(&mut self) -> Extractability {
        match self.rng.random_range(0..100) {
            0..74 => Extractability::Extractable,
            74..84 => Extractability::ExtractableWithChanges,
            _ => Extractability::NotExtractable,
        }
    }

    fn fillers(
        &mut self,
        l: &Label,
        ca: &Counterargument,
        sentences: &[Sentence],
        target: &[usize],
        topic: &Topic,
        pool: &[&'static str],
    ) -> BTreeMap<SlotName, Filler> {
        let Some(id) = l.template() else {
            return BTreeMap::new();
        };
        let template = self.templates.get(id).expect("bundled template").clone();
        let mut clauses: Vec<Span> = target.iter().flat_map(|&i| sentences[i].clauses).collect();
        clauses.shuffle(&mut self.rng);
        let mut out = BTreeMap::new();
        for (i, slot) in template.slots().iter().enumerate() {
            let filler = match self.pick_class() {
                Extractability::Extractable if self.rng.random_bool(0.85) => {
                    let span = clauses[i % clauses.len()];
                    let text = span.slice(&ca.text).unwrap();
                    Filler::extracted(text, SourceSpan { document: DocumentRef::Counterargument, span })
                }
                Extractability::Extractable => {
                    let p = topic.points.choose(&mut self.rng).unwrap();
                    Filler::extracted(
                        p.text.clone(),
                        SourceSpan {
                            document: DocumentRef::Original(p.id.clone()),
                            span: Span::new(0, p.text.chars().count()),
                        },
                    )
                }
                Extractability::ExtractableWithChanges => {
                    let span = clauses[i % clauses.len()];
                    let text = format!("the idea that {}", span.slice(&ca.text).unwrap().to_lowercase());
                    Filler::typed(text, Extractability::ExtractableWithChanges)
                }
                Extractability::NotExtractable => {
                    let n = self.rng.random_range(2..5);
                    Filler::typed(self.words(pool, n).join(" "), Extractability::NotExtractable)
                }
            };
            out.insert(slot.clone(), filler);
        }
        out
    }
}

fn main() {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/release"));
    let templates = TemplateSet::bundled();
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(SEED),
        templates: templates.clone(),
        weights: WeightedIndex::new(LABEL_WEIGHTS.iter().map(|(_, w, _)| *w)).unwrap(),
    };

    // Target groups as lists of comment plans.
    let mut groups: Vec<Vec<CommentPlan>> = Vec::new();
    for l in AGREED {
        groups.push(vec![CommentPlan::Overlap { first: label(l), second: label(l), agreed: true }]);
    }
    for (a, b) in DISAGREED {
        groups.push(vec![CommentPlan::Overlap { first: label(a), second: label(b), agreed: false }]);
    }
    for _ in 0..2 {
        let ls = g.distinct_labels(2);
        groups.push(vec![CommentPlan::DevDouble(ls[0].clone(), ls[1].clone())]);
    }
    let pool_start = groups.len();
    for &(k, n, extra) in GROUP_PLAN {
        for i in 0..n {
            let mut ls = g.distinct_labels(k);
            if k == 1 && i < extra {
                ls.push(ls[0].clone());
            }
            groups.push(ls.into_iter().map(CommentPlan::Single).collect());
        }
    }
    // NotApplicable comments: whole single-comment groups, and one label in some mixed groups.
    let single_k1: Vec<usize> = (pool_start..groups.len()).filter(|&i| groups[i].len() == 1).collect();
    for &i in single_k1.choose_multiple(&mut g.rng, NA_SINGLE_GROUPS) {
        groups[i][0] = CommentPlan::Single(Label::NotApplicable);
    }
    let mixed: Vec<usize> = (pool_start..groups.len())
        .filter(|&i| groups[i].len() >= 2 && plan_label(&groups[i][0]) != plan_label(&groups[i][1]))
        .collect();
    for &i in mixed.choose_multiple(&mut g.rng, NA_IN_MIXED_GROUPS) {
        let at = g.rng.random_range(0..groups[i].len());
        groups[i][at] = CommentPlan::Single(Label::NotApplicable);
    }
    groups.shuffle(&mut g.rng);

    // Counterarguments and which of them carry target groups.
    let topics = topics();
    let total = ARGUMENTS_PER_TOPIC * topics.len();
    let mut idx: Vec<usize> = (0..total).collect();
    idx.shuffle(&mut g.rng);
    let experts: BTreeSet<usize> = idx[..EXPERT_ARGUMENTS].iter().copied().collect();
    idx.shuffle(&mut g.rng);
    let eight: BTreeSet<usize> = idx[..EIGHT_SENTENCE_ARGUMENTS].iter().copied().collect();
    idx.shuffle(&mut g.rng);
    let annotated = ANNOTATED_WITH_FOUR_TARGETS + ANNOTATED_WITH_THREE_TARGETS;
    let mut group_counts: BTreeMap<usize, usize> = BTreeMap::new();
    for (rank, &ca) in idx[..annotated].iter().enumerate() {
        group_counts.insert(ca, if rank < ANNOTATED_WITH_FOUR_TARGETS { 4 } else { 3 });
    }
    assert_eq!(group_counts.values().sum::<usize>(), groups.len());

    let mut parts = CorpusParts::empty(&templates);
    let mut split = Split::default();
    let mut next_group = groups.into_iter();
    let mut comment_no = 0;
    let mut diagnosis_no = 0;
    // (first record, second record, word pool) of agreed overlap comments
    let mut overlap_agreed: Vec<(usize, usize, &[&str])> = Vec::new();
    let mut dev_candidates: Vec<String> = Vec::new();

    for ca_no in 0..total {
        let topic = &topics[ca_no / ARGUMENTS_PER_TOPIC];
        let pool = if topic.id == "HW" { HW_WORDS } else { DP_WORDS };
        let n_sent = if eight.contains(&ca_no) { 8 } else { 7 };
        let ca_groups: Vec<Vec<CommentPlan>> =
            (0..group_counts.get(&ca_no).copied().unwrap_or(0)).map(|_| next_group.next().unwrap()).collect();
        let mut starts: Vec<usize> = (0..n_sent).collect();
        starts.shuffle(&mut g.rng);
        let targets: Vec<Vec<usize>> = ca_groups
            .iter()
            .zip(&starts)
            .map(|(_, &s)| if s + 1 < n_sent && g.rng.random_bool(0.15) { vec![s, s + 1] } else { vec![s] })
            .collect();
        let mut cues = vec![None; n_sent];
        for (plans, target) in ca_groups.iter().zip(&targets) {
            cues[target[0]] = plans.iter().find_map(|p| cue_word(plan_label(p)));
        }
        let (text, spans, sentences) = g.argument_text(pool, &cues);
        let ca = Counterargument {
            id: format!("ca-{:04}", ca_no + 1),
            topic_id: topic.id.clone(),
            author_kind: if experts.contains(&ca_no) { AuthorKind::Expert } else { AuthorKind::Crowd },
            text,
            sentences: spans,
        };

        for (plans, target) in ca_groups.into_iter().zip(targets) {
            for plan in plans {
                comment_no += 1;
                let comment_id = format!("c-{comment_no:04}");
                let mut records: Vec<(Label, &str)> = Vec::new();
                match &plan {
                    CommentPlan::Single(l) => {
                        records.push((l.clone(), "ann-A"));
                        if l.is_applicable() {
                            dev_candidates.push(comment_id.clone());
                        } else {
                            split.eval.insert(comment_id.clone());
                        }
                    }
                    CommentPlan::Overlap { first, second, .. } => {
                        records.push((first.clone(), "ann-A"));
                        records.push((second.clone(), "ann-B"));
                        split.eval.insert(comment_id.clone());
                    }
                    CommentPlan::DevDouble(a, b) => {
                        records.push((a.clone(), "ann-A"));
                        records.push((b.clone(), "ann-A"));
                        split.dev.insert(comment_id.clone());
                    }
                }
                let first_index = parts.diagnoses.len();
                for (l, annotator) in &records {
                    diagnosis_no += 1;
                    let fillers = g.fillers(l, &ca, &sentences, &target, topic, pool);
                    parts.diagnoses.push(TemplatedDiagnosis {
                        id: format!("d-{diagnosis_no:04}"),
                        comment_id: comment_id.clone(),
                        annotator_id: (*annotator).into(),
                        label: l.clone(),
                        fillers,
                    });
                }
                if let CommentPlan::Overlap { agreed: true, .. } = plan {
                    overlap_agreed.push((first_index, first_index + 1, pool));
                }
                let primary = &parts.diagnoses[first_index];
                let text = match primary.label.template() {
                    Some(id) => {
                        let texts: BTreeMap<SlotName, &str> =
                            primary.fillers.iter().map(|(k, f)| (k.clone(), f.text.as_str())).collect();
                        format!("{}.", templates.get(id).unwrap().render("en", &texts).unwrap())
                    }
                    None => NA_REMARKS.choose(&mut g.rng).unwrap().to_string(),
                };
                parts.comments.push(DiagnosticComment {
                    id: comment_id,
                    counterargument_id: ca.id.clone(),
                    annotator_id: format!("as-{}", g.rng.random_range(1..=6)),
                    target: target.clone(),
                    text,
                });
            }
        }
        parts.counterarguments.push(ca);
    }

    // Second annotator's fillers on agreed pairs: copies, except for a few.
    let slot_rows: Vec<(usize, usize, SlotName, &[&str])> = overlap_agreed
        .iter()
        .flat_map(|&(a, b, pool)| parts.diagnoses[a].fillers.keys().map(move |s| (a, b, s.clone(), pool)))
        .collect();
    let mut row_order: Vec<usize> = (0..slot_rows.len()).collect();
    row_order.shuffle(&mut g.rng);
    let mismatched: BTreeSet<usize> = row_order[..SLOT_MISMATCHES].iter().copied().collect();
    for (row, (a, b, slot, pool)) in slot_rows.iter().enumerate() {
        let filler = if mismatched.contains(&row) {
            Filler::typed(format!("{} instead", g.words(pool, 3).join(" ")), Extractability::NotExtractable)
        } else {
            parts.diagnoses[*a].fillers[slot].clone()
        };
        parts.diagnoses[*b].fillers.insert(slot.clone(), filler);
    }
    for (row, (a, b, slot, _)) in slot_rows.iter().enumerate() {
        let (da, db) = (&parts.diagnoses[*a], &parts.diagnoses[*b]);
        parts.slot_adjudication.push(SlotAdjudication {
            comment_id: da.comment_id.clone(),
            label: da.label.clone(),
            slot: slot.clone(),
            annotator_a: da.annotator_id.clone(),
            filler_a: da.fillers[slot].text.clone(),
            annotator_b: db.annotator_id.clone(),
            filler_b: db.fillers[slot].text.clone(),
            lenient_match: Some(!mismatched.contains(&row)),
        });
    }

    // Dev/eval split.
    dev_candidates.shuffle(&mut g.rng);
    for (i, id) in dev_candidates.into_iter().enumerate() {
        if i < DEV_SINGLE_COMMENTS {
            split.dev.insert(id);
        } else {
            split.eval.insert(id);
        }
    }
    parts.split = Some(split);

    // Five judgments per templated diagnosis.
    let judged: Vec<String> =
        parts.diagnoses.iter().filter(|d| d.label.is_applicable()).map(|d| d.id.clone()).collect();
    let mut patterns: Vec<[u8; 5]> =
        VOTE_PATTERNS.iter().flat_map(|(p, n)| std::iter::repeat(*p).take(*n)).collect();
    assert_eq!(patterns.len(), judged.len(), "vote patterns vs judged diagnoses");
    patterns.shuffle(&mut g.rng);
    let workers: Vec<String> = (1..=WORKERS).map(|w| format!("w-{w:02}")).collect();
    for (item, mut votes) in judged.into_iter().zip(patterns) {
        votes.shuffle(&mut g.rng);
        let mut who: Vec<&String> = workers.choose_multiple(&mut g.rng, 5).collect();
        who.sort();
        for (w, score) in who.into_iter().zip(votes) {
            parts.judgments.push(InformativenessJudgment {
                item_id: item.clone(),
                worker_id: w.clone(),
                score,
            });
        }
    }

    // Filler sample with a fixed class composition.
    let all_refs: Vec<(usize, SlotName, Extractability)> = parts
        .diagnoses
        .iter()
        .enumerate()
        .flat_map(|(i, d)| d.fillers.iter().map(move |(s, f)| (i, s.clone(), f.extractability)))
        .collect();
    let mut sample: Vec<(usize, SlotName)> = Vec::new();
    for (class, n) in SAMPLE {
        let of_class: Vec<_> = all_refs.iter().filter(|r| r.2 == class).collect();
        sample.extend(of_class.choose_multiple(&mut g.rng, n).map(|r| (r.0, r.1.clone())));
    }
    sample.sort();
    parts.filler_sample = sample
        .into_iter()
        .map(|(i, slot)| FillerRef {
            diagnosis_id: parts.diagnoses[i].id.clone(),
            slot,
        })
        .collect();

    parts.topics = topics;
    let corpus = match Corpus::from_parts(parts, &templates) {
        Ok(c) => c,
        Err(errors) => {
            for e in errors.iter().take(20) {
                eprintln!("{e}");
            }
            panic!("{} validation errors", errors.len());
        }
    };
    corpus.write_dir(&out_dir).expect("write fixture");
    println!(
        "wrote {} counterarguments, {} comments, {} diagnoses, {} judgments to {}",
        corpus.counterarguments().len(),
        corpus.comments().len(),
        corpus.diagnoses().len(),
        corpus.judgments().len(),
        out_dir.display()
    );
}
