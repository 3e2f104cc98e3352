use std::path::PathBuf;

use super::*;
use crate::template::TemplateSet;

fn mini_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/mini")
}

fn mini() -> Corpus {
    load_corpus(&mini_dir(), &TemplateSet::bundled()).expect("mini fixture loads")
}

fn mini_files() -> BTreeMap<String, String> {
    mini().to_files().into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

fn reload(files: &BTreeMap<String, String>) -> Result<Corpus, Vec<CorpusError>> {
    corpus_from_files(files, &TemplateSet::bundled())
}

#[test]
fn loads_mini_fixture() {
    let c = mini();
    assert_eq!(c.topics().len(), 2);
    assert_eq!(c.counterarguments().len(), 4);
    assert_eq!(c.comments().len(), 6);
    assert_eq!(c.diagnoses().len(), 8);
    assert_eq!(c.counterargument("ca-1").unwrap().sentence(0).unwrap(),
        "That is to say even if abolishing homework, students become passive in character.");
}

#[test]
fn canonical_form_matches_committed_bytes() {
    let c = mini();
    for (name, contents) in c.to_files() {
        let on_disk = std::fs::read_to_string(mini_dir().join(name)).unwrap();
        assert_eq!(contents, on_disk, "{name}");
    }
}

#[test]
fn write_then_load_is_identity() {
    let c = mini();
    let dir = tempfile::tempdir().unwrap();
    c.write_dir(dir.path()).unwrap();
    let again = load_corpus(dir.path(), &TemplateSet::bundled()).unwrap();
    assert_eq!(again, c);
}

#[test]
fn dangling_counterargument_reference() {
    let mut files = mini_files();
    let comments = files.get_mut(COMMENTS_FILE).unwrap();
    *comments = comments.replacen("\"counterargument_id\":\"ca-1\"", "\"counterargument_id\":\"ca-404\"", 1);
    let errs = reload(&files).unwrap_err();
    assert!(errs.iter().any(|e| matches!(e, CorpusError::DanglingReference { kind: "counterargument", id, .. } if id == "ca-404")), "{errs:?}");
}

#[test]
fn sentence_span_beyond_text() {
    let mut files = mini_files();
    let cas = files.get_mut(COUNTERARGUMENTS_FILE).unwrap();
    *cas = cas.replacen("[82,184]", "[82,999]", 1);
    let errs = reload(&files).unwrap_err();
    assert!(matches!(errs[0], CorpusError::Span { .. }), "{errs:?}");
}

#[test]
fn overlapping_sentences_rejected() {
    let mut files = mini_files();
    let cas = files.get_mut(COUNTERARGUMENTS_FILE).unwrap();
    *cas = cas.replacen("[82,184]", "[50,184]", 1);
    assert!(matches!(reload(&files).unwrap_err()[0], CorpusError::Span { .. }));
}

#[test]
fn filler_keys_must_match_template_slots() {
    let mut files = mini_files();
    let d = files.get_mut(DIAGNOSES_FILE).unwrap();
    *d = d.replacen(",\"z\":{\"text\":\"passivity\",\"extractability\":\"NotExtractable\"}", "", 1);
    let errs = reload(&files).unwrap_err();
    assert!(matches!(&errs[0], CorpusError::Invariant { message, .. } if message.contains("CLS2")), "{errs:?}");
}

#[test]
fn source_span_iff_extractable() {
    let mut files = mini_files();
    let d = files.get_mut(DIAGNOSES_FILE).unwrap();
    *d = d.replacen("\"extractability\":\"ExtractableWithChanges\"", "\"extractability\":\"Extractable\"", 1);
    let errs = reload(&files).unwrap_err();
    assert!(matches!(&errs[0], CorpusError::Invariant { message, .. } if message.contains("no source span")));
}

#[test]
fn schema_errors_carry_line_numbers() {
    let mut files = mini_files();
    files.get_mut(COMMENTS_FILE).unwrap().push_str("{\"id\": 3}\n");
    let errs = reload(&files).unwrap_err();
    assert!(matches!(&errs[0], CorpusError::Schema { file, line: 7, .. } if file == COMMENTS_FILE), "{errs:?}");
}

#[test]
fn template_version_must_match_manifest() {
    let mut files = mini_files();
    let m = files.get_mut(MANIFEST_FILE).unwrap();
    *m = m.replace("typic-2022.1", "other");
    assert!(matches!(reload(&files).unwrap_err()[0], CorpusError::TemplateSetMismatch { .. }));
}

#[test]
fn validation_collects_every_problem() {
    let mut files = mini_files();
    let comments = files.get_mut(COMMENTS_FILE).unwrap();
    *comments = comments.replace("\"counterargument_id\":\"ca-4\"", "\"counterargument_id\":\"ca-x\"");
    let j = files.get_mut(JUDGMENTS_FILE).unwrap();
    *j = j.replacen("\"score\":3", "\"score\":4", 1);
    let errs = reload(&files).unwrap_err();
    assert_eq!(errs.len(), 2, "{errs:?}");
}

#[test]
fn overlap_pairs_and_primary_view() {
    let c = mini();
    let pairs = c.overlap_pairs();
    let ids: Vec<_> = pairs.iter().map(|p| p.comment_id).collect();
    assert_eq!(ids, ["c-1", "c-5"]);
    assert_eq!(pairs[1].first.label, Label::NotApplicable);
    let primary: Vec<_> = c.primary_diagnoses().iter().map(|d| d.id.as_str()).collect();
    assert_eq!(primary, ["d-1", "d-3", "d-4", "d-5", "d-6", "d-8"]);
}

#[test]
fn target_groups_merge_shared_targets() {
    let c = mini();
    let groups = c.target_groups();
    assert_eq!(groups.len(), 5);
    let ca2 = groups.iter().find(|g| g.counterargument_id == "ca-2").unwrap();
    let labels: Vec<_> = ca2.labels().iter().map(ToString::to_string).collect();
    assert_eq!(labels, ["CA1", "CMP2"]);
}

#[test]
fn sampled_fillers_follow_sample_file() {
    let c = mini();
    let kinds: Vec<_> = c.sampled_fillers().iter().map(|f| f.extractability).collect();
    assert_eq!(
        kinds,
        [
            Extractability::Extractable,
            Extractability::ExtractableWithChanges,
            Extractability::NotExtractable,
            Extractability::NotExtractable
        ]
    );
}

#[test]
fn stats_on_single_argument() {
    let mut parts = mini().into_parts();
    parts.counterarguments.truncate(1);
    parts.counterarguments[0].sentences = vec![Span::new(0, 10), Span::new(11, 20), Span::new(21, 30)];
    parts.comments.clear();
    parts.diagnoses.clear();
    parts.judgments.clear();
    parts.split = None;
    parts.filler_sample.clear();
    parts.slot_adjudication.clear();
    let c = Corpus::from_parts(parts, &TemplateSet::bundled()).unwrap();
    let s = corpus_stats(&c, Tokenizer::UnicodeWords);
    assert_eq!(s.counterarguments, 1);
    assert_eq!(s.avg_sentences_per_argument, 3.0);
    assert_eq!(s.comments, 0);
    assert_eq!(s.avg_comments_per_annotated_argument, 0.0);
}

#[test]
fn stats_on_mini() {
    let s = corpus_stats(&mini(), Tokenizer::UnicodeWords);
    assert_eq!(s.counterarguments, 4);
    assert_eq!(s.annotated_arguments, 4);
    assert_eq!(s.avg_comments_per_annotated_argument, 1.5);
    assert_eq!(s.avg_sentences_per_argument, 2.0);
    assert_eq!(s.tokenizer, "unicode-words");
}

#[test]
fn split_sizes_and_determinism() {
    let c = mini();
    let a = split_comments(&c, 0.25, 7).unwrap();
    let b = split_comments(&c, 0.25, 7).unwrap();
    assert_eq!(a, b);
    // round(0.25 * 6) = 2 (1.5 rounds away from zero)
    assert_eq!(a.dev.len(), 2);
    assert_eq!(a.eval.len(), 4);
    assert!(a.dev.is_disjoint(&a.eval));
    assert_eq!(split_comments(&c, 1.0, 7), Err(SplitError::InvalidRatio(1.0)));
}

#[test]
fn split_of_four_comments() {
    let mut parts = mini().into_parts();
    parts.comments.truncate(4);
    parts.diagnoses.retain(|d| ["c-1", "c-2", "c-3", "c-4"].contains(&d.comment_id.as_str()));
    let kept: Vec<String> = parts.diagnoses.iter().map(|d| d.id.clone()).collect();
    parts.judgments.retain(|j| kept.contains(&j.item_id));
    parts.filler_sample.retain(|f| kept.contains(&f.diagnosis_id));
    parts.split = None;
    let c = Corpus::from_parts(parts, &TemplateSet::bundled()).unwrap();
    let s = split_comments(&c, 0.25, 1).unwrap();
    assert_eq!((s.dev.len(), s.eval.len()), (1, 3));
}

#[test]
fn split_of_empty_corpus() {
    let c = Corpus::from_parts(CorpusParts::empty(&TemplateSet::bundled()), &TemplateSet::bundled()).unwrap();
    assert_eq!(split_comments(&c, 0.25, 7), Err(SplitError::EmptyCorpus));
}

#[test]
fn span_slicing_uses_chars() {
    let s = Span::new(1, 3);
    assert_eq!(s.slice("宿題廃止"), Some("題廃"));
    assert_eq!(Span::new(2, 4).slice("宿題廃止"), Some("廃止"));
    assert_eq!(Span::new(2, 5).slice("宿題廃止"), None);
}
