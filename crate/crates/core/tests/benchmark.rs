//! End-to-end benchmark runs over the bundled fixtures.

use std::path::{Path, PathBuf};

use typic_core::baselines::{
    evaluate, evaluate_model, Benchmark, BenchmarkReport, Documents, ExtractiveFiller, KnnSelector,
    MajoritySelector, Model, ModelKind, Selector, SlotFiller,
};
use typic_core::corpus::DocumentRef;
use typic_core::{load_corpus, Corpus, TemplateSet, Tokenizer};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn load(name: &str) -> (Corpus, TemplateSet) {
    let templates = TemplateSet::bundled();
    let corpus = load_corpus(&fixture(name), &templates).unwrap();
    (corpus, templates)
}

fn run(name: &str, kinds: &[ModelKind]) -> Vec<BenchmarkReport> {
    let (corpus, templates) = load(name);
    let bench = Benchmark::from_corpus(&corpus, &templates).unwrap();
    evaluate(kinds, &bench, &corpus, &templates, Tokenizer::UnicodeWords).unwrap()
}

const ALL: [ModelKind; 4] = [
    ModelKind::Empty,
    ModelKind::Majority { k: 1 },
    ModelKind::Knn { k: 3 },
    ModelKind::Gold,
];

#[test]
fn gold_replay_is_perfect_and_empty_is_zero() {
    for name in ["mini", "release"] {
        let reports = run(name, &[ModelKind::Gold, ModelKind::Empty]);
        let (gold, empty) = (&reports[0], &reports[1]);
        assert_eq!(gold.selection.micro_f1, 1.0, "{name}");
        assert_eq!(gold.selection.macro_f1, 1.0, "{name}");
        assert_eq!(gold.selection.subset_accuracy, 1.0, "{name}");
        assert_eq!(gold.filling.mean_f1, 1.0, "{name}");
        assert_eq!(gold.filling.exact_match.num, gold.filling.exact_match.den, "{name}");
        assert_eq!(empty.selection.micro_f1, 0.0, "{name}");
        assert_eq!(empty.filling.mean_f1, 0.0, "{name}");
    }
}

#[test]
fn oracle_sandwich() {
    let (corpus, templates) = load("release");
    let bench = Benchmark::from_corpus(&corpus, &templates).unwrap();
    let majority = MajoritySelector::fit(&bench.dev, 1).unwrap();
    let predicted = majority.prediction().ones().next().unwrap();
    assert!(bench.eval.iter().any(|i| i.gold.get(predicted)));

    let reports = evaluate(&ALL, &bench, &corpus, &templates, Tokenizer::UnicodeWords).unwrap();
    let f1: Vec<f64> = reports.iter().map(|r| r.selection.micro_f1).collect();
    assert!(f1[0] <= f1[1] && f1[1] <= f1[3], "{f1:?}");
    assert!(f1[0] <= f1[2] && f1[2] <= f1[3], "{f1:?}");
    assert!(f1[1] > 0.0);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = serde_json::to_string(&run("release", &ALL)).unwrap();
    let b = serde_json::to_string(&run("release", &ALL)).unwrap();
    assert_eq!(a, b);
}

/// Compares against a committed report; `TYPIC_BLESS=1` rewrites it.
fn check_golden(file: &str, report: &BenchmarkReport) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(file);
    let mut actual = serde_json::to_string_pretty(report).unwrap();
    actual.push('\n');
    if std::env::var_os("TYPIC_BLESS").is_some() {
        std::fs::write(&path, &actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "report drifted from {file}");
}

#[test]
fn majority_and_knn_reports_match_goldens() {
    let reports = run("release", &[ModelKind::Majority { k: 1 }, ModelKind::Knn { k: 3 }]);
    check_golden("release_majority_k1.json", &reports[0]);
    check_golden("release_knn_k3.json", &reports[1]);
}

#[test]
fn majority_on_release_dev_predicts_its_most_frequent_label() {
    let (corpus, templates) = load("release");
    let bench = Benchmark::from_corpus(&corpus, &templates).unwrap();
    // independent frequency count over the dev gold vectors
    let mut counts = vec![0usize; templates.len()];
    for inst in &bench.dev {
        for i in inst.gold.ones() {
            counts[i] += 1;
        }
    }
    let top = *counts.iter().max().unwrap();
    let want = counts.iter().position(|&c| c == top).unwrap();
    let m = MajoritySelector::fit(&bench.dev, 1).unwrap();
    assert_eq!(m.prediction().ones().collect::<Vec<_>>(), vec![want]);
}

#[test]
fn knn_retrieves_dev_instances_themselves() {
    let (corpus, templates) = load("release");
    let bench = Benchmark::from_corpus(&corpus, &templates).unwrap();
    let knn = KnnSelector::fit(&bench.dev, 1, Tokenizer::UnicodeWords).unwrap();
    for inst in bench.dev.iter().take(50) {
        let got = knn.predict(inst);
        // a duplicate target text earlier in dev wins the tie; its gold is what we get
        let first = bench.dev.iter().find(|d| d.target_text == inst.target_text).unwrap();
        assert_eq!(got, first.gold);
    }
}

#[test]
fn extractive_spans_lie_inside_their_documents() {
    let (corpus, templates) = load("release");
    let bench = Benchmark::from_corpus(&corpus, &templates).unwrap();
    let filler = ExtractiveFiller::default();
    for inst in &bench.filling {
        let template = templates.get(&inst.template).unwrap();
        let ca = corpus.counterargument(&inst.counterargument_id).unwrap();
        let topic = corpus.topic(&ca.topic_id).unwrap();
        let out = filler.fill(inst, template, &Documents::new(ca, topic)).unwrap();
        assert_eq!(out.keys().collect::<Vec<_>>(), template.slots().iter().collect::<Vec<_>>());
        for f in out.values() {
            let src = f.source_span.as_ref().unwrap();
            let doc = match &src.document {
                DocumentRef::Counterargument => ca.text.as_str(),
                DocumentRef::Original(p) => topic.point(p).unwrap().text.as_str(),
            };
            assert_eq!(src.span.slice(doc), Some(f.text.as_str()), "{}", inst.diagnosis_id);
        }
    }
}

#[test]
fn model_reports_do_not_depend_on_evaluation_order() {
    let (corpus, templates) = load("release");
    let bench = Benchmark::from_corpus(&corpus, &templates).unwrap();
    let model = Model::build(ModelKind::Knn { k: 3 }, &bench, Tokenizer::UnicodeWords).unwrap();
    let alone = evaluate_model(&model, &bench, &corpus, &templates, Tokenizer::UnicodeWords).unwrap();
    let batch = run("release", &ALL);
    assert_eq!(alone, batch[2]);
}
