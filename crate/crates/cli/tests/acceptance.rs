//! Acceptance runner: one PASS/FAIL line per headline criterion, with the
//! tolerances pinned below. Exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use typic_core::analysis;
use typic_core::baselines::{evaluate, Benchmark, BenchmarkReport, ModelKind};
use typic_core::corpus::Extractability;
use typic_core::metrics::{
    cohen_kappa, krippendorff_alpha, majority_vote, multilabel_eval, uniqueness_data, Distance, Fraction,
    LabelVector, MetricError, ReliabilityData, Score,
};
use typic_core::template::{SlotName, TemplatePattern};
use typic_core::{load_corpus, Corpus, TemplateSet, Tokenizer};
use typic_service::{ProjectConfig, Service, ServiceError, SubmitRequest, Workflow};

#[path = "../../core/tests/support/oracles.rs"]
mod oracles;

const KAPPA_TOL: f64 = 0.001;
const ALPHA_TOL: f64 = 0.005;
const STATS_TOL: f64 = 0.05;
const TOKENS_TOL: f64 = 2.0;
const ORACLE_TOL: f64 = 1e-12;
const STATS_BUDGET: Duration = Duration::from_secs(5);
const ORACLE_BUDGET: Duration = Duration::from_secs(30);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core")
}

fn fixture(name: &str) -> PathBuf {
    core_dir().join("fixtures").join(name)
}

fn release() -> Result<Corpus, String> {
    load_corpus(&fixture("release"), &TemplateSet::bundled()).map_err(|e| e.to_string())
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn exact(f: &Fraction, num: u64, den: u64, what: &str) -> Result<(), String> {
    ensure((f.num, f.den) == (num, den), || format!("{what}: {f}, want {num}/{den}"))
}

fn stats() -> Outcome {
    let out = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = fixture("release");
    let started = Instant::now();
    let args = [
        "typic",
        "--corpus",
        corpus.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
        "stats",
    ];
    let code = typic_cli::run(args, &mut Vec::new(), &mut Vec::new());
    let elapsed = started.elapsed();
    ensure(code == 0, || format!("stats exited {code}"))?;
    let report: Value = serde_json::from_str(&fs::read_to_string(out.path().join("stats.json")).unwrap())
        .map_err(|e| e.to_string())?;
    let c = &report["corpus"];
    let f = |k: &str| c[k].as_f64().unwrap_or(f64::NAN);
    ensure(c["counterarguments"] == 1000, || format!("counterarguments {}", c["counterarguments"]))?;
    ensure(c["comments"] == 1082, || format!("comments {}", c["comments"]))?;
    let (sent, per, tok) = (
        f("avg_sentences_per_argument"),
        f("avg_comments_per_annotated_argument"),
        f("avg_tokens_per_argument"),
    );
    ensure((sent - 7.1).abs() <= STATS_TOL, || format!("avg sentences {sent}"))?;
    ensure((per - 5.5).abs() <= STATS_TOL, || format!("avg comments per argument {per}"))?;
    ensure((tok - 124.0).abs() <= TOKENS_TOL, || format!("avg tokens {tok}"))?;
    ensure(elapsed < STATS_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "1000 arguments, 1082 comments, {sent:.3} sentences, {per:.3} comments/argument, {tok:.2} tokens, {elapsed:.2?}"
    ))
}

fn expressiveness() -> Outcome {
    let f = analysis::expressiveness(&release()?).map_err(|e| e.to_string())?;
    exact(&f, 757, 821, "coverage")?;
    ensure(f.percent() == "92.2%", || f.to_string())?;
    Ok(f.to_string())
}

fn uniqueness() -> Outcome {
    let u = analysis::uniqueness(&release()?).map_err(|e| e.to_string())?;
    ensure(u.pairs == 74, || format!("{} pairs", u.pairs))?;
    ensure((u.kappa - 0.517).abs() <= KAPPA_TOL, || format!("kappa {}", u.kappa))?;
    let slot = u.slot_agreement.ok_or("no slot adjudication")?;
    exact(&slot, 65, 73, "slot agreement")?;
    ensure(slot.percent() == "89.0%", || slot.to_string())?;
    Ok(format!("kappa {:.4} on {} pairs, slot agreement {slot}", u.kappa, u.pairs))
}

fn informativeness() -> Outcome {
    let i = analysis::informativeness(&release()?).map_err(|e| e.to_string())?;
    let top = &i.distribution[&3];
    exact(top, 857, 1090, "score 3")?;
    ensure(top.percent() == "78.6%", || top.to_string())?;
    ensure((i.alpha_ordinal - 0.265).abs() <= ALPHA_TOL, || format!("alpha {}", i.alpha_ordinal))?;
    Ok(format!("score 3 {top}, ordinal alpha {:.4}", i.alpha_ordinal))
}

fn analyses() -> Outcome {
    let corpus = release()?;
    let ex = analysis::extractability(&corpus).map_err(|e| e.to_string())?;
    for (class, num) in [
        (Extractability::Extractable, 126),
        (Extractability::ExtractableWithChanges, 14),
        (Extractability::NotExtractable, 26),
    ] {
        exact(&ex[&class], num, 166, &class.to_string())?;
    }
    let ex_pct: Vec<String> = ex.values().map(Fraction::percent).collect();
    ensure(ex_pct == ["75.9%", "8.4%", "15.7%"], || format!("{ex_pct:?}"))?;
    let targets = analysis::targets(&corpus).map_err(|e| e.to_string())?;
    for (k, num) in [(1, 542), (2, 144), (3, 52), (4, 19), (5, 5)] {
        exact(&targets[&k], num, 762, &format!("{k} labels"))?;
    }
    ensure(targets.len() == 5, || format!("{targets:?}"))?;
    let t_pct: Vec<String> = targets.values().map(Fraction::percent).collect();
    ensure(t_pct == ["71.1%", "18.9%", "6.8%", "2.5%", "0.7%"], || format!("{t_pct:?}"))?;
    Ok(format!("extractability {ex_pct:?} of 166, labels per target {t_pct:?} of 762"))
}

fn metric_oracles() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20);

    let mut kappas = 0;
    while kappas < 1000 {
        let n = rng.random_range(2..=10);
        let cats = rng.random_range(1..=5);
        let pairs: Vec<(u8, u8)> = (0..n).map(|_| (rng.random_range(0..cats), rng.random_range(0..cats))).collect();
        if let Some(want) = oracles::kappa_oracle(&pairs) {
            let got = cohen_kappa(&ReliabilityData::from_pairs(pairs.iter().copied())).map_err(|e| e.to_string())?;
            ensure((got - want).abs() < ORACLE_TOL, || format!("kappa {pairs:?}: {got} vs {want}"))?;
            kappas += 1;
        }
    }

    let mut alphas = 0;
    while alphas < 1000 {
        let units = rng.random_range(2..=10);
        let raters = rng.random_range(2..=5);
        let values = rng.random_range(2..=5u8);
        let rows: Vec<Vec<Option<u8>>> = (0..units)
            .map(|_| {
                (0..raters)
                    .map(|_| (!rng.random_bool(0.2)).then(|| rng.random_range(1..=values)))
                    .collect()
            })
            .collect();
        let data = ReliabilityData::from_rows(rows.clone());
        for (distance, ordinal) in [(Distance::Nominal, false), (Distance::Ordinal, true)] {
            match (krippendorff_alpha(&data, distance), oracles::alpha_oracle(&rows, ordinal)) {
                (Ok(got), Some(want)) => {
                    ensure((got - want).abs() < ORACLE_TOL, || format!("alpha {rows:?}: {got} vs {want}"))?;
                    alphas += usize::from(ordinal);
                }
                (Err(MetricError::NoVariation), None) | (Err(MetricError::TooFewItems { .. }), _) => {}
                (got, want) => return Err(format!("alpha {rows:?} {distance:?}: {got:?} vs {want:?}")),
            }
        }
    }

    let multisets = oracles::five_vote_multisets();
    ensure(multisets.len() == 21, || format!("{} multisets", multisets.len()))?;
    for votes in &multisets {
        let scores: Vec<Score> = votes.iter().map(|&v| Score::new(v).unwrap()).collect();
        let (got, _) = majority_vote(&scores).map_err(|e| e.to_string())?;
        let want = oracles::majority_oracle(votes);
        ensure(got.get() == want, || format!("vote {votes:?}: {} vs {want}", got.get()))?;
    }

    for _ in 0..50 {
        let n = rng.random_range(1..=8);
        let dim = rng.random_range(1..=6);
        let mut draw = || -> Vec<Vec<bool>> { (0..n).map(|_| (0..dim).map(|_| rng.random_bool(0.4)).collect()).collect() };
        let (gold, pred) = (draw(), draw());
        let (tp, fp, fn_) = oracles::micro_counts(&gold, &pred);
        let vectors = |rows: &[Vec<bool>]| rows.iter().cloned().map(LabelVector::from_bits).collect::<Vec<_>>();
        let got = multilabel_eval(&vectors(&gold), &vectors(&pred), &[]).map_err(|e| e.to_string())?.micro_f1;
        let want = if tp + fp + fn_ == 0.0 { 1.0 } else { 2.0 * tp / (2.0 * tp + fp + fn_) };
        ensure((got - want).abs() < ORACLE_TOL, || format!("micro F1 {got} vs {want}"))?;
    }

    let elapsed = started.elapsed();
    ensure(elapsed < ORACLE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{kappas} kappa, {alphas} alpha, 21 vote multisets, 50 micro-F1 instances, {elapsed:.2?}"))
}

fn template_dsl() -> Outcome {
    let set = TemplateSet::bundled();
    ensure(set.len() == 24, || format!("{} templates", set.len()))?;
    let want: BTreeMap<&str, usize> = [
        ("CA1", 2), ("CA2", 2), ("CA3", 2), ("CA4", 2), ("VAL1", 2), ("VAL2", 2), ("VAL3", 2), ("VAL4", 2),
        ("CLS1", 2), ("CLS2", 3), ("PR1", 1), ("EX1", 1), ("EX2", 2), ("EX3", 1), ("CMP1", 2), ("CMP2", 3),
        ("LR1", 2), ("CLR1", 1), ("CLR2", 1), ("GR1", 1), ("GR2", 2), ("GR3", 2), ("GS1", 2), ("GS2", 1),
    ]
    .into();
    let got: BTreeMap<&str, usize> = set.iter().map(|t| (t.id().as_str(), t.slots().len())).collect();
    ensure(got == want, || format!("arity census {got:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let alphabet: Vec<char> = "abcXYZ019 ,.'のはが".chars().collect();
    let names = ["x", "y", "z", "w", "slot_1"];
    for case in 0..10_000 {
        let n = rng.random_range(1..=3);
        let mut pool = names.to_vec();
        let slots: Vec<&str> = (0..n).map(|_| pool.remove(rng.random_range(0..pool.len()))).collect();
        let mut literal = || -> String {
            let len = rng.random_range(0..=8);
            (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect()
        };
        let literals: Vec<String> = (0..=n).map(|_| literal()).collect();
        let mut source = literals[0].clone();
        let mut rendered = literals[0].clone();
        for (slot, lit) in slots.iter().zip(&literals[1..]) {
            source.push_str(&format!("{{{slot}}}{lit}"));
            rendered.push_str(&format!("<{slot}>{lit}"));
        }
        let pattern: TemplatePattern = source.parse().map_err(|e| format!("case {case} {source:?}: {e}"))?;
        ensure(pattern.to_string() == source, || format!("case {case}: {pattern} != {source}"))?;
        let fillers: BTreeMap<SlotName, String> = pattern.slots().map(|s| (s.clone(), format!("<{s}>"))).collect();
        let got = pattern.render(&fillers).map_err(|e| e.to_string())?;
        ensure(got == rendered, || format!("case {case}: {got:?} != {rendered:?}"))?;
    }
    Ok("24 templates, arity census 7/15/2, 10000 round trips".into())
}

fn benchmark_reports(name: &str, kinds: &[ModelKind]) -> Result<Vec<BenchmarkReport>, String> {
    let templates = TemplateSet::bundled();
    let corpus = load_corpus(&fixture(name), &templates).map_err(|e| e.to_string())?;
    let bench = Benchmark::from_corpus(&corpus, &templates).map_err(|e| e.to_string())?;
    evaluate(kinds, &bench, &corpus, &templates, Tokenizer::UnicodeWords).map_err(|e| e.to_string())
}

fn end_to_end_benchmark() -> Outcome {
    for name in ["mini", "release"] {
        let r = benchmark_reports(name, &[ModelKind::Gold, ModelKind::Empty])?;
        ensure(r[0].selection.micro_f1 == 1.0, || format!("{name}: gold micro-F1 {}", r[0].selection.micro_f1))?;
        ensure(r[1].selection.micro_f1 == 0.0, || format!("{name}: empty micro-F1 {}", r[1].selection.micro_f1))?;
    }
    let kinds = [ModelKind::Majority { k: 1 }, ModelKind::Knn { k: 3 }];
    let first = benchmark_reports("release", &kinds)?;
    let second = benchmark_reports("release", &kinds)?;
    for ((a, b), golden) in first.iter().zip(&second).zip(["release_majority_k1.json", "release_knn_k3.json"]) {
        let text = serde_json::to_string_pretty(a).unwrap() + "\n";
        ensure(text == serde_json::to_string_pretty(b).unwrap() + "\n", || format!("{} not deterministic", a.model))?;
        let pinned = fs::read_to_string(core_dir().join("tests/golden").join(golden)).map_err(|e| e.to_string())?;
        ensure(text == pinned, || format!("{} drifted from {golden}", a.model))?;
    }
    Ok(format!(
        "gold 1.0 / empty 0.0 on mini and release; majority micro-F1 {:.4}, knn micro-F1 {:.4} match pinned reports",
        first[0].selection.micro_f1, first[1].selection.micro_f1
    ))
}

fn service_pipeline() -> Outcome {
    let fixture = core_dir().join("../service/tests/fixtures/session20");
    let templates = TemplateSet::bundled();
    let source = load_corpus(&fixture, &templates).map_err(|e| e.to_string())?;
    let service = Service::in_memory(templates.clone());
    let config = |overlap: f64| ProjectConfig {
        name: "acceptance".into(),
        corpus: fixture.clone(),
        workflow: Workflow::TemplateApplication,
        overlap_fraction: overlap,
        annotators: vec!["ann-A".into(), "ann-B".into()],
        seed: 11,
        items: None,
        calibration: vec![],
        workers_per_item: 5,
        locale: "en".into(),
    };
    let err = |e: ServiceError| e.to_string();
    let id = service.create_project(config(0.5)).map_err(err)?.project.id;
    let summary = service.project(&id).map_err(err)?;
    ensure(summary.items == 20 && summary.overlap_items == 10, || format!("{summary:?}"))?;

    let mut seen = 0;
    for annotator in ["ann-A", "ann-B"] {
        while let Some(task) = service.next_task(&id, annotator).map_err(err)? {
            let gold = source
                .diagnoses()
                .iter()
                .find(|d| d.comment_id == task.item_id)
                .ok_or("fixture comment without diagnosis")?;
            // the second annotator disagrees on every third item it sees
            seen += 1;
            let payload = if annotator == "ann-B" && seen % 3 == 0 {
                if gold.label.is_applicable() {
                    json!({"diagnoses": [{"label": "NotApplicable"}]})
                } else {
                    json!({"diagnoses": [{"label": "CLR1", "fillers": {"x": {"text": "it", "extractability": "NotExtractable"}}}]})
                }
            } else {
                json!({"diagnoses": [{"label": gold.label, "fillers": gold.fillers}]})
            };
            let request = SubmitRequest {
                item_id: task.item_id.clone(),
                revision: task.revision,
                payload: payload.clone(),
            };
            service.submit(&id, annotator, request).map_err(err)?;
            if seen == 1 {
                let stale = SubmitRequest {
                    item_id: task.item_id,
                    revision: task.revision,
                    payload,
                };
                match service.submit(&id, annotator, stale) {
                    Err(ServiceError::RevisionConflict { expected: 1, got: 0, .. }) => {}
                    other => return Err(format!("stale submit: {other:?}")),
                }
            }
        }
    }
    ensure(seen == 30, || format!("{seen} tasks"))?;

    let export = service.export(&id).map_err(err)?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    export.write_dir(dir.path()).map_err(|e| e.to_string())?;
    let exported = load_corpus(dir.path(), &templates).map_err(|e| e.to_string())?;
    let pairs = exported.overlap_pairs();
    ensure(pairs.len() == 10, || format!("{} overlap pairs", pairs.len()))?;
    let kappa = cohen_kappa(&uniqueness_data(&pairs)).map_err(|e| e.to_string())?;
    let mut codes: BTreeMap<String, u8> = BTreeMap::new();
    let labelled: Vec<(u8, u8)> = pairs
        .iter()
        .map(|p| {
            let mut code = |l: String| {
                let next = codes.len() as u8;
                *codes.entry(l).or_insert(next)
            };
            (code(p.first.label.to_string()), code(p.second.label.to_string()))
        })
        .collect();
    let want = oracles::kappa_oracle(&labelled).ok_or("degenerate kappa")?;
    ensure((kappa - want).abs() < ORACLE_TOL, || format!("kappa {kappa} vs oracle {want}"))?;
    Ok(format!("20 items, 10 overlap pairs exported and reloaded, kappa {kappa:.4}, stale revision rejected"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("corpus stats", stats),
        ("expressiveness", expressiveness),
        ("uniqueness", uniqueness),
        ("informativeness", informativeness),
        ("analyses", analyses),
        ("metric oracles", metric_oracles),
        ("template DSL", template_dsl),
        ("end-to-end benchmark", end_to_end_benchmark),
        ("service pipeline", service_pipeline),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name}: {reason}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
