use std::fmt::Write as _;

use serde::Serialize;

use super::{
    filling_instances, selection_instances, BaselineError, Documents, EmptyFiller, EmptySelector,
    ExtractiveFiller, FillingInstance, GoldFiller, GoldSelector, KnnSelector, MajoritySelector,
    SelectionInstance, Selector, SlotFiller,
};
use crate::corpus::{Corpus, Extractability, Split};
use crate::metrics::{multilabel_eval, slot_overlap, Fraction, MultilabelReport, SlotOverlap};
use crate::template::TemplateSet;
use crate::tokenize::Tokenizer;

/// F1 at or above which a predicted filler counts as a lenient match in the
/// automatic proxy.
pub const LENIENT_PROXY_F1: f64 = 0.5;

/// Selection and filling instances for one dev/eval split.
#[derive(Clone, Debug)]
pub struct Benchmark {
    pub dev: Vec<SelectionInstance>,
    pub eval: Vec<SelectionInstance>,
    /// Filling instances from the eval side.
    pub filling: Vec<FillingInstance>,
}

impl Benchmark {
    pub fn new(corpus: &Corpus, templates: &TemplateSet, split: &Split) -> Result<Self, BaselineError> {
        let eval = selection_instances(corpus, templates, &split.eval)?;
        if eval.is_empty() {
            return Err(BaselineError::EmptyEval);
        }
        Ok(Benchmark {
            dev: selection_instances(corpus, templates, &split.dev)?,
            eval,
            filling: filling_instances(corpus, &split.eval),
        })
    }

    /// Uses the split stored with the corpus.
    pub fn from_corpus(corpus: &Corpus, templates: &TemplateSet) -> Result<Self, BaselineError> {
        let split = corpus.split().ok_or(BaselineError::NoSplit)?;
        Benchmark::new(corpus, templates, split)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Majority selector with the extractive filler.
    Majority { k: usize },
    /// k-NN selector with the extractive filler.
    Knn { k: usize },
    /// Gold replay for both subtasks.
    Gold,
    /// Predicts nothing.
    Empty,
}

impl ModelKind {
    pub fn name(self) -> String {
        match self {
            ModelKind::Majority { k } => format!("majority(k={k})"),
            ModelKind::Knn { k } => format!("knn(k={k})"),
            ModelKind::Gold => "gold".into(),
            ModelKind::Empty => "empty".into(),
        }
    }
}

pub struct Model {
    pub name: String,
    pub selector: Box<dyn Selector>,
    pub filler: Box<dyn SlotFiller>,
}

impl Model {
    /// Fits `kind` on the dev side of `bench`.
    pub fn build(kind: ModelKind, bench: &Benchmark, tokenizer: Tokenizer) -> Result<Self, BaselineError> {
        let extractive = || -> Box<dyn SlotFiller> {
            Box::new(ExtractiveFiller {
                tokenizer,
                ..ExtractiveFiller::default()
            })
        };
        let (selector, filler): (Box<dyn Selector>, Box<dyn SlotFiller>) = match kind {
            ModelKind::Majority { k } => (Box::new(MajoritySelector::fit(&bench.dev, k)?), extractive()),
            ModelKind::Knn { k } => (Box::new(KnnSelector::fit(&bench.dev, k, tokenizer)?), extractive()),
            ModelKind::Gold => (Box::new(GoldSelector), Box::new(GoldFiller)),
            ModelKind::Empty => (Box::new(EmptySelector), Box::new(EmptyFiller)),
        };
        Ok(Model {
            name: kind.name(),
            selector,
            filler,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FillingSummary {
    pub slots: usize,
    pub exact_match: Fraction,
    pub mean_precision: f64,
    pub mean_recall: f64,
    pub mean_f1: f64,
    /// Slots with token F1 ≥ 0.5. A machine stand-in for human lenient
    /// matching, not a replacement for it.
    pub lenient_proxy: Fraction,
}

#[derive(Default)]
struct Acc {
    slots: u64,
    exact: u64,
    lenient: u64,
    p: f64,
    r: f64,
    f: f64,
}

impl Acc {
    fn add(&mut self, o: &SlotOverlap) {
        self.slots += 1;
        self.exact += u64::from(o.exact_match);
        self.lenient += u64::from(o.f1 >= LENIENT_PROXY_F1);
        self.p += o.precision;
        self.r += o.recall;
        self.f += o.f1;
    }

    fn finish(&self) -> FillingSummary {
        let n = self.slots as f64;
        let mean = |x: f64| if self.slots == 0 { 0.0 } else { x / n };
        FillingSummary {
            slots: self.slots as usize,
            exact_match: Fraction::new(self.exact, self.slots),
            mean_precision: mean(self.p),
            mean_recall: mean(self.r),
            mean_f1: mean(self.f),
            lenient_proxy: Fraction::new(self.lenient, self.slots),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub model: String,
    pub tokenizer: Tokenizer,
    pub ngram: usize,
    pub dev_instances: usize,
    pub selection: MultilabelReport,
    pub filling_instances: usize,
    /// Every gold slot of the eval diagnoses; unfilled predictions score 0.
    pub filling: FillingSummary,
    /// Gold slots whose filler is extractable (with or without changes).
    pub filling_extractable: FillingSummary,
}

impl BenchmarkReport {
    pub fn to_table(&self) -> String {
        let s = &self.selection;
        let mut out = String::new();
        let _ = writeln!(out, "model            {}", self.model);
        let _ = writeln!(out, "selection        {} eval targets, {} dev targets", s.instances, self.dev_instances);
        let _ = writeln!(out, "  micro P/R/F1   {:.4} / {:.4} / {:.4}", s.micro_precision, s.micro_recall, s.micro_f1);
        let _ = writeln!(out, "  macro F1       {:.4}", s.macro_f1);
        let _ = writeln!(out, "  example acc.   {:.4}", s.example_accuracy);
        let _ = writeln!(out, "  subset acc.    {:.4}", s.subset_accuracy);
        for (name, f) in [("filling", &self.filling), ("  extractable", &self.filling_extractable)] {
            let _ = writeln!(
                out,
                "{name:<17}{} slots, exact {}, token P/R/F1 {:.4} / {:.4} / {:.4}, F1>=0.5 {}",
                f.slots, f.exact_match, f.mean_precision, f.mean_recall, f.mean_f1, f.lenient_proxy
            );
        }
        out
    }
}

/// Scores `model` on the eval side of `bench`. Filling is run on the gold
/// template of every eval diagnosis, so the two subtasks are scored
/// independently.
pub fn evaluate_model(
    model: &Model,
    bench: &Benchmark,
    corpus: &Corpus,
    templates: &TemplateSet,
    tokenizer: Tokenizer,
) -> Result<BenchmarkReport, BaselineError> {
    let gold: Vec<_> = bench.eval.iter().map(|i| i.gold.clone()).collect();
    let pred: Vec<_> = bench.eval.iter().map(|i| model.selector.predict(i)).collect();
    let names: Vec<String> = templates.ids().map(|id| id.to_string()).collect();
    let selection = multilabel_eval(&gold, &pred, &names)?;

    let ngram = 1;
    let mut all = Acc::default();
    let mut extractable = Acc::default();
    for inst in &bench.filling {
        let template = templates
            .get(&inst.template)
            .ok_or_else(|| BaselineError::UnknownTemplate(inst.template.clone()))?;
        let ca = corpus
            .counterargument(&inst.counterargument_id)
            .ok_or_else(|| BaselineError::MissingRecord(format!("counterargument {}", inst.counterargument_id)))?;
        let topic = corpus
            .topic(&ca.topic_id)
            .ok_or_else(|| BaselineError::MissingRecord(format!("topic {}", ca.topic_id)))?;
        let predicted = model.filler.fill(inst, template, &Documents::new(ca, topic))?;
        for (slot, gold_filler) in &inst.gold {
            let text = predicted.get(slot).map_or("", |f| f.text.as_str());
            let o = slot_overlap(text, &gold_filler.text, tokenizer, ngram);
            all.add(&o);
            if gold_filler.extractability != Extractability::NotExtractable {
                extractable.add(&o);
            }
        }
    }
    Ok(BenchmarkReport {
        model: model.name.clone(),
        tokenizer,
        ngram,
        dev_instances: bench.dev.len(),
        selection,
        filling_instances: bench.filling.len(),
        filling: all.finish(),
        filling_extractable: extractable.finish(),
    })
}

/// Builds and scores each model kind in order.
pub fn evaluate(
    kinds: &[ModelKind],
    bench: &Benchmark,
    corpus: &Corpus,
    templates: &TemplateSet,
    tokenizer: Tokenizer,
) -> Result<Vec<BenchmarkReport>, BaselineError> {
    kinds
        .iter()
        .map(|&kind| {
            let model = Model::build(kind, bench, tokenizer)?;
            evaluate_model(&model, bench, corpus, templates, tokenizer)
        })
        .collect()
}
