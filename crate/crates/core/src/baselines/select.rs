use std::collections::BTreeSet;

use super::{BaselineError, SelectionInstance};
use crate::metrics::LabelVector;
use crate::tokenize::Tokenizer;

/// Predicts a label vector for a selection instance. Implementations hold
/// no mutable state, so one selector can score instances in parallel.
pub trait Selector: Send + Sync {
    fn predict(&self, instance: &SelectionInstance) -> LabelVector;
}

/// Always predicts the `k` templates most often present in dev gold
/// vectors; count ties go to the template listed first in the set.
#[derive(Clone, Debug)]
pub struct MajoritySelector {
    prediction: LabelVector,
}

impl MajoritySelector {
    pub fn fit(dev: &[SelectionInstance], k: usize) -> Result<Self, BaselineError> {
        if k == 0 {
            return Err(BaselineError::InvalidK);
        }
        let first = dev.first().ok_or(BaselineError::EmptyDev)?;
        let dim = first.gold.len();
        let mut counts = vec![0usize; dim];
        for inst in dev {
            for i in inst.gold.ones() {
                counts[i] += 1;
            }
        }
        let mut ranked: Vec<usize> = (0..dim).filter(|&i| counts[i] > 0).collect();
        ranked.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
        let mut prediction = LabelVector::zeros(dim);
        for &i in ranked.iter().take(k) {
            prediction.set(i, true);
        }
        Ok(MajoritySelector { prediction })
    }

    pub fn prediction(&self) -> &LabelVector {
        &self.prediction
    }
}

impl Selector for MajoritySelector {
    fn predict(&self, _instance: &SelectionInstance) -> LabelVector {
        self.prediction.clone()
    }
}

/// Union of the gold vectors of the `k` dev instances whose target text has
/// the highest token Jaccard similarity with the query. Ties keep dev order.
#[derive(Clone, Debug)]
pub struct KnnSelector {
    k: usize,
    tokenizer: Tokenizer,
    dev: Vec<(BTreeSet<String>, LabelVector)>,
}

impl KnnSelector {
    pub fn fit(dev: &[SelectionInstance], k: usize, tokenizer: Tokenizer) -> Result<Self, BaselineError> {
        if k == 0 {
            return Err(BaselineError::InvalidK);
        }
        if dev.is_empty() {
            return Err(BaselineError::EmptyDev);
        }
        let dev = dev
            .iter()
            .map(|d| (token_set(&d.target_text, tokenizer), d.gold.clone()))
            .collect();
        Ok(KnnSelector { k, tokenizer, dev })
    }

    /// Indices of the `k` nearest dev instances, nearest first.
    pub fn neighbours(&self, text: &str) -> Vec<usize> {
        let query = token_set(text, self.tokenizer);
        // similarity as an exact ratio (shared, union) so ordering is stable
        let mut scored: Vec<(usize, usize, usize)> = self
            .dev
            .iter()
            .enumerate()
            .map(|(i, (tokens, _))| {
                let shared = query.intersection(tokens).count();
                let union = query.len() + tokens.len() - shared;
                (i, shared, union.max(1))
            })
            .collect();
        scored.sort_by(|a, b| (b.1 * a.2).cmp(&(a.1 * b.2)).then(a.0.cmp(&b.0)));
        scored.into_iter().take(self.k).map(|(i, _, _)| i).collect()
    }
}

fn token_set(text: &str, tokenizer: Tokenizer) -> BTreeSet<String> {
    tokenizer.normalized(text).into_iter().collect()
}

impl Selector for KnnSelector {
    fn predict(&self, instance: &SelectionInstance) -> LabelVector {
        let mut out = LabelVector::zeros(instance.gold.len());
        for i in self.neighbours(&instance.target_text) {
            out.union_with(&self.dev[i].1);
        }
        out
    }
}

/// Replays the gold vector: the upper bound.
#[derive(Clone, Copy, Debug, Default)]
pub struct GoldSelector;

impl Selector for GoldSelector {
    fn predict(&self, instance: &SelectionInstance) -> LabelVector {
        instance.gold.clone()
    }
}

/// Predicts no template at all.
#[derive(Clone, Copy, Debug, Default)]
pub struct EmptySelector;

impl Selector for EmptySelector {
    fn predict(&self, instance: &SelectionInstance) -> LabelVector {
        LabelVector::zeros(instance.gold.len())
    }
}
