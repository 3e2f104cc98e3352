use std::collections::HashMap;

use serde::Serialize;

use crate::tokenize::Tokenizer;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlotOverlap {
    pub exact_match: bool,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl SlotOverlap {
    pub const ZERO: SlotOverlap = SlotOverlap {
        exact_match: false,
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    };
}

fn ngrams(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut bag = HashMap::new();
    if n == 0 {
        return bag;
    }
    for gram in tokens.windows(n) {
        *bag.entry(gram).or_insert(0) += 1;
    }
    bag
}

/// Bag-of-n-gram overlap between a predicted and a gold filler after
/// case folding and punctuation removal.
///
/// `exact_match` compares the normalized token sequences. A side with no
/// n-grams scores zero unless both sides are empty.
pub fn slot_overlap(pred: &str, gold: &str, tokenizer: Tokenizer, n: usize) -> SlotOverlap {
    let p_tokens = tokenizer.normalized(pred);
    let g_tokens = tokenizer.normalized(gold);
    let exact_match = p_tokens == g_tokens;
    let p_bag = ngrams(&p_tokens, n);
    let g_bag = ngrams(&g_tokens, n);
    let p_total: usize = p_bag.values().sum();
    let g_total: usize = g_bag.values().sum();
    if p_total == 0 || g_total == 0 {
        let both_empty = p_total == 0 && g_total == 0 && exact_match;
        let v = if both_empty { 1.0 } else { 0.0 };
        return SlotOverlap {
            exact_match,
            precision: v,
            recall: v,
            f1: v,
        };
    }
    let common: usize = p_bag
        .iter()
        .map(|(gram, &c)| c.min(g_bag.get(gram).copied().unwrap_or(0)))
        .sum();
    let precision = common as f64 / p_total as f64;
    let recall = common as f64 / g_total as f64;
    let f1 = if common == 0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    SlotOverlap {
        exact_match,
        precision,
        recall,
        f1,
    }
}
