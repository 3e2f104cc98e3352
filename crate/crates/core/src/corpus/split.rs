use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Corpus, Split};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SplitError {
    #[error("corpus has no comments")]
    EmptyCorpus,
    #[error("ratio {0} is not strictly between 0 and 1")]
    InvalidRatio(f64),
}

/// Splits comment ids into dev/eval with `|dev| = round(ratio * N)`.
///
/// Stratified by topic: each topic receives its proportional share of dev
/// comments, with leftover seats going to the largest remainders. The
/// shuffle is seeded, so a fixed seed reproduces the split exactly.
pub fn split_comments(corpus: &Corpus, ratio: f64, seed: u64) -> Result<Split, SplitError> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(SplitError::InvalidRatio(ratio));
    }
    let n = corpus.comments().len();
    if n == 0 {
        return Err(SplitError::EmptyCorpus);
    }

    let mut strata: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for c in corpus.comments() {
        let topic = corpus
            .counterargument(&c.counterargument_id)
            .map(|ca| ca.topic_id.as_str())
            .unwrap_or_default();
        strata.entry(topic).or_default().push(&c.id);
    }

    let target = (ratio * n as f64).round() as usize;
    let mut quotas: Vec<(usize, f64)> = strata
        .values()
        .map(|ids| {
            let exact = ratio * ids.len() as f64;
            (exact.floor() as usize, exact - exact.floor())
        })
        .collect();
    let assigned: usize = quotas.iter().map(|q| q.0).sum();
    let mut by_remainder: Vec<usize> = (0..quotas.len()).collect();
    by_remainder.sort_by(|&a, &b| quotas[b].1.total_cmp(&quotas[a].1).then(a.cmp(&b)));
    for &i in by_remainder.iter().take(target.saturating_sub(assigned)) {
        quotas[i].0 += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split = Split::default();
    for (ids, (quota, _)) in strata.into_values().zip(quotas) {
        let mut ids = ids;
        ids.shuffle(&mut rng);
        for (k, id) in ids.into_iter().enumerate() {
            if k < quota {
                split.dev.insert(id.to_owned());
            } else {
                split.eval.insert(id.to_owned());
            }
        }
    }
    Ok(split)
}
