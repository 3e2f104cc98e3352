use std::collections::HashSet;

use serde::Serialize;

use super::Corpus;
use crate::tokenize::Tokenizer;

/// Descriptive corpus statistics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsReport {
    pub tokenizer: String,
    pub topics: usize,
    pub counterarguments: usize,
    pub total_tokens: usize,
    pub avg_tokens_per_argument: f64,
    pub total_sentences: usize,
    pub avg_sentences_per_argument: f64,
    pub comments: usize,
    pub annotated_arguments: usize,
    /// Comments divided by the number of arguments with at least one comment.
    pub avg_comments_per_annotated_argument: f64,
    pub templated_diagnoses: usize,
    pub judgments: usize,
}

pub fn corpus_stats(corpus: &Corpus, tokenizer: Tokenizer) -> StatsReport {
    let cas = corpus.counterarguments();
    let total_tokens: usize = cas.iter().map(|ca| tokenizer.count(&ca.text)).sum();
    let total_sentences: usize = cas.iter().map(|ca| ca.sentences.len()).sum();
    let annotated: HashSet<&str> = corpus
        .comments()
        .iter()
        .map(|c| c.counterargument_id.as_str())
        .collect();
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    StatsReport {
        tokenizer: tokenizer.id().into(),
        topics: corpus.topics().len(),
        counterarguments: cas.len(),
        total_tokens,
        avg_tokens_per_argument: ratio(total_tokens, cas.len()),
        total_sentences,
        avg_sentences_per_argument: ratio(total_sentences, cas.len()),
        comments: corpus.comments().len(),
        annotated_arguments: annotated.len(),
        avg_comments_per_annotated_argument: ratio(corpus.comments().len(), annotated.len()),
        templated_diagnoses: corpus.diagnoses().len(),
        judgments: corpus.judgments().len(),
    }
}
