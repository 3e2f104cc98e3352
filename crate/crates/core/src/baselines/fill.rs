use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use super::chunk::{content_tokens, Chunker};
use super::{BaselineError, FillingInstance};
use crate::corpus::{Counterargument, DocumentRef, Filler, Point, SourceSpan, Span, Topic};
use crate::template::{SlotName, Template};
use crate::tokenize::Tokenizer;

/// The two texts a filler can be drawn from.
#[derive(Clone, Copy, Debug)]
pub struct Documents<'a> {
    pub counterargument: &'a Counterargument,
    /// Points of the original argument.
    pub points: &'a [Point],
    pub motion: &'a str,
}

impl<'a> Documents<'a> {
    pub fn new(counterargument: &'a Counterargument, topic: &'a Topic) -> Self {
        Documents {
            counterargument,
            points: &topic.points,
            motion: &topic.motion,
        }
    }
}

pub trait SlotFiller: Send + Sync {
    fn fill(
        &self,
        instance: &FillingInstance,
        template: &Template,
        docs: &Documents<'_>,
    ) -> Result<BTreeMap<SlotName, Filler>, BaselineError>;
}

struct Candidate {
    document: DocumentRef,
    span: Span,
    text: String,
    tokens: BTreeSet<String>,
    // 0 = target sentences, 1 = rest of the counterargument, 2 = original argument
    tier: u8,
    // (shared with topic vocabulary, content token count)
    topical: (usize, usize),
}

fn candidates(
    docs: &Documents<'_>,
    target: &[usize],
    chunker: &dyn Chunker,
    tokenizer: Tokenizer,
) -> Vec<Candidate> {
    let mut vocab = content_tokens(docs.motion, tokenizer);
    for p in docs.points {
        vocab.extend(content_tokens(&p.text, tokenizer));
    }
    let ca = docs.counterargument;
    let mut spans: Vec<(DocumentRef, Span, u8)> = Vec::new();
    let mut push_chunks = |doc: DocumentRef, offset: usize, text: &str, tier: u8| {
        for s in chunker.chunks(text) {
            spans.push((doc.clone(), Span::new(s.start + offset, s.end + offset), tier));
        }
    };
    let ordered = target
        .iter()
        .map(|&i| (i, 0))
        .chain((0..ca.sentences.len()).filter(|i| !target.contains(i)).map(|i| (i, 1)));
    for (i, tier) in ordered {
        if let (Some(span), Some(text)) = (ca.sentences.get(i), ca.sentence(i)) {
            push_chunks(DocumentRef::Counterargument, span.start, text, tier);
        }
    }
    for p in docs.points {
        push_chunks(DocumentRef::Original(p.id.clone()), 0, &p.text, 2);
    }
    if spans.is_empty() {
        // nothing but stopwords: fall back to whole sentences and points
        for (i, span) in ca.sentences.iter().enumerate() {
            spans.push((DocumentRef::Counterargument, *span, u8::from(!target.contains(&i))));
        }
        for p in docs.points.iter().filter(|p| !p.text.trim().is_empty()) {
            spans.push((DocumentRef::Original(p.id.clone()), Span::new(0, p.text.chars().count()), 2));
        }
    }
    spans
        .into_iter()
        .filter_map(|(document, span, tier)| {
            let source = match &document {
                DocumentRef::Counterargument => ca.text.as_str(),
                DocumentRef::Original(id) => &docs.points.iter().find(|p| &p.id == id)?.text,
            };
            let text = span.slice(source)?.to_owned();
            let tokens = content_tokens(&text, tokenizer);
            let shared = tokens.intersection(&vocab).count();
            let topical = (shared, tokens.len().max(1));
            Some(Candidate {
                document,
                span,
                text,
                tokens,
                tier,
                topical,
            })
        })
        .collect()
}

/// Fills every slot of `template` with a span of the documents.
///
/// Candidates are chunks of the target sentences, then of the rest of the
/// counterargument, then of the original argument's points. Each slot takes
/// the unused candidate sharing most content words with the literal text
/// around the slot; ties prefer the earlier tier, then the larger share of
/// topic words (motion and points), then document order. When every
/// candidate is used, candidates are reused.
pub fn extractive_filler(
    template: &Template,
    docs: &Documents<'_>,
    target: &[usize],
    chunker: &dyn Chunker,
    tokenizer: Tokenizer,
) -> Result<BTreeMap<SlotName, Filler>, BaselineError> {
    let cands = candidates(docs, target, chunker, tokenizer);
    if cands.is_empty() {
        return Err(BaselineError::NoCandidates);
    }
    let pattern = template.primary_form();
    let mut used = vec![false; cands.len()];
    let mut out = BTreeMap::new();
    for slot in template.slots() {
        let (before, after) = pattern.context_of(slot);
        let mut context = content_tokens(before.unwrap_or(""), tokenizer);
        context.extend(content_tokens(after.unwrap_or(""), tokenizer));
        let ctx_score = |c: &Candidate| c.tokens.intersection(&context).count();
        let better = |a: usize, b: usize| -> Ordering {
            let (ca, cb) = (&cands[a], &cands[b]);
            ctx_score(cb)
                .cmp(&ctx_score(ca))
                .then(ca.tier.cmp(&cb.tier))
                .then((cb.topical.0 * ca.topical.1).cmp(&(ca.topical.0 * cb.topical.1)))
                .then(a.cmp(&b))
        };
        let pick = (0..cands.len())
            .filter(|&i| !used[i])
            .min_by(|&a, &b| better(a, b))
            .or_else(|| (0..cands.len()).min_by(|&a, &b| better(a, b)))
            .expect("non-empty candidates");
        used[pick] = true;
        let c = &cands[pick];
        out.insert(
            slot.clone(),
            Filler::extracted(
                c.text.clone(),
                SourceSpan {
                    document: c.document.clone(),
                    span: c.span,
                },
            ),
        );
    }
    Ok(out)
}

/// [`extractive_filler`] behind the [`SlotFiller`] interface.
pub struct ExtractiveFiller {
    pub chunker: Box<dyn Chunker>,
    pub tokenizer: Tokenizer,
}

impl Default for ExtractiveFiller {
    fn default() -> Self {
        ExtractiveFiller {
            chunker: Box::new(super::PunctuationChunker),
            tokenizer: Tokenizer::UnicodeWords,
        }
    }
}

impl SlotFiller for ExtractiveFiller {
    fn fill(
        &self,
        instance: &FillingInstance,
        template: &Template,
        docs: &Documents<'_>,
    ) -> Result<BTreeMap<SlotName, Filler>, BaselineError> {
        extractive_filler(template, docs, &instance.target, self.chunker.as_ref(), self.tokenizer)
    }
}

/// Replays the gold fillers.
#[derive(Clone, Copy, Debug, Default)]
pub struct GoldFiller;

impl SlotFiller for GoldFiller {
    fn fill(
        &self,
        instance: &FillingInstance,
        _template: &Template,
        _docs: &Documents<'_>,
    ) -> Result<BTreeMap<SlotName, Filler>, BaselineError> {
        Ok(instance.gold.clone())
    }
}

/// Leaves every slot unfilled.
#[derive(Clone, Copy, Debug, Default)]
pub struct EmptyFiller;

impl SlotFiller for EmptyFiller {
    fn fill(
        &self,
        _instance: &FillingInstance,
        _template: &Template,
        _docs: &Documents<'_>,
    ) -> Result<BTreeMap<SlotName, Filler>, BaselineError> {
        Ok(BTreeMap::new())
    }
}
