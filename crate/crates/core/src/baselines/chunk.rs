use std::collections::BTreeSet;

use crate::corpus::Span;
use crate::tokenize::Tokenizer;

/// Splits text into candidate filler spans (char offsets).
pub trait Chunker: Send + Sync {
    fn chunks(&self, text: &str) -> Vec<Span>;
}

const PUNCTUATION: &[char] = &['.', ',', ';', ':', '!', '?', '(', ')', '"', '、', '。', '，', '．', '！', '？', '「', '」'];

/// Words that open a subordinate or contrasting clause. A chunk never spans
/// one; the word itself is left out.
const BOUNDARY_WORDS: &[&str] = &[
    "because", "if", "even", "that", "which", "so", "but", "when", "while", "since", "although", "though",
];

const STOPWORDS: &[&str] = &[
    "a", "about", "after", "all", "also", "am", "an", "and", "any", "are", "as", "at", "be", "been", "being",
    "but", "by", "can", "could", "did", "do", "does", "doing", "for", "from", "had", "has", "have", "having",
    "he", "her", "here", "him", "his", "how", "i", "if", "in", "into", "is", "it", "its", "just", "may",
    "me", "might", "more", "most", "much", "must", "my", "no", "not", "of", "on", "or", "other", "our",
    "say", "she", "should", "so", "some", "such", "than", "that", "the", "their", "them", "then", "there",
    "these", "they", "this", "those", "to", "too", "very", "was", "we", "were", "what", "when", "where",
    "which", "while", "who", "why", "will", "with", "would", "you", "your",
];

pub fn is_stopword(token: &str) -> bool {
    STOPWORDS.binary_search(&token).is_ok()
}

/// Normalized tokens of `text` with stopwords removed.
pub fn content_tokens(text: &str, tokenizer: Tokenizer) -> BTreeSet<String> {
    tokenizer
        .normalized(text)
        .into_iter()
        .filter(|t| !is_stopword(t))
        .collect()
}

/// Breaks at punctuation and at clause-opening words, then drops chunks made
/// only of stopwords.
#[derive(Clone, Copy, Debug, Default)]
pub struct PunctuationChunker;

impl Chunker for PunctuationChunker {
    fn chunks(&self, text: &str) -> Vec<Span> {
        let chars: Vec<char> = text.chars().collect();
        let words = Tokenizer::UnicodeWords.spans(text);
        let mut out = Vec::new();
        let mut current: Vec<(usize, usize, &str)> = Vec::new();
        let mut flush = |current: &mut Vec<(usize, usize, &str)>| {
            if current.iter().any(|(_, _, w)| !is_stopword(w)) {
                out.push(Span::new(current[0].0, current[current.len() - 1].1));
            }
            current.clear();
        };
        let mut prev_end = 0;
        for (start, end, norm) in &words {
            if chars[prev_end..*start].iter().any(|c| PUNCTUATION.contains(c)) {
                flush(&mut current);
            }
            prev_end = *end;
            if BOUNDARY_WORDS.contains(&norm.as_str()) {
                flush(&mut current);
                continue;
            }
            current.push((*start, *end, norm));
        }
        flush(&mut current);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(text: &str) -> Vec<&str> {
        PunctuationChunker
            .chunks(text)
            .iter()
            .map(|s| s.slice(text).unwrap())
            .collect()
    }

    #[test]
    fn stopword_list_is_sorted() {
        assert!(STOPWORDS.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn splits_at_punctuation_and_clause_words() {
        assert_eq!(
            texts("That is to say even if abolishing homework, students become passive in character."),
            ["abolishing homework", "students become passive in character"]
        );
        assert_eq!(texts("It is what it is."), Vec::<&str>::new());
    }

    #[test]
    fn japanese_splits_at_punctuation() {
        assert_eq!(texts("宿題を廃止しても、生徒は受け身になる。"), ["宿題を廃止しても", "生徒は受け身になる"]);
    }
}
