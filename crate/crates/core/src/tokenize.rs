//! Pluggable word tokenizers, selected by id.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_segmentation::UnicodeSegmentation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown tokenizer {0:?} (known: unicode-words, whitespace)")]
pub struct UnknownTokenizer(pub String);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Tokenizer {
    /// UAX #29 word boundaries, punctuation-only segments dropped.
    #[default]
    UnicodeWords,
    Whitespace,
}

impl Tokenizer {
    pub fn id(self) -> &'static str {
        match self {
            Tokenizer::UnicodeWords => "unicode-words",
            Tokenizer::Whitespace => "whitespace",
        }
    }

    pub fn tokens(self, text: &str) -> Vec<&str> {
        match self {
            Tokenizer::UnicodeWords => text.unicode_words().collect(),
            Tokenizer::Whitespace => text.split_whitespace().collect(),
        }
    }

    pub fn count(self, text: &str) -> usize {
        match self {
            Tokenizer::UnicodeWords => text.unicode_words().count(),
            Tokenizer::Whitespace => text.split_whitespace().count(),
        }
    }

    /// Tokens case-folded with punctuation removed; tokens left empty are
    /// dropped.
    pub fn normalized(self, text: &str) -> Vec<String> {
        self.tokens(text)
            .into_iter()
            .map(|t| {
                t.chars()
                    .filter(|c| c.is_alphanumeric())
                    .flat_map(char::to_lowercase)
                    .collect::<String>()
            })
            .filter(|t| !t.is_empty())
            .collect()
    }

    /// Normalized tokens with their char offsets in `text`.
    pub fn spans(self, text: &str) -> Vec<(usize, usize, String)> {
        let pieces: Vec<(usize, &str)> = match self {
            Tokenizer::UnicodeWords => text
                .unicode_word_indices()
                .collect(),
            Tokenizer::Whitespace => {
                let mut out = Vec::new();
                let mut start = None;
                for (i, c) in text.char_indices() {
                    match (c.is_whitespace(), start) {
                        (true, Some(s)) => {
                            out.push((s, &text[s..i]));
                            start = None;
                        }
                        (false, None) => start = Some(i),
                        _ => {}
                    }
                }
                if let Some(s) = start {
                    out.push((s, &text[s..]));
                }
                out
            }
        };
        let mut result = Vec::with_capacity(pieces.len());
        let mut byte_cursor = 0;
        let mut char_cursor = 0;
        for (byte_start, piece) in pieces {
            char_cursor += text[byte_cursor..byte_start].chars().count();
            byte_cursor = byte_start;
            let len = piece.chars().count();
            let norm: String = piece
                .chars()
                .filter(|c| c.is_alphanumeric())
                .flat_map(char::to_lowercase)
                .collect();
            if !norm.is_empty() {
                result.push((char_cursor, char_cursor + len, norm));
            }
        }
        result
    }
}

impl FromStr for Tokenizer {
    type Err = UnknownTokenizer;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unicode-words" => Ok(Tokenizer::UnicodeWords),
            "whitespace" => Ok(Tokenizer::Whitespace),
            other => Err(UnknownTokenizer(other.to_owned())),
        }
    }
}

impl TryFrom<String> for Tokenizer {
    type Error = UnknownTokenizer;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<Tokenizer> for String {
    fn from(value: Tokenizer) -> Self {
        value.id().to_owned()
    }
}

impl fmt::Display for Tokenizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}
