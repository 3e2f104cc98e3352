use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::TemplateError;

/// Name of a placeholder inside a template, e.g. `x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SlotName(String);

impl SlotName {
    pub fn new(name: impl Into<String>) -> Result<Self, TemplateError> {
        let name = name.into();
        if name.is_empty() {
            return Err(TemplateError::EmptySlotName);
        }
        if !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(TemplateError::InvalidSlotName(name));
        }
        Ok(SlotName(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for SlotName {
    type Error = TemplateError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        SlotName::new(value)
    }
}

impl From<SlotName> for String {
    fn from(value: SlotName) -> Self {
        value.0
    }
}

impl fmt::Display for SlotName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for SlotName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Segment {
    Literal(String),
    Slot(SlotName),
}

/// A surface form split into literal text and `{slot}` references.
///
/// Parsing is lossless: `pattern.to_string()` reproduces the parsed text
/// byte for byte.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplatePattern {
    segments: Vec<Segment>,
}

impl TemplatePattern {
    pub fn parse(text: &str) -> Result<Self, TemplateError> {
        if text.is_empty() {
            return Err(TemplateError::EmptyPattern);
        }
        let mut segments = Vec::new();
        let mut seen = BTreeSet::new();
        let mut literal = String::new();
        let mut chars = text.char_indices();
        while let Some((_, c)) = chars.next() {
            match c {
                '{' => {
                    let mut name = String::new();
                    let mut closed = false;
                    for (_, inner) in chars.by_ref() {
                        match inner {
                            '}' => {
                                closed = true;
                                break;
                            }
                            '{' => return Err(TemplateError::UnbalancedBraces),
                            other => name.push(other),
                        }
                    }
                    if !closed {
                        return Err(TemplateError::UnbalancedBraces);
                    }
                    let slot = SlotName::new(name)?;
                    if !seen.insert(slot.clone()) {
                        return Err(TemplateError::DuplicateSlot(slot));
                    }
                    if !literal.is_empty() {
                        segments.push(Segment::Literal(std::mem::take(&mut literal)));
                    }
                    segments.push(Segment::Slot(slot));
                }
                '}' => return Err(TemplateError::UnbalancedBraces),
                other => literal.push(other),
            }
        }
        if !literal.is_empty() {
            segments.push(Segment::Literal(literal));
        }
        if seen.is_empty() {
            return Err(TemplateError::NoSlots);
        }
        Ok(TemplatePattern { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Slots in order of appearance.
    pub fn slots(&self) -> impl Iterator<Item = &SlotName> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Slot(name) => Some(name),
            Segment::Literal(_) => None,
        })
    }

    pub fn slot_set(&self) -> BTreeSet<&SlotName> {
        self.slots().collect()
    }

    /// Substitutes each placeholder; `fillers` must cover exactly the slots.
    pub fn render<S: AsRef<str>>(&self, fillers: &BTreeMap<SlotName, S>) -> Result<String, TemplateError> {
        if let Some(missing) = self.slots().find(|s| !fillers.contains_key(*s)) {
            return Err(TemplateError::MissingFiller(missing.clone()));
        }
        let slots = self.slot_set();
        if let Some(extra) = fillers.keys().find(|k| !slots.contains(k)) {
            return Err(TemplateError::ExtraFiller(extra.to_string()));
        }
        let mut out = String::new();
        for segment in &self.segments {
            match segment {
                Segment::Literal(text) => out.push_str(text),
                Segment::Slot(name) => out.push_str(fillers[name].as_ref()),
            }
        }
        Ok(out)
    }

    /// Literal text immediately before and after `slot`.
    pub fn context_of(&self, slot: &SlotName) -> (Option<&str>, Option<&str>) {
        let Some(pos) = self
            .segments
            .iter()
            .position(|s| matches!(s, Segment::Slot(n) if n == slot))
        else {
            return (None, None);
        };
        let literal_at = |i: usize| match self.segments.get(i) {
            Some(Segment::Literal(text)) => Some(text.as_str()),
            _ => None,
        };
        let before = pos.checked_sub(1).and_then(literal_at);
        (before, literal_at(pos + 1))
    }
}

impl fmt::Display for TemplatePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for segment in &self.segments {
            match segment {
                Segment::Literal(text) => f.write_str(text)?,
                Segment::Slot(name) => write!(f, "{{{name}}}")?,
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for TemplatePattern {
    type Err = TemplateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TemplatePattern::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_slot_pattern() {
        let p = TemplatePattern::parse("It is unclear why {x} causes a bad result of {y}").unwrap();
        let slots: Vec<_> = p.slots().map(SlotName::as_str).collect();
        assert_eq!(slots, ["x", "y"]);
        assert_eq!(p.segments().len(), 4);
        assert_eq!(p.to_string(), "It is unclear why {x} causes a bad result of {y}");
    }

    #[test]
    fn rejects_pattern_without_slots() {
        assert_eq!(
            TemplatePattern::parse("plain text without slots"),
            Err(TemplateError::NoSlots)
        );
    }

    #[test]
    fn rejects_repeated_slot() {
        assert!(matches!(
            TemplatePattern::parse("why {x} and {x}"),
            Err(TemplateError::DuplicateSlot(s)) if s.as_str() == "x"
        ));
    }

    #[test]
    fn brace_errors() {
        for bad in ["why {x", "why x}", "why {{x}}", "{x} and {y"] {
            assert_eq!(TemplatePattern::parse(bad), Err(TemplateError::UnbalancedBraces), "{bad}");
        }
        assert_eq!(TemplatePattern::parse("why {}"), Err(TemplateError::EmptySlotName));
        assert!(matches!(
            TemplatePattern::parse("why { x }"),
            Err(TemplateError::InvalidSlotName(_))
        ));
        assert_eq!(TemplatePattern::parse(""), Err(TemplateError::EmptyPattern));
    }

    #[test]
    fn adjacent_slots_and_multibyte_literals() {
        let p = TemplatePattern::parse("{x}はどの程度{y}かの具体性に欠ける").unwrap();
        assert_eq!(p.to_string(), "{x}はどの程度{y}かの具体性に欠ける");
        let q = TemplatePattern::parse("extent to which {x} {y}").unwrap();
        let y = SlotName::new("y").unwrap();
        assert_eq!(q.context_of(&y), (Some(" "), None));
    }
}
