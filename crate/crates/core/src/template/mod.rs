//! Slotted diagnostic-comment templates.
//!
//! A template is a fixed diagnosis sentence with named placeholders written
//! as `{x}` in the storage format. The shipped set has 24 templates grouped
//! under six argumentation-quality dimensions, each with a Japanese and an
//! English surface form.

mod pattern;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use pattern::{Segment, SlotName, TemplatePattern};

const BUNDLED_TEMPLATES: &str = include_str!("../../data/typic_templates.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("unbalanced braces in pattern")]
    UnbalancedBraces,
    #[error("empty slot name")]
    EmptySlotName,
    #[error("invalid slot name {0:?}")]
    InvalidSlotName(String),
    #[error("slot {{{0}}} appears more than once")]
    DuplicateSlot(SlotName),
    #[error("pattern has no slots")]
    NoSlots,
    #[error("no filler for slot {0}")]
    MissingFiller(SlotName),
    #[error("filler given for unknown slot {0}")]
    ExtraFiller(String),
    #[error("unknown locale {0:?}")]
    UnknownLocale(String),
    #[error("invalid template id {0:?}")]
    InvalidId(String),
    #[error("template set schema error: {0}")]
    Schema(String),
    #[error("template {id}: {reason}")]
    InvariantViolation { id: String, reason: String },
}

/// Category code such as `CA2` or `VAL1`: two or three capitals and a digit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TemplateId(String);

impl TemplateId {
    pub fn new(id: impl Into<String>) -> Result<Self, TemplateError> {
        let id = id.into();
        let bytes = id.as_bytes();
        let ok = matches!(bytes.len(), 3 | 4)
            && bytes[..bytes.len() - 1].iter().all(u8::is_ascii_uppercase)
            && bytes[bytes.len() - 1].is_ascii_digit();
        if ok {
            Ok(TemplateId(id))
        } else {
            Err(TemplateError::InvalidId(id))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for TemplateId {
    type Error = TemplateError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        TemplateId::new(value)
    }
}

impl From<TemplateId> for String {
    fn from(value: TemplateId) -> Self {
        value.0
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Outcome of template selection for one comment.
///
/// `NotApplicable` is chosen when no template expresses the comment's point.
/// It carries no slots and never renders.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Label {
    Template(TemplateId),
    NotApplicable,
}

impl Label {
    pub const NOT_APPLICABLE: &'static str = "NotApplicable";

    pub fn template(&self) -> Option<&TemplateId> {
        match self {
            Label::Template(id) => Some(id),
            Label::NotApplicable => None,
        }
    }

    pub fn is_applicable(&self) -> bool {
        matches!(self, Label::Template(_))
    }
}

impl TryFrom<String> for Label {
    type Error = TemplateError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        if value == Label::NOT_APPLICABLE {
            Ok(Label::NotApplicable)
        } else {
            TemplateId::new(value).map(Label::Template)
        }
    }
}

impl std::str::FromStr for Label {
    type Err = TemplateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::try_from(s.to_owned())
    }
}

impl From<Label> for String {
    fn from(value: Label) -> Self {
        value.to_string()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Template(id) => f.write_str(id.as_str()),
            Label::NotApplicable => f.write_str(Label::NOT_APPLICABLE),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dimension {
    LocalAcceptability,
    LocalSufficiency,
    LocalRelevance,
    Clarity,
    GlobalRelevance,
    GlobalSufficiency,
}

impl Dimension {
    pub fn display_name(self) -> &'static str {
        match self {
            Dimension::LocalAcceptability => "Local Acceptability",
            Dimension::LocalSufficiency => "Local Sufficiency",
            Dimension::LocalRelevance => "Local Relevance",
            Dimension::Clarity => "Clarity",
            Dimension::GlobalRelevance => "Global Relevance",
            Dimension::GlobalSufficiency => "Global Sufficiency",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    id: TemplateId,
    dimension: Dimension,
    slots: Vec<SlotName>,
    surface_forms: BTreeMap<String, TemplatePattern>,
}

impl Template {
    /// Builds a template and checks that every surface form uses exactly
    /// the declared slots.
    pub fn new(
        id: TemplateId,
        dimension: Dimension,
        slots: Vec<SlotName>,
        surface_forms: BTreeMap<String, TemplatePattern>,
    ) -> Result<Self, TemplateError> {
        let violation = |reason: String| TemplateError::InvariantViolation {
            id: id.to_string(),
            reason,
        };
        if slots.is_empty() || slots.len() > 3 {
            return Err(violation(format!("has {} slots, expected 1 to 3", slots.len())));
        }
        let declared: BTreeSet<&SlotName> = slots.iter().collect();
        if declared.len() != slots.len() {
            return Err(violation("slot list repeats a name".into()));
        }
        if surface_forms.is_empty() {
            return Err(violation("no surface forms".into()));
        }
        for (locale, pattern) in &surface_forms {
            if pattern.slot_set() != declared {
                let used: Vec<_> = pattern.slots().map(SlotName::as_str).collect();
                return Err(violation(format!(
                    "{locale} surface form uses slots {used:?}, declared {:?}",
                    slots.iter().map(SlotName::as_str).collect::<Vec<_>>()
                )));
            }
        }
        Ok(Template {
            id,
            dimension,
            slots,
            surface_forms,
        })
    }

    pub fn id(&self) -> &TemplateId {
        &self.id
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn slots(&self) -> &[SlotName] {
        &self.slots
    }

    pub fn locales(&self) -> impl Iterator<Item = &str> {
        self.surface_forms.keys().map(String::as_str)
    }

    pub fn surface_form(&self, locale: &str) -> Option<&TemplatePattern> {
        self.surface_forms.get(locale)
    }

    /// The English form when present, otherwise the first locale.
    pub fn primary_form(&self) -> &TemplatePattern {
        self.surface_forms
            .get("en")
            .or_else(|| self.surface_forms.values().next())
            .expect("template has at least one surface form")
    }

    /// Replaces every placeholder in the `locale` surface form by its filler.
    ///
    /// The filler map must cover exactly the template's slots.
    pub fn render<S: AsRef<str>>(
        &self,
        locale: &str,
        fillers: &BTreeMap<SlotName, S>,
    ) -> Result<String, TemplateError> {
        let pattern = self
            .surface_forms
            .get(locale)
            .ok_or_else(|| TemplateError::UnknownLocale(locale.to_owned()))?;
        pattern.render(fillers)
    }
}

/// Renders `template` with fillers given as `(slot, text)` pairs.
pub fn render<'a>(
    template: &Template,
    locale: &str,
    fillers: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> Result<String, TemplateError> {
    let mut map = BTreeMap::new();
    for (slot, text) in fillers {
        let name = SlotName::new(slot).map_err(|_| TemplateError::ExtraFiller(slot.to_owned()))?;
        map.insert(name, text);
    }
    template.render(locale, &map)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TemplateRecord {
    id: String,
    dimension: Dimension,
    slots: Vec<String>,
    surface_forms: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TemplateSetDocument {
    version: String,
    templates: Vec<TemplateRecord>,
}

/// An ordered, id-unique collection of templates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateSet {
    version: String,
    templates: Vec<Template>,
    index: HashMap<TemplateId, usize>,
}

impl TemplateSet {
    pub fn new(version: impl Into<String>, templates: Vec<Template>) -> Result<Self, TemplateError> {
        let mut index = HashMap::with_capacity(templates.len());
        for (i, t) in templates.iter().enumerate() {
            if index.insert(t.id.clone(), i).is_some() {
                return Err(TemplateError::InvariantViolation {
                    id: t.id.to_string(),
                    reason: "duplicate template id".into(),
                });
            }
        }
        Ok(TemplateSet {
            version: version.into(),
            templates,
            index,
        })
    }

    /// The 24-template set used in the annotation study.
    pub fn bundled() -> TemplateSet {
        load_template_set(BUNDLED_TEMPLATES).expect("bundled template set is valid")
    }

    pub fn bundled_source() -> &'static str {
        BUNDLED_TEMPLATES
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Template> {
        self.templates.iter()
    }

    pub fn get(&self, id: &TemplateId) -> Option<&Template> {
        self.index.get(id).map(|&i| &self.templates[i])
    }

    pub fn get_str(&self, id: &str) -> Option<&Template> {
        TemplateId::new(id).ok().and_then(|id| self.get(&id))
    }

    /// Position of `id` in authored order; this is the label-vector index.
    pub fn index_of(&self, id: &TemplateId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = &TemplateId> {
        self.templates.iter().map(|t| &t.id)
    }

    pub fn to_json(&self) -> String {
        let doc = TemplateSetDocument {
            version: self.version.clone(),
            templates: self
                .templates
                .iter()
                .map(|t| TemplateRecord {
                    id: t.id.to_string(),
                    dimension: t.dimension,
                    slots: t.slots.iter().map(ToString::to_string).collect(),
                    surface_forms: t
                        .surface_forms
                        .iter()
                        .map(|(k, v)| (k.clone(), v.to_string()))
                        .collect(),
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("template set serializes");
        out.push('\n');
        out
    }
}

impl<'a> IntoIterator for &'a TemplateSet {
    type Item = &'a Template;
    type IntoIter = std::slice::Iter<'a, Template>;

    fn into_iter(self) -> Self::IntoIter {
        self.templates.iter()
    }
}

/// Parses and validates a template-set JSON document.
pub fn load_template_set(document: &str) -> Result<TemplateSet, TemplateError> {
    let doc: TemplateSetDocument =
        serde_json::from_str(document).map_err(|e| TemplateError::Schema(e.to_string()))?;
    let mut templates = Vec::with_capacity(doc.templates.len());
    for record in doc.templates {
        let violation = |reason: String| TemplateError::InvariantViolation {
            id: record.id.clone(),
            reason,
        };
        let id = TemplateId::new(record.id.clone()).map_err(|e| violation(e.to_string()))?;
        let slots = record
            .slots
            .iter()
            .map(|s| SlotName::new(s.clone()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| violation(e.to_string()))?;
        let mut forms = BTreeMap::new();
        for (locale, text) in &record.surface_forms {
            let pattern =
                TemplatePattern::parse(text).map_err(|e| violation(format!("{locale}: {e}")))?;
            forms.insert(locale.clone(), pattern);
        }
        templates.push(Template::new(id, record.dimension, slots, forms)?);
    }
    TemplateSet::new(doc.version, templates)
}
