//! Core library for templated diagnoses of counterarguments.
//!
//! A counterargument is diagnosed by picking one of a fixed set of
//! templates (or `NotApplicable`) and filling its slots with spans of the
//! counterargument or the original argument. This crate holds the template
//! language, the corpus model and loader, the evaluation metrics, and
//! reference baselines for the template-selection and slot-filling tasks.

pub mod analysis;
pub mod baselines;
pub mod corpus;
pub mod metrics;
pub mod template;
pub mod tokenize;

pub use corpus::{load_corpus, Corpus, CorpusError};
pub use template::{render, Label, Template, TemplateError, TemplateId, TemplatePattern, TemplateSet};
pub use tokenize::Tokenizer;
