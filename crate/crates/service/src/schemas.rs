//! Published payload schemas (JSON Schema, draft 2020-12).

use serde_json::{json, Value};

pub const API_VERSION: &str = "typic-api/1";

fn filler() -> Value {
    json!({
        "type": "object",
        "required": ["text", "extractability"],
        "additionalProperties": false,
        "properties": {
            "text": {"type": "string", "minLength": 1},
            "extractability": {"enum": ["Extractable", "ExtractableWithChanges", "NotExtractable"]},
            "source_span": {
                "type": "object",
                "required": ["document", "span"],
                "additionalProperties": false,
                "properties": {
                    "document": {"type": "string", "pattern": "^(counterargument|original:.+)$"},
                    "span": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2}
                }
            }
        }
    })
}

/// Submit payload schema per workflow, plus the submit envelope.
pub fn schemas() -> Value {
    json!({
        "version": API_VERSION,
        "submit": {
            "type": "object",
            "required": ["item_id", "revision", "payload"],
            "additionalProperties": false,
            "properties": {
                "item_id": {"type": "string"},
                "revision": {"type": "integer", "minimum": 0},
                "payload": {"type": "object"}
            }
        },
        "payloads": {
            "FreeTextDiagnosis": {
                "type": "object",
                "required": ["comments"],
                "additionalProperties": false,
                "properties": {
                    "comments": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["target", "text"],
                            "additionalProperties": false,
                            "properties": {
                                "target": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
                                "text": {"type": "string", "minLength": 1}
                            }
                        }
                    }
                }
            },
            "TemplateApplication": {
                "type": "object",
                "required": ["diagnoses"],
                "additionalProperties": false,
                "properties": {
                    "diagnoses": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "object",
                            "required": ["label"],
                            "additionalProperties": false,
                            "properties": {
                                "label": {"type": "string", "pattern": "^(NotApplicable|[A-Z]{2,3}[0-9])$"},
                                "fillers": {"type": "object", "additionalProperties": filler()}
                            }
                        }
                    }
                }
            },
            "InformativenessJudging": {
                "type": "object",
                "required": ["score"],
                "additionalProperties": false,
                "properties": {
                    "score": {"type": "integer", "minimum": 1, "maximum": 3}
                }
            }
        }
    })
}
