use thiserror::Error;

use crate::conllu::ViolationCode;

/// A malformed table or raw corpus line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }

    pub fn in_file(self, path: &str) -> FileParseError {
        FileParseError {
            path: path.to_string(),
            source: self,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {source}")]
pub struct FileParseError {
    pub path: String,
    #[source]
    pub source: ParseError,
}

/// A tree operation was asked to run on a sentence that is not a tree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("sentence {sent_id}: {code} {detail}")]
pub struct StructureError {
    pub sent_id: String,
    pub code: ViolationCode,
    pub detail: String,
}

/// Two sentences or corpora that should line up token by token do not.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignmentError {
    #[error("sentence {sent_id}: token count {gold} vs {pred}")]
    Length { sent_id: String, gold: usize, pred: usize },
    #[error("sentence {sent_id}: forms diverge at position {position} ({expected:?} vs {found:?})")]
    Form {
        sent_id: String,
        position: usize,
        expected: String,
        found: String,
    },
    #[error("sentence ids do not align; missing from prediction: {missing_in_pred:?}; missing from reference: {missing_in_gold:?}")]
    SentenceIds {
        missing_in_pred: Vec<String>,
        missing_in_gold: Vec<String>,
    },
}
