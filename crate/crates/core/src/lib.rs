//! Tools for dependency annotation of code-switched text: the eight-column
//! table model, corpus ingestion and filtering, model-assisted annotation,
//! scoring against gold trees and switch-point analysis.

pub mod annotator;
pub mod conllu;
pub mod error;
pub mod evaluation;
pub mod ingestion;
pub mod scalar;
pub mod switchpoint;

use num_rational::Ratio;

pub use conllu::{Corpus, LangPair, LangTag, Sentence, Token, Violation, ViolationCode};
pub use error::{AlignmentError, ParseError, StructureError};
pub use scalar::Scalar;

pub type EvalReport = evaluation::Report<f64>;
pub type ExactEvalReport = evaluation::Report<Ratio<i64>>;
pub type Distribution = switchpoint::Distribution<f64>;
pub type ExactDistribution = switchpoint::Distribution<Ratio<i64>>;
