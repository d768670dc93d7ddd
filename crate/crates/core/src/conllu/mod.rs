//! Eight-column annotation model: tokens, sentences, the `.bln` text format
//! and structural validation.

mod sentence;
mod table;
mod tags;
mod validate;

pub use sentence::{Corpus, Sentence, Subset, Token};
pub use table::{corpus_to_conllu, parse_corpus, parse_table, serialize, serialize_corpus, to_conllu, COLUMNS};
pub(crate) use table::{is_header, parse_row, split_row};
pub use tags::{Deprel, LangPair, LangTag, Upos, UD_RELATIONS};
pub use validate::{advisories, children_map, count_hard, validate, Advisory, Severity, Violation, ViolationCode};
