//! Scoring predicted annotations against a reference, plus chance-corrected
//! agreement between annotators.

mod groups;
mod kappa;
mod score;

pub use groups::{tags_equivalent, EquivalenceGroup, EquivalenceGroups};
pub use kappa::{cohen_kappa, KappaError};
pub use score::{
    check_alignment, corpus_report, corpus_report_as, corpus_tally, score, score_as, tally_sentence, Report, Tally,
};

/// Published scores of the original LLM pipeline, kept for comparison in
/// reports. They depend on a hosted model and on expert review, so nothing in
/// this crate tries to reproduce them.
pub mod reference_scores {
    /// LAS (%) against the expert gold standard and against reviewed output.
    pub const SPA_ENG_LAS_GOLD: f64 = 76.32;
    pub const SPA_ENG_LAS_REVIEWED: f64 = 95.29;
    pub const SPA_GUA_LAS_GOLD: f64 = 59.90;
    pub const SPA_GUA_LAS_REVIEWED: f64 = 77.42;
    /// Sequence-labeling multilingual parser, Spanish-English, against gold.
    pub const SEQ_LABELING_SPA_ENG_LAS_GOLD: f64 = 14.71;
    /// UPOS / DEPREL accuracy (%) after review.
    pub const SPA_ENG_UPOS_REVIEWED: f64 = 99.54;
    pub const SPA_ENG_DEPREL_REVIEWED: f64 = 97.14;
    pub const SPA_GUA_UPOS_REVIEWED: f64 = 84.21;
    pub const SPA_GUA_DEPREL_REVIEWED: f64 = 59.90;
    /// Inter-annotator agreement reported for the review round.
    pub const REVIEW_KAPPA: f64 = 0.85;
}
