use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::groups::{tags_equivalent, EquivalenceGroups};
use crate::conllu::{Corpus, Deprel, Sentence};
use crate::error::AlignmentError;
use crate::scalar::{fraction, Scalar};

/// Raw counts behind a report. Tallies add up, so corpus scores are pooled
/// over tokens rather than averaged over sentences.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub n_tokens: usize,
    pub upos_correct: usize,
    /// Tokens whose reference head is annotated; denominator of the
    /// attachment and relation metrics.
    pub n_attached: usize,
    pub deprel_strict: usize,
    pub deprel_relaxed: usize,
    pub las_strict: usize,
    pub las_relaxed: usize,
    pub confusion: BTreeMap<String, BTreeMap<String, usize>>,
}

impl Tally {
    pub fn merge(&mut self, other: &Tally) {
        self.n_tokens += other.n_tokens;
        self.upos_correct += other.upos_correct;
        self.n_attached += other.n_attached;
        self.deprel_strict += other.deprel_strict;
        self.deprel_relaxed += other.deprel_relaxed;
        self.las_strict += other.las_strict;
        self.las_relaxed += other.las_relaxed;
        for (gold, row) in &other.confusion {
            let mine = self.confusion.entry(gold.clone()).or_default();
            for (pred, count) in row {
                *mine.entry(pred.clone()).or_default() += count;
            }
        }
    }

    pub fn report<S: Scalar>(&self) -> Report<S> {
        Report {
            n_tokens: self.n_tokens,
            upos_acc: fraction(self.upos_correct, self.n_tokens),
            deprel_acc_strict: fraction(self.deprel_strict, self.n_attached),
            deprel_acc_relaxed: fraction(self.deprel_relaxed, self.n_attached),
            las_strict: fraction(self.las_strict, self.n_attached),
            las_relaxed: fraction(self.las_relaxed, self.n_attached),
            per_label_confusion: self.confusion.clone(),
        }
    }
}

/// Accuracy figures for a prediction against a reference.
///
/// `per_label_confusion[gold][pred]` counts relation pairs over tokens with an
/// annotated reference head; `_` stands for a missing label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<S> {
    pub n_tokens: usize,
    pub upos_acc: S,
    pub deprel_acc_strict: S,
    pub deprel_acc_relaxed: S,
    pub las_strict: S,
    pub las_relaxed: S,
    pub per_label_confusion: BTreeMap<String, BTreeMap<String, usize>>,
}

impl Report<f64> {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

fn label(d: &Option<Deprel>) -> String {
    d.as_ref()
        .map(|d| d.as_str().to_string())
        .unwrap_or_else(|| "_".to_string())
}

/// Checks that both sentences carry the same forms in the same order.
pub fn check_alignment(gold: &Sentence, pred: &Sentence) -> Result<(), AlignmentError> {
    if gold.len() != pred.len() {
        return Err(AlignmentError::Length {
            sent_id: gold.sent_id.clone(),
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    for (pos, (g, p)) in gold.tokens.iter().zip(&pred.tokens).enumerate() {
        if g.form != p.form {
            return Err(AlignmentError::Form {
                sent_id: gold.sent_id.clone(),
                position: pos + 1,
                expected: g.form.clone(),
                found: p.form.clone(),
            });
        }
    }
    Ok(())
}

pub fn tally_sentence(gold: &Sentence, pred: &Sentence, groups: &EquivalenceGroups) -> Result<Tally, AlignmentError> {
    check_alignment(gold, pred)?;
    let mut t = Tally {
        n_tokens: gold.len(),
        ..Default::default()
    };
    for (g, p) in gold.tokens.iter().zip(&pred.tokens) {
        if g.upos == p.upos {
            t.upos_correct += 1;
        }
        if g.head_id.is_none() {
            continue;
        }
        t.n_attached += 1;
        let strict = g.deprel == p.deprel;
        let relaxed = strict || matches!((&g.deprel, &p.deprel), (Some(a), Some(b)) if tags_equivalent(a, b, groups));
        let head = g.head_id == p.head_id;
        t.deprel_strict += usize::from(strict);
        t.deprel_relaxed += usize::from(relaxed);
        t.las_strict += usize::from(head && strict);
        t.las_relaxed += usize::from(head && relaxed);
        *t.confusion
            .entry(label(&g.deprel))
            .or_default()
            .entry(label(&p.deprel))
            .or_default() += 1;
    }
    Ok(t)
}

pub fn score_as<S: Scalar>(
    gold: &Sentence,
    pred: &Sentence,
    groups: &EquivalenceGroups,
) -> Result<Report<S>, AlignmentError> {
    Ok(tally_sentence(gold, pred, groups)?.report())
}

pub fn score(gold: &Sentence, pred: &Sentence, groups: &EquivalenceGroups) -> Result<Report<f64>, AlignmentError> {
    score_as(gold, pred, groups)
}

/// Pooled tally over sentences matched by `sent_id`.
pub fn corpus_tally(gold: &Corpus, pred: &Corpus, groups: &EquivalenceGroups) -> Result<Tally, AlignmentError> {
    let by_id: HashMap<&str, &Sentence> = pred.sentences.iter().map(|s| (s.sent_id.as_str(), s)).collect();
    let gold_ids: HashMap<&str, ()> = gold.sentences.iter().map(|s| (s.sent_id.as_str(), ())).collect();
    let missing_in_pred: Vec<String> = gold
        .sentences
        .iter()
        .filter(|s| !by_id.contains_key(s.sent_id.as_str()))
        .map(|s| s.sent_id.clone())
        .collect();
    let missing_in_gold: Vec<String> = pred
        .sentences
        .iter()
        .filter(|s| !gold_ids.contains_key(s.sent_id.as_str()))
        .map(|s| s.sent_id.clone())
        .collect();
    if !missing_in_pred.is_empty() || !missing_in_gold.is_empty() {
        return Err(AlignmentError::SentenceIds {
            missing_in_pred,
            missing_in_gold,
        });
    }
    let mut total = Tally::default();
    for g in &gold.sentences {
        total.merge(&tally_sentence(g, by_id[g.sent_id.as_str()], groups)?);
    }
    Ok(total)
}

pub fn corpus_report_as<S: Scalar>(
    gold: &Corpus,
    pred: &Corpus,
    groups: &EquivalenceGroups,
) -> Result<Report<S>, AlignmentError> {
    Ok(corpus_tally(gold, pred, groups)?.report())
}

pub fn corpus_report(gold: &Corpus, pred: &Corpus, groups: &EquivalenceGroups) -> Result<Report<f64>, AlignmentError> {
    corpus_report_as(gold, pred, groups)
}
