//! Switch-point detection and label distributions at switch-in tokens.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::conllu::{Corpus, Deprel, LangTag, Sentence, Subset, Upos};
use crate::scalar::{fraction, Scalar};

/// How the "previous language" is tracked across neutral tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwitchMode {
    /// Neutral tokens (punctuation, entities) are skipped and the last
    /// content language is held.
    #[default]
    HoldContent,
    /// Compare with the literal previous token; a switch is only recorded
    /// when both tokens carry content languages.
    StrictPrevious,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction {
    pub from: LangTag,
    pub to: LangTag,
}

impl Direction {
    pub fn new(from: LangTag, to: LangTag) -> Self {
        Direction { from, to }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchRecord {
    pub sent_id: String,
    pub token_id: u32,
    pub from_lang: LangTag,
    pub to_lang: LangTag,
    pub upos: Option<Upos>,
    pub deprel: Option<Deprel>,
}

impl SwitchRecord {
    pub fn direction(&self) -> Direction {
        Direction::new(self.from_lang.clone(), self.to_lang.clone())
    }
}

pub fn detect_switch_points(s: &Sentence) -> Vec<SwitchRecord> {
    detect_switch_points_with(s, SwitchMode::HoldContent)
}

pub fn detect_switch_points_with(s: &Sentence, mode: SwitchMode) -> Vec<SwitchRecord> {
    let mut out = Vec::new();
    let mut previous: Option<&LangTag> = None;
    for t in &s.tokens {
        let current = &t.lang;
        if let Some(prev) = previous {
            if current.is_content() && prev.is_content() && prev != current {
                out.push(SwitchRecord {
                    sent_id: s.sent_id.clone(),
                    token_id: t.id,
                    from_lang: prev.clone(),
                    to_lang: current.clone(),
                    upos: t.upos.clone(),
                    deprel: t.deprel.clone(),
                });
            }
        }
        match mode {
            SwitchMode::HoldContent => {
                if current.is_content() {
                    previous = Some(current);
                }
            }
            SwitchMode::StrictPrevious => previous = Some(current),
        }
    }
    out
}

pub fn detect_corpus(c: &Corpus, mode: SwitchMode) -> Vec<SwitchRecord> {
    c.sentences
        .iter()
        .flat_map(|s| detect_switch_points_with(s, mode))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Upos,
    Deprel,
}

impl Field {
    pub fn as_str(&self) -> &'static str {
        match self {
            Field::Upos => "upos",
            Field::Deprel => "deprel",
        }
    }

    fn label(&self, r: &SwitchRecord) -> Option<String> {
        match self {
            Field::Upos => r.upos.as_ref().map(|u| u.as_str().to_string()),
            Field::Deprel => r.deprel.as_ref().map(|d| d.as_str().to_string()),
        }
    }
}

/// Label counts for one field and direction (`None` pools all directions).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution<S> {
    pub field: Field,
    pub direction: Option<Direction>,
    pub counts: BTreeMap<String, usize>,
    pub proportions: BTreeMap<String, S>,
}

impl<S: Scalar> Distribution<S> {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Rows sorted by count (descending), then label.
    pub fn sorted_rows(&self) -> Vec<(&str, usize, &S)> {
        let mut rows: Vec<(&str, usize, &S)> = self
            .counts
            .iter()
            .map(|(l, c)| (l.as_str(), *c, &self.proportions[l]))
            .collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,count,proportion\n");
        for (label, count, p) in self.sorted_rows() {
            out.push_str(&format!("{label},{count},{:.6}\n", p.to_f64()));
        }
        out
    }
}

pub fn aggregate_as<S: Scalar>(
    records: &[SwitchRecord],
    field: Field,
    direction: Option<&Direction>,
) -> Distribution<S> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for r in records {
        if let Some(d) = direction {
            if r.from_lang != d.from || r.to_lang != d.to {
                continue;
            }
        }
        if let Some(label) = field.label(r) {
            *counts.entry(label).or_default() += 1;
        }
    }
    let total: usize = counts.values().sum();
    let proportions = counts.iter().map(|(l, c)| (l.clone(), fraction(*c, total))).collect();
    Distribution {
        field,
        direction: direction.cloned(),
        counts,
        proportions,
    }
}

pub fn aggregate(records: &[SwitchRecord], field: Field, direction: Option<&Direction>) -> Distribution<f64> {
    aggregate_as(records, field, direction)
}

/// Code points treated as emoji. Any form containing one of these, or a
/// VS-16 selector when `variation_selector` is set, marks its sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmojiRanges {
    pub ranges: Vec<RangeInclusive<u32>>,
    pub variation_selector: bool,
}

impl Default for EmojiRanges {
    fn default() -> Self {
        EmojiRanges {
            ranges: vec![
                0x1F300..=0x1F5FF, // misc symbols and pictographs
                0x1F600..=0x1F64F, // emoticons
                0x1F680..=0x1F6FF, // transport and map
                0x1F900..=0x1F9FF, // supplemental symbols and pictographs
            ],
            variation_selector: true,
        }
    }
}

impl EmojiRanges {
    pub fn contains(&self, text: &str) -> bool {
        text.chars().any(|c| {
            let cp = c as u32;
            (self.variation_selector && cp == 0xFE0F) || self.ranges.iter().any(|r| r.contains(&cp))
        })
    }

    pub fn sentence_has_emoji(&self, s: &Sentence) -> bool {
        s.tokens.iter().any(|t| self.contains(&t.form))
    }
}

pub fn split_by_emoji(c: &Corpus, emoji: &EmojiRanges) -> (Corpus, Corpus) {
    let (with, without): (Vec<Sentence>, Vec<Sentence>) =
        c.sentences.iter().cloned().partition(|s| emoji.sentence_has_emoji(s));
    (
        Corpus {
            name: c.name.clone(),
            subset: c.subset,
            sentences: with,
        },
        Corpus {
            name: c.name.clone(),
            subset: c.subset,
            sentences: without,
        },
    )
}

pub const SUBSETS: [&str; 3] = ["all", "emoji", "no_emoji"];

/// Every distribution exported for a corpus, keyed by
/// `(field, direction or "pooled", subset)`.
pub fn distributions(
    c: &Corpus,
    mode: SwitchMode,
    emoji: &EmojiRanges,
) -> BTreeMap<(Field, String, String), Distribution<f64>> {
    let (with, without) = split_by_emoji(c, emoji);
    let all_records = detect_corpus(c, mode);
    let directions: BTreeSet<Direction> = all_records.iter().map(SwitchRecord::direction).collect();
    let mut out = BTreeMap::new();
    for (subset, corpus) in SUBSETS.iter().zip([c, &with, &without]) {
        let records = if *subset == "all" {
            all_records.clone()
        } else {
            detect_corpus(corpus, mode)
        };
        for field in [Field::Upos, Field::Deprel] {
            out.insert(
                (field, "pooled".to_string(), subset.to_string()),
                aggregate(&records, field, None),
            );
            for d in &directions {
                out.insert(
                    (field, d.to_string(), subset.to_string()),
                    aggregate(&records, field, Some(d)),
                );
            }
        }
    }
    out
}

#[derive(Serialize)]
struct SummaryEntry<'a> {
    total: usize,
    counts: &'a BTreeMap<String, usize>,
}

/// Writes one CSV per distribution (`{field}_{direction}_{subset}.csv`) and a
/// `summary.json` keyed `field|direction|subset`. Returns the written paths
/// in a stable order.
pub fn export_distributions(
    c: &Corpus,
    out_dir: &Path,
    mode: SwitchMode,
    emoji: &EmojiRanges,
) -> Result<Vec<PathBuf>, ExportError> {
    let io_err = |path: &Path, e: std::io::Error| ExportError {
        path: path.display().to_string(),
        source: e,
    };
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let dists = distributions(c, mode, emoji);
    let mut written = Vec::new();
    let mut summary = BTreeMap::new();
    for ((field, direction, subset), dist) in &dists {
        let path = out_dir.join(format!("{}_{}_{}.csv", field.as_str(), direction, subset));
        fs::write(&path, dist.to_csv()).map_err(|e| io_err(&path, e))?;
        written.push(path);
        summary.insert(
            format!("{}|{}|{}", field.as_str(), direction, subset),
            SummaryEntry {
                total: dist.total(),
                counts: &dist.counts,
            },
        );
    }
    let path = out_dir.join("summary.json");
    let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    json.push('\n');
    fs::write(&path, json).map_err(|e| io_err(&path, e))?;
    written.push(path);
    Ok(written)
}

#[derive(Debug, thiserror::Error)]
#[error("{path}: {source}")]
pub struct ExportError {
    pub path: String,
    #[source]
    pub source: std::io::Error,
}

/// Restricts to the subset used for switch-point analysis.
pub fn analysis_subset(c: &Corpus) -> Corpus {
    c.retain_copy(Subset::Analysis, crate::ingestion::is_analysis_eligible)
}

#[cfg(test)]
mod tests {
    use num_rational::Ratio;

    use super::*;
    use crate::conllu::{parse_table, LangPair, Token};

    fn tagged(tags: &[&str]) -> Sentence {
        let tokens = tags
            .iter()
            .enumerate()
            .map(|(i, t)| Token::bare(i as u32 + 1, format!("w{i}"), LangTag::normalize(t)))
            .collect();
        Sentence::new("s", LangPair::SpaEng, tokens)
    }

    #[test]
    fn table3_switch_points() {
        let s = parse_table(include_str!("../../../fixtures/worked/table3.bln")).unwrap();
        let recs = detect_switch_points(&s);
        let got: Vec<_> = recs
            .iter()
            .map(|r| {
                (
                    r.token_id,
                    r.direction().to_string(),
                    r.upos.clone().unwrap(),
                    r.deprel.clone().unwrap(),
                )
            })
            .collect();
        assert_eq!(
            got,
            vec![
                (2, "en-es".to_string(), Upos::Pron, Deprel::from("nsubj")),
                (4, "es-en".to_string(), Upos::Pron, Deprel::from("nsubj")),
            ]
        );
    }

    #[test]
    fn monolingual_has_none() {
        assert!(detect_switch_points(&tagged(&["es", "es", "other"])).is_empty());
    }

    #[test]
    fn neutral_tokens_hold_previous_language() {
        let recs = detect_switch_points(&tagged(&["es", "other", "en"]));
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].token_id, 3);
        assert_eq!(recs[0].from_lang, LangTag::Es);
        assert!(detect_switch_points_with(&tagged(&["es", "other", "en"]), SwitchMode::StrictPrevious).is_empty());
    }

    fn rec(rel: Option<&str>) -> SwitchRecord {
        SwitchRecord {
            sent_id: "s".into(),
            token_id: 1,
            from_lang: LangTag::En,
            to_lang: LangTag::Es,
            upos: Some(Upos::Pron),
            deprel: rel.map(Deprel::from),
        }
    }

    #[test]
    fn aggregate_normalizes_within_direction() {
        let records = vec![rec(Some("nsubj")), rec(Some("nsubj")), rec(Some("obj")), rec(None)];
        let d = Direction::new(LangTag::En, LangTag::Es);
        let dist: Distribution<Ratio<i64>> = aggregate_as(&records, Field::Deprel, Some(&d));
        assert_eq!(dist.proportions["nsubj"], Ratio::new(2, 3));
        assert_eq!(dist.proportions["obj"], Ratio::new(1, 3));
        let other = Direction::new(LangTag::Es, LangTag::En);
        assert!(aggregate(&records, Field::Deprel, Some(&other)).counts.is_empty());
        assert_eq!(aggregate(&records, Field::Upos, None).counts["PRON"], 4);
    }

    #[test]
    fn empty_records() {
        let dist = aggregate(&[], Field::Upos, None);
        assert!(dist.counts.is_empty());
        assert_eq!(dist.to_csv(), "label,count,proportion\n");
    }

    #[test]
    fn emoji_detection() {
        let e = EmojiRanges::default();
        assert!(e.contains("🙂"));
        assert!(e.contains("❤\u{FE0F}"));
        assert!(!e.contains("hola"));
        assert!(!e.contains("¿qué?"));
        let c = Corpus::new("c", vec![tagged(&["es"]), tagged(&["en"])]);
        let (with, without) = split_by_emoji(&c, &e);
        assert!(with.is_empty());
        assert_eq!(without, c);
    }
}
