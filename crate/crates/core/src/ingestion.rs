//! Raw corpus readers, code-switch detection and subset filtering.
//!
//! Both raw formats are line based:
//!
//! ```text
//! # sent_id = m-003
//! # speaker = MAR
//! and       en
//! tú        es
//! sabes     es   know.2S.PRES
//! .         other
//!
//! ```
//!
//! One token per line as `FORM TAG`, whitespace separated; blank lines end an
//! utterance; `# key = value` (or `# key=value`) lines set metadata for the
//! next utterance. Recognized keys are `sent_id`, `speaker`, `utterance_id`
//! and `source_file`. Miami-style lines may carry a third column (the
//! morphological gloss), which is ignored. GUA-SPA-style lines have exactly
//! two columns and use tags such as `gn`, `es`, `ne-b-per`, `other`.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::conllu::{Corpus, LangPair, LangTag, Sentence, Subset, Token, Upos};
use crate::error::ParseError;

/// Minimum length of a code-switched sentence kept for switch-point analysis.
pub const ANALYSIS_MIN_TOKENS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawToken {
    pub form: String,
    pub raw_tag: String,
    pub position: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CorpusStats {
    #[serde(rename = "sentences")]
    pub n_sentences: usize,
    #[serde(rename = "tokens")]
    pub n_tokens: usize,
    #[serde(rename = "csw")]
    pub n_csw_sentences: usize,
    #[serde(rename = "analysis")]
    pub n_analysis_sentences: usize,
}

impl CorpusStats {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("stats serialize");
        out.push('\n');
        out
    }
}

pub fn normalize_lang_tag(raw: &str) -> LangTag {
    LangTag::normalize(raw)
}

/// At least two distinct content languages among the tokens.
pub fn is_code_switched(s: &Sentence) -> bool {
    let mut first: Option<&LangTag> = None;
    for t in s.tokens.iter().filter(|t| t.lang.is_content()) {
        match first {
            None => first = Some(&t.lang),
            Some(f) if f != &t.lang => return true,
            _ => {}
        }
    }
    false
}

pub fn is_analysis_eligible(s: &Sentence) -> bool {
    s.len() >= ANALYSIS_MIN_TOKENS && is_code_switched(s)
}

/// Splits a corpus into its code-switched subset and the analysis subset
/// (code-switched with at least three tokens).
pub fn filter_corpus(c: &Corpus) -> (Corpus, Corpus, CorpusStats) {
    let csw = c.retain_copy(Subset::Csw, is_code_switched);
    let analysis = csw.retain_copy(Subset::Analysis, |s| s.len() >= ANALYSIS_MIN_TOKENS);
    let stats = CorpusStats {
        n_sentences: c.len(),
        n_tokens: c.n_tokens(),
        n_csw_sentences: csw.len(),
        n_analysis_sentences: analysis.len(),
    };
    (csw, analysis, stats)
}

const ELLIPSIS_MARKERS: [&str; 2] = ["...", "…"];

/// Heuristic marker for informal speech: repetition, interjections, unfinished
/// structure or a trailing ellipsis.
pub fn flag_spec(s: &Sentence) -> bool {
    let repeated = s
        .tokens
        .windows(2)
        .any(|w| w[0].form.to_lowercase() == w[1].form.to_lowercase());
    let unattached = s.tokens.iter().any(|t| t.head_id.is_none());
    let interjection = s.tokens.iter().any(|t| t.upos == Some(Upos::Intj));
    let trailing = s
        .tokens
        .last()
        .map(|t| ELLIPSIS_MARKERS.contains(&t.form.as_str()) || t.form.ends_with('…'))
        .unwrap_or(false);
    repeated || unattached || interjection || trailing
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawFormat {
    Miami,
    GuaSpa,
}

impl RawFormat {
    fn pair(self) -> LangPair {
        match self {
            RawFormat::Miami => LangPair::SpaEng,
            RawFormat::GuaSpa => LangPair::SpaGua,
        }
    }

    fn max_columns(self) -> usize {
        match self {
            RawFormat::Miami => 3,
            RawFormat::GuaSpa => 2,
        }
    }
}

#[derive(Default)]
struct Pending {
    sent_id: Option<String>,
    speaker: Option<String>,
    utterance_id: Option<String>,
    source_file: Option<String>,
    tokens: Vec<RawToken>,
}

/// `# ...` and `#key=value` are comments; `#hashtag es` is a token.
fn is_comment(line: &str) -> bool {
    let rest = &line[1..];
    rest.is_empty() || rest.starts_with(char::is_whitespace) || line.split_whitespace().count() == 1
}

/// Reads a raw corpus. `source` names the input in errors, in generated
/// sentence ids and as the default `source_file`.
pub fn read_raw<R: BufRead>(reader: R, source: &str, format: RawFormat) -> Result<Corpus, ParseError> {
    let mut sentences = Vec::new();
    let mut pending = Pending::default();
    let stem = source
        .rsplit('/')
        .next()
        .unwrap_or(source)
        .split('.')
        .next()
        .unwrap_or(source)
        .to_string();

    let flush = |pending: &mut Pending, sentences: &mut Vec<Sentence>| {
        if pending.tokens.is_empty() {
            return;
        }
        let p = std::mem::take(pending);
        let index = sentences.len() + 1;
        let tokens = p
            .tokens
            .into_iter()
            .map(|raw| Token::bare(raw.position, raw.form, normalize_lang_tag(&raw.raw_tag)))
            .collect();
        sentences.push(Sentence {
            sent_id: p.sent_id.unwrap_or_else(|| format!("{stem}-{index}")),
            utterance_id: p.utterance_id,
            speaker: p.speaker,
            source_file: p.source_file.or_else(|| Some(stem.clone())),
            spec: false,
            pair: format.pair(),
            tokens,
        });
    };

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| ParseError::new(line_no, format!("read error: {e}")))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            flush(&mut pending, &mut sentences);
            continue;
        }
        if let Some(meta) = trimmed.strip_prefix('#').filter(|_| is_comment(trimmed)) {
            if !pending.tokens.is_empty() {
                flush(&mut pending, &mut sentences);
            }
            let Some((key, value)) = meta.split_once('=') else {
                continue;
            };
            let value = value.trim().to_string();
            match key.trim() {
                "sent_id" => pending.sent_id = Some(value),
                "speaker" => pending.speaker = Some(value),
                "utterance_id" => pending.utterance_id = Some(value),
                "source_file" => pending.source_file = Some(value),
                _ => {}
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > format.max_columns() {
            return Err(ParseError::new(
                line_no,
                format!(
                    "expected FORM TAG{}, found {} fields",
                    if format == RawFormat::Miami { " [GLOSS]" } else { "" },
                    fields.len()
                ),
            ));
        }
        pending.tokens.push(RawToken {
            form: fields[0].to_string(),
            raw_tag: fields[1].to_string(),
            position: pending.tokens.len() as u32 + 1,
        });
    }
    flush(&mut pending, &mut sentences);
    Ok(Corpus::new(stem, sentences))
}

pub fn read_miami<R: BufRead>(reader: R, source: &str) -> Result<Corpus, ParseError> {
    read_raw(reader, source, RawFormat::Miami)
}

pub fn read_guaspa<R: BufRead>(reader: R, source: &str) -> Result<Corpus, ParseError> {
    read_raw(reader, source, RawFormat::GuaSpa)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentence(tags: &[&str]) -> Sentence {
        let tokens = tags
            .iter()
            .enumerate()
            .map(|(i, t)| Token::bare(i as u32 + 1, format!("w{i}"), LangTag::normalize(t)))
            .collect();
        Sentence::new("s", LangPair::SpaEng, tokens)
    }

    #[test]
    fn code_switch_needs_two_content_languages() {
        assert!(is_code_switched(&sentence(&["en", "es", "es", "en", "other"])));
        assert!(!is_code_switched(&sentence(&["es", "es"])));
        assert!(!is_code_switched(&sentence(&["es", "other", "ne-b-org"])));
        assert!(is_code_switched(&sentence(&["gn", "other", "es-b-ul"])));
    }

    #[test]
    fn filter_counts() {
        let c = Corpus::new(
            "c",
            vec![
                sentence(&["es"]),
                sentence(&["es", "en"]),
                sentence(&["en", "es", "es"]),
            ],
        );
        let (csw, analysis, stats) = filter_corpus(&c);
        assert_eq!(csw.len(), 2);
        assert_eq!(analysis.len(), 1);
        assert_eq!(
            stats,
            CorpusStats {
                n_sentences: 3,
                n_tokens: 6,
                n_csw_sentences: 2,
                n_analysis_sentences: 1
            }
        );
        assert_eq!(
            stats.to_json(),
            "{\"sentences\":3,\"tokens\":6,\"csw\":2,\"analysis\":1}\n"
        );
    }

    #[test]
    fn empty_corpus_stats() {
        let (csw, analysis, stats) = filter_corpus(&Corpus::default());
        assert!(csw.is_empty() && analysis.is_empty());
        assert_eq!(stats, CorpusStats::default());
    }

    #[test]
    fn reads_metadata_and_tags() {
        let text = "# sent_id=a1\n# speaker = MAR\nand en\ntú es\nsabes es know.2S\n\n# speaker=LUC\nhola es\n";
        let c = read_miami(text.as_bytes(), "fixtures/herring.txt").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.sentences[0].sent_id, "a1");
        assert_eq!(c.sentences[0].speaker.as_deref(), Some("MAR"));
        assert_eq!(c.sentences[1].sent_id, "herring-2");
        assert_eq!(c.sentences[1].speaker.as_deref(), Some("LUC"));
        assert_eq!(c.sentences[1].source_file.as_deref(), Some("herring"));
        assert_eq!(c.sentences[0].tokens[2].lang, LangTag::Es);
        assert_eq!(c.sentences[0].tokens[2].head_id, None);
    }

    #[test]
    fn guaspa_named_entities() {
        let c = read_guaspa("@USER ne-b-per\nche gn\n".as_bytes(), "g.txt").unwrap();
        let t = &c.sentences[0].tokens[0];
        assert_eq!(t.form, "@USER");
        assert_eq!(t.lang, LangTag::Ne("per".into()));
        assert_eq!(c.sentences[0].pair, LangPair::SpaGua);
    }

    #[test]
    fn hashtag_token_is_not_a_comment() {
        let c = read_guaspa("# sent_id=g9\n#Paraguay ne-b-loc\nche gn\n".as_bytes(), "g.txt").unwrap();
        assert_eq!(c.sentences[0].sent_id, "g9");
        assert_eq!(c.sentences[0].tokens[0].form, "#Paraguay");
    }

    #[test]
    fn schema_errors_carry_line() {
        let err = read_guaspa("che gn\nmba'e gn extra\n".as_bytes(), "g.txt").unwrap_err();
        assert_eq!(err.line, 2);
        let err = read_miami("lonely\n".as_bytes(), "m.txt").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn blank_file_is_empty_corpus() {
        assert!(read_miami("\n\n".as_bytes(), "m.txt").unwrap().is_empty());
    }
}
