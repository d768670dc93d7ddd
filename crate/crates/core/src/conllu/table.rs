//! The eight-column `.bln` table format.
//!
//! ```text
//! # sent_id = miami-7
//! # pair = SPA_ENG
//! # spec = 0
//! 1  and  en  and  CCONJ  7  same  cc
//! ```
//!
//! Input rows may be separated by tabs or by `|` (optionally with leading and
//! trailing pipes, as in markdown tables). An `ID ...` header row and markdown
//! rule rows are skipped. Output always uses tabs.

use std::fmt::Write as _;

use super::sentence::{Corpus, Sentence, Token};
use super::tags::{Deprel, LangPair, LangTag, Upos};
use crate::error::ParseError;

pub const COLUMNS: usize = 8;
const ABSENT: &str = "_";

/// Splits a row into trimmed fields. `None` for lines that are not rows at all
/// (markdown rules).
pub(crate) fn split_row(line: &str) -> Option<Vec<String>> {
    let trimmed = line.trim();
    if trimmed.chars().all(|c| matches!(c, '-' | '|' | ':' | ' ' | '+')) {
        return None;
    }
    let fields: Vec<String> = if line.contains('\t') {
        line.split('\t').map(|f| f.trim().to_string()).collect()
    } else if trimmed.contains('|') {
        let inner = trimmed.strip_prefix('|').unwrap_or(trimmed);
        let inner = inner.strip_suffix('|').unwrap_or(inner);
        inner.split('|').map(|f| f.trim().to_string()).collect()
    } else {
        trimmed.split_whitespace().map(str::to_string).collect()
    };
    Some(fields)
}

pub(crate) fn is_header(fields: &[String]) -> bool {
    fields.first().map(|f| f.eq_ignore_ascii_case("id")).unwrap_or(false)
}

fn opt(field: &str) -> Option<&str> {
    if field == ABSENT {
        None
    } else {
        Some(field)
    }
}

/// Parses one data row. `line_no` is 1-based and only used for errors.
pub(crate) fn parse_row(fields: &[String], line_no: usize) -> Result<Token, ParseError> {
    if fields.len() != COLUMNS {
        return Err(ParseError::new(
            line_no,
            format!("expected {COLUMNS} columns, found {}", fields.len()),
        ));
    }
    let id: u32 = fields[0]
        .parse()
        .map_err(|_| ParseError::new(line_no, format!("non-integer ID {:?}", fields[0])))?;
    let head_id = match opt(&fields[5]) {
        None => None,
        Some(raw) => Some(
            raw.parse::<u32>()
                .map_err(|_| ParseError::new(line_no, format!("non-integer HEAD ID {raw:?}")))?,
        ),
    };
    Ok(Token {
        id,
        form: fields[1].clone(),
        lang: LangTag::normalize(&fields[2]),
        lemma: fields[3].clone(),
        upos: opt(&fields[4]).map(Upos::parse),
        head_id,
        head_form: opt(&fields[6]).map(str::to_string),
        deprel: opt(&fields[7]).map(Deprel::new),
    })
}

fn apply_meta(sentence: &mut Sentence, line: &str) {
    let body = line.trim_start_matches('#').trim();
    let Some((key, value)) = body.split_once('=') else {
        return;
    };
    let value = value.trim().to_string();
    match key.trim() {
        "sent_id" => sentence.sent_id = value,
        "utterance_id" => sentence.utterance_id = Some(value),
        "speaker" => sentence.speaker = Some(value),
        "source_file" => sentence.source_file = Some(value),
        "spec" => sentence.spec = matches!(value.as_str(), "1" | "true" | "yes"),
        "pair" => {
            if let Some(pair) = LangPair::parse(&value) {
                sentence.pair = pair;
            }
        }
        _ => {}
    }
}

/// Parses a single sentence table.
pub fn parse_table(text: &str) -> Result<Sentence, ParseError> {
    parse_block(text, 0)
}

fn parse_block(text: &str, line_offset: usize) -> Result<Sentence, ParseError> {
    let mut sentence = Sentence::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = line_offset + idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            apply_meta(&mut sentence, trimmed);
            continue;
        }
        let Some(fields) = split_row(line) else {
            continue;
        };
        if is_header(&fields) {
            continue;
        }
        sentence.tokens.push(parse_row(&fields, line_no)?);
    }
    if sentence.tokens.is_empty() {
        return Err(ParseError::new(line_offset + 1, "no rows"));
    }
    Ok(sentence)
}

/// Parses a multi-sentence file: blocks separated by blank lines.
pub fn parse_corpus(name: &str, text: &str) -> Result<Corpus, ParseError> {
    let mut sentences = Vec::new();
    let mut block = String::new();
    let mut block_start = 0;
    let lines: Vec<&str> = text.lines().collect();
    for (idx, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            if !block.is_empty() {
                sentences.push(parse_block(&block, block_start)?);
                block.clear();
            }
            block_start = idx + 1;
            continue;
        }
        block.push_str(line);
        block.push('\n');
    }
    if !block.is_empty() {
        sentences.push(parse_block(&block, block_start)?);
    }
    Ok(Corpus::new(name, sentences))
}

fn or_absent(value: Option<&str>) -> &str {
    value.unwrap_or(ABSENT)
}

/// Renders a sentence as a `.bln` block (metadata comments, then one tab
/// separated row per token).
pub fn serialize(s: &Sentence) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# sent_id = {}", s.sent_id);
    let _ = writeln!(out, "# pair = {}", s.pair);
    let _ = writeln!(out, "# spec = {}", u8::from(s.spec));
    if let Some(v) = &s.utterance_id {
        let _ = writeln!(out, "# utterance_id = {v}");
    }
    if let Some(v) = &s.speaker {
        let _ = writeln!(out, "# speaker = {v}");
    }
    if let Some(v) = &s.source_file {
        let _ = writeln!(out, "# source_file = {v}");
    }
    for t in &s.tokens {
        let head_id = t.head_id.map(|h| h.to_string());
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            t.id,
            t.form,
            t.lang,
            t.lemma,
            or_absent(t.upos.as_ref().map(Upos::as_str)),
            or_absent(head_id.as_deref()),
            or_absent(t.head_form.as_deref()),
            or_absent(t.deprel.as_ref().map(Deprel::as_str)),
        );
    }
    out
}

pub fn serialize_corpus(c: &Corpus) -> String {
    c.sentences.iter().map(serialize).collect::<Vec<_>>().join("\n")
}

/// Standard 10-column CoNLL-U. The language tag moves into MISC as `Lang=xx`
/// and HEAD/DEPREL keep `_` when unannotated.
pub fn to_conllu(s: &Sentence) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# sent_id = {}", s.sent_id);
    let _ = writeln!(out, "# text = {}", s.text());
    for t in &s.tokens {
        let head_id = t.head_id.map(|h| h.to_string());
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t_\t_\t{}\t{}\t_\tLang={}",
            t.id,
            t.form,
            t.lemma,
            or_absent(t.upos.as_ref().map(Upos::as_str)),
            or_absent(head_id.as_deref()),
            or_absent(t.deprel.as_ref().map(Deprel::as_str)),
            t.lang,
        );
    }
    out.push('\n');
    out
}

pub fn corpus_to_conllu(c: &Corpus) -> String {
    c.sentences.iter().map(to_conllu).collect()
}
