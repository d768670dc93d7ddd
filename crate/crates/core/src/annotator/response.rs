//! Turning a model answer back into a sentence aligned with its input.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::conllu::{is_header, parse_row, split_row, LangTag, Sentence, Token, ViolationCode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResponseError {
    #[error("format error{}: {message}", code.map(|c| format!(" {c}")).unwrap_or_default())]
    Format {
        code: Option<ViolationCode>,
        message: String,
    },
    #[error("alignment error at input position {position}: expected {expected:?}, found {found:?}")]
    Alignment {
        position: usize,
        expected: String,
        found: String,
    },
}

impl ResponseError {
    fn format(message: impl Into<String>) -> Self {
        ResponseError::Format {
            code: None,
            message: message.into(),
        }
    }
}

/// Input-to-output token correspondence. Tokens not listed map one to one;
/// each expansion sends one input id to an inclusive range of output ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alignment {
    pub expansions: BTreeMap<u32, (u32, u32)>,
}

impl Alignment {
    pub fn is_identity(&self) -> bool {
        self.expansions.is_empty()
    }

    /// Rebuilds the input forms from an aligned output sentence.
    pub fn restore_forms(&self, output: &Sentence) -> Vec<String> {
        let mut forms = Vec::new();
        let mut pos = 0usize;
        let mut input_id = 1u32;
        while pos < output.tokens.len() {
            if let Some(&(first, last)) = self.expansions.get(&input_id) {
                let joined: String = (first..=last)
                    .filter_map(|id| output.token(id))
                    .map(|t| t.form.as_str())
                    .collect();
                forms.push(joined);
                pos = last as usize;
            } else {
                forms.push(output.tokens[pos].form.clone());
                pos += 1;
            }
            input_id += 1;
        }
        forms
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedResponse {
    pub sentence: Sentence,
    pub alignment: Alignment,
}

fn normalize_quotes(s: &str) -> String {
    s.replace('’', "'")
}

/// Contractions may only be split for English tokens that carry an apostrophe.
fn splittable(t: &Token) -> bool {
    t.lang == LangTag::En && (t.form.contains('\'') || t.form.contains('’'))
}

/// Extracts table rows from free-form model output: code fences, prose lines
/// and header rows are skipped; any line whose first field is an integer is a
/// row.
fn table_rows(text: &str) -> Result<Vec<Token>, ResponseError> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with("```") || trimmed.starts_with('#') {
            continue;
        }
        let Some(fields) = split_row(line) else {
            continue;
        };
        if is_header(&fields) {
            continue;
        }
        if fields.first().map(|f| f.parse::<u32>().is_err()).unwrap_or(true) {
            continue;
        }
        let delimited = line.contains('\t') || line.contains('|');
        if !delimited && fields.len() != crate::conllu::COLUMNS {
            continue;
        }
        let token = parse_row(&fields, idx + 1).map_err(|e| ResponseError::format(e.to_string()))?;
        rows.push(token);
    }
    if rows.is_empty() {
        return Err(ResponseError::format("no table rows"));
    }
    let mut seen = HashSet::new();
    for t in &rows {
        if !seen.insert(t.id) {
            return Err(ResponseError::Format {
                code: Some(ViolationCode::DuplicateId),
                message: format!("row id {} appears more than once ({:?})", t.id, t.form),
            });
        }
    }
    for (pos, t) in rows.iter().enumerate() {
        if t.id as usize != pos + 1 {
            return Err(ResponseError::format(format!(
                "row ids are not consecutive: found {} at row {}",
                t.id,
                pos + 1
            )));
        }
    }
    Ok(rows)
}

/// Parses a model answer against the sentence it was asked to annotate.
///
/// The answer must reproduce the input forms in order, except that an English
/// contraction may be returned as two or three consecutive rows whose forms
/// concatenate to it. LANG always comes from the input token.
pub fn parse_response(text: &str, input: &Sentence) -> Result<ParsedResponse, ResponseError> {
    let mut rows = table_rows(text)?;
    let mut alignment = Alignment::default();
    let mut j = 0usize;
    for (i, inp) in input.tokens.iter().enumerate() {
        let Some(out) = rows.get(j) else {
            return Err(ResponseError::Alignment {
                position: i + 1,
                expected: inp.form.clone(),
                found: "<end of table>".to_string(),
            });
        };
        if out.form == inp.form {
            rows[j].lang = inp.lang.clone();
            j += 1;
            continue;
        }
        let mut matched = None;
        if splittable(inp) {
            let target = normalize_quotes(&inp.form);
            for k in 2..=3 {
                if j + k > rows.len() {
                    break;
                }
                let joined: String = rows[j..j + k].iter().map(|t| t.form.as_str()).collect();
                if normalize_quotes(&joined) == target {
                    matched = Some(k);
                    break;
                }
            }
        }
        match matched {
            Some(k) => {
                for row in &mut rows[j..j + k] {
                    row.lang = inp.lang.clone();
                }
                alignment.expansions.insert(inp.id, (j as u32 + 1, (j + k) as u32));
                j += k;
            }
            None => {
                return Err(ResponseError::Alignment {
                    position: i + 1,
                    expected: inp.form.clone(),
                    found: out.form.clone(),
                })
            }
        }
    }
    if j < rows.len() {
        return Err(ResponseError::Alignment {
            position: input.len() + 1,
            expected: "<end of sentence>".to_string(),
            found: rows[j].form.clone(),
        });
    }
    let sentence = Sentence {
        tokens: rows,
        ..input.clone()
    };
    Ok(ParsedResponse { sentence, alignment })
}
