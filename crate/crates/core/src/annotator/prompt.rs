use std::fmt::Write as _;

use thiserror::Error;

use crate::conllu::{LangPair, LangTag, Sentence};
use crate::switchpoint::EmojiRanges;

const SPA_ENG_SYSTEM: &str = include_str!("../../prompts/spa_eng.txt");
const SPA_GUA_SYSTEM: &str = include_str!("../../prompts/spa_gua.txt");

/// System text for a language pair: role, relation reference, rules and
/// worked examples.
pub fn system_prompt(pair: LangPair) -> &'static str {
    match pair {
        LangPair::SpaEng => SPA_ENG_SYSTEM,
        LangPair::SpaGua => SPA_GUA_SYSTEM,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptBundle {
    pub system: String,
    pub user: String,
    pub pair: LangPair,
    /// Sentence the prompt was built for. Not part of the cache key.
    pub sent_id: String,
}

impl PromptBundle {
    /// Same prompt with the problems of a previous answer appended to the
    /// user message.
    pub fn with_feedback(&self, problems: &[String]) -> PromptBundle {
        let mut user = self.user.clone();
        user.push_str("\n\nYour previous table had these structural problems:\n");
        for p in problems {
            let _ = writeln!(user, "- {p}");
        }
        user.push_str("Return the full corrected table.");
        PromptBundle { user, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PromptError {
    #[error("sentence {0}: no tokens")]
    NoTokens(String),
}

fn pair_name(pair: LangPair) -> &'static str {
    match pair {
        LangPair::SpaEng => "Spanish-English",
        LangPair::SpaGua => "Spanish-Guaraní",
    }
}

fn has_apostrophe(form: &str) -> bool {
    form.contains('\'') || form.contains('’')
}

pub fn build_prompt(s: &Sentence, pair: LangPair) -> Result<PromptBundle, PromptError> {
    if s.is_empty() {
        return Err(PromptError::NoTokens(s.sent_id.clone()));
    }
    let emoji = EmojiRanges::default();
    let mut user = String::new();
    let _ = writeln!(user, "Annotate this {} sentence.", pair_name(pair));
    let _ = writeln!(user, "Sentence: {}", s.text());
    let _ = writeln!(user, "Tokens (ID, FORM, LANG):");
    for t in &s.tokens {
        let _ = writeln!(user, "{}\t{}\t{}", t.id, t.form, t.lang);
    }
    user.push('\n');
    match pair {
        LangPair::SpaEng => {
            let contractions: Vec<&str> = s
                .tokens
                .iter()
                .filter(|t| t.lang == LangTag::En && has_apostrophe(&t.form))
                .map(|t| t.form.as_str())
                .collect();
            if contractions.is_empty() {
                user.push_str("Do not split or merge any token.\n");
            } else {
                let _ = writeln!(
                    user,
                    "Split these English contractions into their parts, each part keeping LANG en: {}. Do not split any other token.",
                    contractions.join(", ")
                );
            }
        }
        LangPair::SpaGua => {
            user.push_str(
                "The table must have exactly one root. Keep every token as given, without morphological segmentation.\n",
            );
        }
    }
    for t in s.tokens.iter().filter(|t| emoji.contains(&t.form)) {
        let _ = writeln!(
            user,
            "Token {} ({}) is an emoji: label it discourse (UPOS SYM, LANG other), attached to the root.",
            t.id, t.form
        );
    }
    user.push_str(
        "Answer with the eight tab-separated columns ID, FORM, LANG, LEMMA, UPOS, HEAD ID, HEAD, DEPREL, one row per token.",
    );
    Ok(PromptBundle {
        system: system_prompt(pair).to_string(),
        user,
        pair,
        sent_id: s.sent_id.clone(),
    })
}
