use serde::{Deserialize, Serialize};

use super::tags::{Deprel, LangPair, LangTag, Upos};

/// One annotated word in the eight-column table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub id: u32,
    pub form: String,
    pub lang: LangTag,
    pub lemma: String,
    pub upos: Option<Upos>,
    /// `Some(0)` marks the root, `None` an unannotated head (`_`).
    pub head_id: Option<u32>,
    pub head_form: Option<String>,
    pub deprel: Option<Deprel>,
}

impl Token {
    /// A token with only form and language filled in.
    pub fn bare(id: u32, form: impl Into<String>, lang: LangTag) -> Self {
        Token {
            id,
            form: form.into(),
            lang,
            lemma: "_".to_string(),
            upos: None,
            head_id: None,
            head_form: None,
            deprel: None,
        }
    }

    pub fn is_root(&self) -> bool {
        self.head_id == Some(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Sentence {
    pub sent_id: String,
    pub utterance_id: Option<String>,
    pub speaker: Option<String>,
    pub source_file: Option<String>,
    pub spec: bool,
    pub pair: LangPair,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(sent_id: impl Into<String>, pair: LangPair, tokens: Vec<Token>) -> Self {
        Sentence {
            sent_id: sent_id.into(),
            pair,
            tokens,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token at 1-based position `id`.
    pub fn token(&self, id: u32) -> Option<&Token> {
        if id == 0 {
            return None;
        }
        self.tokens.get(id as usize - 1)
    }

    pub fn token_mut(&mut self, id: u32) -> Option<&mut Token> {
        if id == 0 {
            return None;
        }
        self.tokens.get_mut(id as usize - 1)
    }

    pub fn forms(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.form.as_str()).collect()
    }

    pub fn text(&self) -> String {
        self.forms().join(" ")
    }

    /// Recomputes every `head_form` from the current `head_id` column.
    pub fn refresh_head_forms(&mut self) {
        let forms: Vec<String> = self.tokens.iter().map(|t| t.form.clone()).collect();
        for tok in &mut self.tokens {
            tok.head_form = match tok.head_id {
                None => None,
                Some(0) => Some("root".to_string()),
                Some(h) => forms.get(h as usize - 1).cloned().or(tok.head_form.take()),
            };
        }
    }
}

/// Which slice of the source data a corpus holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subset {
    #[default]
    Full,
    Csw,
    Analysis,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Corpus {
    pub name: String,
    pub subset: Subset,
    pub sentences: Vec<Sentence>,
}

impl Corpus {
    pub fn new(name: impl Into<String>, sentences: Vec<Sentence>) -> Self {
        Corpus {
            name: name.into(),
            subset: Subset::Full,
            sentences,
        }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn n_tokens(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn get(&self, sent_id: &str) -> Option<&Sentence> {
        self.sentences.iter().find(|s| s.sent_id == sent_id)
    }

    /// Copy of this corpus restricted to sentences matching `keep`.
    pub fn retain_copy(&self, subset: Subset, keep: impl Fn(&Sentence) -> bool) -> Corpus {
        Corpus {
            name: self.name.clone(),
            subset,
            sentences: self.sentences.iter().filter(|s| keep(s)).cloned().collect(),
        }
    }
}
