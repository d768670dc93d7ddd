//! Tag inventories: language tags, universal POS tags and dependency relations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Language tag carried by every token.
///
/// `En`, `Es` and `Gn` are content languages. `Other` (punctuation, numbers,
/// mixed forms) and `Ne` (named entities from GUA-SPA style data) are neutral
/// and never count as a language on their own.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LangTag {
    En,
    Es,
    Gn,
    Other,
    Ne(String),
}

impl LangTag {
    /// Maps a raw corpus tag onto the normalized inventory. Total: unknown
    /// tags become `Other`.
    ///
    /// `es-b-ul` style tags keep only the language prefix; `ne-b-org` style
    /// tags keep the entity kind with the BIO marker removed.
    pub fn normalize(raw: &str) -> LangTag {
        let tag = raw.trim().to_ascii_lowercase();
        if tag == "en" {
            return LangTag::En;
        }
        if tag == "es" || tag.starts_with("es-") {
            return LangTag::Es;
        }
        if tag == "gn" || tag.starts_with("gn-") {
            return LangTag::Gn;
        }
        if let Some(rest) = tag.strip_prefix("ne-") {
            let kind = rest
                .strip_prefix("b-")
                .or_else(|| rest.strip_prefix("i-"))
                .unwrap_or(rest);
            return LangTag::Ne(kind.to_string());
        }
        LangTag::Other
    }

    pub fn is_content(&self) -> bool {
        matches!(self, LangTag::En | LangTag::Es | LangTag::Gn)
    }

    /// Short code used in file names and direction keys.
    pub fn code(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LangTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LangTag::En => f.write_str("en"),
            LangTag::Es => f.write_str("es"),
            LangTag::Gn => f.write_str("gn"),
            LangTag::Other => f.write_str("other"),
            LangTag::Ne(kind) => write!(f, "ne-{kind}"),
        }
    }
}

impl Serialize for LangTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LangTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Ok(LangTag::normalize(&raw))
    }
}

/// Universal POS tag. Strings outside the inventory are kept verbatim in
/// `Unknown` so that validation can report them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Upos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
    Other,
    Unknown(String),
}

impl Upos {
    pub const INVENTORY: [Upos; 18] = [
        Upos::Adj,
        Upos::Adp,
        Upos::Adv,
        Upos::Aux,
        Upos::Cconj,
        Upos::Det,
        Upos::Intj,
        Upos::Noun,
        Upos::Num,
        Upos::Part,
        Upos::Pron,
        Upos::Propn,
        Upos::Punct,
        Upos::Sconj,
        Upos::Sym,
        Upos::Verb,
        Upos::X,
        Upos::Other,
    ];

    pub fn as_str(&self) -> &str {
        match self {
            Upos::Adj => "ADJ",
            Upos::Adp => "ADP",
            Upos::Adv => "ADV",
            Upos::Aux => "AUX",
            Upos::Cconj => "CCONJ",
            Upos::Det => "DET",
            Upos::Intj => "INTJ",
            Upos::Noun => "NOUN",
            Upos::Num => "NUM",
            Upos::Part => "PART",
            Upos::Pron => "PRON",
            Upos::Propn => "PROPN",
            Upos::Punct => "PUNCT",
            Upos::Sconj => "SCONJ",
            Upos::Sym => "SYM",
            Upos::Verb => "VERB",
            Upos::X => "X",
            Upos::Other => "OTHER",
            Upos::Unknown(raw) => raw,
        }
    }

    pub fn is_known(&self) -> bool {
        !matches!(self, Upos::Unknown(_))
    }

    pub fn parse(raw: &str) -> Upos {
        let upper = raw.trim().to_ascii_uppercase();
        Upos::INVENTORY
            .iter()
            .find(|tag| tag.as_str() == upper)
            .cloned()
            .unwrap_or_else(|| Upos::Unknown(raw.trim().to_string()))
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Upos {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Upos::parse(s))
    }
}

impl Serialize for Upos {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Upos {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Upos::parse(&String::deserialize(deserializer)?))
    }
}

/// Base relations of the UD v2 inventory.
pub const UD_RELATIONS: [&str; 37] = [
    "acl",
    "advcl",
    "advmod",
    "amod",
    "appos",
    "aux",
    "case",
    "cc",
    "ccomp",
    "clf",
    "compound",
    "conj",
    "cop",
    "csubj",
    "dep",
    "det",
    "discourse",
    "dislocated",
    "expl",
    "fixed",
    "flat",
    "goeswith",
    "iobj",
    "list",
    "mark",
    "nmod",
    "nsubj",
    "nummod",
    "obj",
    "obl",
    "orphan",
    "parataxis",
    "punct",
    "reparandum",
    "root",
    "vocative",
    "xcomp",
];

/// Dependency relation label, stored verbatim.
///
/// Labels such as `attr` that fall outside the inventory are legal values of
/// this type; [`Deprel::is_known`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Deprel(String);

impl Deprel {
    pub fn new(label: impl Into<String>) -> Self {
        Deprel(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The relation without its language-specific subtype (`acl:relcl` → `acl`).
    pub fn base(&self) -> &str {
        self.0.split(':').next().unwrap_or("")
    }

    pub fn is_root(&self) -> bool {
        self.0 == "root"
    }

    pub fn is_punct(&self) -> bool {
        self.0 == "punct"
    }

    /// Known base relation with at most one lowercase alphabetic subtype.
    pub fn is_known(&self) -> bool {
        let mut parts = self.0.splitn(2, ':');
        let base = parts.next().unwrap_or("");
        if !UD_RELATIONS.contains(&base) {
            return false;
        }
        match parts.next() {
            None => true,
            Some(sub) => !sub.is_empty() && sub.chars().all(|c| c.is_ascii_lowercase()),
        }
    }
}

impl fmt::Display for Deprel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Deprel {
    fn from(s: &str) -> Self {
        Deprel::new(s)
    }
}

/// The two corpora the toolkit is built around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub enum LangPair {
    #[default]
    #[serde(rename = "SPA_ENG")]
    SpaEng,
    #[serde(rename = "SPA_GUA")]
    SpaGua,
}

impl LangPair {
    pub fn as_str(&self) -> &'static str {
        match self {
            LangPair::SpaEng => "SPA_ENG",
            LangPair::SpaGua => "SPA_GUA",
        }
    }

    pub fn parse(raw: &str) -> Option<LangPair> {
        match raw.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "SPA_ENG" | "ES_EN" | "EN_ES" => Some(LangPair::SpaEng),
            "SPA_GUA" | "ES_GN" | "GN_ES" => Some(LangPair::SpaGua),
            _ => None,
        }
    }
}

impl fmt::Display for LangPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
