//! Structural checks over a single sentence.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::sentence::Sentence;
use super::tags::Upos;
use crate::error::StructureError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    MultipleRoots,
    NoRoot,
    HeadOutOfRange,
    SelfHead,
    Cycle,
    HeadFormMismatch,
    PunctNotPunctRel,
    DuplicateId,
    BadLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    /// Breaks the tree; blocks acceptance and triggers a re-prompt.
    Hard,
    /// Inconsistent but still a usable tree.
    Warning,
}

impl ViolationCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationCode::MultipleRoots => "MULTIPLE_ROOTS",
            ViolationCode::NoRoot => "NO_ROOT",
            ViolationCode::HeadOutOfRange => "HEAD_OUT_OF_RANGE",
            ViolationCode::SelfHead => "SELF_HEAD",
            ViolationCode::Cycle => "CYCLE",
            ViolationCode::HeadFormMismatch => "HEAD_FORM_MISMATCH",
            ViolationCode::PunctNotPunctRel => "PUNCT_NOT_PUNCT_REL",
            ViolationCode::DuplicateId => "DUPLICATE_ID",
            ViolationCode::BadLabel => "BAD_LABEL",
        }
    }

    pub fn severity(&self) -> Severity {
        match self {
            ViolationCode::MultipleRoots
            | ViolationCode::NoRoot
            | ViolationCode::HeadOutOfRange
            | ViolationCode::SelfHead
            | ViolationCode::Cycle
            | ViolationCode::DuplicateId => Severity::Hard,
            ViolationCode::HeadFormMismatch | ViolationCode::PunctNotPunctRel | ViolationCode::BadLabel => {
                Severity::Warning
            }
        }
    }

    pub fn is_hard(&self) -> bool {
        self.severity() == Severity::Hard
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub sent_id: String,
    pub token_id: Option<u32>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.token_id {
            Some(id) => write!(f, "{} token {}: {} ({})", self.sent_id, id, self.code, self.message),
            None => write!(f, "{}: {} ({})", self.sent_id, self.code, self.message),
        }
    }
}

/// Non-blocking observation, e.g. punctuation hanging off something other
/// than the root or a verb.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Advisory {
    pub sent_id: String,
    pub token_id: u32,
    pub message: String,
}

pub fn count_hard(violations: &[Violation]) -> usize {
    violations.iter().filter(|v| v.code.is_hard()).count()
}

struct Collector<'a> {
    sent_id: &'a str,
    out: Vec<Violation>,
}

impl Collector<'_> {
    fn push(&mut self, code: ViolationCode, token_id: Option<u32>, message: impl Into<String>) {
        self.out.push(Violation {
            code,
            sent_id: self.sent_id.to_string(),
            token_id,
            message: message.into(),
        });
    }
}

/// Runs every structural and label check. The result is sorted by token id
/// (sentence-level findings first) and then by code.
pub fn validate(s: &Sentence) -> Vec<Violation> {
    let mut c = Collector {
        sent_id: &s.sent_id,
        out: Vec::new(),
    };
    let n = s.tokens.len() as u32;

    let mut seen: HashMap<u32, usize> = HashMap::new();
    for t in &s.tokens {
        *seen.entry(t.id).or_default() += 1;
    }
    let mut reported_dup = Vec::new();
    for (pos, t) in s.tokens.iter().enumerate() {
        let expected = pos as u32 + 1;
        if seen[&t.id] > 1 {
            if !reported_dup.contains(&t.id) {
                reported_dup.push(t.id);
                c.push(
                    ViolationCode::DuplicateId,
                    Some(t.id),
                    format!("id {} appears {} times", t.id, seen[&t.id]),
                );
            }
        } else if t.id != expected {
            c.push(
                ViolationCode::DuplicateId,
                Some(t.id),
                format!("id {} out of sequence, expected {}", t.id, expected),
            );
        }
    }

    for (pos, t) in s.tokens.iter().enumerate() {
        let id = Some(t.id);
        if let Some(h) = t.head_id {
            if h > n {
                c.push(ViolationCode::HeadOutOfRange, id, format!("head {h} outside 0..={n}"));
            } else if h as usize == pos + 1 {
                c.push(ViolationCode::SelfHead, id, "token is its own head");
            }
        }

        let is_root_rel = t.deprel.as_ref().map(|d| d.is_root()).unwrap_or(false);
        match (t.head_id, is_root_rel) {
            (Some(0), false) => c.push(
                ViolationCode::BadLabel,
                id,
                format!(
                    "head 0 requires relation root, found {}",
                    t.deprel.as_ref().map(|d| d.as_str()).unwrap_or("_")
                ),
            ),
            (Some(h), true) if h != 0 => c.push(
                ViolationCode::BadLabel,
                id,
                format!("relation root requires head 0, found {h}"),
            ),
            _ => {}
        }

        match (t.head_id, t.head_form.as_deref()) {
            (None, None) => {}
            (None, Some(f)) => c.push(
                ViolationCode::HeadFormMismatch,
                id,
                format!("HEAD {f:?} given without HEAD ID"),
            ),
            (Some(h), None) => c.push(
                ViolationCode::HeadFormMismatch,
                id,
                format!("HEAD ID {h} given without HEAD"),
            ),
            (Some(0), Some(f)) => {
                if f != "root" {
                    c.push(ViolationCode::HeadFormMismatch, id, format!("HEAD ID 0 but HEAD {f:?}"));
                }
            }
            (Some(h), Some(f)) => {
                if let Some(head) = s.token(h) {
                    if head.form != f {
                        let hint = s
                            .tokens
                            .iter()
                            .find(|o| o.form == f)
                            .map(|o| format!(", which is token {}", o.id))
                            .unwrap_or_default();
                        c.push(
                            ViolationCode::HeadFormMismatch,
                            id,
                            format!("HEAD ID {h} is {:?} but HEAD is {f:?}{hint}", head.form),
                        );
                    }
                }
            }
        }

        if let Some(upos) = &t.upos {
            if !upos.is_known() {
                c.push(ViolationCode::BadLabel, id, format!("unknown UPOS {upos:?}"));
            }
        }
        if let Some(rel) = &t.deprel {
            if !rel.is_known() {
                c.push(
                    ViolationCode::BadLabel,
                    id,
                    format!("unknown DEPREL {:?}", rel.as_str()),
                );
            }
        }
        if t.upos == Some(Upos::Punct) && !t.deprel.as_ref().map(|d| d.is_punct()).unwrap_or(false) {
            c.push(
                ViolationCode::PunctNotPunctRel,
                id,
                format!(
                    "PUNCT token labelled {}",
                    t.deprel.as_ref().map(|d| d.as_str()).unwrap_or("_")
                ),
            );
        }
    }

    let roots: Vec<u32> = s.tokens.iter().filter(|t| t.is_root()).map(|t| t.id).collect();
    if roots.len() > 1 {
        c.push(ViolationCode::MultipleRoots, None, format!("roots at tokens {roots:?}"));
    } else if roots.is_empty() {
        c.push(ViolationCode::NoRoot, None, "no token attached to 0");
    }

    for cycle in find_cycles(s) {
        c.push(
            ViolationCode::Cycle,
            Some(cycle[0]),
            format!("cycle through tokens {cycle:?}"),
        );
    }

    let mut out = c.out;
    out.sort_by_key(|v| (v.token_id, v.code));
    out
}

/// Heads by position, ignoring absent, out-of-range and self heads.
fn usable_heads(s: &Sentence) -> Vec<Option<usize>> {
    let n = s.tokens.len();
    s.tokens
        .iter()
        .enumerate()
        .map(|(pos, t)| match t.head_id {
            Some(h) if h >= 1 && (h as usize) <= n && h as usize != pos + 1 => Some(h as usize - 1),
            _ => None,
        })
        .collect()
}

/// Each cycle once, as 1-based positions starting from its smallest member.
fn find_cycles(s: &Sentence) -> Vec<Vec<u32>> {
    let heads = usable_heads(s);
    let n = heads.len();
    // 0 = unvisited, 1 = on current path, 2 = done
    let mut state = vec![0u8; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = Some(start);
        while let Some(v) = cur {
            match state[v] {
                0 => {
                    state[v] = 1;
                    path.push(v);
                    cur = heads[v];
                }
                1 => {
                    let from = path.iter().position(|&p| p == v).unwrap_or(0);
                    let mut members: Vec<u32> = path[from..].iter().map(|&p| p as u32 + 1).collect();
                    let min_at = members
                        .iter()
                        .enumerate()
                        .min_by_key(|(_, m)| **m)
                        .map(|(i, _)| i)
                        .unwrap_or(0);
                    members.rotate_left(min_at);
                    cycles.push(members);
                    break;
                }
                _ => break,
            }
        }
        for v in path {
            state[v] = 2;
        }
    }
    cycles.sort();
    cycles
}

/// Punctuation should hang off the root or a verbal head. Whether that head is
/// the main clause verb is left to the reviewer.
pub fn advisories(s: &Sentence) -> Vec<Advisory> {
    let mut out = Vec::new();
    for t in &s.tokens {
        if t.upos != Some(Upos::Punct) {
            continue;
        }
        let Some(h) = t.head_id else { continue };
        let Some(head) = s.token(h) else { continue };
        let verbal = matches!(head.upos, Some(Upos::Verb) | Some(Upos::Aux));
        if !head.is_root() && !verbal {
            out.push(Advisory {
                sent_id: s.sent_id.clone(),
                token_id: t.id,
                message: format!(
                    "punctuation attached to {:?} (token {}), neither root nor verb",
                    head.form, head.id
                ),
            });
        }
    }
    out
}

/// Dependents of each head, keyed by head id. The root itself has no entry
/// under 0.
pub fn children_map(s: &Sentence) -> Result<BTreeMap<u32, Vec<u32>>, StructureError> {
    let fail = |code, detail: String| StructureError {
        sent_id: s.sent_id.clone(),
        code,
        detail,
    };
    if let Some(t) = s.tokens.iter().find(|t| t.head_id.is_none()) {
        return Err(fail(ViolationCode::NoRoot, format!("token {} has no head", t.id)));
    }
    if let Some(v) = validate(s).into_iter().find(|v| {
        matches!(
            v.code,
            ViolationCode::Cycle | ViolationCode::HeadOutOfRange | ViolationCode::SelfHead | ViolationCode::DuplicateId
        )
    }) {
        return Err(fail(v.code, v.message));
    }
    let mut map: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (pos, t) in s.tokens.iter().enumerate() {
        let head = t.head_id.unwrap_or(0);
        if head != 0 {
            map.entry(head).or_default().push(pos as u32 + 1);
        }
    }
    Ok(map)
}
