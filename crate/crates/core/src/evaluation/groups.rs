use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::conllu::Deprel;

/// Named set of relations that relaxed scoring treats as interchangeable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceGroup {
    pub name: String,
    pub labels: Vec<Deprel>,
}

/// Groups may overlap. Two labels are equivalent only when one group holds
/// both; there is no closure across groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EquivalenceGroups {
    pub groups: Vec<EquivalenceGroup>,
}

const DEFAULT_GROUPS: [(&str, &[&str]); 7] = [
    ("Verbal Core", &["root", "aux", "cop"]),
    ("Clausal Complements", &["xcomp", "ccomp"]),
    (
        "Discourse/Clause Linking",
        &["parataxis", "appos", "conj", "discourse", "mark", "advmod"],
    ),
    ("Adjectival/Clausal Modifiers", &["amod", "acl", "acl:relcl"]),
    ("Nominal Modifiers", &["nmod", "obl", "advmod"]),
    ("Numeric/Adjectival Modifiers", &["nummod", "amod"]),
    ("Referential/Appositional Structures", &["appos", "nmod", "conj"]),
];

impl Default for EquivalenceGroups {
    fn default() -> Self {
        EquivalenceGroups {
            groups: DEFAULT_GROUPS
                .iter()
                .map(|(name, labels)| EquivalenceGroup {
                    name: name.to_string(),
                    labels: labels.iter().map(|l| Deprel::from(*l)).collect(),
                })
                .collect(),
        }
    }
}

impl EquivalenceGroups {
    pub fn empty() -> Self {
        EquivalenceGroups { groups: Vec::new() }
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    /// Canonical file form: pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("groups serialize");
        out.push('\n');
        out
    }

    /// Names of the groups containing both labels.
    pub fn shared_groups(&self, a: &Deprel, b: &Deprel) -> Vec<&str> {
        self.groups
            .iter()
            .filter(|g| g.labels.contains(a) && g.labels.contains(b))
            .map(|g| g.name.as_str())
            .collect()
    }

    /// Every label mentioned by some group, in first-seen order.
    pub fn labels(&self) -> Vec<&Deprel> {
        let mut out: Vec<&Deprel> = Vec::new();
        for l in self.groups.iter().flat_map(|g| g.labels.iter()) {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        out
    }
}

pub fn tags_equivalent(a: &Deprel, b: &Deprel, groups: &EquivalenceGroups) -> bool {
    a == b
        || groups
            .groups
            .iter()
            .any(|g| g.labels.contains(a) && g.labels.contains(b))
}
