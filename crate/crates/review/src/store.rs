//! Event-sourced store of machine annotations, expert corrections and review
//! status.
//!
//! Every mutation is an [`Event`] appended to a JSON-lines log. The in-memory
//! [`StoreState`] is a pure fold over that log, optionally started from a
//! snapshot file written next to it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use arc_swap::ArcSwap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use cswud_core::conllu::{count_hard, validate, Corpus, Deprel, Sentence, Upos, Violation};
use cswud_core::evaluation::{cohen_kappa, corpus_report, EquivalenceGroups};
use cswud_core::EvalReport;

/// Editable annotation fields. `SPEC` is per sentence and uses token id 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Field {
    Upos,
    HeadId,
    Deprel,
    Lemma,
    Spec,
}

impl Field {
    pub const TOKEN_FIELDS: [Field; 4] = [Field::Upos, Field::HeadId, Field::Deprel, Field::Lemma];

    pub fn parse(raw: &str) -> Option<Field> {
        match raw.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "UPOS" => Some(Field::Upos),
            "HEAD_ID" | "HEAD" => Some(Field::HeadId),
            "DEPREL" => Some(Field::Deprel),
            "LEMMA" => Some(Field::Lemma),
            "SPEC" => Some(Field::Spec),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Field::Upos => "UPOS",
            Field::HeadId => "HEAD_ID",
            Field::Deprel => "DEPREL",
            Field::Lemma => "LEMMA",
            Field::Spec => "SPEC",
        }
    }

    /// Current value rendered the way corrections name it (`_` for absent).
    pub fn get(&self, s: &Sentence, token_id: u32) -> Option<String> {
        if *self == Field::Spec {
            return Some(if s.spec { "1" } else { "0" }.to_string());
        }
        let t = s.token(token_id)?;
        Some(match self {
            Field::Upos => t.upos.as_ref().map_or("_".into(), |u| u.as_str().to_string()),
            Field::HeadId => t.head_id.map_or("_".into(), |h| h.to_string()),
            Field::Deprel => t.deprel.as_ref().map_or("_".into(), |d| d.as_str().to_string()),
            Field::Lemma => t.lemma.clone(),
            Field::Spec => unreachable!(),
        })
    }

    fn check(&self, value: &str, n: usize) -> Result<(), String> {
        let plain = !value.is_empty() && !value.chars().any(char::is_whitespace);
        match self {
            Field::Upos if value == "_" || Upos::parse(value).is_known() => Ok(()),
            Field::Upos => Err(format!("{value:?} is not a UPOS tag")),
            Field::HeadId if value == "_" => Ok(()),
            Field::HeadId => match value.parse::<u32>() {
                Ok(h) if (h as usize) <= n => Ok(()),
                Ok(h) => Err(format!("head {h} is outside 0..={n}")),
                Err(_) => Err(format!("{value:?} is not a head index")),
            },
            Field::Deprel | Field::Lemma if plain => Ok(()),
            Field::Deprel | Field::Lemma => Err(format!("{value:?} must be a non-empty label without spaces")),
            Field::Spec if matches!(value, "0" | "1") => Ok(()),
            Field::Spec => Err(format!("SPEC must be 0 or 1, got {value:?}")),
        }
    }

    /// Writes a checked value. HEAD_ID edits also rewrite that token's HEAD.
    fn set(&self, s: &mut Sentence, token_id: u32, value: &str) {
        if *self == Field::Spec {
            s.spec = value == "1";
            return;
        }
        let head_form = match (self, value.parse::<u32>()) {
            (Field::HeadId, Ok(0)) => Some("root".to_string()),
            (Field::HeadId, Ok(h)) => s.token(h).map(|t| t.form.clone()),
            _ => None,
        };
        let Some(t) = s.token_mut(token_id) else { return };
        let absent = value == "_";
        match self {
            Field::Upos => t.upos = (!absent).then(|| Upos::parse(value)),
            Field::HeadId => {
                t.head_id = value.parse().ok();
                t.head_form = head_form;
            }
            Field::Deprel => t.deprel = (!absent).then(|| Deprel::new(value)),
            Field::Lemma => t.lemma = value.to_string(),
            Field::Spec => unreachable!(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correction {
    pub sent_id: String,
    pub token_id: u32,
    pub field: Field,
    pub old_value: String,
    pub new_value: String,
    pub annotator_id: String,
    pub timestamp: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pending,
    InReview,
    Accepted,
}

impl Status {
    pub fn parse(raw: &str) -> Option<Status> {
        match raw.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "PENDING" => Some(Status::Pending),
            "IN_REVIEW" => Some(Status::InReview),
            "ACCEPTED" => Some(Status::Accepted),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewState {
    pub sent_id: String,
    pub status: Status,
    pub reviewed_by: BTreeSet<String>,
}

/// One annotator's own labels: token id to field to value.
pub type Track = BTreeMap<u32, BTreeMap<Field, String>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub corpus_id: String,
    /// Annotation as imported; never modified.
    pub machine: Sentence,
    /// Annotation after all corrections so far.
    pub current: Sentence,
    pub gold: Option<Sentence>,
    pub history: Vec<Correction>,
    pub status: Status,
    pub reviewed_by: BTreeSet<String>,
    pub tracks: BTreeMap<String, Track>,
}

impl SentenceRecord {
    pub fn review_state(&self) -> ReviewState {
        ReviewState {
            sent_id: self.current.sent_id.clone(),
            status: self.status,
            reviewed_by: self.reviewed_by.clone(),
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        validate(&self.current)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub sent_ids: Vec<String>,
    pub has_gold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    CorpusImported {
        corpus_id: String,
        machine: Vec<Sentence>,
        gold: Option<Vec<Sentence>>,
    },
    Corrected(Correction),
    Accepted {
        sent_id: String,
        annotator_id: String,
        timestamp: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct LoggedEvent {
    seq: u64,
    #[serde(flatten)]
    event: Event,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reference {
    Gold,
    Reviewed,
}

impl Reference {
    pub fn parse(raw: &str) -> Option<Reference> {
        match raw.trim().to_ascii_uppercase().as_str() {
            "GOLD" => Some(Reference::Gold),
            "REVIEWED" => Some(Reference::Reviewed),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Agreement {
    pub annotator_a: String,
    pub annotator_b: String,
    pub field: Field,
    pub n: usize,
    pub kappa: f64,
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("conflict on {sent_id} token {token_id} {field:?}: expected {expected:?}, stored value is {current:?}")]
    Conflict {
        sent_id: String,
        token_id: u32,
        field: Field,
        expected: String,
        current: String,
    },
    #[error("invalid request: {0}")]
    Invalid(String),
    #[error("{sent_id} cannot be accepted with {} hard violation(s)", count_hard(.violations))]
    Blocked {
        sent_id: String,
        violations: Vec<Violation>,
    },
    #[error("incomplete labels: {}", .missing.join(", "))]
    Incomplete { missing: Vec<String> },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} line {line}: {message}")]
    Corrupt { path: String, line: usize, message: String },
}

/// Result of applying one event.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Imported {
        corpus_id: String,
        sentences: usize,
    },
    Updated {
        sentence: Sentence,
        violations: Vec<Violation>,
        state: ReviewState,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StoreState {
    /// Sequence number of the last applied event.
    pub seq: u64,
    pub corpora: BTreeMap<String, CorpusRecord>,
    pub sentences: HashMap<String, Arc<SentenceRecord>>,
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl StoreState {
    pub fn sentence(&self, sent_id: &str) -> Result<&Arc<SentenceRecord>, StoreError> {
        self.sentences
            .get(sent_id)
            .ok_or_else(|| StoreError::NotFound(format!("sentence {sent_id}")))
    }

    pub fn corpus(&self, corpus_id: &str) -> Result<&CorpusRecord, StoreError> {
        self.corpora
            .get(corpus_id)
            .ok_or_else(|| StoreError::NotFound(format!("corpus {corpus_id}")))
    }

    pub fn apply(&mut self, event: &Event) -> Result<Outcome, StoreError> {
        match event {
            Event::CorpusImported {
                corpus_id,
                machine,
                gold,
            } => self.import(corpus_id, machine, gold.as_deref()),
            Event::Corrected(c) => self.correct(c),
            Event::Accepted {
                sent_id, annotator_id, ..
            } => self.accept(sent_id, annotator_id),
        }
    }

    fn import(
        &mut self,
        corpus_id: &str,
        machine: &[Sentence],
        gold: Option<&[Sentence]>,
    ) -> Result<Outcome, StoreError> {
        if self.corpora.contains_key(corpus_id) {
            return Err(StoreError::Invalid(format!("corpus {corpus_id} already imported")));
        }
        let mut gold_by_id: HashMap<&str, &Sentence> = HashMap::new();
        if let Some(gold) = gold {
            gold_by_id = gold.iter().map(|s| (s.sent_id.as_str(), s)).collect();
            let missing: Vec<&str> = machine
                .iter()
                .map(|s| s.sent_id.as_str())
                .filter(|id| !gold_by_id.contains_key(id))
                .collect();
            if !missing.is_empty() {
                return Err(StoreError::Invalid(format!("gold is missing {}", missing.join(", "))));
            }
        }
        let mut seen = BTreeSet::new();
        for s in machine {
            if self.sentences.contains_key(&s.sent_id) || !seen.insert(s.sent_id.as_str()) {
                return Err(StoreError::Invalid(format!("duplicate sentence id {}", s.sent_id)));
            }
        }
        for s in machine {
            let record = SentenceRecord {
                corpus_id: corpus_id.to_string(),
                machine: s.clone(),
                current: s.clone(),
                gold: gold_by_id.get(s.sent_id.as_str()).map(|g| (*g).clone()),
                history: Vec::new(),
                status: Status::Pending,
                reviewed_by: BTreeSet::new(),
                tracks: BTreeMap::new(),
            };
            self.sentences.insert(s.sent_id.clone(), Arc::new(record));
        }
        self.corpora.insert(
            corpus_id.to_string(),
            CorpusRecord {
                id: corpus_id.to_string(),
                sent_ids: machine.iter().map(|s| s.sent_id.clone()).collect(),
                has_gold: gold.is_some(),
            },
        );
        Ok(Outcome::Imported {
            corpus_id: corpus_id.to_string(),
            sentences: machine.len(),
        })
    }

    fn correct(&mut self, c: &Correction) -> Result<Outcome, StoreError> {
        if c.annotator_id.trim().is_empty() {
            return Err(StoreError::Invalid("annotator id is required".into()));
        }
        let mut record = SentenceRecord::clone(self.sentence(&c.sent_id)?);
        check_correction(&record.current, c)?;
        c.field.set(&mut record.current, c.token_id, &c.new_value);
        record.history.push(c.clone());
        record
            .tracks
            .entry(c.annotator_id.clone())
            .or_default()
            .entry(c.token_id)
            .or_default()
            .insert(c.field, c.new_value.clone());
        let violations = validate(&record.current);
        record.status = match record.status {
            Status::Accepted => Status::InReview,
            Status::Pending if count_hard(&violations) == 0 => Status::InReview,
            other => other,
        };
        let outcome = Outcome::Updated {
            sentence: record.current.clone(),
            violations,
            state: record.review_state(),
        };
        self.sentences.insert(c.sent_id.clone(), Arc::new(record));
        Ok(outcome)
    }

    fn accept(&mut self, sent_id: &str, annotator_id: &str) -> Result<Outcome, StoreError> {
        if annotator_id.trim().is_empty() {
            return Err(StoreError::Invalid("annotator id is required".into()));
        }
        let mut record = SentenceRecord::clone(self.sentence(sent_id)?);
        let violations = validate(&record.current);
        if count_hard(&violations) > 0 {
            return Err(StoreError::Blocked {
                sent_id: sent_id.to_string(),
                violations,
            });
        }
        record.status = Status::Accepted;
        record.reviewed_by.insert(annotator_id.to_string());
        let track = record.tracks.entry(annotator_id.to_string()).or_default();
        for t in &record.current.tokens {
            let labels = track.entry(t.id).or_default();
            for f in Field::TOKEN_FIELDS {
                labels.insert(f, f.get(&record.current, t.id).expect("token exists"));
            }
        }
        track
            .entry(0)
            .or_default()
            .insert(Field::Spec, Field::Spec.get(&record.current, 0).expect("spec"));
        let outcome = Outcome::Updated {
            sentence: record.current.clone(),
            violations,
            state: record.review_state(),
        };
        self.sentences.insert(sent_id.to_string(), Arc::new(record));
        Ok(outcome)
    }

    /// Sentences of a corpus in import order, optionally filtered by status.
    pub fn corpus_sentences(
        &self,
        corpus_id: &str,
        status: Option<Status>,
    ) -> Result<Vec<&Arc<SentenceRecord>>, StoreError> {
        let corpus = self.corpus(corpus_id)?;
        Ok(corpus
            .sent_ids
            .iter()
            .map(|id| &self.sentences[id])
            .filter(|r| status.is_none_or(|s| r.status == s))
            .collect())
    }

    /// Cohen's kappa between two annotators' own labels for one field. With
    /// no `sent_ids`, every sentence either annotator touched is compared.
    pub fn agreement(
        &self,
        a: &str,
        b: &str,
        field: Field,
        sent_ids: Option<&[String]>,
    ) -> Result<Agreement, StoreError> {
        let ids: Vec<String> = match sent_ids {
            Some(ids) => ids.to_vec(),
            None => {
                let mut ids: Vec<String> = self
                    .sentences
                    .iter()
                    .filter(|(_, r)| r.tracks.contains_key(a) || r.tracks.contains_key(b))
                    .map(|(id, _)| id.clone())
                    .collect();
                ids.sort();
                ids
            }
        };
        if ids.is_empty() {
            return Err(StoreError::Incomplete {
                missing: vec![format!("no labels from {a} or {b}")],
            });
        }
        let mut la = Vec::new();
        let mut lb = Vec::new();
        let mut missing = Vec::new();
        for id in &ids {
            let record = self.sentence(id)?;
            let token_ids: Vec<u32> = if field == Field::Spec {
                vec![0]
            } else {
                record.current.tokens.iter().map(|t| t.id).collect()
            };
            for tid in token_ids {
                let label = |who: &str| {
                    record
                        .tracks
                        .get(who)
                        .and_then(|t| t.get(&tid))
                        .and_then(|f| f.get(&field))
                };
                match (label(a), label(b)) {
                    (Some(x), Some(y)) => {
                        la.push(x.clone());
                        lb.push(y.clone());
                    }
                    (x, y) => {
                        if x.is_none() {
                            missing.push(format!("{a}:{id}#{tid}"));
                        }
                        if y.is_none() {
                            missing.push(format!("{b}:{id}#{tid}"));
                        }
                    }
                }
            }
        }
        if !missing.is_empty() {
            return Err(StoreError::Incomplete { missing });
        }
        let kappa = cohen_kappa::<f64, String>(&la, &lb).map_err(|e| StoreError::Invalid(e.to_string()))?;
        Ok(Agreement {
            annotator_a: a.to_string(),
            annotator_b: b.to_string(),
            field,
            n: la.len(),
            kappa,
        })
    }

    /// Machine annotations of a corpus scored against gold or against the
    /// reviewed state.
    pub fn report(
        &self,
        corpus_id: &str,
        reference: Reference,
        groups: &EquivalenceGroups,
    ) -> Result<EvalReport, StoreError> {
        let records = self.corpus_sentences(corpus_id, None)?;
        if records.is_empty() {
            return Err(StoreError::Invalid(format!("corpus {corpus_id} is empty")));
        }
        let machine = Corpus::new("machine", records.iter().map(|r| r.machine.clone()).collect());
        let reference_sentences = records
            .iter()
            .map(|r| match reference {
                Reference::Reviewed => Ok(r.current.clone()),
                Reference::Gold => r
                    .gold
                    .clone()
                    .ok_or_else(|| StoreError::NotFound(format!("gold reference for corpus {corpus_id}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        corpus_report(&Corpus::new("reference", reference_sentences), &machine, groups)
            .map_err(|e| StoreError::Invalid(e.to_string()))
    }

    /// Current (reviewed) annotations of a corpus.
    pub fn current_corpus(&self, corpus_id: &str) -> Result<Corpus, StoreError> {
        let records = self.corpus_sentences(corpus_id, None)?;
        Ok(Corpus::new(
            corpus_id,
            records.iter().map(|r| r.current.clone()).collect(),
        ))
    }
}

fn check_correction(s: &Sentence, c: &Correction) -> Result<(), StoreError> {
    if c.field == Field::Spec {
        if c.token_id != 0 {
            return Err(StoreError::Invalid("SPEC corrections use token id 0".into()));
        }
    } else if s.token(c.token_id).is_none() {
        return Err(StoreError::NotFound(format!("token {} of {}", c.token_id, c.sent_id)));
    }
    if c.old_value == c.new_value {
        return Err(StoreError::Invalid("correction does not change the value".into()));
    }
    c.field.check(&c.new_value, s.len()).map_err(StoreError::Invalid)?;
    let current = c.field.get(s, c.token_id).expect("token checked above");
    if current != c.old_value {
        return Err(StoreError::Conflict {
            sent_id: c.sent_id.clone(),
            token_id: c.token_id,
            field: c.field,
            expected: c.old_value.clone(),
            current,
        });
    }
    Ok(())
}

/// Rebuilds a sentence by applying its correction history to the machine
/// annotation, checking every old value on the way.
pub fn replay_sentence(machine: &Sentence, history: &[Correction]) -> Result<Sentence, StoreError> {
    let mut s = machine.clone();
    for c in history {
        check_correction(&s, c)?;
        c.field.set(&mut s, c.token_id, &c.new_value);
    }
    Ok(s)
}

struct Writer {
    log: Option<(PathBuf, File)>,
    snapshot_every: u64,
    since_snapshot: u64,
}

/// Shared store handle. Reads take a consistent snapshot without locking;
/// writes are serialized through a single writer.
pub struct Store {
    state: ArcSwap<StoreState>,
    writer: Mutex<Writer>,
}

impl std::fmt::Debug for Store {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Store").field("seq", &self.state.load().seq).finish()
    }
}

pub fn snapshot_path(log: &Path) -> PathBuf {
    let mut name = log.as_os_str().to_owned();
    name.push(".snapshot");
    PathBuf::from(name)
}

impl Store {
    pub fn in_memory() -> Self {
        Store {
            state: ArcSwap::from_pointee(StoreState::default()),
            writer: Mutex::new(Writer {
                log: None,
                snapshot_every: 0,
                since_snapshot: 0,
            }),
        }
    }

    /// Opens a log file, creating it if needed. A snapshot written every
    /// `snapshot_every` events (0 disables snapshots) is loaded first; the
    /// log is replayed from the snapshot's sequence number.
    pub fn open(path: &Path, snapshot_every: u64) -> Result<Self, StoreError> {
        let io = |p: &Path| {
            let p = p.display().to_string();
            move |source| StoreError::Io { path: p, source }
        };
        let snap = snapshot_path(path);
        let mut state = if snap.exists() {
            let text = fs::read_to_string(&snap).map_err(io(&snap))?;
            serde_json::from_str(&text).map_err(|e| StoreError::Corrupt {
                path: snap.display().to_string(),
                line: e.line(),
                message: e.to_string(),
            })?
        } else {
            StoreState::default()
        };
        if path.exists() {
            let reader = BufReader::new(File::open(path).map_err(io(path))?);
            let lines: Vec<String> = reader.lines().collect::<Result<_, _>>().map_err(io(path))?;
            let last = lines.len();
            for (idx, line) in lines.iter().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let corrupt = |message: String| StoreError::Corrupt {
                    path: path.display().to_string(),
                    line: idx + 1,
                    message,
                };
                let logged: LoggedEvent = match serde_json::from_str(line) {
                    Ok(l) => l,
                    Err(e) if idx + 1 == last => {
                        log::warn!("{}: ignoring truncated final line: {e}", path.display());
                        break;
                    }
                    Err(e) => return Err(corrupt(e.to_string())),
                };
                if logged.seq <= state.seq {
                    continue;
                }
                state.apply(&logged.event).map_err(|e| corrupt(e.to_string()))?;
                state.seq = logged.seq;
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io(path))?;
        Ok(Store {
            state: ArcSwap::from_pointee(state),
            writer: Mutex::new(Writer {
                log: Some((path.to_path_buf(), file)),
                snapshot_every,
                since_snapshot: 0,
            }),
        })
    }

    /// Consistent read-only view of the whole store.
    pub fn snapshot(&self) -> Arc<StoreState> {
        self.state.load_full()
    }

    /// Validates and applies an event, appends it to the log, then publishes
    /// the new state.
    pub fn commit(&self, event: Event) -> Result<Outcome, StoreError> {
        let mut writer = self.writer.lock().expect("store writer lock");
        let mut next = StoreState::clone(&self.state.load());
        let outcome = next.apply(&event)?;
        next.seq += 1;
        if let Some((path, file)) = writer.log.as_mut() {
            let line = serde_json::to_string(&LoggedEvent { seq: next.seq, event }).expect("event serializes");
            writeln!(file, "{line}")
                .and_then(|_| file.flush())
                .map_err(|source| StoreError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
        }
        let next = Arc::new(next);
        self.state.store(Arc::clone(&next));
        writer.since_snapshot += 1;
        if writer.snapshot_every > 0 && writer.since_snapshot >= writer.snapshot_every {
            if let Some((path, _)) = writer.log.as_ref() {
                write_snapshot(path, &next)?;
            }
            writer.since_snapshot = 0;
        }
        Ok(outcome)
    }

    pub fn import(&self, corpus_id: &str, machine: &Corpus, gold: Option<&Corpus>) -> Result<Outcome, StoreError> {
        self.commit(Event::CorpusImported {
            corpus_id: corpus_id.to_string(),
            machine: machine.sentences.clone(),
            gold: gold.map(|g| g.sentences.clone()),
        })
    }

    pub fn apply_correction(&self, c: Correction) -> Result<Outcome, StoreError> {
        self.commit(Event::Corrected(c))
    }

    /// Records a correction stamped with the current time.
    pub fn correct(
        &self,
        sent_id: &str,
        token_id: u32,
        field: Field,
        old_value: &str,
        new_value: &str,
        annotator_id: &str,
    ) -> Result<Outcome, StoreError> {
        self.apply_correction(Correction {
            sent_id: sent_id.to_string(),
            token_id,
            field,
            old_value: old_value.to_string(),
            new_value: new_value.to_string(),
            annotator_id: annotator_id.to_string(),
            timestamp: now(),
        })
    }

    pub fn accept(&self, sent_id: &str, annotator_id: &str) -> Result<Outcome, StoreError> {
        self.commit(Event::Accepted {
            sent_id: sent_id.to_string(),
            annotator_id: annotator_id.to_string(),
            timestamp: now(),
        })
    }
}

fn write_snapshot(log: &Path, state: &StoreState) -> Result<(), StoreError> {
    let path = snapshot_path(log);
    let tmp = path.with_extension("snapshot.tmp");
    let io = |source| StoreError::Io {
        path: path.display().to_string(),
        source,
    };
    fs::write(&tmp, serde_json::to_vec(state).expect("state serializes")).map_err(io)?;
    fs::rename(&tmp, &path).map_err(io)
}
