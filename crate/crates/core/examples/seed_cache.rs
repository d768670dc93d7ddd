//! Rebuilds the fixture response cache and expected annotations from the
//! scripted answers in `fixtures/miami/responses.jsonl`.
//!
//! cargo run -p cswud-core --example seed_cache -- fixtures/miami

use std::fs;
use std::path::PathBuf;

use cswud_core::annotator::{annotate, LlmConfig, ResponseCache, ScriptedService};
use cswud_core::conllu::{serialize_corpus, Corpus};
use cswud_core::ingestion::{filter_corpus, read_miami};

#[derive(serde::Deserialize)]
struct Scripted {
    sent_id: String,
    answer: String,
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures/miami".into()));
    let raw = fs::read(dir.join("miami_mini.txt"))?;
    let corpus = read_miami(raw.as_slice(), "miami_mini.txt")?;
    let (csw, _, _) = filter_corpus(&corpus);

    let service = ScriptedService::new();
    for line in fs::read_to_string(dir.join("responses.jsonl"))?.lines() {
        let s: Scripted = serde_json::from_str(line)?;
        service.push(&s.sent_id, s.answer);
    }

    let cache_path = dir.join("cache.jsonl");
    let _ = fs::remove_file(&cache_path);
    let cache = ResponseCache::open(&cache_path)?;
    let cfg = LlmConfig::default();
    let mut out = Vec::new();
    for s in &csw.sentences {
        let a = annotate(s, &cfg, &cache, &service)?;
        eprintln!(
            "{}: attempts={} violations={}",
            s.sent_id,
            a.attempts,
            a.violations.len()
        );
        out.push(a.sentence);
    }
    let pred = Corpus::new("pred_mini", out);
    fs::write(dir.join("pred_mini.bln"), serialize_corpus(&pred))?;
    eprintln!("{} cached answers, {} service calls", cache.len(), service.calls());
    Ok(())
}
