//! Writes the seeded review store used by the tests:
//!
//! * corpus `worked`: the table3, table5, table6 and table7 sentences (gold = machine), with
//!   one head correction on table3 token 4 by `ann1`;
//! * corpus `agreement`: two sentences reviewed by annotators `a`, `b`, `c`.
//!
//! cargo run -p cswud-review --example seed_store -- fixtures

use std::fs;
use std::path::PathBuf;

use cswud_core::conllu::{parse_corpus, parse_table, Corpus};
use cswud_review::{Correction, Event, Field, Store};

fn correction(sent_id: &str, token_id: u32, field: Field, old: &str, new: &str, who: &str, ts: u64) -> Event {
    Event::Corrected(Correction {
        sent_id: sent_id.into(),
        token_id,
        field,
        old_value: old.into(),
        new_value: new.into(),
        annotator_id: who.into(),
        timestamp: ts,
    })
}

fn accept(sent_id: &str, who: &str, ts: u64) -> Event {
    Event::Accepted {
        sent_id: sent_id.into(),
        annotator_id: who.into(),
        timestamp: ts,
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    let out = root.join("review/store.jsonl");
    let _ = fs::remove_file(&out);
    let _ = fs::remove_file(cswud_review::store::snapshot_path(&out));
    let store = Store::open(&out, 0)?;

    let mut worked = Vec::new();
    for t in ["table3", "table5", "table6", "table7"] {
        worked.push(parse_table(&fs::read_to_string(root.join(format!("worked/{t}.bln")))?)?);
    }
    let worked = Corpus::new("worked", worked);
    store.import("worked", &worked, Some(&worked))?;
    store.commit(correction("table3", 4, Field::HeadId, "6", "5", "ann1", 1_700_000_000))?;

    let agreement = parse_corpus("agreement", &fs::read_to_string(root.join("review/agreement.bln"))?)?;
    store.import("agreement", &agreement, None)?;
    store.commit(accept("k4", "a", 1_700_000_100))?;
    store.commit(correction("k4", 3, Field::Deprel, "nsubj", "obj", "b", 1_700_000_200))?;
    store.commit(accept("k4", "b", 1_700_000_300))?;
    store.commit(accept("k4", "c", 1_700_000_400))?;
    store.commit(accept("k2", "a", 1_700_000_500))?;
    store.commit(correction("k2", 1, Field::Upos, "NOUN", "VERB", "b", 1_700_000_600))?;
    store.commit(correction("k2", 2, Field::Upos, "VERB", "NOUN", "b", 1_700_000_700))?;
    store.commit(accept("k2", "b", 1_700_000_800))?;
    eprintln!("wrote {} events to {}", store.snapshot().seq, out.display());
    Ok(())
}
