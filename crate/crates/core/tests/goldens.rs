use std::fs;
use std::path::{Path, PathBuf};

use cswud_core::annotator::{annotate, LlmConfig, OfflineService, ResponseCache};
use cswud_core::conllu::{parse_corpus, parse_table, serialize_corpus, validate, Corpus, ViolationCode};
use cswud_core::evaluation::{corpus_report, EquivalenceGroups};
use cswud_core::ingestion::{filter_corpus, read_guaspa, read_miami};
use cswud_core::switchpoint::{analysis_subset, export_distributions, split_by_emoji, EmojiRanges, SwitchMode};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read(rel: &str) -> String {
    fs::read_to_string(fixtures().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

fn bln(rel: &str) -> Corpus {
    parse_corpus(rel, &read(rel)).unwrap()
}

fn assert_json_close(expected: &serde_json::Value, actual: &serde_json::Value, path: &str) {
    use serde_json::Value;
    match (expected, actual) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            assert!((a - b).abs() <= 1e-12, "{path}: {a} vs {b}");
        }
        (Value::Object(a), Value::Object(b)) => {
            assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>(), "{path}");
            for (k, v) in a {
                assert_json_close(v, &b[k], &format!("{path}.{k}"));
            }
        }
        _ => assert_eq!(expected, actual, "{path}"),
    }
}

#[test]
fn miami_stats_match_golden() {
    let c = read_miami(read("miami/miami_mini.txt").as_bytes(), "miami_mini.txt").unwrap();
    assert_eq!(c.len(), 20);
    assert!(c.sentences.iter().all(|s| s.speaker.is_some()));
    let (_, _, stats) = filter_corpus(&c);
    assert_eq!(stats.to_json(), read("golden/miami_stats.json"));
}

#[test]
fn guaspa_stats_and_emoji_split() {
    let c = read_guaspa(read("guaspa/guaspa_mini.txt").as_bytes(), "guaspa_mini.txt").unwrap();
    let (_, _, stats) = filter_corpus(&c);
    assert_eq!(stats.to_json(), read("golden/guaspa_stats.json"));
    let (with, without) = split_by_emoji(&c, &EmojiRanges::default());
    assert_eq!((with.len(), without.len()), (3, 7));
    let ids: Vec<&str> = with.sentences.iter().map(|s| s.sent_id.as_str()).collect();
    assert_eq!(ids, ["g01", "g05", "g07"]);
}

#[test]
fn guaspa_gold_forms_match_raw() {
    let raw = read_guaspa(read("guaspa/guaspa_mini.txt").as_bytes(), "guaspa_mini.txt").unwrap();
    let gold = bln("guaspa/guaspa_gold.bln");
    for (r, g) in raw.sentences.iter().zip(&gold.sentences) {
        assert_eq!(r.forms(), g.forms());
        assert!(validate(g).is_empty(), "{}: {:?}", g.sent_id, validate(g));
    }
}

#[test]
fn default_groups_file_is_byte_identical() {
    assert_eq!(EquivalenceGroups::default().to_json(), read("equivalence_groups.json"));
}

#[test]
fn eval_report_matches_golden() {
    let report = corpus_report(
        &bln("miami/gold_mini.bln"),
        &bln("miami/pred_mini.bln"),
        &EquivalenceGroups::default(),
    )
    .unwrap();
    let expected: serde_json::Value = serde_json::from_str(&read("golden/eval_report.json")).unwrap();
    let actual: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_json_close(&expected, &actual, "report");
}

fn compare_dirs(golden: &Path, actual: &Path) {
    let mut names: Vec<_> = fs::read_dir(golden).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(!names.is_empty());
    for name in names {
        let g = fs::read(golden.join(&name)).unwrap();
        let a = fs::read(actual.join(&name)).unwrap_or_else(|e| panic!("{name:?}: {e}"));
        assert_eq!(String::from_utf8(g).unwrap(), String::from_utf8(a).unwrap(), "{name:?}");
    }
}

#[test]
fn switchpoint_csvs_match_goldens() {
    for (corpus, golden) in [
        ("miami/pred_mini.bln", "golden/switchpoints_miami"),
        ("guaspa/guaspa_gold.bln", "golden/switchpoints_guaspa"),
    ] {
        let dir = tempfile::tempdir().unwrap();
        let c = analysis_subset(&bln(corpus));
        export_distributions(&c, dir.path(), SwitchMode::HoldContent, &EmojiRanges::default()).unwrap();
        compare_dirs(&fixtures().join(golden), dir.path());
    }
}

#[test]
fn cached_annotation_reproduces_pred_fixture() {
    let raw = read_miami(read("miami/miami_mini.txt").as_bytes(), "miami_mini.txt").unwrap();
    let (csw, _, _) = filter_corpus(&raw);
    let cache = ResponseCache::open(&fixtures().join("miami/cache.jsonl")).unwrap();
    let cfg = LlmConfig::default();
    let out: Vec<_> = csw
        .sentences
        .iter()
        .map(|s| annotate(s, &cfg, &cache, &OfflineService).unwrap())
        .collect();
    let s03 = out.iter().find(|a| a.sentence.sent_id == "s03").unwrap();
    assert_eq!(s03.attempts, 1);
    let s06 = out.iter().find(|a| a.sentence.sent_id == "s06").unwrap();
    assert_eq!(s06.alignment.expansions.get(&2), Some(&(2, 3)));
    let pred = Corpus::new("pred", out.into_iter().map(|a| a.sentence).collect());
    assert_eq!(serialize_corpus(&pred), read("miami/pred_mini.bln"));
}

#[test]
fn worked_tables_validate_as_documented() {
    let t3 = parse_table(&read("worked/table3.bln")).unwrap();
    let v = validate(&t3);
    assert_eq!(v.len(), 1);
    assert_eq!((v[0].code, v[0].token_id), (ViolationCode::HeadFormMismatch, Some(4)));
    for t in ["worked/table5.bln", "worked/table6.bln", "worked/table7.bln"] {
        assert_eq!(validate(&parse_table(&read(t)).unwrap()), vec![], "{t}");
    }
}
