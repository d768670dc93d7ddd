mod common;

use common::{code, cswud, fixtures, Tripwire};

fn fx(rel: &str) -> String {
    fixtures().join(rel).display().to_string()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&cswud(&["--help"])), 0);
    assert_eq!(code(&cswud(&["validate", &fx("worked/table5.bln")])), 0);
    assert_eq!(code(&cswud(&["validate", &fx("worked/table3.bln")])), 1);
    assert_eq!(code(&cswud(&["validate", "--hard-only", &fx("worked/table3.bln")])), 0);
    assert_eq!(code(&cswud(&["validate", "/nonexistent.bln"])), 2);
    assert_eq!(code(&cswud(&["frobnicate"])), 64);
    assert_eq!(
        code(&cswud(&["validate", "--csw-only", "--emoji", &fx("worked/table3.bln")])),
        64
    );
    assert_eq!(code(&cswud(&["--jobs", "0", "validate", &fx("worked/table3.bln")])), 64);
}

#[test]
fn validate_json_lists_violations() {
    let out = cswud(&["validate", "--json", &fx("worked/table3.bln")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["code"], "HEAD_FORM_MISMATCH");
    assert_eq!(v[0]["token_id"], 4);
}

#[test]
fn self_evaluation_is_perfect() {
    let gold = fx("miami/gold_mini.bln");
    let out = cswud(&["evaluate", "--gold", &gold, "--pred", &gold]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in [
        "upos_acc",
        "deprel_acc_strict",
        "deprel_acc_relaxed",
        "las_strict",
        "las_relaxed",
    ] {
        assert_eq!(v[key], 1.0, "{key}");
    }
}

#[test]
fn evaluation_subset_matches_filtered_files() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.bln");
    let o = cswud(&[
        "filter",
        &fx("miami/gold_mini.bln"),
        "--analysis-out",
        gold.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let pred = fx("miami/pred_mini.bln");
    let flagged = cswud(&[
        "evaluate",
        "--gold",
        &fx("miami/gold_mini.bln"),
        "--pred",
        &pred,
        "--analysis-only",
    ]);
    let filtered = cswud(&["evaluate", "--gold", gold.to_str().unwrap(), "--pred", &pred]);
    assert_eq!(code(&flagged), 0, "{}", String::from_utf8_lossy(&flagged.stderr));
    assert_eq!(flagged.stdout, filtered.stdout);
    let v: serde_json::Value = serde_json::from_slice(&flagged.stdout).unwrap();
    assert!(v["n_tokens"].as_u64().unwrap() < 64);
}

/// Runs ingest and filter to rebuild the CSW input the cache was seeded from.
fn miami_csw(dir: &std::path::Path) -> String {
    let all = dir.join("all.bln");
    let csw = dir.join("csw.bln");
    assert_eq!(
        code(&cswud(&[
            "ingest",
            &fx("miami/miami_mini.txt"),
            "-o",
            all.to_str().unwrap()
        ])),
        0
    );
    assert_eq!(
        code(&cswud(&[
            "filter",
            all.to_str().unwrap(),
            "--csw-out",
            csw.to_str().unwrap()
        ])),
        0
    );
    csw.display().to_string()
}

#[test]
fn offline_annotation_is_repeatable_and_silent() {
    let dir = tempfile::tempdir().unwrap();
    let trip = Tripwire::start();
    let cfg = trip.write_config(dir.path());
    let cache = dir.path().join("cache.jsonl");
    std::fs::copy(fixtures().join("miami/cache.jsonl"), &cache).unwrap();
    let input = miami_csw(dir.path());
    let mut outputs = Vec::new();
    for (i, jobs) in ["1", "4"].iter().enumerate() {
        let out = dir.path().join(format!("pred{i}.bln"));
        let o = cswud(&[
            "--jobs",
            jobs,
            "annotate",
            &input,
            "--cache",
            cache.to_str().unwrap(),
            "--offline",
            "--llm-config",
            cfg.to_str().unwrap(),
            "-o",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(
        outputs[0],
        std::fs::read(fixtures().join("miami/pred_mini.bln")).unwrap()
    );
    assert_eq!(trip.hits(), 0);
}

#[test]
fn offline_cache_miss_fails_without_network() {
    let dir = tempfile::tempdir().unwrap();
    let trip = Tripwire::start();
    let cfg = trip.write_config(dir.path());
    let cache = dir.path().join("empty.jsonl");
    let out = dir.path().join("pred.bln");
    let args = |offline: bool| {
        let mut a = vec![
            "annotate".to_string(),
            fx("worked/table3.bln"),
            "--cache".into(),
            cache.display().to_string(),
            "--llm-config".into(),
            cfg.display().to_string(),
            "-o".into(),
            out.display().to_string(),
        ];
        if offline {
            a.push("--offline".into());
        }
        a
    };
    let run = |offline| {
        let a = args(offline);
        cswud(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    assert_eq!(code(&run(true)), 2);
    assert_eq!(trip.hits(), 0);
    assert!(!out.exists());

    // Control: the same run without --offline does reach the endpoint.
    assert_eq!(code(&run(false)), 2);
    assert!(trip.hits() > 0);
}

#[test]
fn ingest_filter_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let bln = dir.path().join("g.bln");
    let stats = dir.path().join("stats.json");
    let o = cswud(&[
        "ingest",
        &fx("guaspa/guaspa_mini.txt"),
        "--format",
        "guaspa",
        "-o",
        bln.to_str().unwrap(),
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        std::fs::read(&stats).unwrap(),
        std::fs::read(fixtures().join("golden/guaspa_stats.json")).unwrap()
    );

    let analysis = dir.path().join("a.bln");
    let o = cswud(&[
        "filter",
        bln.to_str().unwrap(),
        "--analysis-out",
        analysis.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&analysis).unwrap();
    assert_eq!(text.matches("# sent_id").count(), 8);

    let o = cswud(&["export-conllu", &fx("guaspa/guaspa_gold.bln"), "--emoji"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.matches("# sent_id").count(), 3);
    assert!(text
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .all(|l| l.split('\t').count() == 10));
}
