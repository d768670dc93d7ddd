use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use proptest::prelude::*;

use cswud_core::annotator::parse_response;
use cswud_core::conllu::{
    children_map, parse_corpus, parse_table, serialize, serialize_corpus, validate, Corpus, Deprel, LangPair, LangTag,
    Sentence, Token, Upos,
};
use cswud_core::evaluation::{cohen_kappa, corpus_report_as, EquivalenceGroups};
use cswud_core::ingestion::{filter_corpus, is_code_switched};
use cswud_core::switchpoint::{aggregate, detect_corpus, detect_switch_points, Field, SwitchMode};

const DEPRELS: &[&str] = &[
    "nsubj",
    "obj",
    "obl",
    "nmod",
    "advmod",
    "amod",
    "root",
    "punct",
    "conj",
    "cc",
    "mark",
    "xcomp",
    "ccomp",
    "det",
    "case",
    "acl:relcl",
    "discourse",
    "attr",
    "nmod:poss",
];

fn lang() -> impl Strategy<Value = LangTag> {
    prop_oneof![
        Just(LangTag::En),
        Just(LangTag::Es),
        Just(LangTag::Gn),
        Just(LangTag::Other),
        "[a-z]{2,4}".prop_map(LangTag::Ne),
    ]
}

fn upos() -> impl Strategy<Value = Option<Upos>> {
    prop_oneof![
        1 => Just(None),
        8 => proptest::sample::select(Upos::INVENTORY.to_vec()).prop_map(Some),
        1 => Just(Some(Upos::Unknown("XYZ".into()))),
    ]
}

fn deprel() -> impl Strategy<Value = Option<Deprel>> {
    prop_oneof![1 => Just(None), 8 => proptest::sample::select(DEPRELS).prop_map(|d| Some(Deprel::new(d)))]
}

fn sentence() -> impl Strategy<Value = Sentence> {
    (1usize..9)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(
                    (
                        "[a-zA-Záñü'.,!?🙂]{1,6}",
                        lang(),
                        "[a-z_]{1,5}",
                        upos(),
                        proptest::option::of(0..=n as u32),
                        deprel(),
                    ),
                    n,
                ),
                "[a-z0-9-]{1,8}",
                proptest::option::of("[A-Z]{3}"),
                any::<bool>(),
                prop_oneof![Just(LangPair::SpaEng), Just(LangPair::SpaGua)],
            )
        })
        .prop_map(|(rows, sent_id, speaker, spec, pair)| {
            let tokens = rows
                .into_iter()
                .enumerate()
                .map(|(i, (form, lang, lemma, upos, head_id, deprel))| Token {
                    id: i as u32 + 1,
                    form,
                    lang,
                    lemma,
                    upos,
                    head_id,
                    head_form: head_id.map(|_| "x".into()),
                    deprel,
                })
                .collect();
            let mut s = Sentence::new(sent_id, pair, tokens);
            s.speaker = speaker;
            s.spec = spec;
            s.refresh_head_forms();
            s
        })
}

/// Random well-formed tree: every token attaches to an earlier-visited node.
fn tree() -> impl Strategy<Value = Sentence> {
    (1usize..10)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<prop::sample::Index>(), n),
                Just(n).prop_shuffle_order(),
                proptest::collection::vec(lang(), n),
            )
        })
        .prop_map(|(picks, order, langs)| {
            let n = order.len();
            let mut heads = vec![0u32; n];
            for k in 1..n {
                heads[order[k]] = order[picks[k].index(k)] as u32 + 1;
            }
            let tokens = (0..n)
                .map(|i| Token {
                    id: i as u32 + 1,
                    form: format!("w{i}"),
                    lang: langs[i].clone(),
                    lemma: format!("w{i}"),
                    upos: Some(Upos::Noun),
                    head_id: Some(heads[i]),
                    head_form: Some("x".into()),
                    deprel: Some(Deprel::new(if heads[i] == 0 { "root" } else { "dep" })),
                })
                .collect();
            let mut s = Sentence::new("t", LangPair::SpaEng, tokens);
            s.refresh_head_forms();
            s
        })
}

trait ShuffleOrder {
    fn prop_shuffle_order(self) -> BoxedStrategy<Vec<usize>>;
}

impl ShuffleOrder for Just<usize> {
    fn prop_shuffle_order(self) -> BoxedStrategy<Vec<usize>> {
        Just((0..self.0).collect::<Vec<usize>>()).prop_shuffle().boxed()
    }
}

fn reaches_root(s: &Sentence, start: u32) -> bool {
    let mut cur = start;
    for _ in 0..=s.len() {
        match s.token(cur).and_then(|t| t.head_id) {
            Some(0) => return true,
            Some(h) => cur = h,
            None => return false,
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn table_round_trip(s in sentence()) {
        let text = serialize(&s);
        let back = parse_table(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn corpus_round_trip(ss in proptest::collection::vec(sentence(), 0..5)) {
        let c = Corpus::new("c", ss);
        let back = parse_corpus("c", &serialize_corpus(&c)).unwrap();
        prop_assert_eq!(back.sentences, c.sentences);
    }

    #[test]
    fn validate_is_deterministic_and_sorted(s in sentence()) {
        let a = validate(&s);
        prop_assert_eq!(&a, &validate(&s));
        let keys: Vec<_> = a.iter().map(|v| (v.token_id, v.code)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        prop_assert_eq!(keys, sorted);
    }

    #[test]
    fn clean_full_trees_are_trees(s in sentence()) {
        let hard = validate(&s).iter().any(|v| v.code.is_hard());
        if !hard && s.tokens.iter().all(|t| t.head_id.is_some()) {
            prop_assert_eq!(s.tokens.iter().filter(|t| t.head_id == Some(0)).count(), 1);
            for t in &s.tokens {
                prop_assert!(reaches_root(&s, t.id));
            }
        }
    }

    #[test]
    fn generated_trees_validate_and_map(s in tree()) {
        prop_assert!(validate(&s).iter().all(|v| !v.code.is_hard()));
        let map = children_map(&s).unwrap();
        let total: usize = map.values().map(Vec::len).sum();
        prop_assert_eq!(total, s.len() - 1);
        let mut seen: Vec<u32> = map.values().flatten().copied().collect();
        seen.sort();
        let root = s.tokens.iter().find(|t| t.head_id == Some(0)).unwrap().id;
        let expected: Vec<u32> = (1..=s.len() as u32).filter(|&i| i != root).collect();
        prop_assert_eq!(seen, expected);
    }

    #[test]
    fn filter_is_idempotent_and_counts_nest(ss in proptest::collection::vec(sentence(), 0..12)) {
        let c = Corpus::new("c", ss);
        let (csw, analysis, stats) = filter_corpus(&c);
        let (csw2, _, _) = filter_corpus(&csw);
        prop_assert_eq!(&csw2.sentences, &csw.sentences);
        prop_assert!(stats.n_analysis_sentences <= stats.n_csw_sentences && stats.n_csw_sentences <= stats.n_sentences);
        let brute_csw = c.sentences.iter().filter(|s| {
            let mut langs: Vec<&LangTag> = s.tokens.iter().map(|t| &t.lang).filter(|l| l.is_content()).collect();
            langs.sort_by_key(|l| l.code());
            langs.dedup();
            langs.len() >= 2
        }).count();
        prop_assert_eq!(stats.n_csw_sentences, brute_csw);
        prop_assert_eq!(analysis.len(), csw.sentences.iter().filter(|s| s.len() >= 3).count());
    }

    #[test]
    fn neutral_tokens_never_change_code_switching(s in sentence(), at in any::<prop::sample::Index>(), ne in any::<bool>()) {
        let before = is_code_switched(&s);
        let before_records: Vec<_> = detect_switch_points(&s)
            .into_iter()
            .map(|r| (r.from_lang, r.to_lang, r.upos, r.deprel))
            .collect();
        let mut t = s.clone();
        let pos = at.index(t.len() + 1);
        let lang = if ne { LangTag::Ne("per".into()) } else { LangTag::Other };
        t.tokens.insert(pos, Token::bare(0, ".", lang));
        for (i, tok) in t.tokens.iter_mut().enumerate() {
            tok.id = i as u32 + 1;
        }
        prop_assert_eq!(is_code_switched(&t), before);
        let after: Vec<_> = detect_switch_points(&t)
            .into_iter()
            .map(|r| (r.from_lang, r.to_lang, r.upos, r.deprel))
            .collect();
        prop_assert_eq!(after, before_records);
    }

    #[test]
    fn switch_counts_are_conserved(ss in proptest::collection::vec(sentence(), 0..8)) {
        let c = Corpus::new("c", ss);
        let records = detect_corpus(&c, SwitchMode::HoldContent);
        let mut by_dir: HashMap<String, usize> = HashMap::new();
        for r in &records {
            prop_assert!(r.from_lang != r.to_lang && r.from_lang.is_content() && r.to_lang.is_content());
            *by_dir.entry(r.direction().to_string()).or_default() += 1;
        }
        let directions: std::collections::BTreeSet<_> = records.iter().map(|r| r.direction()).collect();
        let mut per_direction = 0;
        for d in &directions {
            let dist = aggregate(&records, Field::Upos, Some(d));
            let labelled = records.iter().filter(|x| &x.direction() == d && x.upos.is_some()).count();
            prop_assert_eq!(dist.total(), labelled);
            per_direction += by_dir[&d.to_string()];
        }
        prop_assert_eq!(per_direction, records.len());
        let pooled = aggregate(&records, Field::Deprel, None);
        if pooled.total() > 0 {
            let p: f64 = pooled.proportions.values().sum();
            prop_assert!((p - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_relaxed_dominates_strict(pairs in proptest::collection::vec((sentence(), any::<u64>()), 1..6)) {
        let mut gold = Vec::new();
        let mut pred = Vec::new();
        for (i, (s, seed)) in pairs.into_iter().enumerate() {
            let mut g = s.clone();
            g.sent_id = format!("s{i}");
            let mut p = g.clone();
            for (k, t) in p.tokens.iter_mut().enumerate() {
                if (seed >> k) & 1 == 1 {
                    t.deprel = Some(Deprel::new(DEPRELS[(seed as usize + k) % DEPRELS.len()]));
                }
                if (seed >> (k + 16)) & 1 == 1 {
                    t.head_id = Some(0);
                }
            }
            gold.push(g);
            pred.push(p);
        }
        let r = corpus_report_as::<Ratio<i64>>(&Corpus::new("g", gold), &Corpus::new("p", pred), &EquivalenceGroups::default()).unwrap();
        prop_assert!(r.las_relaxed >= r.las_strict);
        prop_assert!(r.deprel_acc_relaxed >= r.deprel_acc_strict);
        prop_assert!(r.deprel_acc_strict >= r.las_strict);
        prop_assert!(r.upos_acc <= Ratio::from_integer(1));
    }

    #[test]
    fn kappa_is_bounded_and_permutation_invariant(
        pairs in proptest::collection::vec((0u8..4, 0u8..4), 1..30),
        seed in any::<u64>(),
    ) {
        let a: Vec<u8> = pairs.iter().map(|p| p.0).collect();
        let b: Vec<u8> = pairs.iter().map(|p| p.1).collect();
        let k: Ratio<i64> = cohen_kappa(&a, &b).unwrap();
        prop_assert!(k <= Ratio::from_integer(1));
        let mut idx: Vec<usize> = (0..a.len()).collect();
        idx.sort_by_key(|&i| (i as u64).wrapping_mul(seed | 1).rotate_left(17));
        let a2: Vec<u8> = idx.iter().map(|&i| a[i]).collect();
        let b2: Vec<u8> = idx.iter().map(|&i| b[i]).collect();
        prop_assert_eq!(cohen_kappa::<Ratio<i64>, u8>(&a2, &b2).unwrap(), k);
        if a == b {
            prop_assert_eq!(k, Ratio::from_integer(1));
        }
    }

    #[test]
    fn contraction_alignment_restores_input(words in proptest::collection::vec(("[a-z]{1,5}", any::<bool>()), 1..7)) {
        let input_tokens: Vec<Token> = words
            .iter()
            .enumerate()
            .map(|(i, (w, contracted))| {
                let form = if *contracted { format!("{w}n't") } else { w.clone() };
                Token::bare(i as u32 + 1, form, LangTag::En)
            })
            .collect();
        let input = Sentence::new("a", LangPair::SpaEng, input_tokens);
        let mut forms = Vec::new();
        for (w, contracted) in &words {
            if *contracted {
                forms.push(w.clone());
                forms.push("n't".to_string());
            } else {
                forms.push(w.clone());
            }
        }
        let mut answer = String::new();
        for (i, f) in forms.iter().enumerate() {
            let head = if i == 0 { 0 } else { 1 };
            let rel = if i == 0 { "root" } else { "dep" };
            answer.push_str(&format!("{}\t{f}\ten\t{f}\tX\t{head}\t_\t{rel}\n", i + 1));
        }
        let parsed = parse_response(&answer, &input).unwrap();
        prop_assert_eq!(parsed.sentence.len(), forms.len());
        let restored = parsed.alignment.restore_forms(&parsed.sentence);
        prop_assert_eq!(restored, input.forms().into_iter().map(str::to_string).collect::<Vec<_>>());
        let expanded: BTreeMap<u32, (u32, u32)> = parsed.alignment.expansions.clone();
        prop_assert_eq!(expanded.len(), words.iter().filter(|w| w.1).count());
    }
}
