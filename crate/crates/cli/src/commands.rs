use std::fs;
use std::io::{BufReader, Write};
use std::path::Path;
use std::process::ExitCode;
use std::sync::OnceLock;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;

use cswud_core::annotator::{
    annotate, ChatService, HttpChatService, LlmConfig, OfflineService, PromptBundle, ResponseCache, ServiceError,
};
use cswud_core::conllu::{corpus_to_conllu, count_hard, parse_corpus, serialize_corpus, validate, Corpus, Subset};
use cswud_core::evaluation::{corpus_report, EquivalenceGroups};
use cswud_core::ingestion::{filter_corpus, is_analysis_eligible, is_code_switched, read_raw, RawFormat};
use cswud_core::switchpoint::{analysis_subset, export_distributions, EmojiRanges, SwitchMode};
use cswud_review::{ServiceConfig, Store};

use crate::{Cli, Command, ModeArg, RawFormatArg, SubsetArgs};

fn read_bln(path: &Path) -> Result<Corpus> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("corpus");
    parse_corpus(name, &text).map_err(|e| anyhow!(e.in_file(&path.display().to_string())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn select(c: Corpus, subset: &SubsetArgs) -> Corpus {
    let emoji = EmojiRanges::default();
    if subset.csw_only {
        c.retain_copy(Subset::Csw, is_code_switched)
    } else if subset.analysis_only {
        c.retain_copy(Subset::Analysis, is_analysis_eligible)
    } else if subset.emoji {
        c.retain_copy(c.subset, |s| emoji.sentence_has_emoji(s))
    } else if subset.non_emoji {
        c.retain_copy(c.subset, |s| !emoji.sentence_has_emoji(s))
    } else {
        c
    }
}

fn load_llm_config(path: Option<&Path>) -> Result<LlmConfig> {
    let cfg = match path {
        None => LlmConfig::default(),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
    };
    cfg.validate().context("invalid model settings")?;
    Ok(cfg)
}

/// Builds the HTTP client on first use, so fully cached runs never need
/// credentials.
struct LazyHttp {
    client: OnceLock<Result<HttpChatService, ServiceError>>,
}

impl ChatService for LazyHttp {
    fn complete(&self, cfg: &LlmConfig, prompt: &PromptBundle) -> Result<String, ServiceError> {
        match self.client.get_or_init(|| HttpChatService::from_env(cfg)) {
            Ok(client) => client.complete(cfg, prompt),
            Err(e) => Err(e.clone()),
        }
    }
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    let jobs = usize::from(cli.jobs);
    match cli.command {
        Command::Ingest {
            input,
            format,
            output,
            stats,
        } => {
            let file = fs::File::open(&input).with_context(|| format!("reading {}", input.display()))?;
            let format = match format {
                RawFormatArg::Miami => RawFormat::Miami,
                RawFormatArg::Guaspa => RawFormat::GuaSpa,
            };
            let source = input.display().to_string();
            let corpus = read_raw(BufReader::new(file), &source, format).map_err(|e| anyhow!(e.in_file(&source)))?;
            write_out(output.as_deref(), &serialize_corpus(&corpus))?;
            if let Some(p) = stats {
                write_out(Some(&p), &filter_corpus(&corpus).2.to_json())?;
            }
        }
        Command::Filter {
            input,
            csw_out,
            analysis_out,
            stats,
        } => {
            let corpus = read_bln(&input)?;
            let (csw, analysis, counts) = filter_corpus(&corpus);
            if let Some(p) = csw_out {
                write_out(Some(&p), &serialize_corpus(&csw))?;
            }
            if let Some(p) = analysis_out {
                write_out(Some(&p), &serialize_corpus(&analysis))?;
            }
            write_out(stats.as_deref(), &counts.to_json())?;
        }
        Command::Annotate {
            input,
            output,
            cache,
            offline,
            llm_config,
            subset,
        } => {
            let cfg = load_llm_config(llm_config.as_deref())?;
            let corpus = select(read_bln(&input)?, &subset);
            let cache = ResponseCache::open(&cache)?;
            let service: Box<dyn ChatService> = if offline {
                Box::new(OfflineService)
            } else {
                Box::new(LazyHttp {
                    client: OnceLock::new(),
                })
            };
            let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
            let results: Vec<_> = pool.install(|| {
                corpus
                    .sentences
                    .par_iter()
                    .map(|s| annotate(s, &cfg, &cache, service.as_ref()))
                    .collect()
            });
            let mut sentences = Vec::with_capacity(results.len());
            let mut failures = 0;
            let (mut retries, mut residual) = (0, 0);
            for r in results {
                match r {
                    Ok(a) => {
                        retries += a.attempts;
                        if a.hard_violations() > 0 {
                            residual += 1;
                            log::warn!(
                                "{}: {} hard violation(s) remain",
                                a.sentence.sent_id,
                                a.hard_violations()
                            );
                        }
                        sentences.push(a.sentence);
                    }
                    Err(e) => {
                        failures += 1;
                        eprintln!("error: {e}");
                    }
                }
            }
            if failures > 0 {
                bail!("{failures} of {} sentences could not be annotated", corpus.len());
            }
            eprintln!(
                "annotated {} sentences ({retries} re-prompts, {residual} with hard violations)",
                sentences.len()
            );
            write_out(
                output.as_deref(),
                &serialize_corpus(&Corpus::new(corpus.name, sentences)),
            )?;
        }
        Command::Validate {
            input,
            hard_only,
            json,
            subset,
        } => {
            let corpus = select(read_bln(&input)?, &subset);
            let violations: Vec<_> = corpus
                .sentences
                .iter()
                .flat_map(validate)
                .filter(|v| !hard_only || v.code.is_hard())
                .collect();
            if json {
                println!("{}", serde_json::to_string_pretty(&violations)?);
            } else {
                for v in &violations {
                    println!("{v}");
                }
            }
            eprintln!(
                "{} sentences, {} violations ({} hard)",
                corpus.len(),
                violations.len(),
                count_hard(&violations)
            );
            if !violations.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Evaluate {
            gold,
            pred,
            groups,
            output,
            subset,
        } => {
            let groups = match groups {
                Some(p) => EquivalenceGroups::load(&p).with_context(|| format!("reading {}", p.display()))?,
                None => EquivalenceGroups::default(),
            };
            let gold = select(read_bln(&gold)?, &subset);
            let pred = read_bln(&pred)?;
            let keep: std::collections::HashSet<&str> = gold.sentences.iter().map(|s| s.sent_id.as_str()).collect();
            let pred = pred.retain_copy(pred.subset, |s| keep.contains(s.sent_id.as_str()));
            let report = corpus_report(&gold, &pred, &groups)?;
            write_out(output.as_deref(), &report.to_json())?;
        }
        Command::Analyze {
            input,
            out_dir,
            mode,
            subset,
        } => {
            let corpus = analysis_subset(&select(read_bln(&input)?, &subset));
            let mode = match mode {
                ModeArg::Hold => SwitchMode::HoldContent,
                ModeArg::Strict => SwitchMode::StrictPrevious,
            };
            fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            let written = export_distributions(&corpus, &out_dir, mode, &EmojiRanges::default())?;
            eprintln!("{} sentences analyzed, {} files written", corpus.len(), written.len());
        }
        Command::Serve {
            config,
            import,
            gold,
            corpus_id,
        } => {
            let cfg = ServiceConfig::load(config.as_deref())?;
            let store = Store::open(&cfg.store, cfg.snapshot_every)?;
            if let (Some(path), Some(id)) = (import, corpus_id) {
                if store.snapshot().corpora.contains_key(&id) {
                    log::warn!("corpus {id} already in the store; not importing {}", path.display());
                } else {
                    let machine = read_bln(&path)?;
                    let gold = gold.as_deref().map(read_bln).transpose()?;
                    store.import(&id, &machine, gold.as_ref())?;
                }
            }
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(cswud_review::serve(&cfg, store))?;
        }
        Command::ExportConllu { input, output, subset } => {
            let corpus = select(read_bln(&input)?, &subset);
            write_out(output.as_deref(), &corpus_to_conllu(&corpus))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
