//! Prompting a chat model for a full eight-column analysis of one sentence,
//! with response caching and structural re-prompting.

mod cache;
mod config;
mod prompt;
mod response;
mod service;

pub use cache::{cache_key, CacheEntry, CacheError, ResponseCache};
pub use config::{ConfigError, LlmConfig};
pub use prompt::{build_prompt, system_prompt, PromptBundle, PromptError};
pub use response::{parse_response, Alignment, ParsedResponse, ResponseError};
pub use service::{ChatService, HttpChatService, OfflineService, ScriptedService, ServiceError};

use thiserror::Error;

use crate::conllu::{count_hard, validate, Sentence, Violation};
use crate::ingestion::flag_spec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub sentence: Sentence,
    /// All violations of the returned analysis, hard and warning.
    pub violations: Vec<Violation>,
    /// Re-prompts performed after the first request.
    pub attempts: u32,
    pub alignment: Alignment,
}

impl Annotation {
    pub fn hard_violations(&self) -> usize {
        count_hard(&self.violations)
    }
}

#[derive(Debug, Error)]
pub enum AnnotateError {
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error("sentence {sent_id}: {source}")]
    Service {
        sent_id: String,
        #[source]
        source: ServiceError,
    },
    #[error("sentence {sent_id}: no usable answer after {} attempts; last error: {}", errors.len(), errors.last().map(String::as_str).unwrap_or(""))]
    Failed {
        sent_id: String,
        raw: String,
        errors: Vec<String>,
    },
    #[error(transparent)]
    Cache(#[from] CacheError),
}

/// Annotates one sentence. Cached answers are used before the service is
/// called; every fresh answer is cached. Answers with hard violations are
/// re-prompted with the problem list, up to `cfg.max_retries` times, and the
/// attempt with the fewest hard violations is returned (earliest on ties).
pub fn annotate(
    s: &Sentence,
    cfg: &LlmConfig,
    cache: &ResponseCache,
    service: &dyn ChatService,
) -> Result<Annotation, AnnotateError> {
    let base = build_prompt(s, s.pair)?;
    let mut feedback: Vec<String> = Vec::new();
    let mut errors: Vec<String> = Vec::new();
    let mut raw = String::new();
    let mut best: Option<Annotation> = None;
    let mut performed = 0;

    for attempt in 0..=cfg.max_retries {
        performed = attempt;
        let prompt = if attempt == 0 {
            base.clone()
        } else {
            base.with_feedback(&feedback)
        };
        let key = cache_key(s.pair, &cfg.model, &prompt);
        raw = match cache.get(s.pair, &key) {
            Some(text) => text,
            None => {
                let text = service
                    .complete(cfg, &prompt)
                    .map_err(|source| AnnotateError::Service {
                        sent_id: s.sent_id.clone(),
                        source,
                    })?;
                cache.put(CacheEntry::new(key, s.pair, &cfg.model, text.clone()))?;
                text
            }
        };

        match parse_response(&raw, s) {
            Ok(parsed) => {
                let mut sentence = parsed.sentence;
                sentence.spec = flag_spec(&sentence);
                let violations = validate(&sentence);
                let hard = count_hard(&violations);
                feedback = violations
                    .iter()
                    .filter(|v| v.code.is_hard())
                    .map(ToString::to_string)
                    .collect();
                let candidate = Annotation {
                    sentence,
                    violations,
                    attempts: attempt,
                    alignment: parsed.alignment,
                };
                if best.as_ref().is_none_or(|b| hard < b.hard_violations()) {
                    best = Some(candidate);
                }
                if hard == 0 {
                    break;
                }
            }
            Err(e) => {
                feedback = vec![e.to_string()];
                errors.push(e.to_string());
            }
        }
    }

    match best {
        Some(mut b) => {
            b.attempts = performed;
            Ok(b)
        }
        None => Err(AnnotateError::Failed {
            sent_id: s.sent_id.clone(),
            raw,
            errors,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::{LangPair, LangTag, Token};

    fn input() -> Sentence {
        Sentence::new(
            "t1",
            LangPair::SpaEng,
            vec![
                Token::bare(1, "I", LangTag::En),
                Token::bare(2, "like", LangTag::En),
                Token::bare(3, "tacos", LangTag::Es),
            ],
        )
    }

    const TWO_ROOTS: &str = "1\tI\ten\tI\tPRON\t2\tlike\tnsubj\n2\tlike\ten\tlike\tVERB\t0\t_\troot\n3\ttacos\tes\ttaco\tNOUN\t0\t_\troot\n";
    const GOOD: &str = "1\tI\ten\tI\tPRON\t2\tlike\tnsubj\n2\tlike\ten\tlike\tVERB\t0\t_\troot\n3\ttacos\tes\ttaco\tNOUN\t2\tlike\tobj\n";

    #[test]
    fn retry_fixes_two_roots_and_caches_both() {
        let svc = ScriptedService::new();
        svc.push("t1", TWO_ROOTS);
        svc.push("t1", GOOD);
        let cache = ResponseCache::in_memory();
        let cfg = LlmConfig::default();
        let a = annotate(&input(), &cfg, &cache, &svc).unwrap();
        assert_eq!(a.attempts, 1);
        assert_eq!(a.hard_violations(), 0);
        assert_eq!(svc.calls(), 2);
        assert_eq!(cache.len(), 2);

        // second run is served entirely from the cache
        let a2 = annotate(&input(), &cfg, &cache, &OfflineService).unwrap();
        assert_eq!(a2, a);
    }

    #[test]
    fn best_attempt_kept_when_retries_run_out() {
        let svc = ScriptedService::new();
        for _ in 0..3 {
            svc.push("t1", TWO_ROOTS);
        }
        let a = annotate(&input(), &LlmConfig::default(), &ResponseCache::in_memory(), &svc).unwrap();
        assert_eq!(a.attempts, 2);
        assert_eq!(a.hard_violations(), 1);
        // second and third prompts carry the same feedback, so the third is a cache hit
        assert_eq!(svc.calls(), 2);
    }

    #[test]
    fn unparseable_everywhere_fails() {
        let svc = ScriptedService::new();
        for _ in 0..3 {
            svc.push("t1", "I cannot do that.");
        }
        let err = annotate(&input(), &LlmConfig::default(), &ResponseCache::in_memory(), &svc).unwrap_err();
        assert!(matches!(err, AnnotateError::Failed { ref errors, .. } if errors.len() == 3));
    }

    #[test]
    fn offline_miss_is_a_service_error() {
        let err = annotate(
            &input(),
            &LlmConfig::default(),
            &ResponseCache::in_memory(),
            &OfflineService,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            AnnotateError::Service {
                source: ServiceError::Offline(_),
                ..
            }
        ));
    }
}
