use std::collections::{HashMap, VecDeque};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde_json::{json, Value};
use thiserror::Error;

use super::config::LlmConfig;
use super::prompt::PromptBundle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("authentication failed: {0}")]
    Auth(String),
    #[error("service returned HTTP {0}")]
    Status(u16),
    #[error("malformed service response: {0}")]
    Malformed(String),
    #[error("offline mode: no cached answer for sentence {0}")]
    Offline(String),
    #[error("no scripted answer left for sentence {0}")]
    Exhausted(String),
}

/// A chat-completion backend: system + user message in, answer text out.
pub trait ChatService: Send + Sync {
    fn complete(&self, cfg: &LlmConfig, prompt: &PromptBundle) -> Result<String, ServiceError>;
}

/// OpenAI-compatible `chat/completions` endpoint.
pub struct HttpChatService {
    agent: ureq::Agent,
    api_key: String,
}

impl HttpChatService {
    /// Reads the key from the environment variable named in the config.
    pub fn from_env(cfg: &LlmConfig) -> Result<Self, ServiceError> {
        let api_key = std::env::var(&cfg.api_key_env)
            .map_err(|_| ServiceError::Auth(format!("environment variable {} not set", cfg.api_key_env)))?;
        Ok(Self::new(api_key))
    }

    pub fn new(api_key: String) -> Self {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(120)))
            .http_status_as_error(false)
            .build();
        HttpChatService {
            agent: ureq::Agent::new_with_config(config),
            api_key,
        }
    }

    pub fn request_body(cfg: &LlmConfig, prompt: &PromptBundle) -> Value {
        json!({
            "model": cfg.model,
            "messages": [
                {"role": "system", "content": prompt.system},
                {"role": "user", "content": prompt.user},
            ],
            "temperature": cfg.temperature,
            "top_p": cfg.top_p,
            "max_tokens": cfg.max_tokens,
        })
    }
}

impl ChatService for HttpChatService {
    fn complete(&self, cfg: &LlmConfig, prompt: &PromptBundle) -> Result<String, ServiceError> {
        let mut resp = self
            .agent
            .post(&cfg.endpoint)
            .header("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(Self::request_body(cfg, prompt))
            .map_err(|e| ServiceError::Transport(e.to_string()))?;
        let status = resp.status().as_u16();
        if status == 401 || status == 403 {
            return Err(ServiceError::Auth(format!("HTTP {status}")));
        }
        if !(200..300).contains(&status) {
            return Err(ServiceError::Status(status));
        }
        let body: Value = resp
            .body_mut()
            .read_json()
            .map_err(|e| ServiceError::Malformed(e.to_string()))?;
        body.pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| ServiceError::Malformed("missing choices[0].message.content".into()))
    }
}

/// Never touches the network; every call is a cache miss error.
#[derive(Debug, Default, Clone, Copy)]
pub struct OfflineService;

impl ChatService for OfflineService {
    fn complete(&self, _cfg: &LlmConfig, prompt: &PromptBundle) -> Result<String, ServiceError> {
        Err(ServiceError::Offline(prompt.sent_id.clone()))
    }
}

/// Replays canned answers per sentence id, in order. Used to seed caches and
/// in tests.
#[derive(Debug, Default)]
pub struct ScriptedService {
    answers: Mutex<HashMap<String, VecDeque<String>>>,
    calls: AtomicUsize,
}

impl ScriptedService {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&self, sent_id: &str, answer: impl Into<String>) {
        self.answers
            .lock()
            .expect("script lock")
            .entry(sent_id.to_string())
            .or_default()
            .push_back(answer.into());
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

impl ChatService for ScriptedService {
    fn complete(&self, _cfg: &LlmConfig, prompt: &PromptBundle) -> Result<String, ServiceError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.answers
            .lock()
            .expect("script lock")
            .get_mut(&prompt.sent_id)
            .and_then(VecDeque::pop_front)
            .ok_or_else(|| ServiceError::Exhausted(prompt.sent_id.clone()))
    }
}
