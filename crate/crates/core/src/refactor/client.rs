//! Blocking client for OpenAI-style chat completion endpoints.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{ClientError, Completer, Completion};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompletionConfig {
    /// Full URL of the chat completions route.
    pub endpoint: String,
    pub model: String,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "defaults::max_tokens")]
    pub max_tokens: u32,
    #[serde(default = "defaults::timeout_secs")]
    pub timeout_secs: f64,
    /// Retries after the first attempt for timeouts, 429 and 5xx.
    #[serde(default = "defaults::max_retries")]
    pub max_retries: u32,
    #[serde(default = "defaults::max_concurrency")]
    pub max_concurrency: usize,
    /// Environment variable holding the bearer token, if the endpoint wants one.
    #[serde(default)]
    pub credential_env: Option<String>,
    #[serde(default = "defaults::backoff_initial_ms")]
    pub backoff_initial_ms: u64,
    #[serde(default = "defaults::backoff_max_ms")]
    pub backoff_max_ms: u64,
}

mod defaults {
    pub fn max_tokens() -> u32 {
        2048
    }
    pub fn timeout_secs() -> f64 {
        120.0
    }
    pub fn max_retries() -> u32 {
        4
    }
    pub fn max_concurrency() -> usize {
        4
    }
    pub fn backoff_initial_ms() -> u64 {
        500
    }
    pub fn backoff_max_ms() -> u64 {
        30_000
    }
}

impl CompletionConfig {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        CompletionConfig {
            endpoint: endpoint.into(),
            model: model.into(),
            temperature: 0.0,
            max_tokens: defaults::max_tokens(),
            timeout_secs: defaults::timeout_secs(),
            max_retries: defaults::max_retries(),
            max_concurrency: defaults::max_concurrency(),
            credential_env: None,
            backoff_initial_ms: defaults::backoff_initial_ms(),
            backoff_max_ms: defaults::backoff_max_ms(),
        }
    }

    /// Delay before retry number `retry` (1-based).
    pub fn backoff(&self, retry: u32) -> Duration {
        let ms = self
            .backoff_initial_ms
            .saturating_mul(1u64 << (retry.saturating_sub(1)).min(32))
            .min(self.backoff_max_ms);
        Duration::from_millis(ms)
    }
}

pub struct HttpCompleter {
    config: CompletionConfig,
    token: Option<String>,
    http: reqwest::blocking::Client,
}

enum Failure {
    Retry(ClientError, Option<Duration>),
    Fatal(ClientError),
}

fn retry_after(resp: &reqwest::blocking::Response) -> Option<Duration> {
    let secs: f64 = resp.headers().get("retry-after")?.to_str().ok()?.trim().parse().ok()?;
    (secs.is_finite() && secs >= 0.0).then(|| Duration::from_secs_f64(secs))
}

fn completion_text(body: &Value) -> Option<String> {
    let choice = body.get("choices")?.get(0)?;
    choice
        .pointer("/message/content")
        .or_else(|| choice.get("text"))?
        .as_str()
        .map(str::to_owned)
}

impl HttpCompleter {
    pub fn new(config: CompletionConfig) -> Result<Self, ClientError> {
        let token = match &config.credential_env {
            Some(var) => Some(std::env::var(var).map_err(|_| ClientError::MissingCredential(var.clone()))?),
            None => None,
        };
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs_f64(config.timeout_secs.max(0.001)))
            .build()
            .map_err(|e| ClientError::Transport {
                message: e.to_string(),
                attempts: 0,
            })?;
        Ok(HttpCompleter { config, token, http })
    }

    pub fn config(&self) -> &CompletionConfig {
        &self.config
    }

    fn attempt(&self, body: &Value, attempts: u32) -> Result<String, Failure> {
        let mut req = self.http.post(&self.config.endpoint).json(body);
        if let Some(token) = &self.token {
            req = req.bearer_auth(token);
        }
        let resp = match req.send() {
            Ok(r) => r,
            Err(e) if e.is_timeout() => return Err(Failure::Retry(ClientError::Timeout { attempts }, None)),
            Err(e) => {
                let message = e.to_string();
                return Err(Failure::Retry(ClientError::Transport { message, attempts }, None));
            }
        };
        let status = resp.status().as_u16();
        match status {
            200..=299 => {}
            401 | 403 => return Err(Failure::Fatal(ClientError::Auth { status })),
            429 => return Err(Failure::Retry(ClientError::RateLimited { attempts }, retry_after(&resp))),
            500..=599 => return Err(Failure::Retry(ClientError::Server { status, attempts }, retry_after(&resp))),
            _ => {
                let body = resp.text().unwrap_or_default();
                return Err(Failure::Fatal(ClientError::Rejected { status, body }));
            }
        }
        let text = match resp.text() {
            Ok(t) => t,
            Err(e) if e.is_timeout() => return Err(Failure::Retry(ClientError::Timeout { attempts }, None)),
            Err(e) => return Err(Failure::Fatal(ClientError::MalformedResponse(e.to_string()))),
        };
        let value: Value =
            serde_json::from_str(&text).map_err(|e| Failure::Fatal(ClientError::MalformedResponse(e.to_string())))?;
        completion_text(&value)
            .ok_or_else(|| Failure::Fatal(ClientError::MalformedResponse("no choices[0] message content".into())))
    }
}

impl Completer for HttpCompleter {
    fn complete(&self, prompt: &str) -> Result<Completion, ClientError> {
        let body = json!({
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
        });
        let mut attempts = 0;
        loop {
            attempts += 1;
            match self.attempt(&body, attempts) {
                Ok(text) => return Ok(Completion { text, attempts }),
                Err(Failure::Fatal(e)) => return Err(e),
                Err(Failure::Retry(e, hint)) => {
                    if attempts > self.config.max_retries {
                        return Err(e);
                    }
                    let cap = Duration::from_millis(self.config.backoff_max_ms);
                    let wait = hint.map_or_else(|| self.config.backoff(attempts), |h| h.min(cap));
                    std::thread::sleep(wait);
                }
            }
        }
    }
}
