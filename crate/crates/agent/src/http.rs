//! Blocking client for OpenAI-compatible `/chat/completions` endpoints.

use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::backend::{Backend, BackendError, ChatMessage};

pub const DEFAULT_API_BASE: &str = "https://api.openai.com/v1";

#[derive(Debug, Clone, PartialEq)]
pub struct HttpConfig {
    pub base_url: String,
    pub api_key: String,
    pub model: String,
    pub temperature: f64,
    pub timeout: Duration,
    /// Retries after the first attempt, for transport errors, 429 and 5xx.
    pub max_retries: u32,
    /// Delay before the first retry; doubles each time.
    pub backoff_base: Duration,
}

impl HttpConfig {
    pub fn new(base_url: impl Into<String>, api_key: impl Into<String>, model: impl Into<String>) -> Self {
        HttpConfig {
            base_url: base_url.into(),
            api_key: api_key.into(),
            model: model.into(),
            temperature: 0.0,
            timeout: Duration::from_secs(120),
            max_retries: 3,
            backoff_base: Duration::from_secs(1),
        }
    }

    /// Reads `LA_API_KEY`, `LA_API_BASE` and `LA_MODEL`. An explicit `model`
    /// wins over the environment.
    pub fn from_env(model: Option<&str>) -> Result<Self, BackendError> {
        let key =
            std::env::var("LA_API_KEY").map_err(|_| BackendError::Config("LA_API_KEY is not set".into()))?;
        let base = std::env::var("LA_API_BASE").unwrap_or_else(|_| DEFAULT_API_BASE.to_string());
        let model = match model {
            Some(m) => m.to_string(),
            None => std::env::var("LA_MODEL")
                .map_err(|_| BackendError::Config("no model given and LA_MODEL is not set".into()))?,
        };
        Ok(HttpConfig::new(base, key, model))
    }

    fn validate(&self) -> Result<(), BackendError> {
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(BackendError::Config(format!("temperature must be >= 0, got {}", self.temperature)));
        }
        if self.timeout.is_zero() {
            return Err(BackendError::Config("timeout must be positive".into()));
        }
        if self.model.trim().is_empty() {
            return Err(BackendError::Config("model name is empty".into()));
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Request<'a> {
    model: &'a str,
    messages: &'a [ChatMessage],
    temperature: f64,
}

pub struct HttpBackend {
    config: HttpConfig,
    client: reqwest::blocking::Client,
}

impl HttpBackend {
    pub fn new(config: HttpConfig) -> Result<Self, BackendError> {
        config.validate()?;
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| BackendError::Config(e.to_string()))?;
        Ok(HttpBackend { config, client })
    }

    fn endpoint(&self) -> String {
        format!("{}/chat/completions", self.config.base_url.trim_end_matches('/'))
    }
}

fn retryable(status: reqwest::StatusCode) -> bool {
    status == reqwest::StatusCode::TOO_MANY_REQUESTS || status.is_server_error()
}

fn first_choice(body: &str) -> Result<String, BackendError> {
    let value: Value =
        serde_json::from_str(body).map_err(|e| BackendError::MalformedResponse(e.to_string()))?;
    value
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| BackendError::MalformedResponse("no choices[0].message.content".into()))
}

impl Backend for HttpBackend {
    fn complete(&mut self, messages: &[ChatMessage]) -> Result<String, BackendError> {
        let request = Request { model: &self.config.model, messages, temperature: self.config.temperature };
        let body = serde_json::to_string(&request).map_err(|e| BackendError::Config(e.to_string()))?;
        let attempts = self.config.max_retries as usize + 1;
        let mut last = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                std::thread::sleep(self.config.backoff_base * 2u32.pow(attempt as u32 - 1));
            }
            let sent = self
                .client
                .post(self.endpoint())
                .bearer_auth(&self.config.api_key)
                .header(reqwest::header::CONTENT_TYPE, "application/json")
                .body(body.clone())
                .send();
            let response = match sent {
                Ok(r) => r,
                Err(e) => {
                    last = e.to_string();
                    continue;
                }
            };
            let status = response.status();
            let text = response.text().unwrap_or_default();
            if status.is_success() {
                return first_choice(&text);
            }
            if !retryable(status) {
                return Err(BackendError::Rejected { status: status.as_u16(), body: text });
            }
            last = format!("HTTP {status}");
        }
        Err(BackendError::Exhausted { attempts, last })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choice_extraction() {
        let body = r#"{"choices":[{"message":{"role":"assistant","content":"ANSWER: B"}}]}"#;
        assert_eq!(first_choice(body).unwrap(), "ANSWER: B");
        assert!(matches!(first_choice("{}"), Err(BackendError::MalformedResponse(_))));
        assert!(matches!(first_choice("nope"), Err(BackendError::MalformedResponse(_))));
    }

    #[test]
    fn config_validation() {
        let mut c = HttpConfig::new("http://localhost", "k", "m");
        assert!(c.validate().is_ok());
        c.temperature = -0.5;
        assert!(c.validate().is_err());
        c.temperature = 0.0;
        c.timeout = Duration::ZERO;
        assert!(c.validate().is_err());
    }

    #[test]
    fn request_shape() {
        let messages = [ChatMessage::system("s"), ChatMessage::user("u")];
        let body = Request { model: "m", messages: &messages, temperature: 0.0 };
        assert_eq!(
            serde_json::to_string(&body).unwrap(),
            r#"{"model":"m","messages":[{"role":"system","content":"s"},{"role":"user","content":"u"}],"temperature":0.0}"#
        );
    }
}
