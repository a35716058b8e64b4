//! Chat backends: an OpenAI-compatible HTTP client and a scripted mock.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::http::{HttpBackend, HttpConfig};
use crate::mock::{MockBackend, MockScript};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::System, content: content.into() }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::User, content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::Assistant, content: content.into() }
    }
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("backend gave up after {attempts} attempt(s): {last}")]
    Exhausted { attempts: usize, last: String },
    #[error("mock script exhausted after {calls} call(s)")]
    MockScriptExhausted { calls: usize },
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("request rejected with HTTP {status}: {body}")]
    Rejected { status: u16, body: String },
    #[error("backend configuration: {0}")]
    Config(String),
}

pub trait Backend {
    /// Sends the conversation and returns the assistant's reply.
    fn complete(&mut self, messages: &[ChatMessage]) -> Result<String, BackendError>;
}

/// How to build a backend. Each run gets a fresh instance so mock cursors are
/// never shared between records.
#[derive(Debug, Clone)]
pub enum BackendSpec {
    Http(HttpConfig),
    Mock(Arc<MockScript>),
}

impl BackendSpec {
    pub fn instantiate(&self) -> Result<Box<dyn Backend + Send>, BackendError> {
        match self {
            BackendSpec::Http(config) => Ok(Box::new(HttpBackend::new(config.clone())?)),
            BackendSpec::Mock(script) => Ok(Box::new(MockBackend::new(Arc::clone(script)))),
        }
    }

    /// Short name for reports: the model for HTTP, `mock` otherwise.
    pub fn model_name(&self) -> &str {
        match self {
            BackendSpec::Http(config) => &config.model,
            BackendSpec::Mock(_) => "mock",
        }
    }
}
