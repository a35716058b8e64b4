//! Scripted backend for tests and offline runs.
//!
//! A script is JSONL, one `{"match": "...", "response": "..."}` object per
//! line. Entries with a `match` key answer any request whose last message
//! starts with that prefix and may fire any number of times. Entries without
//! one are consumed in order by requests no keyed entry claimed.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::backend::{Backend, BackendError, ChatMessage};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct MockEntry {
    #[serde(rename = "match", default)]
    pub prefix: Option<String>,
    pub response: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MockScript {
    keyed: Vec<MockEntry>,
    ordered: Vec<String>,
}

#[derive(Debug, Error)]
pub enum MockScriptError {
    #[error("cannot read mock script {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("mock script line {line}: {message}")]
    Syntax { line: usize, message: String },
}

impl MockScript {
    pub fn from_entries(entries: impl IntoIterator<Item = MockEntry>) -> Self {
        let mut script = MockScript::default();
        for entry in entries {
            match entry.prefix {
                Some(_) => script.keyed.push(entry),
                None => script.ordered.push(entry.response),
            }
        }
        script
    }

    /// Unkeyed responses, answered in order.
    pub fn sequence<S: Into<String>>(responses: impl IntoIterator<Item = S>) -> Self {
        Self::from_entries(responses.into_iter().map(|r| MockEntry { prefix: None, response: r.into() }))
    }

    pub fn parse(text: &str) -> Result<Self, MockScriptError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: MockEntry = serde_json::from_str(line)
                .map_err(|e| MockScriptError::Syntax { line: i + 1, message: e.to_string() })?;
            entries.push(entry);
        }
        Ok(Self::from_entries(entries))
    }

    pub fn load(path: &Path) -> Result<Self, MockScriptError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| MockScriptError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }
}

#[derive(Debug)]
pub struct MockBackend {
    script: Arc<MockScript>,
    cursor: usize,
    calls: usize,
}

impl MockBackend {
    pub fn new(script: Arc<MockScript>) -> Self {
        MockBackend { script, cursor: 0, calls: 0 }
    }

    pub fn calls(&self) -> usize {
        self.calls
    }
}

impl Backend for MockBackend {
    fn complete(&mut self, messages: &[ChatMessage]) -> Result<String, BackendError> {
        self.calls += 1;
        let last = messages.last().map(|m| m.content.as_str()).unwrap_or("");
        let keyed =
            self.script.keyed.iter().find(|e| e.prefix.as_deref().is_some_and(|p| last.starts_with(p)));
        if let Some(entry) = keyed {
            return Ok(entry.response.clone());
        }
        let response = self
            .script
            .ordered
            .get(self.cursor)
            .cloned()
            .ok_or(BackendError::MockScriptExhausted { calls: self.calls })?;
        self.cursor += 1;
        Ok(response)
    }
}
