//! JSONL dataset ingestion with per-line validation.

use std::path::Path;

use la_agent::{Task, TaskRecord};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: field `{field}`: {message}")]
    Schema { line: usize, field: String, message: String },
}

/// Parses JSONL text. Blank lines are skipped; line numbers are 1-based.
/// With `task` set, every record must be of that task.
pub fn parse_dataset(text: &str, task: Option<Task>) -> Result<Vec<TaskRecord>, DatasetError> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: TaskRecord = serde_json::from_str(line).map_err(|e| DatasetError::Schema {
            line: line_no,
            field: json_field(&e.to_string()),
            message: e.to_string(),
        })?;
        record.validate().map_err(|(field, message)| DatasetError::Schema {
            line: line_no,
            field: field.to_string(),
            message,
        })?;
        if let Some(t) = task {
            if record.task != t {
                return Err(DatasetError::Schema {
                    line: line_no,
                    field: "task".into(),
                    message: format!("expected {t}, found {}", record.task),
                });
            }
        }
        records.push(record);
    }
    Ok(records)
}

/// Best-effort field name from a serde message such as "missing field `label`".
fn json_field(message: &str) -> String {
    message.split('`').nth(1).map(str::to_string).unwrap_or_else(|| "(record)".to_string())
}

pub fn load_dataset(path: &Path, task: Option<Task>) -> Result<Vec<TaskRecord>, DatasetError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| DatasetError::Io { path: path.display().to_string(), source })?;
    parse_dataset(&text, task)
}

/// How a dataset is named in reports: its path without the extension.
pub fn dataset_label(path: &Path) -> String {
    path.with_extension("").to_string_lossy().replace('\\', "/")
}
