//! The task record schema shared by the agent and the evaluation harness.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    /// Multiple-choice reading comprehension, 4 or 5 lettered options.
    Mcrc,
    /// Natural language inference: entailment, contradiction, neutral.
    Nli,
    /// True/false question answered Yes or No.
    Tf,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::Mcrc => "mcrc",
            Task::Nli => "nli",
            Task::Tf => "tf",
        }
    }

    /// What the agent answers when it gives up. Always scored incorrect.
    pub fn abstention_label(self) -> &'static str {
        match self {
            Task::Mcrc => "X",
            Task::Nli => "N",
            Task::Tf => "No",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mcrc" => Ok(Task::Mcrc),
            "nli" => Ok(Task::Nli),
            "tf" => Ok(Task::Tf),
            other => Err(format!("unknown task `{other}`; expected mcrc, nli or tf")),
        }
    }
}

/// Pre-formalized logic for a record, in operator or constructor syntax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct LogicBlock {
    #[serde(default)]
    pub atoms: IndexMap<String, String>,
    pub premises: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub options: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub id: String,
    pub task: Task,
    pub context: String,
    /// The question for mcrc/tf, the hypothesis for nli.
    pub question: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub options: BTreeMap<String, String>,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logic: Option<LogicBlock>,
}

/// The label an EVAL action uses for an nli/tf hypothesis.
pub const HYPOTHESIS_LABEL: &str = "H";

const NLI_LABELS: [&str; 3] = ["E", "C", "N"];
const TF_LABELS: [&str; 2] = ["Yes", "No"];

impl TaskRecord {
    /// Answer labels in display order.
    pub fn labels(&self) -> Vec<String> {
        match self.task {
            Task::Mcrc => self.options.keys().cloned().collect(),
            Task::Nli => NLI_LABELS.iter().map(|s| s.to_string()).collect(),
            Task::Tf => TF_LABELS.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Labels an EVAL action may target.
    pub fn eval_targets(&self) -> Vec<String> {
        match self.task {
            Task::Mcrc => self.labels(),
            Task::Nli | Task::Tf => vec![HYPOTHESIS_LABEL.to_string()],
        }
    }

    /// Canonical spelling of `raw` if it names one of this record's labels.
    /// Case and surrounding punctuation are ignored.
    pub fn normalize_label(&self, raw: &str) -> Option<String> {
        let cleaned = raw.trim().trim_matches(|c: char| !c.is_alphanumeric());
        self.labels().into_iter().find(|l| l.eq_ignore_ascii_case(cleaned))
    }

    /// Checks the schema invariants, returning the offending field.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        if self.id.trim().is_empty() {
            return Err(("id", "must be nonempty".into()));
        }
        match self.task {
            Task::Mcrc => {
                if !(4..=5).contains(&self.options.len()) {
                    return Err((
                        "options",
                        format!("mcrc needs 4 or 5 options, found {}", self.options.len()),
                    ));
                }
                let allowed = ["A", "B", "C", "D", "E"];
                if let Some(bad) = self.options.keys().find(|k| !allowed.contains(&k.as_str())) {
                    return Err(("options", format!("option label `{bad}` is not one of A-E")));
                }
                if !self.options.contains_key(&self.label) {
                    return Err(("label", format!("`{}` is not one of the options", self.label)));
                }
            }
            Task::Nli | Task::Tf => {
                if !self.options.is_empty() {
                    return Err(("options", format!("{} records take no options", self.task)));
                }
                if !self.labels().contains(&self.label) {
                    return Err((
                        "label",
                        format!("`{}` is not one of {}", self.label, self.labels().join(", ")),
                    ));
                }
            }
        }
        if let Some(logic) = &self.logic {
            match self.task {
                Task::Mcrc => {
                    if logic.options.keys().ne(self.options.keys()) {
                        return Err((
                            "logic",
                            "logic options must cover exactly the record's options".into(),
                        ));
                    }
                }
                Task::Nli | Task::Tf => {
                    if logic.hypothesis.is_none() {
                        return Err(("logic", "missing hypothesis".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// The record as a model sees it: context, question and options for mcrc,
    /// `Premise:`/`Hypothesis:` lines for nli, context then question for tf.
    pub fn render(&self) -> String {
        match self.task {
            Task::Mcrc => {
                let options: Vec<String> = self.options.iter().map(|(l, t)| format!("{l}. {t}")).collect();
                format!(
                    "Context:\n{}\n\nQuestion:\n{}\n\nOptions:\n{}",
                    self.context,
                    self.question,
                    options.join("\n")
                )
            }
            Task::Nli => format!("Premise: {}\nHypothesis: {}", self.context, self.question),
            Task::Tf => format!("{}\n{}", self.context, self.question),
        }
    }
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    #[error("{path}: field `{field}`: {message}")]
    Invalid { path: String, field: &'static str, message: String },
}

/// Reads one record stored as a JSON object.
pub fn load_record(path: &Path) -> Result<TaskRecord, RecordError> {
    let shown = path.display().to_string();
    let text =
        std::fs::read_to_string(path).map_err(|source| RecordError::Io { path: shown.clone(), source })?;
    let record: TaskRecord = serde_json::from_str(&text)
        .map_err(|e| RecordError::Json { path: shown.clone(), message: e.to_string() })?;
    record.validate().map_err(|(field, message)| RecordError::Invalid { path: shown, field, message })?;
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf(label: &str) -> TaskRecord {
        TaskRecord {
            id: "t1".into(),
            task: Task::Tf,
            context: "Birds fly.".into(),
            question: "Do birds fly?".into(),
            options: BTreeMap::new(),
            label: label.into(),
            logic: None,
        }
    }

    #[test]
    fn label_sets() {
        assert_eq!(tf("Yes").labels(), ["Yes", "No"]);
        assert_eq!(tf("Yes").normalize_label(" yes."), Some("Yes".into()));
        assert_eq!(tf("Yes").normalize_label("maybe"), None);
        assert_eq!(tf("Yes").eval_targets(), ["H"]);
        assert_eq!(Task::Mcrc.abstention_label(), "X");
    }

    #[test]
    fn validation() {
        assert!(tf("Yes").validate().is_ok());
        assert_eq!(tf("Maybe").validate().unwrap_err().0, "label");
        let mut nli = tf("E");
        nli.task = Task::Nli;
        assert!(nli.validate().is_ok());
        nli.label = "Maybe".into();
        assert_eq!(nli.validate().unwrap_err().0, "label");
    }

    #[test]
    fn rendering() {
        assert_eq!(tf("Yes").render(), "Birds fly.\nDo birds fly?");
        let mut nli = tf("E");
        nli.task = Task::Nli;
        assert_eq!(nli.render(), "Premise: Birds fly.\nHypothesis: Do birds fly?");
    }

    #[test]
    fn json_shape() {
        let line = r#"{"id":"m1","task":"mcrc","context":"c","question":"q","options":{"A":"a","B":"b","C":"c","D":"d"},"label":"C"}"#;
        let r: TaskRecord = serde_json::from_str(line).unwrap();
        assert!(r.validate().is_ok());
        assert_eq!(serde_json::to_string(&r).unwrap(), line);
    }
}
