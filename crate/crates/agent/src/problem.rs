//! Turning a task record into premises and option formulas.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use la_core::formula::is_identifier;
use la_core::{parse_statement, Statement};
use thiserror::Error;

use crate::backend::{Backend, BackendError, ChatMessage};
use crate::prompts;
use crate::record::{Task, TaskRecord, HYPOTHESIS_LABEL};

/// Total attempts a parsing model gets, counting the first.
pub const PARSE_ATTEMPTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParserMode {
    /// The answering model translates the problem itself.
    SelfParse,
    /// A separate backend translates; the answering model only reasons.
    External,
    /// The record's `logic` block is parsed directly, with no model involved.
    Deterministic,
}

impl ParserMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ParserMode::SelfParse => "self",
            ParserMode::External => "external",
            ParserMode::Deterministic => "deterministic",
        }
    }
}

impl FromStr for ParserMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "self" => Ok(ParserMode::SelfParse),
            "external" => Ok(ParserMode::External),
            "deterministic" => Ok(ParserMode::Deterministic),
            other => Err(format!("unknown parser mode `{other}`; expected self, external or deterministic")),
        }
    }
}

impl fmt::Display for ParserMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedProblem {
    /// Atom (or term) name to the phrase it stands for.
    pub glossary: IndexMap<String, String>,
    pub premises: Vec<Statement>,
    /// One entry per option for mcrc; a single `H` entry for nli and tf.
    pub targets: BTreeMap<String, Statement>,
}

impl ParsedProblem {
    /// Adds glossary entries for any names the statements use but the
    /// glossary lacks, spelled as the name itself.
    fn complete_glossary(&mut self) {
        let mut names = Vec::new();
        for s in self.premises.iter().chain(self.targets.values()) {
            match s {
                Statement::Formula(f) => names.extend(f.atoms()),
                Statement::Categorical(c) => names.extend([c.subject.clone(), c.predicate.clone()]),
            }
        }
        for name in names {
            if !self.glossary.contains_key(&name) {
                self.glossary.insert(name.clone(), name);
            }
        }
    }

    /// Glossary and premises as plain text.
    pub fn render_logic(&self) -> String {
        let mut out = String::from("Atoms:\n");
        for (name, phrase) in &self.glossary {
            out.push_str(&format!("{name}: {phrase}\n"));
        }
        out.push_str("\nPremises:\n");
        for (i, p) in self.premises.iter().enumerate() {
            out.push_str(&format!("{}. {p}\n", i + 1));
        }
        out.truncate(out.trim_end().len());
        out
    }

    /// The block a parsing model is asked to produce for this problem.
    pub fn render_parse_block(&self, task: Task) -> String {
        let mut lines = Vec::new();
        for (name, phrase) in &self.glossary {
            lines.push(format!("ATOM {name}: {phrase}"));
        }
        for p in &self.premises {
            lines.push(format!("PREMISE: {p}"));
        }
        for (label, s) in &self.targets {
            match task {
                Task::Mcrc => lines.push(format!("OPTION {label}: {s}")),
                Task::Nli | Task::Tf => lines.push(format!("HYPOTHESIS: {s}")),
            }
        }
        lines.join("\n")
    }
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("could not obtain a usable translation after {attempts} attempt(s): {last}")]
    ParseBudgetExhausted { attempts: usize, last: String },
    #[error("record has no logic block for the deterministic parser")]
    MissingLogic,
    #[error("invalid logic block, {field}: {message}")]
    InvalidLogic { field: String, message: String },
    #[error("external parser mode needs a parser backend")]
    NoParserBackend,
    #[error(transparent)]
    Backend(#[from] BackendError),
}

/// Parses the record's pre-formalized logic block.
pub fn from_logic_block(record: &TaskRecord) -> Result<ParsedProblem, ProblemError> {
    let logic = record.logic.as_ref().ok_or(ProblemError::MissingLogic)?;
    let parse = |field: String, text: &str| {
        parse_statement(text).map_err(|e| ProblemError::InvalidLogic { field, message: e.to_string() })
    };
    let mut premises = Vec::new();
    for (i, p) in logic.premises.iter().enumerate() {
        premises.push(parse(format!("premises[{i}]"), p)?);
    }
    let mut targets = BTreeMap::new();
    match record.task {
        Task::Mcrc => {
            for (label, text) in &logic.options {
                targets.insert(label.clone(), parse(format!("options.{label}"), text)?);
            }
        }
        Task::Nli | Task::Tf => {
            let text = logic.hypothesis.as_deref().ok_or_else(|| ProblemError::InvalidLogic {
                field: "hypothesis".into(),
                message: "missing".into(),
            })?;
            targets.insert(HYPOTHESIS_LABEL.to_string(), parse("hypothesis".into(), text)?);
        }
    }
    let mut problem = ParsedProblem { glossary: logic.atoms.clone(), premises, targets };
    problem.complete_glossary();
    Ok(problem)
}

/// Reads `ATOM`, `PREMISE`, `OPTION` and `HYPOTHESIS` lines out of a parsing
/// model's reply. Every unusable line is reported, one message each.
pub fn from_parse_reply(record: &TaskRecord, reply: &str) -> Result<ParsedProblem, Vec<String>> {
    let mut problem =
        ParsedProblem { glossary: IndexMap::new(), premises: Vec::new(), targets: BTreeMap::new() };
    let mut errors = Vec::new();
    for (i, raw) in reply.lines().enumerate() {
        let line = raw.trim();
        let at = |message: String| format!("line {} `{line}`: {message}", i + 1);
        if let Some(rest) = line.strip_prefix("ATOM ") {
            match rest.split_once(':') {
                Some((name, phrase)) if is_identifier(name.trim()) => {
                    problem.glossary.insert(name.trim().to_string(), phrase.trim().to_string());
                }
                _ => errors.push(at("expected `ATOM <Name>: <phrase>`".into())),
            }
        } else if let Some(rest) = line.strip_prefix("PREMISE:") {
            match parse_statement(rest.trim()) {
                Ok(s) => problem.premises.push(s),
                Err(e) => errors.push(at(e.to_string())),
            }
        } else if let Some(rest) = line.strip_prefix("OPTION ") {
            let Some((label, text)) = rest.split_once(':') else {
                errors.push(at("expected `OPTION <label>: <formula>`".into()));
                continue;
            };
            let label = match record.task {
                Task::Mcrc => record.normalize_label(label),
                Task::Nli | Task::Tf => None,
            };
            let Some(label) = label else {
                errors.push(at(format!(
                    "not an option of this problem; options are {}",
                    record.labels().join(", ")
                )));
                continue;
            };
            match parse_statement(text.trim()) {
                Ok(s) => {
                    problem.targets.insert(label, s);
                }
                Err(e) => errors.push(at(e.to_string())),
            }
        } else if let Some(rest) = line.strip_prefix("HYPOTHESIS:") {
            match parse_statement(rest.trim()) {
                Ok(s) => {
                    problem.targets.insert(HYPOTHESIS_LABEL.to_string(), s);
                }
                Err(e) => errors.push(at(e.to_string())),
            }
        }
    }
    if problem.premises.is_empty() && errors.is_empty() {
        errors.push("no PREMISE lines".into());
    }
    for target in record.eval_targets() {
        if !problem.targets.contains_key(&target) {
            errors.push(match record.task {
                Task::Mcrc => format!("missing OPTION {target}"),
                Task::Nli | Task::Tf => "missing HYPOTHESIS".into(),
            });
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    problem.complete_glossary();
    Ok(problem)
}

/// One request/reply pair with a parsing model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseExchange {
    pub request: String,
    pub reply: String,
    /// Feedback sent back when the reply was unusable.
    pub feedback: Option<String>,
}

/// The messages that open a parsing conversation.
pub fn parse_messages(record: &TaskRecord, shots: usize) -> Vec<ChatMessage> {
    vec![ChatMessage::system(prompts::parse_system_prompt(shots)), ChatMessage::user(record.render())]
}

/// Asks `backend` to translate the record, feeding errors back for up to
/// [`PARSE_ATTEMPTS`] attempts in total.
pub fn parse_with_model(
    record: &TaskRecord,
    backend: &mut dyn Backend,
    shots: usize,
    exchanges: &mut Vec<ParseExchange>,
) -> Result<ParsedProblem, ProblemError> {
    let mut messages = parse_messages(record, shots);
    let mut last = String::new();
    for _ in 0..PARSE_ATTEMPTS {
        let request = messages.last().map(|m| m.content.clone()).unwrap_or_default();
        let reply = backend.complete(&messages)?;
        match from_parse_reply(record, &reply) {
            Ok(problem) => {
                exchanges.push(ParseExchange { request, reply, feedback: None });
                return Ok(problem);
            }
            Err(errors) => {
                let listed: Vec<String> = errors.iter().map(|e| format!("- {e}")).collect();
                let feedback = format!(
                    "ERROR ParseError: some lines could not be used:\n{}\nReply with the complete corrected translation.",
                    listed.join("\n")
                );
                last = errors.join("; ");
                exchanges.push(ParseExchange {
                    request,
                    reply: reply.clone(),
                    feedback: Some(feedback.clone()),
                });
                messages.push(ChatMessage::assistant(reply));
                messages.push(ChatMessage::user(feedback));
            }
        }
    }
    Err(ProblemError::ParseBudgetExhausted { attempts: PARSE_ATTEMPTS, last })
}

/// Parses the record according to `mode`. `parser` is the backend for
/// external mode; self mode uses `backend`.
pub fn parse_problem(
    record: &TaskRecord,
    mode: ParserMode,
    backend: &mut dyn Backend,
    parser: Option<&mut dyn Backend>,
    shots: usize,
    exchanges: &mut Vec<ParseExchange>,
) -> Result<ParsedProblem, ProblemError> {
    match mode {
        ParserMode::Deterministic => from_logic_block(record),
        ParserMode::SelfParse => parse_with_model(record, backend, shots, exchanges),
        ParserMode::External => {
            let parser = parser.ok_or(ProblemError::NoParserBackend)?;
            parse_with_model(record, parser, shots, exchanges)
        }
    }
}
