//! Prompt templates for the four answering modes.
//!
//! Baseline demonstrations live in `prompts/demos.jsonl`, three per task,
//! each with a worked rationale and a logic block for the ablation mode.

use std::sync::OnceLock;

use la_agent::problem::{from_logic_block, ProblemError};
use la_agent::prompts::{agent_system_prompt, MAX_SHOTS};
use la_agent::runtime::Session;
use la_agent::{ChatMessage, ParsedProblem, TaskRecord};
use serde::Deserialize;
use thiserror::Error;

use crate::mode::Mode;

/// Bumped whenever templates or `demos.jsonl` change.
pub const PROMPT_FIXTURE_VERSION: &str = "1";

const DEMOS: &str = include_str!("../prompts/demos.jsonl");

const DIRECT_SYSTEM: &str =
    "You answer logical reasoning questions. Reply with the label of the correct answer \
as the first word of your reply, before any explanation.";

const COT_SYSTEM: &str =
    "You answer logical reasoning questions. Reason step by step, then give the final answer \
on its own line as `Answer: <label>`.";

const ABLATION_SYSTEM: &str = "You answer logical reasoning questions. Each problem comes with a translation into \
logic: a glossary of atoms and numbered premises written with `~` (not), `&` (and), `|` (or), `->` (implies) and \
`<->` (if and only if). Categorical statements read `A(S,P)` all S are P, `E(S,P)` no S are P, `I(S,P)` some S \
are P and `O(S,P)` some S are not P. Use the translation to reason step by step, then give the final answer on \
its own line as `Answer: <label>`.";

#[derive(Debug, Deserialize)]
struct Demo {
    #[serde(flatten)]
    record: TaskRecord,
    rationale: String,
}

fn demos() -> &'static [Demo] {
    static CELL: OnceLock<Vec<Demo>> = OnceLock::new();
    CELL.get_or_init(|| {
        DEMOS
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).expect("demo parses"))
            .collect()
    })
}

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("mode {0} needs a logic translation: {1}")]
    NoTranslation(Mode, ProblemError),
}

/// "A, B, C or D".
fn label_list(labels: &[String]) -> String {
    match labels.split_last() {
        Some((last, rest)) if !rest.is_empty() => format!("{} or {last}", rest.join(", ")),
        Some((last, _)) => last.clone(),
        None => String::new(),
    }
}

fn instruction(mode: Mode, record: &TaskRecord) -> String {
    let labels = label_list(&record.labels());
    match mode {
        Mode::Direct => format!("Reply with {labels} as the first word of your answer."),
        _ => format!(
            "Let's think step by step. Finish with a line of the form `Answer: <label>`, where <label> is {labels}."
        ),
    }
}

fn user_text(record: &TaskRecord, mode: Mode, problem: Option<&ParsedProblem>) -> String {
    let mut out = record.render();
    if let Some(p) = problem {
        out.push_str(&format!("\n\nLogic translation:\n{}", p.render_logic()));
    }
    out.push_str(&format!("\n\n{}", instruction(mode, record)));
    out
}

fn demo_reply(demo: &Demo, mode: Mode) -> String {
    match mode {
        Mode::Direct => demo.record.label.clone(),
        _ => format!("{}\nAnswer: {}", demo.rationale, demo.record.label),
    }
}

/// The messages sent for `record`. `problem` is the translation used by the
/// `la` and `la-ablation` modes; without one the record's logic block is used.
pub fn build_prompt(
    record: &TaskRecord,
    mode: Mode,
    shots: usize,
    problem: Option<&ParsedProblem>,
) -> Result<Vec<ChatMessage>, PromptError> {
    let owned;
    let problem = match (mode, problem) {
        (Mode::Direct | Mode::Cot, _) => None,
        (_, Some(p)) => Some(p),
        (_, None) => {
            owned = from_logic_block(record).map_err(|e| PromptError::NoTranslation(mode, e))?;
            Some(&owned)
        }
    };

    if mode == Mode::La {
        let problem = problem.expect("la mode has a translation");
        let session = Session::new(record, problem);
        return Ok(vec![
            ChatMessage::system(agent_system_prompt(shots)),
            ChatMessage::user(session.presentation()),
        ]);
    }

    let system = match mode {
        Mode::Direct => DIRECT_SYSTEM,
        Mode::Cot => COT_SYSTEM,
        _ => ABLATION_SYSTEM,
    };
    let mut messages = vec![ChatMessage::system(system)];
    for demo in demos().iter().filter(|d| d.record.task == record.task).take(shots.min(MAX_SHOTS)) {
        let demo_problem = match mode {
            Mode::LaAblation => Some(from_logic_block(&demo.record).expect("demos carry valid logic")),
            _ => None,
        };
        messages.push(ChatMessage::user(user_text(&demo.record, mode, demo_problem.as_ref())));
        messages.push(ChatMessage::assistant(demo_reply(demo, mode)));
    }
    messages.push(ChatMessage::user(user_text(record, mode, problem)));
    Ok(messages)
}
