//! The rule-guided loop: parse the problem, then let the model act on a
//! knowledge base one validated action at a time until it answers.

use std::time::{Duration, Instant};

use la_core::{EntailmentVerdict, KnowledgeBase, Rule, Statement};
use serde::Serialize;
use serde_json::{json, Value};

use crate::action::{parse_action, AgentAction, CallArg};
use crate::backend::{Backend, ChatMessage};
use crate::problem::{parse_problem, ParseExchange, ParsedProblem, ParserMode};
use crate::prompts;
use crate::record::TaskRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgentConfig {
    /// Backend calls allowed in the action loop, parsing excluded.
    pub max_steps: usize,
    /// Consecutive rejected replies tolerated before abstaining.
    pub repair_budget: usize,
    pub parser: ParserMode,
    /// In-context demonstrations, 0 to 3.
    pub shots: usize,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig { max_steps: 16, repair_budget: 3, parser: ParserMode::SelfParse, shots: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Llm,
    Action,
    Tool,
    Final,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranscriptEvent {
    /// Action-loop step; 0 for everything before the loop starts.
    pub step: usize,
    pub kind: EventKind,
    pub content: String,
    pub detail: Value,
}

#[derive(Debug, Clone)]
pub struct AgentTranscript {
    pub task_id: String,
    pub events: Vec<TranscriptEvent>,
    pub messages: Vec<ChatMessage>,
    pub problem: Option<ParsedProblem>,
    pub kb: KnowledgeBase,
    pub answer: String,
    pub abstained: bool,
    pub reason: Option<String>,
    /// Backend calls made by the action loop.
    pub steps: usize,
    /// Backend calls made while parsing the problem.
    pub parse_calls: usize,
    pub duration: Duration,
}

impl AgentTranscript {
    /// One JSON object per event. Timing is left out so runs compare equal.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("events serialize"));
            out.push('\n');
        }
        out
    }
}

/// Whether a reply counts against the repair budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Continue,
    Rejected,
    Answer(String),
}

/// The effect of one action: what the model is told and what is logged.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispatch {
    pub feedback: String,
    pub detail: Value,
    pub outcome: Outcome,
}

/// A knowledge base seeded with a problem's premises, plus the labels the
/// record allows.
pub struct Session<'a> {
    pub record: &'a TaskRecord,
    pub problem: &'a ParsedProblem,
    pub kb: KnowledgeBase,
}

fn error(kind: &str, message: impl std::fmt::Display) -> String {
    format!("ERROR {kind}: {message}")
}

impl<'a> Session<'a> {
    pub fn new(record: &'a TaskRecord, problem: &'a ParsedProblem) -> Self {
        let mut kb = KnowledgeBase::new();
        for p in &problem.premises {
            kb.assert_premise(p.clone());
        }
        Session { record, problem, kb }
    }

    /// The first user message of the action loop.
    pub fn presentation(&self) -> String {
        let mut out = format!("{}\n\nAtoms:\n", self.record.render());
        for (name, phrase) in &self.problem.glossary {
            out.push_str(&format!("{name}: {phrase}\n"));
        }
        out.push_str(&format!("\nKnowledge base:\n{}", self.kb.render_chain()));
        let heading = if self.problem.targets.len() == 1 && self.problem.targets.contains_key("H") {
            "Hypothesis"
        } else {
            "Options"
        };
        out.push_str(&format!("\n{heading}:\n"));
        for (label, s) in &self.problem.targets {
            out.push_str(&format!("{label}: {s}\n"));
        }
        out.push_str(&format!("\nAnswer with one of: {}", self.record.labels().join(", ")));
        out
    }

    fn resolve(&self, arg: &CallArg) -> Result<usize, String> {
        match arg {
            CallArg::Step(id) => Ok(*id),
            CallArg::Inline(s) => {
                self.kb.steps().iter().find(|step| step.content.matches(s)).map(|step| step.id).ok_or_else(
                    || error("NotInKnowledgeBase", format!("`{s}` is not a step; refer to steps by id")),
                )
            }
        }
    }

    fn step_added(&self, id: usize, rule: Option<Rule>, extra: Value) -> Dispatch {
        let mut feedback = self.kb.render_step(id).expect("step was just added");
        if rule.is_some_and(|r| r.is_categorical() && r != Rule::Contradictory) {
            feedback.push_str(" [assumes the subject term is nonempty]");
        }
        let mut detail = json!({ "step_id": id });
        if let (Value::Object(d), Value::Object(e)) = (&mut detail, extra) {
            d.extend(e);
        }
        Dispatch { feedback, detail, outcome: Outcome::Continue }
    }

    fn tool_error(message: String, kind: &str) -> Dispatch {
        Dispatch { feedback: message, detail: json!({ "error": kind }), outcome: Outcome::Continue }
    }

    fn rejected(kind: &str, message: impl std::fmt::Display) -> Dispatch {
        Dispatch {
            feedback: error(kind, message),
            detail: json!({ "error": kind }),
            outcome: Outcome::Rejected,
        }
    }

    pub fn dispatch(&mut self, action: &AgentAction) -> Dispatch {
        match action {
            AgentAction::Premise(s) => {
                let id = self.kb.assert_premise(s.clone());
                self.step_added(id, None, json!({}))
            }
            AgentAction::Call { rule, args } => {
                let ids: Result<Vec<usize>, String> = args.iter().map(|a| self.resolve(a)).collect();
                let ids = match ids {
                    Ok(ids) => ids,
                    Err(message) => return Self::tool_error(message, "NotInKnowledgeBase"),
                };
                match self.kb.apply_rule(rule, &ids) {
                    Ok(id) => self.step_added(id, rule.parse().ok(), json!({ "rule": rule, "inputs": ids })),
                    Err(e) => Self::tool_error(error(e.kind(), &e), e.kind()),
                }
            }
            AgentAction::Normalize(input) => match self.kb.normalize(*input) {
                Ok(id) => self.step_added(id, None, json!({ "normalized": input })),
                Err(e) => Self::tool_error(error(e.kind(), &e), e.kind()),
            },
            AgentAction::Eval { label, statement } => self.eval(label, statement.as_ref()),
            AgentAction::Answer(raw) => match self.record.normalize_label(raw) {
                Some(label) => Dispatch {
                    feedback: format!("Final answer: {label}"),
                    detail: json!({ "answer": label }),
                    outcome: Outcome::Answer(label),
                },
                None => Self::rejected(
                    "UnknownLabel",
                    format!("`{raw}` is not an answer label; use one of {}", self.record.labels().join(", ")),
                ),
            },
        }
    }

    fn eval(&self, label: &str, statement: Option<&Statement>) -> Dispatch {
        let target = match statement {
            Some(s) => s.clone(),
            None => match self.problem.targets.iter().find(|(l, _)| l.eq_ignore_ascii_case(label)) {
                Some((_, s)) => s.clone(),
                None => {
                    let known: Vec<&str> = self.problem.targets.keys().map(String::as_str).collect();
                    return Self::rejected(
                        "UnknownLabel",
                        format!("`{label}` is not an option; use one of {}", known.join(", ")),
                    );
                }
            },
        };
        match self.kb.check_hypothesis(&target) {
            Ok(report) => {
                let (word, gloss) = match report.verdict {
                    EntailmentVerdict::Valid => ("VALID", "follows from the premises"),
                    EntailmentVerdict::Contradicted => ("INVALID", "contradicts the premises"),
                    EntailmentVerdict::Unknown => {
                        ("UNKNOWN", "neither follows from nor contradicts the premises")
                    }
                };
                Dispatch {
                    feedback: format!("{word}: {label} `{target}` {gloss}."),
                    detail: json!({
                        "label": label,
                        "statement": target.to_string(),
                        "verdict": report.verdict.as_str(),
                        "derived_syntactically": report.derived_syntactically,
                    }),
                    outcome: Outcome::Continue,
                }
            }
            Err(e) => Self::tool_error(error(e.kind(), &e), e.kind()),
        }
    }
}

struct Run<'r> {
    record: &'r TaskRecord,
    events: Vec<TranscriptEvent>,
    started: Instant,
}

impl Run<'_> {
    fn log(&mut self, step: usize, kind: EventKind, content: impl Into<String>, detail: Value) {
        self.events.push(TranscriptEvent { step, kind, content: content.into(), detail });
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        mut self,
        problem: Option<ParsedProblem>,
        kb: KnowledgeBase,
        messages: Vec<ChatMessage>,
        answer: Option<String>,
        reason: Option<String>,
        steps: usize,
        parse_calls: usize,
    ) -> AgentTranscript {
        let abstained = answer.is_none();
        let answer = answer.unwrap_or_else(|| self.record.task.abstention_label().to_string());
        let chain = kb.render_chain();
        self.log(
            steps,
            EventKind::Final,
            answer.clone(),
            json!({ "abstained": abstained, "reason": reason, "steps": steps, "chain": chain }),
        );
        AgentTranscript {
            task_id: self.record.id.clone(),
            events: self.events,
            messages,
            problem,
            kb,
            answer,
            abstained,
            reason,
            steps,
            parse_calls,
            duration: self.started.elapsed(),
        }
    }
}

/// Runs the full loop on one record. Failures of any kind end in an
/// abstention recorded in the transcript; nothing is returned as an error.
pub fn run_agent(
    record: &TaskRecord,
    config: &AgentConfig,
    backend: &mut dyn Backend,
    parser: Option<&mut dyn Backend>,
) -> AgentTranscript {
    let mut run = Run { record, events: Vec::new(), started: Instant::now() };

    let mut exchanges: Vec<ParseExchange> = Vec::new();
    let parsed = parse_problem(record, config.parser, backend, parser, config.shots, &mut exchanges);
    for (attempt, x) in exchanges.iter().enumerate() {
        run.log(0, EventKind::Llm, x.reply.clone(), json!({ "phase": "parse", "attempt": attempt + 1 }));
        if let Some(feedback) = &x.feedback {
            run.log(0, EventKind::Tool, feedback.clone(), json!({ "phase": "parse", "error": "ParseError" }));
        }
    }
    let parse_calls = exchanges.len();
    let problem = match parsed {
        Ok(p) => p,
        Err(e) => {
            let reason = format!("parse failed: {e}");
            return run.finish(None, KnowledgeBase::new(), Vec::new(), None, Some(reason), 0, parse_calls);
        }
    };

    let mut session = Session::new(record, &problem);
    run.log(
        0,
        EventKind::Tool,
        session.kb.render_chain(),
        json!({ "phase": "parse", "parser": config.parser.as_str(), "premises": problem.premises.len() }),
    );
    let mut messages = vec![
        ChatMessage::system(prompts::agent_system_prompt(config.shots)),
        ChatMessage::user(session.presentation()),
    ];

    let mut failures = 0;
    let mut steps = 0;
    let (answer, reason) = loop {
        if steps >= config.max_steps {
            break (None, Some(format!("step budget of {} exhausted", config.max_steps)));
        }
        steps += 1;
        let reply = match backend.complete(&messages) {
            Ok(r) => r,
            Err(e) => break (None, Some(format!("backend error: {e}"))),
        };
        run.log(steps, EventKind::Llm, reply.clone(), json!({ "phase": "act" }));
        messages.push(ChatMessage::assistant(reply.clone()));

        let dispatch = match parse_action(&reply) {
            Ok(action) => {
                run.log(steps, EventKind::Action, action.to_string(), json!({ "type": action.keyword() }));
                session.dispatch(&action)
            }
            Err(e) => {
                let kind = match e {
                    crate::action::ActionError::NoActionFound => "NoActionFound",
                    crate::action::ActionError::Malformed { .. } => "MalformedAction",
                };
                Dispatch {
                    feedback: error(kind, &e),
                    detail: json!({ "error": kind }),
                    outcome: Outcome::Rejected,
                }
            }
        };
        run.log(steps, EventKind::Tool, dispatch.feedback.clone(), dispatch.detail);
        match dispatch.outcome {
            Outcome::Answer(label) => break (Some(label), None),
            Outcome::Rejected => {
                failures += 1;
                if failures >= config.repair_budget {
                    break (None, Some(format!("repair budget of {} exhausted", config.repair_budget)));
                }
            }
            Outcome::Continue => failures = 0,
        }
        messages.push(ChatMessage::user(dispatch.feedback));
    };
    let kb = std::mem::take(&mut session.kb);
    run.finish(Some(problem), kb, messages, answer, reason, steps, parse_calls)
}
