//! Running a dataset under one mode with a bounded pool of workers.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use la_agent::problem::{parse_problem, ParseExchange};
use la_agent::{
    run_agent, AgentConfig, Backend, BackendError, BackendSpec, EventKind, Task, TaskRecord, TranscriptEvent,
};
use serde_json::json;
use thiserror::Error;

use crate::dataset::{dataset_label, load_dataset, DatasetError};
use crate::extract::extract_answer;
use crate::mode::Mode;
use crate::prompts::build_prompt;
use crate::report::{Aggregate, EvalReport, Row};

#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub mode: Mode,
    pub backend: BackendSpec,
    /// Used when `agent.parser` is external.
    pub parser_backend: Option<BackendSpec>,
    /// Step and repair budgets, parser mode and shot count.
    pub agent: AgentConfig,
    pub limit: Option<usize>,
    pub concurrency: usize,
    /// Directory for one transcript file per record.
    pub transcripts: Option<PathBuf>,
}

impl EvalConfig {
    pub fn new(mode: Mode, backend: BackendSpec) -> Self {
        EvalConfig {
            mode,
            backend,
            parser_backend: None,
            agent: AgentConfig::default(),
            limit: None,
            concurrency: 4,
            transcripts: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("backend configuration: {0}")]
    Backend(#[from] BackendError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

struct Outcome {
    row: Row,
    transcript: String,
}

fn event(
    step: usize,
    kind: EventKind,
    content: impl Into<String>,
    detail: serde_json::Value,
) -> TranscriptEvent {
    TranscriptEvent { step, kind, content: content.into(), detail }
}

fn parse_events(exchanges: &[ParseExchange], events: &mut Vec<TranscriptEvent>) {
    for (i, x) in exchanges.iter().enumerate() {
        events.push(event(0, EventKind::Llm, x.reply.clone(), json!({ "phase": "parse", "attempt": i + 1 })));
        if let Some(feedback) = &x.feedback {
            events.push(event(
                0,
                EventKind::Tool,
                feedback.clone(),
                json!({ "phase": "parse", "error": "ParseError" }),
            ));
        }
    }
}

fn to_jsonl(events: &[TranscriptEvent]) -> String {
    events.iter().map(|e| serde_json::to_string(e).expect("events serialize") + "\n").collect()
}

/// Direct, cot and la-ablation: one completion, then answer extraction.
fn single_completion(
    record: &TaskRecord,
    config: &EvalConfig,
    backend: &mut dyn Backend,
    parser: Option<&mut dyn Backend>,
) -> (Option<String>, usize, Vec<TranscriptEvent>) {
    let mut events = Vec::new();
    let problem = if config.mode == Mode::LaAblation {
        let mut exchanges = Vec::new();
        let parsed =
            parse_problem(record, config.agent.parser, backend, parser, config.agent.shots, &mut exchanges);
        parse_events(&exchanges, &mut events);
        match parsed {
            Ok(p) => Some(p),
            Err(e) => {
                events.push(event(
                    0,
                    EventKind::Final,
                    "",
                    json!({ "abstained": true, "reason": format!("parse failed: {e}") }),
                ));
                return (None, 0, events);
            }
        }
    } else {
        None
    };
    let messages = match build_prompt(record, config.mode, config.agent.shots, problem.as_ref()) {
        Ok(m) => m,
        Err(e) => {
            events.push(event(
                0,
                EventKind::Final,
                "",
                json!({ "abstained": true, "reason": e.to_string() }),
            ));
            return (None, 0, events);
        }
    };
    let reply = match backend.complete(&messages) {
        Ok(r) => r,
        Err(e) => {
            let reason = format!("backend error: {e}");
            events.push(event(1, EventKind::Final, "", json!({ "abstained": true, "reason": reason })));
            return (None, 1, events);
        }
    };
    events.push(event(1, EventKind::Llm, reply.clone(), json!({ "phase": "answer" })));
    let answer = extract_answer(&reply, config.mode, record);
    let detail = match &answer {
        Some(_) => json!({ "abstained": false }),
        None => json!({ "abstained": true, "reason": "no answer found" }),
    };
    events.push(event(1, EventKind::Final, answer.clone().unwrap_or_default(), detail));
    (answer, 1, events)
}

fn run_record(record: &TaskRecord, config: &EvalConfig) -> Outcome {
    let started = Instant::now();
    let abstention = record.task.abstention_label();
    let instantiated = config.backend.instantiate().and_then(|b| {
        let parser = config.parser_backend.as_ref().map(BackendSpec::instantiate).transpose()?;
        Ok((b, parser))
    });
    let (mut backend, mut parser) = match instantiated {
        Ok(pair) => pair,
        Err(e) => {
            let events = [event(
                0,
                EventKind::Final,
                abstention,
                json!({ "abstained": true, "reason": e.to_string() }),
            )];
            let row = Row::new(&record.id, config.mode.as_str(), None, abstention, &record.label, 0);
            return Outcome { row, transcript: to_jsonl(&events) };
        }
    };
    let parser: Option<&mut dyn Backend> = match parser.as_mut() {
        Some(p) => Some(p.as_mut()),
        None => None,
    };

    let (prediction, steps, transcript) = match config.mode {
        Mode::La => {
            let t = run_agent(record, &config.agent, backend.as_mut(), parser);
            let prediction = (!t.abstained).then(|| t.answer.clone());
            (prediction, t.steps, t.to_jsonl())
        }
        _ => {
            let (prediction, steps, events) = single_completion(record, config, backend.as_mut(), parser);
            (prediction, steps, to_jsonl(&events))
        }
    };
    let mut row = Row::new(&record.id, config.mode.as_str(), prediction, abstention, &record.label, steps);
    row.duration = started.elapsed();
    Outcome { row, transcript }
}

/// Evaluates `records` in input order with up to `config.concurrency`
/// workers. Each record gets its own backend instance.
pub fn evaluate_records(
    dataset: &str,
    records: &[TaskRecord],
    config: &EvalConfig,
) -> Result<EvalReport, EvalError> {
    // Configuration problems abort the run instead of becoming abstentions.
    config.backend.instantiate()?;
    if let Some(p) = &config.parser_backend {
        p.instantiate()?;
    }
    let records = &records[..config.limit.map_or(records.len(), |l| l.min(records.len()))];
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Outcome>>> = records.iter().map(|_| Mutex::new(None)).collect();
    let workers = config.concurrency.clamp(1, records.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(record) = records.get(i) else { break };
                let outcome = run_record(record, config);
                *slots[i].lock().expect("slot lock") = Some(outcome);
            });
        }
    });
    let outcomes: Vec<Outcome> =
        slots.into_iter().map(|s| s.into_inner().expect("slot lock").expect("every record ran")).collect();

    if let Some(dir) = &config.transcripts {
        std::fs::create_dir_all(dir)
            .map_err(|source| EvalError::Io { path: dir.display().to_string(), source })?;
        for o in &outcomes {
            let path = dir.join(format!("{}.jsonl", file_stem(&o.row.id)));
            std::fs::write(&path, &o.transcript)
                .map_err(|source| EvalError::Io { path: path.display().to_string(), source })?;
        }
    }
    let rows: Vec<Row> = outcomes.into_iter().map(|o| o.row).collect();
    let aggregate = Aggregate::from_rows(dataset, config.mode.as_str(), config.backend.model_name(), &rows);
    Ok(EvalReport { rows, aggregate })
}

/// Loads and evaluates a JSONL dataset.
pub fn run_eval(path: &Path, task: Option<Task>, config: &EvalConfig) -> Result<EvalReport, EvalError> {
    let records = load_dataset(path, task)?;
    evaluate_records(&dataset_label(path), &records, config)
}

fn file_stem(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}
