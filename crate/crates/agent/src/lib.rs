//! A reasoning agent that drives the logic kernel through a chat model.
//!
//! The model first translates a problem into logic (or the record supplies a
//! translation), then emits one action per reply: invoke a named inference
//! rule, check an option against the premises, or answer. Every action is
//! validated and executed by `la_core`; errors are returned to the model as
//! feedback instead of aborting the run.

pub mod action;
pub mod backend;
pub mod http;
pub mod mock;
pub mod problem;
pub mod prompts;
pub mod record;
pub mod runtime;

pub use action::{parse_action, ActionError, AgentAction, CallArg};
pub use backend::{Backend, BackendError, BackendSpec, ChatMessage, Role};
pub use http::{HttpBackend, HttpConfig};
pub use mock::{MockBackend, MockEntry, MockScript, MockScriptError};
pub use problem::{parse_problem, ParsedProblem, ParserMode, ProblemError};
pub use record::{load_record, LogicBlock, RecordError, Task, TaskRecord};
pub use runtime::{run_agent, AgentConfig, AgentTranscript, EventKind, TranscriptEvent};
