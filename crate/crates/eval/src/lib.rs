//! Evaluation harness: datasets, the four answering modes, answer extraction,
//! exact-match scoring and reports.

pub mod dataset;
pub mod extract;
pub mod mode;
pub mod prompts;
pub mod report;
pub mod runner;
pub mod synth;

pub use dataset::{dataset_label, load_dataset, parse_dataset, DatasetError};
pub use extract::extract_answer;
pub use mode::{Mode, UnknownMode};
pub use prompts::{build_prompt, PromptError, PROMPT_FIXTURE_VERSION};
pub use report::{
    emit_report, exact_match, load_predictions, Aggregate, EmptyInput, EvalReport, Format, Row,
};
pub use runner::{evaluate_records, run_eval, EvalConfig, EvalError};
pub use synth::synthesize_tf;
