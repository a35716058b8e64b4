//! Pulling an answer label out of a completion.

use la_agent::TaskRecord;

use crate::mode::Mode;

/// The predicted label, or `None` for an abstention.
///
/// Direct mode reads the first token. The other modes take the last line
/// containing `Answer:` (any case) followed by a valid label.
pub fn extract_answer(text: &str, mode: Mode, record: &TaskRecord) -> Option<String> {
    match mode {
        Mode::Direct => text.split_whitespace().next().and_then(|token| record.normalize_label(token)),
        Mode::Cot | Mode::La | Mode::LaAblation => {
            text.lines().rev().find_map(|line| answer_on_line(line, record))
        }
    }
}

fn answer_on_line(line: &str, record: &TaskRecord) -> Option<String> {
    let lower = line.to_ascii_lowercase();
    let at = lower.rfind("answer:")?;
    let rest = &line[at + "answer:".len()..];
    record.normalize_label(rest.split_whitespace().next()?)
}
