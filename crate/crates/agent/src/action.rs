//! The line grammar a model must emit to act:
//!
//! ```text
//! PREMISE: <formula>
//! CALL <Rule>(<step id or formula>, ...)
//! NORMALIZE <step id>
//! EVAL <label>[: <formula>]
//! ANSWER: <label>
//! ```
//!
//! Free text around the action is ignored. When a reply holds several
//! paragraphs with actions, the last such paragraph counts, and within it the
//! first action line.

use std::fmt;

use la_core::{parse_statement, Statement, StatementError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CallArg {
    Step(usize),
    Inline(Statement),
}

impl fmt::Display for CallArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CallArg::Step(id) => write!(f, "{id}"),
            CallArg::Inline(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AgentAction {
    Premise(Statement),
    Call {
        rule: String,
        args: Vec<CallArg>,
    },
    Normalize(usize),
    /// Without a formula the parsed problem's statement for `label` is used.
    Eval {
        label: String,
        statement: Option<Statement>,
    },
    Answer(String),
}

impl AgentAction {
    pub fn keyword(&self) -> &'static str {
        match self {
            AgentAction::Premise(_) => "PREMISE",
            AgentAction::Call { .. } => "CALL",
            AgentAction::Normalize(_) => "NORMALIZE",
            AgentAction::Eval { .. } => "EVAL",
            AgentAction::Answer(_) => "ANSWER",
        }
    }
}

/// Canonical one-line form; parses back to the same action.
impl fmt::Display for AgentAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentAction::Premise(s) => write!(f, "PREMISE: {s}"),
            AgentAction::Call { rule, args } => {
                let args: Vec<String> = args.iter().map(ToString::to_string).collect();
                write!(f, "CALL {rule}({})", args.join(", "))
            }
            AgentAction::Normalize(id) => write!(f, "NORMALIZE {id}"),
            AgentAction::Eval { label, statement: None } => write!(f, "EVAL {label}"),
            AgentAction::Eval { label, statement: Some(s) } => write!(f, "EVAL {label}: {s}"),
            AgentAction::Answer(label) => write!(f, "ANSWER: {label}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("no action found; end your reply with one action line such as `CALL Contrapositive(1)` or `ANSWER: A`")]
    NoActionFound,
    #[error("malformed action on line {line}, column {column}: {message}")]
    Malformed { line: usize, column: usize, message: String },
}

#[derive(Clone, Copy)]
enum Keyword {
    Premise,
    Call,
    Normalize,
    Eval,
    Answer,
}

/// Recognizes the keyword starting `line` and returns it with the char
/// length it occupies.
fn keyword(line: &str) -> Option<(Keyword, usize)> {
    let boundary = |rest: &str| rest.is_empty() || rest.starts_with([' ', '\t', ':']);
    for (word, kw) in [
        ("PREMISE", Keyword::Premise),
        ("CALL", Keyword::Call),
        ("NORMALIZE", Keyword::Normalize),
        ("EVAL", Keyword::Eval),
    ] {
        if let Some(rest) = line.strip_prefix(word) {
            if boundary(rest) {
                return Some((kw, word.len()));
            }
        }
    }
    let head = line.get(..6)?;
    if head.eq_ignore_ascii_case("answer") && boundary(&line[6..]) {
        return Some((Keyword::Answer, 6));
    }
    None
}

struct Line<'a> {
    number: usize,
    indent: usize,
    text: &'a str,
}

impl Line<'_> {
    fn error(&self, offset: usize, message: impl Into<String>) -> ActionError {
        ActionError::Malformed {
            line: self.number,
            column: self.indent + offset + 1,
            message: message.into(),
        }
    }
}

pub fn parse_action(text: &str) -> Result<AgentAction, ActionError> {
    let mut chosen: Option<(usize, Line, Keyword, usize)> = None;
    let mut paragraph = 0;
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            paragraph += 1;
            continue;
        }
        let trimmed = raw.trim_start();
        let Some((kw, len)) = keyword(trimmed) else { continue };
        let replace = match &chosen {
            None => true,
            Some((p, ..)) => *p != paragraph,
        };
        if replace {
            let indent = raw.chars().count() - trimmed.chars().count();
            chosen = Some((paragraph, Line { number: i + 1, indent, text: trimmed.trim_end() }, kw, len));
        }
    }
    let (_, line, kw, len) = chosen.ok_or(ActionError::NoActionFound)?;
    parse_line(&line, kw, len)
}

fn statement_at(line: &Line, offset: usize, text: &str) -> Result<Statement, ActionError> {
    let lead = text.chars().take_while(|c| c.is_whitespace()).count();
    let body = text.trim();
    if body.is_empty() {
        return Err(line.error(offset + lead, "expected a formula"));
    }
    parse_statement(body).map_err(|e| match e {
        StatementError::Parse(p) => line.error(offset + lead + p.position, p.to_string()),
        StatementError::Categorical(c) => line.error(offset + lead, c.to_string()),
    })
}

/// Char offset of a byte index within `s`.
fn chars_before(s: &str, byte: usize) -> usize {
    s[..byte].chars().count()
}

fn parse_line(line: &Line, kw: Keyword, len: usize) -> Result<AgentAction, ActionError> {
    let rest = &line.text[len..];
    match kw {
        Keyword::Premise | Keyword::Answer => {
            let Some(body) = rest.trim_start().strip_prefix(':') else {
                let name = if matches!(kw, Keyword::Premise) { "PREMISE" } else { "ANSWER" };
                return Err(line.error(len, format!("expected `:` after {name}")));
            };
            let offset = chars_before(line.text, line.text.len() - body.len());
            if matches!(kw, Keyword::Premise) {
                return Ok(AgentAction::Premise(statement_at(line, offset, body)?));
            }
            let label = body.trim().trim_end_matches('.').trim();
            if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric()) {
                return Err(line.error(offset, format!("expected an answer label, found `{}`", body.trim())));
            }
            Ok(AgentAction::Answer(label.to_string()))
        }
        Keyword::Normalize => {
            let arg = rest.trim();
            arg.parse::<usize>()
                .map(AgentAction::Normalize)
                .map_err(|_| line.error(len + 1, format!("expected a step id, found `{arg}`")))
        }
        Keyword::Eval => {
            let body = rest.trim_start();
            let start = line.text.len() - body.len();
            let label_len = body.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(body.len());
            if label_len == 0 {
                return Err(line.error(chars_before(line.text, start), "expected an option label after EVAL"));
            }
            let label = body[..label_len].to_string();
            let after = body[label_len..].trim_start();
            if after.is_empty() {
                return Ok(AgentAction::Eval { label, statement: None });
            }
            let Some(formula) = after.strip_prefix(':') else {
                let at = chars_before(line.text, line.text.len() - after.len());
                return Err(line.error(at, format!("expected `:` or end of line after `{label}`")));
            };
            let offset = chars_before(line.text, line.text.len() - formula.len());
            Ok(AgentAction::Eval { label, statement: Some(statement_at(line, offset, formula)?) })
        }
        Keyword::Call => parse_call(line, len),
    }
}

fn parse_call(line: &Line, len: usize) -> Result<AgentAction, ActionError> {
    let text = line.text;
    let body = text[len..].trim_start();
    let start = text.len() - body.len();
    let name_len = body.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(body.len());
    if name_len == 0 {
        return Err(line.error(chars_before(text, start), "expected a rule name after CALL"));
    }
    let rule = body[..name_len].to_string();
    let open = start + name_len;
    if !text[open..].starts_with('(') {
        return Err(line.error(chars_before(text, open), format!("expected `(` after `{rule}`")));
    }
    if !text.ends_with(')') {
        return Err(line.error(text.chars().count(), "expected `)` closing the argument list"));
    }
    let inner_start = open + 1;
    let inner_end = text.len() - 1;
    if text[inner_start..inner_end].trim().is_empty() {
        return Ok(AgentAction::Call { rule, args: Vec::new() });
    }

    // Split on top-level commas so constructor-syntax arguments stay whole.
    let mut pieces = Vec::new();
    let (mut depth, mut piece_start) = (0i32, inner_start);
    for (i, c) in text[inner_start..inner_end].char_indices() {
        let at = inner_start + i;
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(line.error(chars_before(text, at), "unbalanced `)`"));
                }
            }
            ',' if depth == 0 => {
                pieces.push((piece_start, at));
                piece_start = at + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(line.error(chars_before(text, inner_end), "unbalanced `(`"));
    }
    pieces.push((piece_start, inner_end));

    let mut args = Vec::new();
    for (a, b) in pieces {
        let raw = &text[a..b];
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            return Err(line.error(chars_before(text, a), "empty argument"));
        }
        if trimmed.chars().all(|c| c.is_ascii_digit()) {
            let id = trimmed.parse().map_err(|_| {
                line.error(chars_before(text, a), format!("step id `{trimmed}` is too large"))
            })?;
            args.push(CallArg::Step(id));
        } else {
            args.push(CallArg::Inline(statement_at(line, chars_before(text, a), raw)?));
        }
    }
    Ok(AgentAction::Call { rule, args })
}

#[cfg(test)]
mod tests {
    use super::*;
    use la_core::parse_operator;

    fn st(text: &str) -> Statement {
        parse_statement(text).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(
            parse_action("Applying the contrapositive law.\nCALL Contrapositive(1)"),
            Ok(AgentAction::Call { rule: "Contrapositive".into(), args: vec![CallArg::Step(1)] })
        );
        assert_eq!(
            parse_action("EVAL A: ~P -> ~Q"),
            Ok(AgentAction::Eval {
                label: "A".into(),
                statement: Some(parse_operator("~P -> ~Q").unwrap().into())
            })
        );
        assert_eq!(parse_action("The answer is obvious."), Err(ActionError::NoActionFound));
    }

    #[test]
    fn every_form() {
        assert_eq!(parse_action("PREMISE: P -> Q"), Ok(AgentAction::Premise(st("P -> Q"))));
        assert_eq!(parse_action("NORMALIZE 5"), Ok(AgentAction::Normalize(5)));
        assert_eq!(parse_action("EVAL H"), Ok(AgentAction::Eval { label: "H".into(), statement: None }));
        assert_eq!(parse_action("ANSWER: B"), Ok(AgentAction::Answer("B".into())));
        assert_eq!(parse_action("Answer: yes."), Ok(AgentAction::Answer("yes".into())));
        assert_eq!(
            parse_action("CALL Transitive(1, 2)"),
            Ok(AgentAction::Call {
                rule: "Transitive".into(),
                args: vec![CallArg::Step(1), CallArg::Step(2)]
            })
        );
        assert_eq!(
            parse_action("CALL Transitive(Implies(Atom(P), Atom(Q)), 2)"),
            Ok(AgentAction::Call {
                rule: "Transitive".into(),
                args: vec![CallArg::Inline(st("P -> Q")), CallArg::Step(2)]
            })
        );
        assert_eq!(
            parse_action("CALL Contrary(A(S,P)=true)").unwrap().to_string(),
            "CALL Contrary(A(S,P)=true)"
        );
    }

    #[test]
    fn last_paragraph_first_line_wins() {
        let text = "CALL Contrapositive(1)\n\nThinking more.\nEVAL A\nANSWER: B";
        assert_eq!(parse_action(text), Ok(AgentAction::Eval { label: "A".into(), statement: None }));
        let text = "EVAL A\n\nNo actions down here.";
        assert_eq!(parse_action(text), Ok(AgentAction::Eval { label: "A".into(), statement: None }));
    }

    #[test]
    fn positions_in_errors() {
        assert_eq!(
            parse_action("CALL Contrapositive(P -> -> Q)"),
            Err(ActionError::Malformed {
                line: 1,
                column: 26,
                message: "parse error at 5: expected a formula, found `->`".into()
            })
        );
        assert!(matches!(
            parse_action("ok\n  NORMALIZE x"),
            Err(ActionError::Malformed { line: 2, column: 13, .. })
        ));
        assert!(matches!(parse_action("CALL Contrapositive(1"), Err(ActionError::Malformed { .. })));
        assert!(matches!(parse_action("CALL (1)"), Err(ActionError::Malformed { column: 6, .. })));
        assert!(matches!(parse_action("PREMISE P"), Err(ActionError::Malformed { .. })));
        assert!(matches!(parse_action("ANSWER: the first one"), Err(ActionError::Malformed { .. })));
        assert!(matches!(parse_action("CALL Transitive(1,,2)"), Err(ActionError::Malformed { .. })));
    }

    #[test]
    fn keywords_need_a_boundary() {
        assert_eq!(parse_action("EVALUATION of options"), Err(ActionError::NoActionFound));
        assert_eq!(parse_action("Answers vary."), Err(ActionError::NoActionFound));
        assert_eq!(
            parse_action("CALL Contrapositive()"),
            Ok(AgentAction::Call { rule: "Contrapositive".into(), args: vec![] })
        );
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "PREMISE: P -> Q",
            "CALL Transitive(1, 2)",
            "NORMALIZE 3",
            "EVAL A: ~P -> ~Q",
            "EVAL H",
            "ANSWER: C",
        ] {
            assert_eq!(parse_action(text).unwrap().to_string(), text);
        }
    }
}
