//! Recursive-descent parsers for the operator and constructor syntaxes.
//!
//! Positions in [`ParseError`] are character offsets into the input, not byte
//! offsets, so they line up with what a person sees in a terminal.

use std::fmt;

use thiserror::Error;

use crate::formula::{is_identifier, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    fn new(position: usize, expected: impl Into<String>, found: impl Into<String>) -> Self {
        ParseError { position, expected: expected.into(), found: found.into() }
    }

    /// Shifts the position, for errors raised on a slice of a larger text.
    pub fn offset_by(mut self, chars: usize) -> Self {
        self.position += chars;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Implies,
    Equiv,
    Forall,
    Exists,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Not => f.write_str("`~`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Implies => f.write_str("`->`"),
            Tok::Equiv => f.write_str("`<->`"),
            Tok::Forall => f.write_str("`forall`"),
            Tok::Exists => f.write_str("`exists`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Token {
    tok: Tok,
    pos: usize,
}

/// `keywords` turns `forall`/`exists` into quantifier tokens; the constructor
/// syntax has no keywords.
fn lex(text: &str, keywords: bool) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '~' | '¬' if keywords => Tok::Not,
            '&' | '∧' if keywords => Tok::And,
            '|' | '∨' if keywords => Tok::Or,
            '→' if keywords => Tok::Implies,
            '↔' if keywords => Tok::Equiv,
            '∀' if keywords => Tok::Forall,
            '∃' if keywords => Tok::Exists,
            '-' if keywords && chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Implies
            }
            '<' if keywords && chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Tok::Equiv
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                match word.as_str() {
                    "forall" if keywords => Tok::Forall,
                    "exists" if keywords => Tok::Exists,
                    _ => Tok::Ident(word),
                }
            }
            other => {
                return Err(ParseError::new(start, "a token", format!("`{other}`")));
            }
        };
        i += 1;
        out.push(Token { tok, pos: start });
    }
    out.push(Token { tok: Tok::End, pos: chars.len() });
    Ok(out)
}

struct Cursor {
    tokens: Vec<Token>,
    at: usize,
}

impl Cursor {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> usize {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.at].tok.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::new(self.pos(), expected, self.peek().to_string())
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(name)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => Err(self.error("end of input")),
        }
    }
}

/// Parses operator syntax: `~`, `&`, `|`, `->`, `<->`, `forall x.`, `exists x.`
/// and their Unicode aliases `¬ ∧ ∨ → ↔ ∀ ∃`.
pub fn parse_operator(text: &str) -> Result<Formula, ParseError> {
    let mut p = OperatorParser { cur: Cursor { tokens: lex(text, true)?, at: 0 }, bound: Vec::new() };
    let f = p.equiv()?;
    p.cur.finish()?;
    Ok(f)
}

struct OperatorParser {
    cur: Cursor,
    bound: Vec<String>,
}

impl OperatorParser {
    fn equiv(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.implies()?;
        while *self.cur.peek() == Tok::Equiv {
            self.cur.bump();
            let right = self.implies()?;
            left = Formula::equiv(left, right);
        }
        Ok(left)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if *self.cur.peek() == Tok::Implies {
            self.cur.bump();
            let right = self.implies()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.and()?];
        while *self.cur.peek() == Tok::Or {
            self.cur.bump();
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while *self.cur.peek() == Tok::And {
            self.cur.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.cur.peek() {
            Tok::Not => {
                self.cur.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.cur.bump() == Tok::Forall;
                let var = self.cur.ident("a variable name")?;
                self.cur.expect(Tok::Dot, "`.`")?;
                self.bound.push(var.clone());
                let body = self.equiv();
                self.bound.pop();
                let body = body?;
                Ok(if universal { Formula::forall(var, body) } else { Formula::exists(var, body) })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.cur.peek().clone() {
            Tok::LParen => {
                self.cur.bump();
                let inner = self.equiv()?;
                self.cur.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.cur.bump();
                if *self.cur.peek() == Tok::LParen {
                    self.cur.bump();
                    let var_pos = self.cur.pos();
                    let var = self.cur.ident("a variable name")?;
                    if !self.is_bound(&var) {
                        return Err(ParseError::new(var_pos, "a bound variable", format!("`{var}`")));
                    }
                    self.cur.expect(Tok::RParen, "`)`")?;
                    Ok(Formula::pred(name, var))
                } else if self.is_bound(&name) {
                    Ok(Formula::Var(name))
                } else {
                    Ok(Formula::Atom(name))
                }
            }
            _ => Err(self.cur.error("a formula")),
        }
    }

    fn is_bound(&self, name: &str) -> bool {
        self.bound.iter().any(|b| b == name)
    }
}

/// Parses constructor syntax such as `Implies(Atom(P), Not(Atom(Q)))`.
pub fn parse_constructor(text: &str) -> Result<Formula, ParseError> {
    let mut cur = Cursor { tokens: lex(text, false)?, at: 0 };
    let f = constructor(&mut cur)?;
    cur.finish()?;
    Ok(f)
}

const CONSTRUCTORS: &str = "a constructor (Var, Atom, Pred, Not, And, Or, Implies, Equiv, Forall, Exists)";

fn constructor(cur: &mut Cursor) -> Result<Formula, ParseError> {
    let head_pos = cur.pos();
    let head = cur.ident(CONSTRUCTORS)?;
    let known = matches!(
        head.as_str(),
        "Var" | "Atom" | "Pred" | "Not" | "And" | "Or" | "Implies" | "Equiv" | "Forall" | "Exists"
    );
    if !known {
        return Err(ParseError::new(head_pos, CONSTRUCTORS, format!("`{head}`")));
    }
    cur.expect(Tok::LParen, "`(`")?;
    let f = match head.as_str() {
        "Var" => Formula::Var(cur.ident("an identifier")?),
        "Atom" => Formula::Atom(cur.ident("an identifier")?),
        "Pred" => {
            let name = cur.ident("a predicate name")?;
            cur.expect(Tok::Comma, "`,`")?;
            Formula::pred(name, cur.ident("a variable name")?)
        }
        "Not" => Formula::not(constructor(cur)?),
        "And" | "Or" => {
            let mut parts = vec![constructor(cur)?];
            while *cur.peek() == Tok::Comma {
                cur.bump();
                parts.push(constructor(cur)?);
            }
            if parts.len() < 2 {
                return Err(cur.error("`,` and at least two arguments"));
            }
            if head == "And" {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        "Implies" | "Equiv" => {
            let a = constructor(cur)?;
            cur.expect(Tok::Comma, "`,`")?;
            let b = constructor(cur)?;
            if head == "Implies" {
                Formula::implies(a, b)
            } else {
                Formula::equiv(a, b)
            }
        }
        "Forall" | "Exists" => {
            let var = cur.ident("a variable name")?;
            cur.expect(Tok::Comma, "`,`")?;
            let body = constructor(cur)?;
            if head == "Forall" {
                Formula::forall(var, body)
            } else {
                Formula::exists(var, body)
            }
        }
        _ => unreachable!(),
    };
    cur.expect(Tok::RParen, "`)`")?;
    Ok(f)
}

/// Picks the syntax from the leading token: a known constructor name
/// followed by `(` means constructor syntax, anything else is operator syntax.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    if looks_like_constructor(text) {
        parse_constructor(text)
    } else {
        parse_operator(text)
    }
}

fn looks_like_constructor(text: &str) -> bool {
    let t = text.trim_start();
    let head: String = t.chars().take_while(|c| c.is_ascii_alphanumeric() || *c == '_').collect();
    let rest = t[head.len()..].trim_start();
    is_identifier(&head)
        && rest.starts_with('(')
        && matches!(
            head.as_str(),
            "Var" | "Atom" | "Pred" | "Not" | "And" | "Or" | "Implies" | "Equiv" | "Forall" | "Exists"
        )
}
