//! Knowledge-base content: either a formula or a categorical statement.

use std::fmt;

use thiserror::Error;

use crate::categorical::{looks_categorical, CategoricalError, CategoricalStatement};
use crate::formula::Formula;
use crate::parser::{parse_formula, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    Formula(Formula),
    Categorical(CategoricalStatement),
}

impl Statement {
    pub fn as_formula(&self) -> Option<&Formula> {
        match self {
            Statement::Formula(f) => Some(f),
            Statement::Categorical(_) => None,
        }
    }

    pub fn as_categorical(&self) -> Option<&CategoricalStatement> {
        match self {
            Statement::Categorical(c) => Some(c),
            Statement::Formula(_) => None,
        }
    }

    /// Structural equality after flattening and double-negation normalization.
    pub fn matches(&self, other: &Statement) -> bool {
        match (self, other) {
            (Statement::Formula(a), Statement::Formula(b)) => a.matches_modulo_negation(b),
            (Statement::Categorical(a), Statement::Categorical(b)) => a == b,
            _ => false,
        }
    }
}

impl From<Formula> for Statement {
    fn from(f: Formula) -> Self {
        Statement::Formula(f)
    }
}

impl From<CategoricalStatement> for Statement {
    fn from(c: CategoricalStatement) -> Self {
        Statement::Categorical(c)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Formula(x) => x.fmt(f),
            Statement::Categorical(c) => c.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatementError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Categorical(#[from] CategoricalError),
}

/// Parses categorical text (`A(S,P)=true`), constructor syntax or operator
/// syntax, chosen by the leading token.
pub fn parse_statement(text: &str) -> Result<Statement, StatementError> {
    if looks_categorical(text) {
        Ok(Statement::Categorical(text.parse()?))
    } else {
        Ok(Statement::Formula(parse_formula(text)?))
    }
}
