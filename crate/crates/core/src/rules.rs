//! The callable inference rules.
//!
//! Each rule is a total function: it either produces a conclusion entailed by
//! its inputs or returns one of its declared errors. Contrary, subcontrary and
//! both subalternation rules are only valid when the subject term is
//! nonempty, and their applications carry [`Assumption::ExistentialImport`].

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::categorical::{CategoricalForm, CategoricalStatement};
use crate::formula::Formula;
use crate::statement::Statement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Contrapositive,
    Transitive,
    DeMorgans,
    Contradictory,
    Contrary,
    Subcontrary,
    SubalternationForward,
    SubalternationBackward,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::Contrapositive,
        Rule::Transitive,
        Rule::DeMorgans,
        Rule::Contradictory,
        Rule::Contrary,
        Rule::Subcontrary,
        Rule::SubalternationForward,
        Rule::SubalternationBackward,
    ];

    /// The wire identifier used in tool calls and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Rule::Contrapositive => "Contrapositive",
            Rule::Transitive => "Transitive",
            Rule::DeMorgans => "De_Morgans",
            Rule::Contradictory => "Contradictory",
            Rule::Contrary => "Contrary",
            Rule::Subcontrary => "Subcontrary",
            Rule::SubalternationForward => "Subalternation_forward",
            Rule::SubalternationBackward => "Subalternation_backward",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Rule::Transitive => 2,
            _ => 1,
        }
    }

    pub fn is_categorical(self) -> bool {
        !matches!(self, Rule::Contrapositive | Rule::Transitive | Rule::DeMorgans)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for Rule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| UnknownRule(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Assumption {
    /// The subject term denotes at least one individual.
    ExistentialImport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleApplication {
    pub rule: Rule,
    pub inputs: Vec<Statement>,
    pub output: Statement,
    pub assumption: Option<Assumption>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("expected an implication, found `{0}`")]
    NotAnImplication(String),
    #[error("middle terms differ: `{left}` vs `{right}`")]
    MiddleTermMismatch { left: String, right: String },
    #[error("`{0}` is neither a negated conjunction/disjunction nor a conjunction/disjunction of negations")]
    NotDeMorganShape(String),
    #[error("the truth value of `{0}` does not determine its counterpart")]
    Undetermined(String),
    #[error("rule does not apply to {form}-form statement `{statement}`")]
    WrongForm { form: char, statement: String },
    #[error("{rule} takes {expected} argument(s), got {found}")]
    Arity { rule: Rule, expected: usize, found: usize },
    #[error("{rule} expects a formula, got categorical statement `{found}`")]
    ExpectedFormula { rule: Rule, found: String },
    #[error("{rule} expects a categorical statement, got formula `{found}`")]
    ExpectedCategorical { rule: Rule, found: String },
}

impl RuleError {
    /// Stable variant name for structured reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            RuleError::NotAnImplication(_) => "NotAnImplication",
            RuleError::MiddleTermMismatch { .. } => "MiddleTermMismatch",
            RuleError::NotDeMorganShape(_) => "NotDeMorganShape",
            RuleError::Undetermined(_) => "Undetermined",
            RuleError::WrongForm { .. } => "WrongForm",
            RuleError::Arity { .. } => "Arity",
            RuleError::ExpectedFormula { .. } => "ExpectedFormula",
            RuleError::ExpectedCategorical { .. } => "ExpectedCategorical",
        }
    }
}

/// `a -> b` becomes `~b -> ~a`. Inner negations are left as they are.
pub fn contrapositive(f: &Formula) -> Result<Formula, RuleError> {
    match f {
        Formula::Implies(a, b) => {
            Ok(Formula::implies(Formula::not((**b).clone()), Formula::not((**a).clone())))
        }
        other => Err(RuleError::NotAnImplication(other.to_string())),
    }
}

/// `a -> b` and `b' -> c` give `a -> c` when `b` and `b'` agree after
/// double-negation normalization.
pub fn transitive(f: &Formula, g: &Formula) -> Result<Formula, RuleError> {
    let (a, b) = match f {
        Formula::Implies(a, b) => (a, b),
        other => return Err(RuleError::NotAnImplication(other.to_string())),
    };
    let (b2, c) = match g {
        Formula::Implies(b2, c) => (b2, c),
        other => return Err(RuleError::NotAnImplication(other.to_string())),
    };
    if !b.matches_modulo_negation(b2) {
        return Err(RuleError::MiddleTermMismatch { left: b.to_string(), right: b2.to_string() });
    }
    Ok(Formula::implies((**a).clone(), (**c).clone()))
}

/// Moves a negation across a conjunction or disjunction, in either direction.
pub fn de_morgans(f: &Formula) -> Result<Formula, RuleError> {
    let negate_all = |parts: &[Formula]| parts.iter().cloned().map(Formula::not).collect::<Vec<_>>();
    let strip_all = |parts: &[Formula]| -> Option<Vec<Formula>> {
        parts
            .iter()
            .map(|p| match p {
                Formula::Not(inner) => Some((**inner).clone()),
                _ => None,
            })
            .collect()
    };
    match f {
        Formula::Not(inner) => match inner.as_ref() {
            Formula::And(parts) => return Ok(Formula::Or(negate_all(parts))),
            Formula::Or(parts) => return Ok(Formula::And(negate_all(parts))),
            _ => {}
        },
        Formula::And(parts) => {
            if let Some(inner) = strip_all(parts) {
                return Ok(Formula::not(Formula::Or(inner)));
            }
        }
        Formula::Or(parts) => {
            if let Some(inner) = strip_all(parts) {
                return Ok(Formula::not(Formula::And(inner)));
            }
        }
        _ => {}
    }
    Err(RuleError::NotDeMorganShape(f.to_string()))
}

/// A and O, E and I: opposite truth values, terms unchanged.
pub fn contradictory(s: &CategoricalStatement) -> CategoricalStatement {
    use CategoricalForm::*;
    let partner = match s.form {
        A => O,
        O => A,
        E => I,
        I => E,
    };
    s.with(partner, !s.truth)
}

fn wrong_form(s: &CategoricalStatement) -> RuleError {
    RuleError::WrongForm { form: s.form.letter(), statement: s.to_string() }
}

/// A true universal makes its contrary false.
pub fn contrary(s: &CategoricalStatement) -> Result<CategoricalStatement, RuleError> {
    use CategoricalForm::*;
    let partner = match s.form {
        A => E,
        E => A,
        I | O => return Err(wrong_form(s)),
    };
    if !s.truth {
        return Err(RuleError::Undetermined(s.to_string()));
    }
    Ok(s.with(partner, false))
}

/// A false particular makes its subcontrary true.
pub fn subcontrary(s: &CategoricalStatement) -> Result<CategoricalStatement, RuleError> {
    use CategoricalForm::*;
    let partner = match s.form {
        I => O,
        O => I,
        A | E => return Err(wrong_form(s)),
    };
    if s.truth {
        return Err(RuleError::Undetermined(s.to_string()));
    }
    Ok(s.with(partner, true))
}

/// Truth descends from a universal to its particular.
pub fn subalternation_forward(s: &CategoricalStatement) -> Result<CategoricalStatement, RuleError> {
    use CategoricalForm::*;
    let partner = match s.form {
        A => I,
        E => O,
        I | O => return Err(wrong_form(s)),
    };
    if !s.truth {
        return Err(RuleError::Undetermined(s.to_string()));
    }
    Ok(s.with(partner, true))
}

/// Falsity ascends from a particular to its universal.
pub fn subalternation_backward(s: &CategoricalStatement) -> Result<CategoricalStatement, RuleError> {
    use CategoricalForm::*;
    let partner = match s.form {
        I => A,
        O => E,
        A | E => return Err(wrong_form(s)),
    };
    if s.truth {
        return Err(RuleError::Undetermined(s.to_string()));
    }
    Ok(s.with(partner, false))
}

fn formula_arg(rule: Rule, s: &Statement) -> Result<&Formula, RuleError> {
    match s {
        Statement::Formula(f) => Ok(f),
        Statement::Categorical(c) => Err(RuleError::ExpectedFormula { rule, found: c.to_string() }),
    }
}

fn categorical_arg(rule: Rule, s: &Statement) -> Result<&CategoricalStatement, RuleError> {
    match s {
        Statement::Categorical(c) => Ok(c),
        Statement::Formula(f) => Err(RuleError::ExpectedCategorical { rule, found: f.to_string() }),
    }
}

/// Runs `rule` on `inputs`, checking arity and argument kinds first.
pub fn apply(rule: Rule, inputs: &[Statement]) -> Result<RuleApplication, RuleError> {
    if inputs.len() != rule.arity() {
        return Err(RuleError::Arity { rule, expected: rule.arity(), found: inputs.len() });
    }
    let (output, assumption): (Statement, Option<Assumption>) = match rule {
        Rule::Contrapositive => (contrapositive(formula_arg(rule, &inputs[0])?)?.into(), None),
        Rule::Transitive => {
            let f = formula_arg(rule, &inputs[0])?;
            let g = formula_arg(rule, &inputs[1])?;
            (transitive(f, g)?.into(), None)
        }
        Rule::DeMorgans => (de_morgans(formula_arg(rule, &inputs[0])?)?.into(), None),
        Rule::Contradictory => (contradictory(categorical_arg(rule, &inputs[0])?).into(), None),
        Rule::Contrary => {
            (contrary(categorical_arg(rule, &inputs[0])?)?.into(), Some(Assumption::ExistentialImport))
        }
        Rule::Subcontrary => {
            (subcontrary(categorical_arg(rule, &inputs[0])?)?.into(), Some(Assumption::ExistentialImport))
        }
        Rule::SubalternationForward => (
            subalternation_forward(categorical_arg(rule, &inputs[0])?)?.into(),
            Some(Assumption::ExistentialImport),
        ),
        Rule::SubalternationBackward => (
            subalternation_backward(categorical_arg(rule, &inputs[0])?)?.into(),
            Some(Assumption::ExistentialImport),
        ),
    };
    Ok(RuleApplication { rule, inputs: inputs.to_vec(), output, assumption })
}
