//! Logic kernel for rule-invoking reasoning agents.
//!
//! Formulas are parsed from operator syntax (`~Q -> ~P`) or constructor syntax
//! (`Implies(Not(Atom(Q)), Not(Atom(P)))`), transformed by a fixed set of named
//! inference rules, and recorded in a [`KnowledgeBase`] with provenance. Every
//! conclusion can be checked against exhaustive semantic oracles: truth tables
//! for propositional content and finite models for categorical statements.

pub mod categorical;
pub mod derivation;
pub mod formula;
pub mod parser;
pub mod rules;
pub mod semantics;
pub mod statement;
pub mod syntax;

pub use categorical::{
    categorical_holds, enumerate_models, to_quantified, CategoricalError, CategoricalForm,
    CategoricalStatement,
};
pub use derivation::{
    DerivationError, DerivationStep, HypothesisReport, Justification, KnowledgeBase, StepId,
};
pub use formula::Formula;
pub use parser::{parse_constructor, parse_formula, parse_operator, ParseError};
pub use rules::{Assumption, Rule, RuleApplication, RuleError};
pub use semantics::{
    classify_entailment, equivalent, eval_finite_model, evaluate, EntailmentVerdict, FiniteModel, LogicError,
    ModelError, Valuation,
};
pub use statement::{parse_statement, Statement, StatementError};
pub use syntax::{serialize, Syntax};

/// Shorthand for [`Formula::atoms`].
pub fn atoms(f: &Formula) -> Vec<String> {
    f.atoms()
}

/// Shorthand for [`Formula::normalize_double_negation`].
pub fn normalize_double_negation(f: &Formula) -> Formula {
    f.normalize_double_negation()
}
