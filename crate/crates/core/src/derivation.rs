//! Append-only knowledge base of premises and rule-derived conclusions.
//!
//! Every step records how it was obtained, so a chain can be replayed and
//! rendered step by step. Hypotheses are judged against the premise steps
//! only; derived steps are consequences of the premises and add nothing.

use std::fmt;

use thiserror::Error;

use crate::categorical::{categorical_holds, CategoricalStatement};
use crate::formula::Formula;
use crate::rules::{self, Rule, RuleApplication, RuleError};
use crate::semantics::{classify_entailment, EntailmentVerdict, FiniteModel, LogicError};
use crate::statement::Statement;

/// Categorical checks enumerate every set of inhabited term-combinations,
/// `2^(2^k)` of them for `k` terms.
pub const MAX_CATEGORICAL_TERMS: usize = 4;

pub type StepId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Premise,
    Rule { rule: Rule, inputs: Vec<StepId> },
    Normalization { input: StepId },
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Premise => f.write_str("Premise"),
            Justification::Rule { rule, inputs } => {
                let ids: Vec<String> = inputs.iter().map(ToString::to_string).collect();
                write!(f, "{} of {}", rule, ids.join(", "))
            }
            Justification::Normalization { input } => write!(f, "Normalization of {input}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub id: StepId,
    pub content: Statement,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("no step with id {0}")]
    MissingStep(StepId),
    #[error("{rule}: {source}")]
    Rule { rule: Rule, source: RuleError },
    #[error("step {0} is not a formula")]
    NotAFormula(StepId),
    #[error("cannot mix propositional and categorical content in one check")]
    MixedLogic,
    #[error("too many categorical terms: {count} exceeds the cap of {cap}")]
    TooManyTerms { count: usize, cap: usize },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

impl DerivationError {
    /// Stable name for structured feedback, e.g. `MiddleTermMismatch`.
    pub fn kind(&self) -> &'static str {
        match self {
            DerivationError::UnknownRule(_) => "UnknownRule",
            DerivationError::MissingStep(_) => "MissingStep",
            DerivationError::Rule { source, .. } => source.kind(),
            DerivationError::NotAFormula(_) => "NotAFormula",
            DerivationError::MixedLogic => "MixedLogic",
            DerivationError::TooManyTerms { .. } => "TooManyTerms",
            DerivationError::Logic(LogicError::TooManyAtoms { .. }) => "TooManyAtoms",
            DerivationError::Logic(LogicError::UnsupportedNode(_)) => "UnsupportedNode",
            DerivationError::Logic(_) => "LogicError",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypothesisReport {
    pub verdict: EntailmentVerdict,
    /// Some step already matches the hypothesis up to double negation.
    pub derived_syntactically: bool,
    pub oracle_used: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    steps: Vec<DerivationStep>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[DerivationStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn step(&self, id: StepId) -> Result<&DerivationStep, DerivationError> {
        id.checked_sub(1).and_then(|i| self.steps.get(i)).ok_or(DerivationError::MissingStep(id))
    }

    pub fn premises(&self) -> impl Iterator<Item = &Statement> {
        self.steps.iter().filter(|s| s.justification == Justification::Premise).map(|s| &s.content)
    }

    fn push(&mut self, content: Statement, justification: Justification) -> StepId {
        let id = self.steps.len() + 1;
        self.steps.push(DerivationStep { id, content, justification });
        id
    }

    /// Appends a premise. Duplicates are allowed and get a fresh id.
    pub fn assert_premise(&mut self, content: impl Into<Statement>) -> StepId {
        self.push(content.into(), Justification::Premise)
    }

    /// Runs a rule, looked up by wire name, on existing steps.
    pub fn apply_rule(&mut self, rule_name: &str, inputs: &[StepId]) -> Result<StepId, DerivationError> {
        let rule: Rule =
            rule_name.parse().map_err(|_| DerivationError::UnknownRule(rule_name.to_string()))?;
        self.apply(rule, inputs).map(|(id, _)| id)
    }

    pub fn apply(
        &mut self,
        rule: Rule,
        inputs: &[StepId],
    ) -> Result<(StepId, RuleApplication), DerivationError> {
        let contents = inputs
            .iter()
            .map(|&id| self.step(id).map(|s| s.content.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let app = rules::apply(rule, &contents).map_err(|source| DerivationError::Rule { rule, source })?;
        let id = self.push(app.output.clone(), Justification::Rule { rule, inputs: inputs.to_vec() });
        Ok((id, app))
    }

    /// Appends the double-negation normal form of a formula step.
    pub fn normalize(&mut self, input: StepId) -> Result<StepId, DerivationError> {
        let normalized = match &self.step(input)?.content {
            Statement::Formula(f) => f.normalize_double_negation(),
            Statement::Categorical(_) => return Err(DerivationError::NotAFormula(input)),
        };
        Ok(self.push(normalized.into(), Justification::Normalization { input }))
    }

    /// Re-derives a step from its recorded justification.
    pub fn replay(&self, id: StepId) -> Result<Statement, DerivationError> {
        let step = self.step(id)?;
        match &step.justification {
            Justification::Premise => Ok(step.content.clone()),
            Justification::Rule { rule, inputs } => {
                let contents = inputs
                    .iter()
                    .map(|&i| self.step(i).map(|s| s.content.clone()))
                    .collect::<Result<Vec<_>, _>>()?;
                rules::apply(*rule, &contents)
                    .map(|app| app.output)
                    .map_err(|source| DerivationError::Rule { rule: *rule, source })
            }
            Justification::Normalization { input } => match &self.step(*input)?.content {
                Statement::Formula(f) => Ok(f.normalize_double_negation().into()),
                Statement::Categorical(_) => Err(DerivationError::NotAFormula(*input)),
            },
        }
    }

    /// Judges a hypothesis against the premises.
    ///
    /// If some step already matches the hypothesis the verdict is `Valid`
    /// without consulting the oracle. Otherwise propositional content goes
    /// through truth-table enumeration and categorical content through
    /// finite models in which every subject term is nonempty.
    pub fn check_hypothesis(&self, hypothesis: &Statement) -> Result<HypothesisReport, DerivationError> {
        let categorical = matches!(hypothesis, Statement::Categorical(_));
        if self.premises().any(|p| matches!(p, Statement::Categorical(_)) != categorical) {
            return Err(DerivationError::MixedLogic);
        }
        if self.steps.iter().any(|s| s.content.matches(hypothesis)) {
            return Ok(HypothesisReport {
                verdict: EntailmentVerdict::Valid,
                derived_syntactically: true,
                oracle_used: false,
            });
        }
        let verdict = match hypothesis {
            Statement::Formula(h) => {
                let premises: Vec<Formula> =
                    self.premises().filter_map(|p| p.as_formula().cloned()).collect();
                classify_entailment(&premises, h)?
            }
            Statement::Categorical(h) => {
                let premises: Vec<&CategoricalStatement> =
                    self.premises().filter_map(Statement::as_categorical).collect();
                classify_categorical(&premises, h)?
            }
        };
        Ok(HypothesisReport { verdict, derived_syntactically: false, oracle_used: true })
    }

    /// `[id] content  (justification)`, noting premises that repeat an
    /// earlier one.
    pub fn render_step(&self, id: StepId) -> Result<String, DerivationError> {
        let step = self.step(id)?;
        let duplicate_of = match step.justification {
            Justification::Premise => self.steps[..id - 1].iter().find(|s| s.content == step.content),
            _ => None,
        };
        let mut line = format!("[{}] {}  ({}", step.id, step.content, step.justification);
        if let Some(first) = duplicate_of {
            line.push_str(&format!(", duplicate of {}", first.id));
        }
        line.push(')');
        Ok(line)
    }

    /// One line per step, as [`KnowledgeBase::render_step`].
    pub fn render_chain(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&self.render_step(step.id).expect("step ids are dense"));
            out.push('\n');
        }
        out
    }
}

/// Classifies a categorical hypothesis by enumerating which combinations of
/// terms are inhabited. For monadic predicates this covers every model up to
/// isomorphism of the relevant structure, so the verdict is exact.
fn classify_categorical(
    premises: &[&CategoricalStatement],
    hypothesis: &CategoricalStatement,
) -> Result<EntailmentVerdict, DerivationError> {
    let mut terms: Vec<&str> = Vec::new();
    let mut subjects: Vec<&str> = Vec::new();
    for s in premises.iter().copied().chain(std::iter::once(hypothesis)) {
        for t in [s.subject.as_str(), s.predicate.as_str()] {
            if !terms.contains(&t) {
                terms.push(t);
            }
        }
        if !subjects.contains(&s.subject.as_str()) {
            subjects.push(&s.subject);
        }
    }
    if terms.len() > MAX_CATEGORICAL_TERMS {
        return Err(DerivationError::TooManyTerms { count: terms.len(), cap: MAX_CATEGORICAL_TERMS });
    }
    let kinds = 1usize << terms.len();
    let subject_bits: Vec<usize> =
        subjects.iter().map(|s| terms.iter().position(|t| t == s).expect("subject is a term")).collect();

    let (mut seen_true, mut seen_false) = (false, false);
    for inhabited in 1u64..(1u64 << kinds) {
        let elements: Vec<usize> = (0..kinds).filter(|k| inhabited & (1 << k) != 0).collect();
        if !subject_bits.iter().all(|&bit| elements.iter().any(|k| k & (1 << bit) != 0)) {
            continue;
        }
        let extensions = terms.iter().enumerate().map(|(bit, term)| {
            let members: Vec<usize> =
                elements.iter().enumerate().filter(|(_, k)| *k & (1 << bit) != 0).map(|(e, _)| e).collect();
            (term.to_string(), members)
        });
        let model = FiniteModel::new(elements.len(), extensions).expect("elements are in range");
        if !premises.iter().all(|p| categorical_holds(p, &model)) {
            continue;
        }
        if categorical_holds(hypothesis, &model) {
            seen_true = true;
        } else {
            seen_false = true;
        }
        if seen_true && seen_false {
            return Ok(EntailmentVerdict::Unknown);
        }
    }
    Ok(match (seen_true, seen_false) {
        (_, false) => EntailmentVerdict::Valid,
        (false, true) => EntailmentVerdict::Contradicted,
        (true, true) => unreachable!(),
    })
}
