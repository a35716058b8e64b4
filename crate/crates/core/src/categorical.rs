//! A/E/I/O categorical propositions, their quantified readings, and
//! exhaustive finite-model enumeration over monadic predicates.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{is_identifier, Formula};
use crate::semantics::{eval_finite_model, FiniteModel, ModelError};

/// Largest domain [`enumerate_models`] will build.
pub const MAX_MODEL_DOMAIN: usize = 4;

/// The bound variable used by [`to_quantified`].
const VAR: &str = "x";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CategoricalForm {
    /// All S are P.
    A,
    /// No S are P.
    E,
    /// Some S are P.
    I,
    /// Some S are not P.
    O,
}

impl CategoricalForm {
    pub const ALL: [CategoricalForm; 4] =
        [CategoricalForm::A, CategoricalForm::E, CategoricalForm::I, CategoricalForm::O];

    pub fn is_universal(self) -> bool {
        matches!(self, CategoricalForm::A | CategoricalForm::E)
    }

    pub fn is_affirmative(self) -> bool {
        matches!(self, CategoricalForm::A | CategoricalForm::I)
    }

    pub fn letter(self) -> char {
        match self {
            CategoricalForm::A => 'A',
            CategoricalForm::E => 'E',
            CategoricalForm::I => 'I',
            CategoricalForm::O => 'O',
        }
    }
}

/// A categorical proposition together with the truth value asserted for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CategoricalStatement {
    pub form: CategoricalForm,
    pub subject: String,
    pub predicate: String,
    pub truth: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoricalError {
    #[error("subject and predicate must differ, both are `{0}`")]
    SameTerm(String),
    #[error("`{0}` is not a valid term name")]
    BadTerm(String),
    #[error("malformed categorical statement `{0}`; expected e.g. `A(S,P)=true`")]
    Malformed(String),
}

impl CategoricalStatement {
    pub fn new(
        form: CategoricalForm,
        subject: impl Into<String>,
        predicate: impl Into<String>,
        truth: bool,
    ) -> Result<Self, CategoricalError> {
        let (subject, predicate) = (subject.into(), predicate.into());
        for term in [&subject, &predicate] {
            if !is_identifier(term) {
                return Err(CategoricalError::BadTerm(term.clone()));
            }
        }
        if subject == predicate {
            return Err(CategoricalError::SameTerm(subject));
        }
        Ok(CategoricalStatement { form, subject, predicate, truth })
    }

    /// Same terms, different form and truth value.
    pub fn with(&self, form: CategoricalForm, truth: bool) -> Self {
        CategoricalStatement { form, truth, ..self.clone() }
    }
}

/// Renders as `A(S,P)=true`.
impl fmt::Display for CategoricalStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})={}", self.form.letter(), self.subject, self.predicate, self.truth)
    }
}

/// Accepts `A(S,P)`, `A(S, P)=true`, `O( S ,P ) = false`. A missing truth
/// suffix means `true`.
impl FromStr for CategoricalStatement {
    type Err = CategoricalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || CategoricalError::Malformed(s.to_string());
        let t = s.trim();
        let mut chars = t.chars();
        let form = match chars.next() {
            Some('A') => CategoricalForm::A,
            Some('E') => CategoricalForm::E,
            Some('I') => CategoricalForm::I,
            Some('O') => CategoricalForm::O,
            _ => return Err(malformed()),
        };
        let rest = chars.as_str().trim_start();
        let rest = rest.strip_prefix('(').ok_or_else(malformed)?;
        let close = rest.find(')').ok_or_else(malformed)?;
        let (inside, after) = (&rest[..close], rest[close + 1..].trim());
        let (subject, predicate) = inside.split_once(',').ok_or_else(malformed)?;
        let truth = if after.is_empty() {
            true
        } else {
            match after.strip_prefix('=').map(str::trim) {
                Some("true") => true,
                Some("false") => false,
                _ => return Err(malformed()),
            }
        };
        CategoricalStatement::new(form, subject.trim(), predicate.trim(), truth)
    }
}

/// True when `text` has the shape of a categorical statement (`A(` etc.).
pub fn looks_categorical(text: &str) -> bool {
    let t = text.trim_start();
    let mut chars = t.chars();
    matches!(chars.next(), Some('A' | 'E' | 'I' | 'O')) && chars.as_str().trim_start().starts_with('(')
}

/// The standard quantified reading, ignoring the truth flag.
pub fn to_quantified(s: &CategoricalStatement) -> Formula {
    let subj = Formula::pred(&s.subject, VAR);
    let pred = Formula::pred(&s.predicate, VAR);
    match s.form {
        CategoricalForm::A => Formula::forall(VAR, Formula::implies(subj, pred)),
        CategoricalForm::E => Formula::forall(VAR, Formula::implies(subj, Formula::not(pred))),
        CategoricalForm::I => Formula::exists(VAR, Formula::and([subj, pred])),
        CategoricalForm::O => Formula::exists(VAR, Formula::and([subj, Formula::not(pred)])),
    }
}

/// Whether `m` agrees with the statement's asserted truth value. Terms with
/// no extension in `m` are empty.
pub fn categorical_holds(s: &CategoricalStatement, m: &FiniteModel) -> bool {
    let value =
        eval_finite_model(&to_quantified(s), m).expect("categorical translations are closed and monadic");
    value == s.truth
}

/// Every model with domain size `1..=max_domain` and every assignment of
/// extensions to `predicates`. With `existential_import`, only models where
/// `import_term` is nonempty are produced.
pub fn enumerate_models(
    max_domain: usize,
    predicates: &[&str],
    existential_import: bool,
    import_term: &str,
) -> Result<impl Iterator<Item = FiniteModel>, ModelError> {
    if max_domain > MAX_MODEL_DOMAIN {
        return Err(ModelError::DomainTooLarge { requested: max_domain, cap: MAX_MODEL_DOMAIN });
    }
    if max_domain == 0 {
        return Err(ModelError::EmptyDomain);
    }
    let names: Vec<String> = predicates.iter().map(|p| p.to_string()).collect();
    let import_term = import_term.to_string();
    Ok((1..=max_domain).flat_map(move |size| {
        let names = names.clone();
        let import_term = import_term.clone();
        let k = names.len();
        let full = (1u64 << size) - 1;
        (0..(1u64 << (size * k))).filter_map(move |code| {
            let extensions = names.iter().enumerate().map(|(i, name)| {
                let bits = (code >> (i * size)) & full;
                (name.clone(), (0..size).filter(move |e| bits & (1 << e) != 0))
            });
            let model = FiniteModel::new(size, extensions).expect("elements are in range");
            let inhabited = model.extension(&import_term).is_some_and(|s| !s.is_empty());
            (!existential_import || inhabited).then_some(model)
        })
    }))
}
