//! Truth-functional and finite-model semantics, plus the exhaustive
//! entailment oracle every rule application is checked against.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

/// Truth-table enumeration refuses formulas over more atoms than this.
pub const MAX_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("atom `{0}` has no truth value in the valuation")]
    UnboundAtom(String),
    #[error("unsupported node in this context: {0}")]
    UnsupportedNode(&'static str),
    #[error("too many atoms: {count} exceeds the cap of {cap}")]
    TooManyAtoms { count: usize, cap: usize },
    #[error("name `{0}` is used both as an atom and as a predicate")]
    NonMonadic(String),
    #[error("formula is not closed: variable `{0}` is unbound")]
    OpenFormula(String),
}

/// An assignment of truth values to atom names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation {
    assignment: BTreeMap<String, bool>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, atom: impl Into<String>, value: bool) -> Self {
        self.assignment.insert(atom.into(), value);
        self
    }

    pub fn set(&mut self, atom: impl Into<String>, value: bool) {
        self.assignment.insert(atom.into(), value);
    }

    pub fn get(&self, atom: &str) -> Option<bool> {
        self.assignment.get(atom).copied()
    }
}

impl<S: Into<String>> FromIterator<(S, bool)> for Valuation {
    fn from_iter<T: IntoIterator<Item = (S, bool)>>(iter: T) -> Self {
        Valuation { assignment: iter.into_iter().map(|(k, v)| (k.into(), v)).collect() }
    }
}

/// Classical evaluation of a propositional formula.
pub fn evaluate(f: &Formula, v: &Valuation) -> Result<bool, LogicError> {
    Ok(match f {
        Formula::Atom(name) => v.get(name).ok_or_else(|| LogicError::UnboundAtom(name.clone()))?,
        Formula::Var(_) => return Err(LogicError::UnsupportedNode("Var")),
        Formula::Pred { .. } => return Err(LogicError::UnsupportedNode("Pred")),
        Formula::Forall { .. } => return Err(LogicError::UnsupportedNode("Forall")),
        Formula::Exists { .. } => return Err(LogicError::UnsupportedNode("Exists")),
        Formula::Not(inner) => !evaluate(inner, v)?,
        Formula::And(parts) => {
            let mut all = true;
            for p in parts {
                all &= evaluate(p, v)?;
            }
            all
        }
        Formula::Or(parts) => {
            let mut any = false;
            for p in parts {
                any |= evaluate(p, v)?;
            }
            any
        }
        Formula::Implies(a, b) => !evaluate(a, v)? || evaluate(b, v)?,
        Formula::Equiv(a, b) => evaluate(a, v)? == evaluate(b, v)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntailmentVerdict {
    Valid,
    Contradicted,
    Unknown,
}

impl EntailmentVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntailmentVerdict::Valid => "VALID",
            EntailmentVerdict::Contradicted => "CONTRADICTED",
            EntailmentVerdict::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for EntailmentVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A formula compiled against a fixed atom ordering so a valuation is a bitmask.
enum Compiled {
    Atom(u32),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Equiv(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn new(f: &Formula, index: &HashMap<&str, u32>) -> Result<Self, LogicError> {
        Ok(match f {
            Formula::Atom(name) => Compiled::Atom(
                *index.get(name.as_str()).ok_or_else(|| LogicError::UnboundAtom(name.clone()))?,
            ),
            Formula::Var(_) => return Err(LogicError::UnsupportedNode("Var")),
            Formula::Pred { .. } => return Err(LogicError::UnsupportedNode("Pred")),
            Formula::Forall { .. } => return Err(LogicError::UnsupportedNode("Forall")),
            Formula::Exists { .. } => return Err(LogicError::UnsupportedNode("Exists")),
            Formula::Not(inner) => Compiled::Not(Box::new(Compiled::new(inner, index)?)),
            Formula::And(parts) => {
                Compiled::And(parts.iter().map(|p| Compiled::new(p, index)).collect::<Result<_, _>>()?)
            }
            Formula::Or(parts) => {
                Compiled::Or(parts.iter().map(|p| Compiled::new(p, index)).collect::<Result<_, _>>()?)
            }
            Formula::Implies(a, b) => {
                Compiled::Implies(Box::new(Compiled::new(a, index)?), Box::new(Compiled::new(b, index)?))
            }
            Formula::Equiv(a, b) => {
                Compiled::Equiv(Box::new(Compiled::new(a, index)?), Box::new(Compiled::new(b, index)?))
            }
        })
    }

    fn eval(&self, mask: u32) -> bool {
        match self {
            Compiled::Atom(i) => mask & (1 << i) != 0,
            Compiled::Not(inner) => !inner.eval(mask),
            Compiled::And(parts) => parts.iter().all(|p| p.eval(mask)),
            Compiled::Or(parts) => parts.iter().any(|p| p.eval(mask)),
            Compiled::Implies(a, b) => !a.eval(mask) || b.eval(mask),
            Compiled::Equiv(a, b) => a.eval(mask) == b.eval(mask),
        }
    }
}

/// Compiles `formulas` over the union of their atoms, enforcing the atom cap.
fn compile_all(formulas: &[&Formula]) -> Result<(Vec<Compiled>, usize), LogicError> {
    let mut names: Vec<String> = Vec::new();
    for f in formulas {
        for a in f.atoms() {
            if !names.contains(&a) {
                names.push(a);
            }
        }
    }
    if names.len() > MAX_ATOMS {
        return Err(LogicError::TooManyAtoms { count: names.len(), cap: MAX_ATOMS });
    }
    let index: HashMap<&str, u32> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i as u32)).collect();
    let compiled = formulas.iter().map(|f| Compiled::new(f, &index)).collect::<Result<_, _>>()?;
    Ok((compiled, names.len()))
}

/// Decides whether `premises` entail `hypothesis`, entail its negation, or
/// neither, by enumerating every valuation of the combined atoms.
///
/// An unsatisfiable premise set entails everything and yields `Valid`.
pub fn classify_entailment(
    premises: &[Formula],
    hypothesis: &Formula,
) -> Result<EntailmentVerdict, LogicError> {
    let mut all: Vec<&Formula> = premises.iter().collect();
    all.push(hypothesis);
    let (compiled, n) = compile_all(&all)?;
    let (hyp, prem) = compiled.split_last().expect("hypothesis is always present");

    let mut seen_true = false;
    let mut seen_false = false;
    for mask in 0..(1u32 << n) {
        if !prem.iter().all(|p| p.eval(mask)) {
            continue;
        }
        if hyp.eval(mask) {
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

/// True iff `f` and `g` agree under every valuation over their atoms.
pub fn equivalent(f: &Formula, g: &Formula) -> Result<bool, LogicError> {
    let (compiled, n) = compile_all(&[f, g])?;
    Ok((0..(1u32 << n)).all(|mask| compiled[0].eval(mask) == compiled[1].eval(mask)))
}

/// True iff some valuation satisfies every formula.
pub fn satisfiable(formulas: &[Formula]) -> Result<bool, LogicError> {
    let refs: Vec<&Formula> = formulas.iter().collect();
    let (compiled, n) = compile_all(&refs)?;
    Ok((0..(1u32 << n)).any(|mask| compiled.iter().all(|c| c.eval(mask))))
}

/// A finite interpretation for monadic predicates over `{0..domain_size-1}`.
///
/// Predicates without an entry have an empty extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    domain_size: usize,
    extensions: BTreeMap<String, BTreeSet<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("domain must contain at least one element")]
    EmptyDomain,
    #[error("element {element} of `{predicate}` lies outside a domain of size {domain_size}")]
    OutOfDomain { predicate: String, element: usize, domain_size: usize },
    #[error("domain size {requested} exceeds the enumeration cap of {cap}")]
    DomainTooLarge { requested: usize, cap: usize },
}

impl FiniteModel {
    pub fn new<I, S, E>(domain_size: usize, extensions: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (S, E)>,
        S: Into<String>,
        E: IntoIterator<Item = usize>,
    {
        if domain_size == 0 {
            return Err(ModelError::EmptyDomain);
        }
        let mut map = BTreeMap::new();
        for (name, elems) in extensions {
            let name = name.into();
            let set: BTreeSet<usize> = elems.into_iter().collect();
            if let Some(&bad) = set.iter().find(|&&e| e >= domain_size) {
                return Err(ModelError::OutOfDomain { predicate: name, element: bad, domain_size });
            }
            map.insert(name, set);
        }
        Ok(FiniteModel { domain_size, extensions: map })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn extension(&self, predicate: &str) -> Option<&BTreeSet<usize>> {
        self.extensions.get(predicate)
    }

    pub fn contains(&self, predicate: &str, element: usize) -> bool {
        self.extensions.get(predicate).is_some_and(|s| s.contains(&element))
    }
}

/// Evaluates a closed monadic formula in a finite model.
pub fn eval_finite_model(f: &Formula, m: &FiniteModel) -> Result<bool, LogicError> {
    check_monadic(f)?;
    let mut env: Vec<(&str, usize)> = Vec::new();
    eval_in(f, m, &mut env)
}

fn check_monadic(f: &Formula) -> Result<(), LogicError> {
    fn walk<'a>(f: &'a Formula, atoms: &mut Vec<&'a str>, preds: &mut Vec<&'a str>) {
        match f {
            Formula::Atom(n) => atoms.push(n),
            Formula::Pred { name, .. } => preds.push(name),
            Formula::Var(_) => {}
            Formula::Not(inner) => walk(inner, atoms, preds),
            Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| walk(p, atoms, preds)),
            Formula::Implies(a, b) | Formula::Equiv(a, b) => {
                walk(a, atoms, preds);
                walk(b, atoms, preds);
            }
            Formula::Forall { body, .. } | Formula::Exists { body, .. } => walk(body, atoms, preds),
        }
    }
    let (mut atoms, mut preds) = (Vec::new(), Vec::new());
    walk(f, &mut atoms, &mut preds);
    match atoms.iter().find(|a| preds.contains(a)) {
        Some(clash) => Err(LogicError::NonMonadic(clash.to_string())),
        None => Ok(()),
    }
}

fn eval_in<'a>(f: &'a Formula, m: &FiniteModel, env: &mut Vec<(&'a str, usize)>) -> Result<bool, LogicError> {
    let lookup =
        |env: &Vec<(&str, usize)>, var: &str| env.iter().rev().find(|(v, _)| *v == var).map(|(_, e)| *e);
    Ok(match f {
        Formula::Atom(name) => return Err(LogicError::UnboundAtom(name.clone())),
        Formula::Var(_) => return Err(LogicError::UnsupportedNode("Var")),
        Formula::Pred { name, var } => {
            let elem = lookup(env, var).ok_or_else(|| LogicError::OpenFormula(var.clone()))?;
            m.contains(name, elem)
        }
        Formula::Not(inner) => !eval_in(inner, m, env)?,
        Formula::And(parts) => {
            let mut all = true;
            for p in parts {
                all &= eval_in(p, m, env)?;
            }
            all
        }
        Formula::Or(parts) => {
            let mut any = false;
            for p in parts {
                any |= eval_in(p, m, env)?;
            }
            any
        }
        Formula::Implies(a, b) => {
            let a = eval_in(a, m, env)?;
            let b = eval_in(b, m, env)?;
            !a || b
        }
        Formula::Equiv(a, b) => eval_in(a, m, env)? == eval_in(b, m, env)?,
        Formula::Forall { var, body } => {
            let mut all = true;
            for e in 0..m.domain_size {
                env.push((var, e));
                let r = eval_in(body, m, env);
                env.pop();
                all &= r?;
            }
            all
        }
        Formula::Exists { var, body } => {
            let mut any = false;
            for e in 0..m.domain_size {
                env.push((var, e));
                let r = eval_in(body, m, env);
                env.pop();
                any |= r?;
            }
            any
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("P")
    }
    fn q() -> Formula {
        Formula::atom("Q")
    }
    fn r() -> Formula {
        Formula::atom("R")
    }
    fn n(f: Formula) -> Formula {
        Formula::not(f)
    }
    fn imp(a: Formula, b: Formula) -> Formula {
        Formula::implies(a, b)
    }

    #[test]
    fn evaluate_examples() {
        let v = Valuation::new().with("P", true).with("Q", false);
        assert!(!evaluate(&imp(p(), q()), &v).unwrap());
        assert!(evaluate(&n(Formula::and([p(), q()])), &v).unwrap());
        let v = Valuation::new().with("P", false);
        assert!(evaluate(&Formula::equiv(p(), p()), &v).unwrap());
    }

    #[test]
    fn evaluate_errors() {
        let v = Valuation::new().with("P", true);
        assert_eq!(evaluate(&imp(p(), q()), &v), Err(LogicError::UnboundAtom("Q".into())));
        let quantified = Formula::exists("x", Formula::pred("S", "x"));
        assert!(matches!(evaluate(&quantified, &v), Err(LogicError::UnsupportedNode(_))));
    }

    #[test]
    fn classify_examples() {
        let fig1 = [imp(p(), q()), imp(p(), r())];
        assert_eq!(classify_entailment(&fig1, &imp(n(q()), n(p()))).unwrap(), EntailmentVerdict::Valid);
        assert_eq!(
            classify_entailment(&[imp(p(), q())], &imp(n(p()), n(q()))).unwrap(),
            EntailmentVerdict::Unknown
        );
        assert_eq!(classify_entailment(&[p()], &n(p())).unwrap(), EntailmentVerdict::Contradicted);

        let ao = || Formula::atom("AcceptOpinions");
        let rs = || Formula::atom("RecognizeShortcomings");
        let wise = || Formula::atom("Wise");
        let humble = || Formula::atom("Humble");
        let wise_humble = [imp(n(ao()), n(rs())), imp(wise(), humble()), imp(humble(), rs())];
        assert_eq!(
            classify_entailment(&wise_humble, &imp(n(ao()), n(wise()))).unwrap(),
            EntailmentVerdict::Valid
        );
    }

    #[test]
    fn unsatisfiable_premises_entail_everything() {
        let premises = [p(), n(p())];
        assert_eq!(classify_entailment(&premises, &q()).unwrap(), EntailmentVerdict::Valid);
        assert_eq!(classify_entailment(&premises, &n(q())).unwrap(), EntailmentVerdict::Valid);
    }

    #[test]
    fn atom_cap_is_enforced() {
        let wide: Vec<Formula> = (0..21).map(|i| Formula::atom(format!("A{i}"))).collect();
        let err = classify_entailment(&wide, &p()).unwrap_err();
        assert_eq!(err, LogicError::TooManyAtoms { count: 22, cap: MAX_ATOMS });
        // Exactly at the cap still enumerates.
        let twenty: Vec<Formula> = (0..20).map(|i| Formula::atom(format!("A{i}"))).collect();
        assert_eq!(classify_entailment(&twenty, &Formula::atom("A0")).unwrap(), EntailmentVerdict::Valid);
    }

    #[test]
    fn equivalent_examples() {
        assert!(equivalent(&imp(p(), q()), &imp(n(q()), n(p()))).unwrap());
        assert!(equivalent(&n(Formula::and([p(), q()])), &Formula::or([n(p()), n(q())])).unwrap());
        assert!(!equivalent(&imp(p(), q()), &imp(n(p()), n(q()))).unwrap());
    }

    #[test]
    fn finite_model_examples() {
        let s = |v: &str| Formula::pred("S", v);
        let pp = |v: &str| Formula::pred("P", v);
        let m = FiniteModel::new(2, [("S", vec![0]), ("P", vec![0])]).unwrap();
        assert!(eval_finite_model(&Formula::forall("x", imp(s("x"), pp("x"))), &m).unwrap());

        let m = FiniteModel::new(2, [("S", vec![]), ("P", vec![0, 1])]).unwrap();
        assert!(!eval_finite_model(&Formula::exists("x", Formula::and([s("x"), pp("x")])), &m).unwrap());

        let m = FiniteModel::new(1, [("S", vec![0]), ("P", vec![0])]).unwrap();
        assert!(!eval_finite_model(&Formula::forall("x", imp(s("x"), n(pp("x")))), &m).unwrap());
    }

    #[test]
    fn finite_model_errors() {
        let m = FiniteModel::new(1, [("S", vec![0])]).unwrap();
        assert_eq!(eval_finite_model(&Formula::pred("S", "x"), &m), Err(LogicError::OpenFormula("x".into())));
        let mixed = Formula::and([Formula::atom("S"), Formula::exists("x", Formula::pred("S", "x"))]);
        assert_eq!(eval_finite_model(&mixed, &m), Err(LogicError::NonMonadic("S".into())));
        assert_eq!(FiniteModel::new(0, Vec::<(String, Vec<usize>)>::new()), Err(ModelError::EmptyDomain));
        assert!(matches!(FiniteModel::new(2, [("S", vec![2])]), Err(ModelError::OutOfDomain { .. })));
    }

    #[test]
    fn nested_quantifiers_shadow() {
        // exists x. (S(x) & forall x. P(x)) with S={0}, P={0,1}
        let f = Formula::exists(
            "x",
            Formula::and([Formula::pred("S", "x"), Formula::forall("x", Formula::pred("P", "x"))]),
        );
        let m = FiniteModel::new(2, [("S", vec![0]), ("P", vec![0, 1])]).unwrap();
        assert!(eval_finite_model(&f, &m).unwrap());
    }
}
