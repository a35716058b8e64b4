//! The formula AST shared by every part of the kernel.

use std::fmt;

/// A propositional or monadic first-order formula.
///
/// `And` and `Or` are n-ary and must carry at least two parts. Quantified
/// formulas use `Pred` for monadic predicate application and `Var` for a
/// bare bound variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Atom(String),
    Pred { name: String, var: String },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Equiv(Box<Formula>, Box<Formula>),
    Forall { var: String, body: Box<Formula> },
    Exists { var: String, body: Box<Formula> },
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn pred(name: impl Into<String>, var: impl Into<String>) -> Self {
        Formula::Pred { name: name.into(), var: var.into() }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Self {
        Formula::Not(Box::new(inner))
    }

    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Self {
        Formula::And(parts.into_iter().collect())
    }

    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Self {
        Formula::Or(parts.into_iter().collect())
    }

    pub fn implies(antecedent: Formula, consequent: Formula) -> Self {
        Formula::Implies(Box::new(antecedent), Box::new(consequent))
    }

    pub fn equiv(left: Formula, right: Formula) -> Self {
        Formula::Equiv(Box::new(left), Box::new(right))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::Forall { var: var.into(), body: Box::new(body) }
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists { var: var.into(), body: Box::new(body) }
    }

    /// Atom names (and predicate names) in first-occurrence order, deduplicated.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            Formula::Var(_) => {}
            Formula::Atom(name) | Formula::Pred { name, .. } => {
                if !out.iter().any(|seen| seen == name) {
                    out.push(name.clone());
                }
            }
            Formula::Not(inner) => inner.collect_atoms(out),
            Formula::And(parts) | Formula::Or(parts) => parts.iter().for_each(|p| p.collect_atoms(out)),
            Formula::Implies(a, b) | Formula::Equiv(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Forall { body, .. } | Formula::Exists { body, .. } => body.collect_atoms(out),
        }
    }

    /// True when the formula has no `Var`, `Pred`, `Forall` or `Exists` node.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Var(_) | Formula::Pred { .. } | Formula::Forall { .. } | Formula::Exists { .. } => false,
            Formula::Not(inner) => inner.is_propositional(),
            Formula::And(parts) | Formula::Or(parts) => parts.iter().all(Formula::is_propositional),
            Formula::Implies(a, b) | Formula::Equiv(a, b) => a.is_propositional() && b.is_propositional(),
        }
    }

    /// True when every `Var`/`Pred` variable is bound by an enclosing quantifier.
    pub fn is_closed(&self) -> bool {
        fn go<'a>(f: &'a Formula, bound: &mut Vec<&'a str>) -> bool {
            match f {
                Formula::Atom(_) => true,
                Formula::Var(v) | Formula::Pred { var: v, .. } => bound.contains(&v.as_str()),
                Formula::Not(inner) => go(inner, bound),
                Formula::And(parts) | Formula::Or(parts) => parts.iter().all(|p| go(p, bound)),
                Formula::Implies(a, b) | Formula::Equiv(a, b) => go(a, bound) && go(b, bound),
                Formula::Forall { var, body } | Formula::Exists { var, body } => {
                    bound.push(var);
                    let ok = go(body, bound);
                    bound.pop();
                    ok
                }
            }
        }
        go(self, &mut Vec::new())
    }

    /// Checks the structural invariants: identifier shape and n-ary arity.
    pub fn is_well_formed(&self) -> bool {
        match self {
            Formula::Var(n) | Formula::Atom(n) => is_identifier(n),
            Formula::Pred { name, var } => is_identifier(name) && is_identifier(var),
            Formula::Not(inner) => inner.is_well_formed(),
            Formula::And(parts) | Formula::Or(parts) => {
                parts.len() >= 2 && parts.iter().all(Formula::is_well_formed)
            }
            Formula::Implies(a, b) | Formula::Equiv(a, b) => a.is_well_formed() && b.is_well_formed(),
            Formula::Forall { var, body } | Formula::Exists { var, body } => {
                is_identifier(var) && body.is_well_formed()
            }
        }
    }

    /// Rewrites every `Not(Not(x))` to `x`, to a fixpoint. Nothing else changes.
    pub fn normalize_double_negation(&self) -> Formula {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Not(x) => x.normalize_double_negation(),
                // Normalizing a non-negation never yields a negation, so one
                // pass reaches the fixpoint.
                other => Formula::not(other.normalize_double_negation()),
            },
            Formula::Var(_) | Formula::Atom(_) | Formula::Pred { .. } => self.clone(),
            Formula::And(parts) => {
                Formula::And(parts.iter().map(Formula::normalize_double_negation).collect())
            }
            Formula::Or(parts) => Formula::Or(parts.iter().map(Formula::normalize_double_negation).collect()),
            Formula::Implies(a, b) => {
                Formula::implies(a.normalize_double_negation(), b.normalize_double_negation())
            }
            Formula::Equiv(a, b) => {
                Formula::equiv(a.normalize_double_negation(), b.normalize_double_negation())
            }
            Formula::Forall { var, body } => Formula::forall(var.clone(), body.normalize_double_negation()),
            Formula::Exists { var, body } => Formula::exists(var.clone(), body.normalize_double_negation()),
        }
    }

    /// Flattens nested `And`-in-`And` and `Or`-in-`Or` into single n-ary nodes.
    pub fn flatten(&self) -> Formula {
        fn splice(parts: &[Formula], is_same: fn(&Formula) -> Option<&Vec<Formula>>) -> Vec<Formula> {
            let mut out = Vec::with_capacity(parts.len());
            for p in parts {
                let p = p.flatten();
                match is_same(&p) {
                    Some(inner) => out.extend(inner.iter().cloned()),
                    None => out.push(p),
                }
            }
            out
        }
        match self {
            Formula::And(parts) => Formula::And(splice(parts, |f| match f {
                Formula::And(p) => Some(p),
                _ => None,
            })),
            Formula::Or(parts) => Formula::Or(splice(parts, |f| match f {
                Formula::Or(p) => Some(p),
                _ => None,
            })),
            Formula::Var(_) | Formula::Atom(_) | Formula::Pred { .. } => self.clone(),
            Formula::Not(inner) => Formula::not(inner.flatten()),
            Formula::Implies(a, b) => Formula::implies(a.flatten(), b.flatten()),
            Formula::Equiv(a, b) => Formula::equiv(a.flatten(), b.flatten()),
            Formula::Forall { var, body } => Formula::forall(var.clone(), body.flatten()),
            Formula::Exists { var, body } => Formula::exists(var.clone(), body.flatten()),
        }
    }

    /// Structural equality modulo associative flattening of `And`/`Or`.
    pub fn same_structure(&self, other: &Formula) -> bool {
        self.flatten() == other.flatten()
    }

    /// Structural equality after flattening and double-negation normalization.
    pub fn matches_modulo_negation(&self, other: &Formula) -> bool {
        self.normalize_double_negation().flatten() == other.normalize_double_negation().flatten()
    }
}

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::serialize(self, crate::syntax::Syntax::Operator))
    }
}
