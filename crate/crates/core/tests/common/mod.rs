#![allow(dead_code)]

use std::collections::BTreeMap;

use la_core::Formula;
use proptest::prelude::*;
use rand::Rng;

pub const ATOMS: [&str; 6] = ["P", "Q", "R", "S", "T", "U"];
pub const PREDICATES: [&str; 3] = ["Human", "Mortal", "Wise"];
pub const VARS: [&str; 2] = ["x", "y"];

/// Random formula of depth at most `depth`. Quantifiers, bound variables and
/// predicate applications appear only when `quantified` is set, and a
/// variable is only ever used inside a binder for it.
pub fn random_formula(rng: &mut impl Rng, depth: u32, quantified: bool) -> Formula {
    gen(rng, depth, quantified, &mut Vec::new())
}

fn gen(rng: &mut impl Rng, depth: u32, quantified: bool, bound: &mut Vec<&'static str>) -> Formula {
    let leaf = depth == 0 || rng.random_bool(0.25);
    if leaf {
        if !bound.is_empty() && rng.random_bool(0.6) {
            let v = bound[rng.random_range(0..bound.len())];
            return if rng.random_bool(0.8) {
                Formula::pred(PREDICATES[rng.random_range(0..PREDICATES.len())], v)
            } else {
                Formula::var(v)
            };
        }
        return Formula::atom(ATOMS[rng.random_range(0..ATOMS.len())]);
    }
    let kinds = if quantified { 8 } else { 6 };
    match rng.random_range(0..kinds) {
        0 | 1 => Formula::not(gen(rng, depth - 1, quantified, bound)),
        2 => Formula::and(children(rng, depth, quantified, bound)),
        3 => Formula::or(children(rng, depth, quantified, bound)),
        4 => Formula::implies(gen(rng, depth - 1, quantified, bound), gen(rng, depth - 1, quantified, bound)),
        5 => Formula::equiv(gen(rng, depth - 1, quantified, bound), gen(rng, depth - 1, quantified, bound)),
        k => {
            let v = VARS[rng.random_range(0..VARS.len())];
            bound.push(v);
            let body = gen(rng, depth - 1, quantified, bound);
            bound.pop();
            if k == 6 {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
    }
}

fn children(rng: &mut impl Rng, depth: u32, quantified: bool, bound: &mut Vec<&'static str>) -> Vec<Formula> {
    let n = rng.random_range(2..=3);
    (0..n).map(|_| gen(rng, depth - 1, quantified, bound)).collect()
}

/// Propositional formulas over the first `atoms` names of [`ATOMS`].
pub fn prop_formula(atoms: usize, depth: u32) -> impl Strategy<Value = Formula> {
    let names: Vec<&'static str> = ATOMS[..atoms].to_vec();
    let leaf = proptest::sample::select(names).prop_map(Formula::atom);
    leaf.prop_recursive(depth, 64, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(Formula::and),
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(Formula::or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::equiv(a, b)),
        ]
    })
}

/// Straightforward recursive evaluation, kept separate from the library's
/// compiled evaluator so the two can be compared.
pub fn naive_eval(f: &Formula, v: &BTreeMap<String, bool>) -> bool {
    match f {
        Formula::Atom(a) => v[a],
        Formula::Not(x) => !naive_eval(x, v),
        Formula::And(ps) => ps.iter().all(|p| naive_eval(p, v)),
        Formula::Or(ps) => ps.iter().any(|p| naive_eval(p, v)),
        Formula::Implies(a, b) => !naive_eval(a, v) || naive_eval(b, v),
        Formula::Equiv(a, b) => naive_eval(a, v) == naive_eval(b, v),
        other => panic!("not propositional: {other:?}"),
    }
}

fn collect_atoms(f: &Formula, out: &mut Vec<String>) {
    match f {
        Formula::Atom(a) => {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
        Formula::Not(x) => collect_atoms(x, out),
        Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| collect_atoms(p, out)),
        Formula::Implies(a, b) | Formula::Equiv(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        other => panic!("not propositional: {other:?}"),
    }
}

/// Every valuation over the atoms of `formulas`.
pub fn valuations(formulas: &[&Formula]) -> Vec<BTreeMap<String, bool>> {
    let mut names = Vec::new();
    for f in formulas {
        collect_atoms(f, &mut names);
    }
    (0..1u32 << names.len())
        .map(|bits| names.iter().enumerate().map(|(i, n)| (n.clone(), bits & (1 << i) != 0)).collect())
        .collect()
}

/// `"VALID"`, `"CONTRADICTED"` or `"UNKNOWN"`, by brute force.
pub fn naive_verdict(premises: &[Formula], h: &Formula) -> &'static str {
    let all: Vec<&Formula> = premises.iter().chain(std::iter::once(h)).collect();
    let (mut can_true, mut can_false) = (false, false);
    for v in valuations(&all) {
        if premises.iter().all(|p| naive_eval(p, &v)) {
            if naive_eval(h, &v) {
                can_true = true;
            } else {
                can_false = true;
            }
        }
    }
    match (can_true, can_false) {
        (_, false) => "VALID",
        (false, true) => "CONTRADICTED",
        (true, true) => "UNKNOWN",
    }
}

/// Wraps some subformulas in an extra `~~`.
pub fn sprinkle_double_negations(rng: &mut impl Rng, f: &Formula) -> Formula {
    let inner = match f {
        Formula::Not(x) => Formula::not(sprinkle_double_negations(rng, x)),
        Formula::And(ps) => {
            Formula::and(ps.iter().map(|p| sprinkle_double_negations(rng, p)).collect::<Vec<_>>())
        }
        Formula::Or(ps) => {
            Formula::or(ps.iter().map(|p| sprinkle_double_negations(rng, p)).collect::<Vec<_>>())
        }
        Formula::Implies(a, b) => {
            Formula::implies(sprinkle_double_negations(rng, a), sprinkle_double_negations(rng, b))
        }
        Formula::Equiv(a, b) => {
            Formula::equiv(sprinkle_double_negations(rng, a), sprinkle_double_negations(rng, b))
        }
        other => other.clone(),
    };
    if rng.random_bool(0.2) {
        Formula::not(Formula::not(inner))
    } else {
        inner
    }
}
