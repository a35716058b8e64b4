//! Rendering formulas in the two concrete syntaxes.
//!
//! Operator syntax uses ASCII glyphs and the smallest set of parentheses the
//! parser needs to rebuild the same tree:
//!
//! | level | operator | associativity |
//! |-------|----------|---------------|
//! | 5     | `~`      | prefix        |
//! | 4     | `&`      | n-ary         |
//! | 3     | `\|`     | n-ary         |
//! | 2     | `->`     | right         |
//! | 1     | `<->`    | left          |
//!
//! Quantifiers extend to the end of the enclosing group, so they only need
//! parentheses when something follows them.

use std::fmt::Write;

use crate::formula::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Syntax {
    /// `~Q -> ~P`
    Operator,
    /// `Implies(Not(Atom(Q)), Not(Atom(P)))`
    Constructor,
}

pub fn serialize(f: &Formula, syntax: Syntax) -> String {
    let mut out = String::new();
    match syntax {
        Syntax::Operator => write_operator(f, 0, true, &mut out),
        Syntax::Constructor => write_constructor(f, &mut out),
    }
    out
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Equiv(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(_) => 3,
        Formula::And(_) => 4,
        Formula::Not(_) => 5,
        Formula::Var(_) | Formula::Atom(_) | Formula::Pred { .. } => 6,
        // Quantifiers parse in operand position but swallow everything after.
        Formula::Forall { .. } | Formula::Exists { .. } => 6,
    }
}

/// `min` is the lowest level allowed here without parentheses; `tail` says
/// nothing follows this subterm before the end of its group.
fn write_operator(f: &Formula, min: u8, tail: bool, out: &mut String) {
    let quantified = matches!(f, Formula::Forall { .. } | Formula::Exists { .. });
    let wrap = level(f) < min || (quantified && !tail);
    if wrap {
        out.push('(');
    }
    let tail = tail || wrap;
    match f {
        Formula::Var(name) | Formula::Atom(name) => out.push_str(name),
        Formula::Pred { name, var } => {
            let _ = write!(out, "{name}({var})");
        }
        Formula::Not(inner) => {
            out.push('~');
            write_operator(inner, 5, tail, out);
        }
        Formula::And(parts) => write_chain(parts, " & ", 5, tail, out),
        Formula::Or(parts) => write_chain(parts, " | ", 4, tail, out),
        Formula::Implies(a, b) => {
            write_operator(a, 3, false, out);
            out.push_str(" -> ");
            write_operator(b, 2, tail, out);
        }
        Formula::Equiv(a, b) => {
            write_operator(a, 1, false, out);
            out.push_str(" <-> ");
            write_operator(b, 2, tail, out);
        }
        Formula::Forall { var, body } => {
            let _ = write!(out, "forall {var}. ");
            write_operator(body, 0, true, out);
        }
        Formula::Exists { var, body } => {
            let _ = write!(out, "exists {var}. ");
            write_operator(body, 0, true, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

fn write_chain(parts: &[Formula], sep: &str, min: u8, tail: bool, out: &mut String) {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        write_operator(p, min, tail && i + 1 == parts.len(), out);
    }
}

fn write_constructor(f: &Formula, out: &mut String) {
    match f {
        Formula::Var(name) => {
            let _ = write!(out, "Var({name})");
        }
        Formula::Atom(name) => {
            let _ = write!(out, "Atom({name})");
        }
        Formula::Pred { name, var } => {
            let _ = write!(out, "Pred({name}, {var})");
        }
        Formula::Not(inner) => {
            out.push_str("Not(");
            write_constructor(inner, out);
            out.push(')');
        }
        Formula::And(parts) | Formula::Or(parts) => {
            out.push_str(if matches!(f, Formula::And(_)) { "And(" } else { "Or(" });
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_constructor(p, out);
            }
            out.push(')');
        }
        Formula::Implies(a, b) | Formula::Equiv(a, b) => {
            out.push_str(if matches!(f, Formula::Implies(..)) { "Implies(" } else { "Equiv(" });
            write_constructor(a, out);
            out.push_str(", ");
            write_constructor(b, out);
            out.push(')');
        }
        Formula::Forall { var, body } | Formula::Exists { var, body } => {
            let head = if matches!(f, Formula::Forall { .. }) { "Forall" } else { "Exists" };
            let _ = write!(out, "{head}({var}, ");
            write_constructor(body, out);
            out.push(')');
        }
    }
}
