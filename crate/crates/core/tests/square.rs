use std::collections::BTreeSet;

use la_core::rules;
use la_core::{
    categorical_holds, enumerate_models, CategoricalForm, CategoricalStatement, FiniteModel, Rule, Statement,
};

fn all_models(existential_import: bool) -> Vec<FiniteModel> {
    enumerate_models(3, &["S", "P"], existential_import, "S").unwrap().collect()
}

fn statement(form: CategoricalForm, truth: bool) -> CategoricalStatement {
    CategoricalStatement::new(form, "S", "P", truth).unwrap()
}

/// Direct set-theoretic reading, independent of the quantified translation.
fn holds(s: &CategoricalStatement, m: &FiniteModel) -> bool {
    let empty = BTreeSet::new();
    let subj = m.extension(&s.subject).unwrap_or(&empty);
    let pred = m.extension(&s.predicate).unwrap_or(&empty);
    let value = match s.form {
        CategoricalForm::A => subj.is_subset(pred),
        CategoricalForm::E => subj.is_disjoint(pred),
        CategoricalForm::I => !subj.is_disjoint(pred),
        CategoricalForm::O => !subj.is_subset(pred),
    };
    value == s.truth
}

#[test]
fn library_and_set_readings_agree() {
    for m in all_models(false) {
        for form in CategoricalForm::ALL {
            for truth in [true, false] {
                let s = statement(form, truth);
                assert_eq!(categorical_holds(&s, &m), holds(&s, &m));
            }
        }
    }
}

#[test]
fn rule_outputs_hold_whenever_inputs_hold() {
    let with_import = all_models(true);
    let without_import = all_models(false);
    for rule in Rule::ALL.into_iter().filter(|r| r.is_categorical()) {
        let mut applied = 0;
        for form in CategoricalForm::ALL {
            for truth in [true, false] {
                let input = statement(form, truth);
                let Ok(app) = rules::apply(rule, &[Statement::from(input.clone())]) else { continue };
                applied += 1;
                let output = app.output.as_categorical().unwrap().clone();
                let models = if app.assumption.is_some() { &with_import } else { &without_import };
                for m in models {
                    if holds(&input, m) {
                        assert!(holds(&output, m), "{rule}: {input} holds but {output} fails");
                    }
                }
            }
        }
        let expected = if rule == Rule::Contradictory { 8 } else { 2 };
        assert_eq!(applied, expected, "{rule}");
    }
}

#[test]
fn contradictory_pairs_always_disagree() {
    use CategoricalForm::*;
    for m in all_models(false) {
        for (x, y) in [(A, O), (E, I)] {
            assert_ne!(holds(&statement(x, true), &m), holds(&statement(y, true), &m));
        }
    }
}

#[test]
fn contraries_and_subcontraries_under_import() {
    let models = all_models(true);
    let a = statement(CategoricalForm::A, true);
    let e = statement(CategoricalForm::E, true);
    let i = statement(CategoricalForm::I, true);
    let o = statement(CategoricalForm::O, true);
    assert!(models.iter().all(|m| !(holds(&a, m) && holds(&e, m))));
    assert!(models.iter().any(|m| !holds(&a, m) && !holds(&e, m)));
    assert!(models.iter().all(|m| holds(&i, m) || holds(&o, m)));
    assert!(models.iter().any(|m| holds(&i, m) && holds(&o, m)));
    assert!(models.iter().filter(|m| holds(&a, m)).all(|m| holds(&i, m)));
    assert!(models.iter().filter(|m| holds(&e, m)).all(|m| holds(&o, m)));
}

#[test]
fn import_is_needed() {
    // Without a nonempty subject, A and E are both vacuously true.
    let empty =
        all_models(false).into_iter().find(|m| m.extension("S").is_none_or(|s| s.is_empty())).unwrap();
    assert!(holds(&statement(CategoricalForm::A, true), &empty));
    assert!(holds(&statement(CategoricalForm::E, true), &empty));
    assert!(!holds(&statement(CategoricalForm::I, true), &empty));
}
