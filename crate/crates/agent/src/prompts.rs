//! Prompt text for the parsing and action phases, with three worked
//! demonstrations: a contrapositive case, a transitive case and a categorical
//! case. Demonstration feedback is produced by running the real kernel, so it
//! can never drift from what the loop actually returns.

use std::collections::BTreeMap;

use crate::action::parse_action;
use crate::problem::from_logic_block;
use crate::record::{LogicBlock, Task, TaskRecord};
use crate::runtime::Session;

/// Bumped whenever prompt wording or demonstrations change.
pub const PROMPT_VERSION: &str = "1";

pub const MAX_SHOTS: usize = 3;

const PARSE_INSTRUCTIONS: &str = "\
Translate the problem into logic. Give each basic proposition a name: an identifier such as `P` or `Wise`. \
Reply with lines of these forms and nothing else:

ATOM <Name>: <the proposition in words>
PREMISE: <formula>
OPTION <label>: <formula>      (one per option, multiple-choice problems only)
HYPOTHESIS: <formula>          (problems without options)

Formulas use `~` (not), `&` (and), `|` (or), `->` (implies) and `<->` (if and only if), with parentheses where \
needed. The constructor form, e.g. `Implies(Not(Atom(P)), Atom(Q))`, is accepted too. Statements about classes \
may be written as categorical statements: `A(S,P)` all S are P, `E(S,P)` no S are P, `I(S,P)` some S are P, \
`O(S,P)` some S are not P.";

const AGENT_INSTRUCTIONS: &str = "\
You solve logical reasoning problems by building a knowledge base of numbered steps. The problem has already \
been translated into logic and its premises are steps 1 onward. Each reply must end with exactly one action line:

PREMISE: <formula>           add a premise the translation missed
CALL <Rule>(<id>, ...)       apply an inference rule to knowledge-base steps
NORMALIZE <id>               remove double negations from a step
EVAL <label>                 check an option (or the hypothesis H) against the premises
EVAL <label>: <formula>      check a formula of your own under that label
ANSWER: <label>              give the final answer and stop

Rules:
Contrapositive(a -> b) gives ~b -> ~a.
Transitive(a -> b, b -> c) gives a -> c.
De_Morgans moves a negation across & or |.
Contradictory, Contrary, Subcontrary, Subalternation_forward and Subalternation_backward relate the categorical \
statements A(S,P), E(S,P), I(S,P) and O(S,P) by the square of opposition. All but Contradictory assume the \
subject term is nonempty.

EVAL replies VALID when the statement follows from the premises, INVALID when the premises rule it out, and \
UNKNOWN otherwise. A reply without a well-formed action line is rejected with an error; correct it and try \
again. You may reason in free text before the action line.";

struct Demo {
    record: TaskRecord,
    actions: &'static [&'static str],
}

fn map<const N: usize>(pairs: [(&str, &str); N]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn demos() -> Vec<Demo> {
    let contrapositive = TaskRecord {
        id: "demo-contrapositive".into(),
        task: Task::Mcrc,
        context: "If it rains, the match is cancelled.".into(),
        question: "Which of the following must be true?".into(),
        options: map([
            ("A", "If the match is not cancelled, it did not rain."),
            ("B", "If it does not rain, the match is not cancelled."),
            ("C", "If the match is cancelled, it rained."),
            ("D", "It rains."),
        ]),
        label: "A".into(),
        logic: Some(LogicBlock {
            atoms: [("Rain", "it rains"), ("Cancelled", "the match is cancelled")]
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            premises: vec!["Rain -> Cancelled".into()],
            options: map([
                ("A", "~Cancelled -> ~Rain"),
                ("B", "~Rain -> ~Cancelled"),
                ("C", "Cancelled -> Rain"),
                ("D", "Rain"),
            ]),
            hypothesis: None,
        }),
    };
    let transitive = TaskRecord {
        id: "demo-transitive".into(),
        task: Task::Tf,
        context: "If Tom studies, he passes the exam. If Tom passes the exam, he graduates.".into(),
        question: "If Tom studies, does he graduate?".into(),
        options: BTreeMap::new(),
        label: "Yes".into(),
        logic: Some(LogicBlock {
            atoms: [
                ("Studies", "Tom studies"),
                ("Passes", "Tom passes the exam"),
                ("Graduates", "Tom graduates"),
            ]
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
            premises: vec!["Studies -> Passes".into(), "Passes -> Graduates".into()],
            options: BTreeMap::new(),
            hypothesis: Some("Studies -> Graduates".into()),
        }),
    };
    let categorical = TaskRecord {
        id: "demo-categorical".into(),
        task: Task::Nli,
        context: "All whales are mammals.".into(),
        question: "Some whales are mammals.".into(),
        options: BTreeMap::new(),
        label: "E".into(),
        logic: Some(LogicBlock {
            atoms: [("Whale", "is a whale"), ("Mammal", "is a mammal")]
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            premises: vec!["A(Whale,Mammal)".into()],
            options: BTreeMap::new(),
            hypothesis: Some("I(Whale,Mammal)".into()),
        }),
    };
    vec![
        Demo {
            record: contrapositive,
            actions: &[
                "The contrapositive of step 1 should match one of the options.\nCALL Contrapositive(1)",
                "EVAL A",
                "EVAL B",
                "EVAL C",
                "Option A follows from the premises; B and C are not supported.\nANSWER: A",
            ],
        },
        Demo {
            record: transitive,
            actions: &[
                "Steps 1 and 2 share the middle term Passes.\nCALL Transitive(1, 2)",
                "EVAL H",
                "The hypothesis follows, so the answer is Yes.\nANSWER: Yes",
            ],
        },
        Demo {
            record: categorical,
            actions: &[
                "If all whales are mammals, then some whales are mammals.\nCALL Subalternation_forward(1)",
                "EVAL H",
                "The hypothesis is entailed.\nANSWER: E",
            ],
        },
    ]
}

fn demo_parse_text(demo: &Demo) -> String {
    let problem = from_logic_block(&demo.record).expect("demonstrations are well formed");
    format!("{}\n\n{}", demo.record.render(), problem.render_parse_block(demo.record.task))
}

fn demo_action_text(demo: &Demo) -> String {
    let problem = from_logic_block(&demo.record).expect("demonstrations are well formed");
    let mut session = Session::new(&demo.record, &problem);
    let mut out = session.presentation();
    for line in demo.actions {
        let action = parse_action(line).expect("demonstration actions parse");
        let result = session.dispatch(&action);
        out.push_str(&format!("\n\n> {}\n< {}", line.replace('\n', "\n> "), result.feedback));
    }
    out
}

fn with_examples(instructions: &str, shots: usize, render: fn(&Demo) -> String) -> String {
    let demos = demos();
    let mut out = instructions.to_string();
    for (i, demo) in demos.iter().take(shots.min(MAX_SHOTS)).enumerate() {
        out.push_str(&format!("\n\n### Example {}\n\n{}", i + 1, render(demo)));
    }
    out
}

pub fn parse_system_prompt(shots: usize) -> String {
    with_examples(PARSE_INSTRUCTIONS, shots, demo_parse_text)
}

/// Lines starting `>` are the model's replies, lines starting `<` the
/// feedback it received.
pub fn agent_system_prompt(shots: usize) -> String {
    with_examples(AGENT_INSTRUCTIONS, shots, demo_action_text)
}
