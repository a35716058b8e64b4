//! Seeded generator for oracle-labeled true/false problems.
//!
//! Each problem is a handful of short conditional, disjunctive and factual
//! sentences over four propositions, with a question whose gold label comes
//! from truth-table entailment: entailed hypotheses are `Yes`, refuted ones
//! `No`. Problems whose hypothesis is neither are discarded.

use la_agent::{LogicBlock, Task, TaskRecord};
use la_core::semantics::satisfiable;
use la_core::{classify_entailment, EntailmentVerdict, Formula};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The seed `fixtures/tf_synthetic.jsonl` was generated with.
pub const FIXTURE_SEED: u64 = 7;
/// Problems per label in the bundled fixture.
pub const FIXTURE_PER_LABEL: usize = 10;

/// Atom name, the proposition, and its negation in words.
const PROPOSITIONS: [(&str, &str, &str); 12] = [
    ("Alarm", "the alarm rings", "the alarm does not ring"),
    ("Awake", "the guard is awake", "the guard is asleep"),
    ("Locked", "the door is locked", "the door is unlocked"),
    ("Light", "the light is on", "the light is off"),
    ("Rain", "it rains", "it does not rain"),
    ("Picnic", "the picnic goes ahead", "the picnic is called off"),
    ("Studies", "Mia studies", "Mia does not study"),
    ("Passes", "Mia passes the test", "Mia fails the test"),
    ("Late", "the train is late", "the train is on time"),
    ("Meeting", "the meeting starts on time", "the meeting starts late"),
    ("Open", "the cafe is open", "the cafe is closed"),
    ("Bonus", "the team gets a bonus", "the team gets no bonus"),
];

#[derive(Clone, Copy)]
struct Literal {
    prop: usize,
    positive: bool,
}

impl Literal {
    fn formula(self) -> Formula {
        let atom = Formula::atom(PROPOSITIONS[self.prop].0);
        if self.positive {
            atom
        } else {
            Formula::not(atom)
        }
    }

    fn words(self) -> &'static str {
        let (_, pos, neg) = PROPOSITIONS[self.prop];
        if self.positive {
            pos
        } else {
            neg
        }
    }
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    chars.next().map(|c| c.to_uppercase().chain(chars).collect()).unwrap_or_default()
}

struct Sentence {
    formula: Formula,
    text: String,
}

fn literal(rng: &mut ChaCha8Rng, props: &[usize]) -> Literal {
    Literal { prop: props[rng.random_range(0..props.len())], positive: rng.random_bool(0.7) }
}

/// Two literals over different propositions.
fn distinct_pair(rng: &mut ChaCha8Rng, props: &[usize]) -> (Literal, Literal) {
    let a = literal(rng, props);
    loop {
        let b = literal(rng, props);
        if b.prop != a.prop {
            return (a, b);
        }
    }
}

fn premise(rng: &mut ChaCha8Rng, props: &[usize]) -> Sentence {
    match rng.random_range(0..10) {
        0..=4 => {
            let (a, b) = distinct_pair(rng, props);
            Sentence {
                formula: Formula::implies(a.formula(), b.formula()),
                text: format!("If {}, then {}.", a.words(), b.words()),
            }
        }
        5 => {
            let (a, b) = distinct_pair(rng, props);
            let c = loop {
                let c = literal(rng, props);
                if c.prop != a.prop && c.prop != b.prop {
                    break c;
                }
            };
            Sentence {
                formula: Formula::implies(Formula::and([a.formula(), b.formula()]), c.formula()),
                text: format!("If {} and {}, then {}.", a.words(), b.words(), c.words()),
            }
        }
        6 => {
            let (a, b) = distinct_pair(rng, props);
            Sentence {
                formula: Formula::or([a.formula(), b.formula()]),
                text: format!("Either {} or {}.", a.words(), b.words()),
            }
        }
        _ => {
            let a = literal(rng, props);
            Sentence { formula: a.formula(), text: format!("{}.", capitalize(a.words())) }
        }
    }
}

fn hypothesis(rng: &mut ChaCha8Rng, props: &[usize]) -> Sentence {
    if rng.random_bool(0.5) {
        let a = literal(rng, props);
        Sentence { formula: a.formula(), text: format!("Is it true that {}?", a.words()) }
    } else {
        let (a, b) = distinct_pair(rng, props);
        Sentence {
            formula: Formula::implies(a.formula(), b.formula()),
            text: format!("Is it true that if {}, then {}?", a.words(), b.words()),
        }
    }
}

/// Draws problems until one has the wanted verdict.
fn problem(rng: &mut ChaCha8Rng, id: String, want: EntailmentVerdict) -> TaskRecord {
    loop {
        let mut pool: Vec<usize> = (0..PROPOSITIONS.len()).collect();
        pool.shuffle(rng);
        let props = &pool[..4];
        let count = rng.random_range(2..=4);
        let premises: Vec<Sentence> = (0..count).map(|_| premise(rng, props)).collect();
        let question = hypothesis(rng, props);

        let formulas: Vec<Formula> = premises.iter().map(|s| s.formula.clone()).collect();
        if formulas.contains(&question.formula) || !satisfiable(&formulas).expect("propositional") {
            continue;
        }
        if classify_entailment(&formulas, &question.formula).expect("propositional") != want {
            continue;
        }

        let atoms = glossary(&formulas, &question.formula);
        let label = if want == EntailmentVerdict::Valid { "Yes" } else { "No" };
        return TaskRecord {
            id,
            task: Task::Tf,
            context: premises.iter().map(|s| s.text.as_str()).collect::<Vec<_>>().join(" "),
            question: question.text,
            options: Default::default(),
            label: label.to_string(),
            logic: Some(LogicBlock {
                atoms: atoms.into_iter().collect(),
                premises: formulas.iter().map(Formula::to_string).collect(),
                options: Default::default(),
                hypothesis: Some(question.formula.to_string()),
            }),
        };
    }
}

/// Names and phrases of the propositions used, in pool order.
fn glossary(premises: &[Formula], hypothesis: &Formula) -> Vec<(String, String)> {
    let used: Vec<String> = premises.iter().chain([hypothesis]).flat_map(Formula::atoms).collect();
    PROPOSITIONS
        .iter()
        .filter(|p| used.iter().any(|u| u == p.0))
        .map(|(name, phrase, _)| (name.to_string(), phrase.to_string()))
        .collect()
}

/// `per_label` entailed and `per_label` refuted problems in shuffled order.
pub fn synthesize_tf(seed: u64, per_label: usize) -> Vec<TaskRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wants: Vec<EntailmentVerdict> = std::iter::repeat_n(EntailmentVerdict::Valid, per_label)
        .chain(std::iter::repeat_n(EntailmentVerdict::Contradicted, per_label))
        .collect();
    wants.shuffle(&mut rng);
    let width = (2 * per_label).to_string().len().max(2);
    wants
        .into_iter()
        .enumerate()
        .map(|(i, want)| problem(&mut rng, format!("tf-syn-{:0width$}", i + 1), want))
        .collect()
}

/// One record per line, as datasets are stored.
pub fn to_jsonl(records: &[TaskRecord]) -> String {
    records.iter().map(|r| serde_json::to_string(r).expect("records serialize") + "\n").collect()
}
