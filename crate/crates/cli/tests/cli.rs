use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn la(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_la"))
        .args(args)
        .current_dir(root())
        .env_remove("LA_API_KEY")
        .env_remove("LA_MODEL")
        .output()
        .unwrap()
}

fn out(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn err(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn parse_prints_both_syntaxes() {
    let o = la(&["parse", "P -> Q"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(out(&o), "P -> Q\nImplies(Atom(P), Atom(Q))\n");

    let o = la(&["parse", "--syntax", "constructor", "Not(Atom(P))"]);
    assert_eq!(out(&o).lines().next(), Some("~P"));

    let o = la(&["parse", "--syntax", "operator", "Not(Atom(P))"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_carry_a_position() {
    let o = la(&["parse", "P -> -> Q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(out(&o).is_empty());
    assert!(err(&o).contains("parse error at 5"), "{}", err(&o));
}

#[test]
fn apply_rules() {
    let o = la(&["apply", "Contrapositive", "P -> Q"]);
    assert_eq!((o.status.code(), out(&o)), (Some(0), "~Q -> ~P\n".to_string()));

    let o = la(&["apply", "Transitive", "P -> Q", "Q -> R"]);
    assert_eq!(out(&o), "P -> R\n");

    let o = la(&["apply", "Contrary", "A(S,P)=true"]);
    assert_eq!(out(&o), "E(S,P)=false\n");
    assert!(err(&o).contains("nonempty"));

    let o = la(&["apply", "Contrary", "A(S,P)=false"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(err(&o).contains("Undetermined"));

    let o = la(&["apply", "Transitive", "P -> Q", "R -> S"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(err(&o).contains("MiddleTermMismatch"));

    assert_eq!(la(&["apply", "Modus_ponens", "P"]).status.code(), Some(2));
    assert_eq!(la(&["apply", "Contrapositive", "P ->"]).status.code(), Some(2));
}

#[test]
fn prove_prints_verdicts() {
    for (premises, hypothesis, expected) in [
        (vec!["P -> Q", "P -> R"], "~Q -> ~P", "VALID"),
        (vec!["P -> Q"], "~P -> ~Q", "UNKNOWN"),
        (vec!["P"], "~P", "CONTRADICTED"),
        (vec!["A(Whale,Mammal)"], "I(Whale,Mammal)", "VALID"),
    ] {
        let mut args = vec!["prove"];
        for p in &premises {
            args.extend(["-p", p]);
        }
        args.push(hypothesis);
        let o = la(&args);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(out(&o).trim(), expected, "{premises:?} |- {hypothesis}");
    }
}

#[test]
fn agent_runs_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let o = la(&[
        "agent",
        "fixtures/magma_ocean/record.json",
        "--mock-script",
        "fixtures/magma_ocean/mock.jsonl",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", err(&o));
    assert_eq!(out(&o), "C\n");
    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(root().join("fixtures/magma_ocean/record.json")).unwrap())
            .unwrap();
    let path = dir.path().join(format!("{}.jsonl", record["id"].as_str().unwrap()));
    let transcript = std::fs::read_to_string(path).unwrap();
    let events: Vec<serde_json::Value> =
        transcript.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let option_a =
        events.iter().find(|e| e["detail"]["label"] == "A" && e["detail"].get("verdict").is_some()).unwrap();
    assert_eq!(option_a["detail"]["verdict"], "UNKNOWN");
    assert!(option_a["content"].as_str().unwrap().starts_with("UNKNOWN: A"));
}

#[test]
fn agent_exit_codes() {
    let o = la(&["agent", "fixtures/nope/record.json", "--mock-script", "fixtures/magma_ocean/mock.jsonl"]);
    assert_eq!(o.status.code(), Some(2));

    let o = la(&["agent", "fixtures/magma_ocean/record.json", "--mock-script", "fixtures/nope.jsonl"]);
    assert_eq!(o.status.code(), Some(2));

    // No API key in the environment.
    let o = la(&["agent", "fixtures/magma_ocean/record.json", "--backend", "openai", "--model", "m"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(err(&o).contains("LA_API_KEY"));

    // A script that runs dry mid-loop is a backend failure.
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("short.jsonl");
    std::fs::write(&script, "{\"response\":\"EVAL A\"}\n").unwrap();
    let o = la(&[
        "agent",
        "fixtures/magma_ocean/record.json",
        "--parser",
        "deterministic",
        "--mock-script",
        script.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(out(&o), "X\n");
}

#[test]
fn eval_prints_markdown_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = la(&[
        "eval",
        "fixtures/tf_synthetic.jsonl",
        "--task",
        "tf",
        "--mode",
        "la",
        "--parser",
        "deterministic",
        "--mock-script",
        "fixtures/mocks/perfect_policy.jsonl",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", err(&o));
    assert!(out(&o).lines().nth(2).unwrap().ends_with("| 20 | 20 | 100.00 |"), "{}", out(&o));
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv, "dataset,mode,model,n,correct,accuracy\nfixtures/tf_synthetic,la,mock,20,20,1.0000\n");
    assert_eq!(std::fs::read_to_string(dir.path().join("predictions.jsonl")).unwrap().lines().count(), 20);
    assert_eq!(std::fs::read_dir(dir.path().join("transcripts")).unwrap().count(), 20);
}

#[test]
fn eval_limit_and_usage_errors() {
    let o = la(&[
        "eval",
        "fixtures/tf_synthetic.jsonl",
        "--mode",
        "la",
        "--parser",
        "deterministic",
        "--mock-script",
        "fixtures/mocks/perfect_policy.jsonl",
        "--limit",
        "5",
        "--format",
        "csv",
    ]);
    assert_eq!(out(&o).lines().nth(1), Some("fixtures/tf_synthetic,la,mock,5,5,1.0000"));

    let o = la(&[
        "eval",
        "fixtures/tf_synthetic.jsonl",
        "--mode",
        "tot",
        "--mock-script",
        "fixtures/mocks/always_yes.jsonl",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(err(&o).contains("Usage:"), "{}", err(&o));

    let o = la(&[
        "eval",
        "fixtures/tf_synthetic.jsonl",
        "--mode",
        "la",
        "--task",
        "nli",
        "--mock-script",
        "fixtures/mocks/always_yes.jsonl",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(err(&o).contains("line 1"));

    let o = la(&[
        "eval",
        "fixtures/tf_synthetic.jsonl",
        "--mode",
        "cot",
        "--backend",
        "openai",
        "--mock-script",
        "x",
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = la(&["eval", "fixtures/tf_synthetic.jsonl", "--mode", "cot", "--shots", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn synth_reproduces_the_fixture() {
    let o = la(&["synth"]);
    assert_eq!(out(&o), std::fs::read_to_string(root().join("fixtures/tf_synthetic.jsonl")).unwrap());
}
