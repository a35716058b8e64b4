use std::path::PathBuf;
use std::sync::Arc;

use la_agent::{AgentConfig, BackendSpec, MockScript, ParserMode};
use la_eval::{emit_report, evaluate_records, load_dataset, EvalConfig, EvalReport, Format, Mode};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn mock(name: &str) -> BackendSpec {
    BackendSpec::Mock(Arc::new(MockScript::load(&fixtures().join("mocks").join(name)).unwrap()))
}

fn config(mode: Mode, backend: BackendSpec) -> EvalConfig {
    let mut c = EvalConfig::new(mode, backend);
    c.agent = AgentConfig { parser: ParserMode::Deterministic, ..AgentConfig::default() };
    c
}

fn run(c: &EvalConfig) -> EvalReport {
    let records = load_dataset(&fixtures().join("tf_synthetic.jsonl"), None).unwrap();
    evaluate_records("fixtures/tf_synthetic", &records, c).unwrap()
}

fn csv_row(r: &EvalReport) -> String {
    emit_report(std::slice::from_ref(&r.aggregate), Format::Csv).lines().nth(1).unwrap().to_string()
}

#[test]
fn verdict_following_policy_is_exact() {
    let r = run(&config(Mode::La, mock("perfect_policy.jsonl")));
    assert_eq!(csv_row(&r), "fixtures/tf_synthetic,la,mock,20,20,1.0000");
    assert!(r.rows.iter().all(|row| row.steps == 2 && !row.abstained));
}

#[test]
fn constant_yes_scores_the_yes_fraction() {
    let r = run(&config(Mode::La, mock("always_yes.jsonl")));
    assert_eq!(csv_row(&r), "fixtures/tf_synthetic,la,mock,20,10,0.5000");
}

#[test]
fn runs_are_byte_identical_and_order_preserving() {
    for script in ["perfect_policy.jsonl", "always_yes.jsonl"] {
        let dirs: Vec<tempfile::TempDir> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
        let mut outputs = Vec::new();
        for (dir, workers) in dirs.iter().zip([1, 4]) {
            let mut c = config(Mode::La, mock(script));
            c.concurrency = workers;
            c.transcripts = Some(dir.path().to_path_buf());
            let r = run(&c);
            let ids: Vec<&str> = r.rows.iter().map(|row| row.id.as_str()).collect();
            let expected: Vec<String> = (1..=20).map(|i| format!("tf-syn-{i:02}")).collect();
            assert_eq!(ids, expected);
            let mut transcripts = String::new();
            for id in &ids {
                transcripts
                    .push_str(&std::fs::read_to_string(dir.path().join(format!("{id}.jsonl"))).unwrap());
            }
            outputs.push((r.predictions_jsonl(), emit_report(&[r.aggregate], Format::Csv), transcripts));
        }
        assert_eq!(outputs[0], outputs[1]);
    }
}

#[test]
fn limit_truncates() {
    let mut c = config(Mode::La, mock("perfect_policy.jsonl"));
    c.limit = Some(5);
    let r = run(&c);
    assert_eq!(r.aggregate.n, 5);
    assert_eq!(r.rows.len(), 5);
}

#[test]
fn malformed_actions_abstain_within_budget() {
    let mut c = config(Mode::La, mock("malformed.jsonl"));
    c.agent.max_steps = 5;
    c.agent.repair_budget = 100;
    let r = run(&c);
    assert_eq!(r.aggregate.correct, 0);
    assert!(r.rows.iter().all(|row| row.abstained && !row.correct && row.prediction == "No"));
    assert!(r.rows.iter().all(|row| row.steps == 5));
    assert!(csv_row(&r).ends_with(",20,0,0.0000"));
}

#[test]
fn single_completion_modes() {
    let yes = BackendSpec::Mock(Arc::new(MockScript::sequence(Vec::<String>::new())));
    let r = run(&config(Mode::Direct, yes));
    assert!(r.rows.iter().all(|row| row.abstained), "exhausted scripts are abstentions");

    let keyed = |response: &str| {
        BackendSpec::Mock(Arc::new(MockScript::from_entries([la_agent::MockEntry {
            prefix: Some(String::new()),
            response: response.into(),
        }])))
    };
    let r = run(&config(Mode::Direct, keyed("Yes, it follows.")));
    assert_eq!(r.aggregate.correct, 10);
    let r = run(&config(Mode::Cot, keyed("Thinking it over.\nAnswer: No")));
    assert_eq!(r.aggregate.correct, 10);
    assert!(r.rows.iter().all(|row| row.steps == 1));
    let r = run(&config(Mode::LaAblation, keyed("I am not sure.")));
    assert!(r.rows.iter().all(|row| row.abstained));
}

#[test]
fn ablation_can_parse_with_the_model() {
    let mut c = config(Mode::LaAblation, mock("always_yes.jsonl"));
    c.agent.parser = ParserMode::SelfParse;
    c.limit = Some(2);
    let dir = tempfile::tempdir().unwrap();
    c.transcripts = Some(dir.path().to_path_buf());
    let r = run(&c);
    // The scripted reply is not a translation, so parsing fails three times.
    assert!(r.rows.iter().all(|row| row.abstained));
    let t = std::fs::read_to_string(dir.path().join("tf-syn-01.jsonl")).unwrap();
    assert_eq!(t.lines().filter(|l| l.contains("\"attempt\"")).count(), 3);
    assert!(t.lines().last().unwrap().contains("parse failed"));
}

#[test]
fn invalid_backend_config_aborts_the_run() {
    let spec = BackendSpec::Http(la_agent::HttpConfig::new("http://127.0.0.1:9", "k", ""));
    let records = load_dataset(&fixtures().join("tf_synthetic.jsonl"), None).unwrap();
    assert!(evaluate_records("d", &records, &config(Mode::Cot, spec)).is_err());
}
