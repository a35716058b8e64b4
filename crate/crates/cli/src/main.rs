//! `la`: parse formulas, apply rules, check hypotheses, run the agent on one
//! problem, and evaluate datasets.
//!
//! Exit codes: 0 success, 2 usage or parse errors, 3 rule errors, 4 backend
//! failures.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use la_agent::{
    load_record, run_agent, AgentConfig, Backend, BackendSpec, HttpConfig, MockScript, ParserMode, Task,
};
use la_core::{
    parse_constructor, parse_operator, parse_statement, rules, serialize, KnowledgeBase, Rule, Statement,
    Syntax,
};
use la_eval::synth::{to_jsonl, FIXTURE_PER_LABEL, FIXTURE_SEED};
use la_eval::{emit_report, run_eval, synthesize_tf, EvalConfig, EvalError, Format, Mode};

const EXIT_USAGE: u8 = 2;
const EXIT_RULE: u8 = 3;
const EXIT_BACKEND: u8 = 4;

#[derive(Parser)]
#[command(name = "la", version, about = "Rule-guided logical reasoning agent")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Backend kind; defaults to mock when --mock-script is given.
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendKind>,
    /// Model name for the openai backend (falls back to LA_MODEL).
    #[arg(long, global = true)]
    model: Option<String>,
    /// JSONL script for the mock backend.
    #[arg(long, global = true, value_name = "PATH")]
    mock_script: Option<PathBuf>,
    #[arg(long, global = true, default_value = "self", value_parser = parse_parser_mode)]
    parser: ParserMode,
    /// Model for the external parser (openai backend).
    #[arg(long, global = true)]
    external_model: Option<String>,
    /// Mock script for the external parser.
    #[arg(long, global = true, value_name = "PATH")]
    external_mock_script: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u8).range(0..=3))]
    shots: u8,
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u16).range(1..=256))]
    max_steps: u16,
    #[arg(long, global = true, default_value_t = 0.0)]
    temperature: f64,
    /// Echo transcripts and progress to standard error.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    Openai,
    Mock,
}

#[derive(Clone, Copy, ValueEnum)]
enum SyntaxFlag {
    Auto,
    Operator,
    Constructor,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatFlag {
    Csv,
    Markdown,
}

impl From<FormatFlag> for Format {
    fn from(f: FormatFlag) -> Format {
        match f {
            FormatFlag::Csv => Format::Csv,
            FormatFlag::Markdown => Format::Markdown,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it in operator then constructor syntax.
    Parse {
        expr: String,
        #[arg(long, value_enum, default_value = "auto")]
        syntax: SyntaxFlag,
    },
    /// Apply an inference rule to formulas or categorical statements.
    Apply {
        rule: String,
        #[arg(required = true)]
        args: Vec<String>,
    },
    /// Judge a hypothesis against premises: VALID, CONTRADICTED or UNKNOWN.
    Prove {
        #[arg(short, long = "premise")]
        premises: Vec<String>,
        hypothesis: String,
    },
    /// Run the agent on one record file.
    Agent {
        record: PathBuf,
        /// Directory for the transcript.
        #[arg(long, default_value = "la-out")]
        out: PathBuf,
    },
    /// Evaluate a JSONL dataset under one mode.
    Eval {
        dataset: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, value_parser = parse_task)]
        task: Option<Task>,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u16).range(1..=256))]
        concurrency: u16,
        /// Directory for reports, predictions and transcripts.
        #[arg(long)]
        out: Option<PathBuf>,
        /// What to print on standard output.
        #[arg(long, value_enum, default_value = "markdown")]
        format: FormatFlag,
    },
    /// Generate the oracle-labeled true/false dataset.
    Synth {
        #[arg(long, default_value_t = FIXTURE_SEED)]
        seed: u64,
        #[arg(long, default_value_t = FIXTURE_PER_LABEL)]
        per_label: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_parser_mode(s: &str) -> Result<ParserMode, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: la_eval::UnknownMode| e.to_string())
}

fn parse_task(s: &str) -> Result<Task, String> {
    s.parse()
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl std::fmt::Display) -> Self {
        Failure { code, message: message.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if code == EXIT_USAGE as i32 {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(code as u8);
        }
    };
    let result = match &cli.command {
        Command::Parse { expr, syntax } => cmd_parse(expr, *syntax),
        Command::Apply { rule, args } => cmd_apply(rule, args),
        Command::Prove { premises, hypothesis } => cmd_prove(premises, hypothesis),
        Command::Agent { record, out } => cmd_agent(&cli.global, record, out),
        Command::Eval { dataset, mode, task, limit, concurrency, out, format } => cmd_eval(
            &cli.global,
            dataset,
            EvalArgs {
                mode: *mode,
                task: *task,
                limit: *limit,
                concurrency: *concurrency,
                out: out.as_deref(),
            },
            (*format).into(),
        ),
        Command::Synth { seed, per_label, out } => cmd_synth(*seed, *per_label, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_parse(expr: &str, syntax: SyntaxFlag) -> CmdResult {
    let parsed = match syntax {
        SyntaxFlag::Auto => la_core::parse_formula(expr),
        SyntaxFlag::Operator => parse_operator(expr),
        SyntaxFlag::Constructor => parse_constructor(expr),
    };
    let f = parsed.map_err(|e| Failure::new(EXIT_USAGE, e))?;
    println!("{}", serialize(&f, Syntax::Operator));
    println!("{}", serialize(&f, Syntax::Constructor));
    Ok(())
}

fn statement(text: &str) -> Result<Statement, Failure> {
    parse_statement(text).map_err(|e| Failure::new(EXIT_USAGE, format!("`{text}`: {e}")))
}

fn cmd_apply(rule: &str, args: &[String]) -> CmdResult {
    let rule: Rule = rule.parse().map_err(|e| Failure::new(EXIT_USAGE, e))?;
    let inputs = args.iter().map(|a| statement(a)).collect::<Result<Vec<_>, _>>()?;
    let app =
        rules::apply(rule, &inputs).map_err(|e| Failure::new(EXIT_RULE, format!("{}: {e}", e.kind())))?;
    println!("{}", app.output);
    if app.assumption.is_some() {
        eprintln!("note: assumes the subject term is nonempty");
    }
    Ok(())
}

fn cmd_prove(premises: &[String], hypothesis: &str) -> CmdResult {
    let mut kb = KnowledgeBase::new();
    for p in premises {
        kb.assert_premise(statement(p)?);
    }
    let h = statement(hypothesis)?;
    let report =
        kb.check_hypothesis(&h).map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", e.kind())))?;
    println!("{}", report.verdict);
    Ok(())
}

fn load_script(path: &Path) -> Result<Arc<MockScript>, Failure> {
    MockScript::load(path).map(Arc::new).map_err(|e| Failure::new(EXIT_USAGE, e))
}

/// The backend the flags describe, plus the external parser if any.
fn backends(g: &Global) -> Result<(BackendSpec, Option<BackendSpec>), Failure> {
    let kind =
        g.backend.unwrap_or(if g.mock_script.is_some() { BackendKind::Mock } else { BackendKind::Openai });
    let http = |model: Option<&str>| -> Result<BackendSpec, Failure> {
        let mut config = HttpConfig::from_env(model).map_err(|e| Failure::new(EXIT_BACKEND, e))?;
        config.temperature = g.temperature;
        Ok(BackendSpec::Http(config))
    };
    let main = match kind {
        BackendKind::Mock => {
            let path = g
                .mock_script
                .as_deref()
                .ok_or_else(|| Failure::new(EXIT_USAGE, "--backend mock needs --mock-script"))?;
            BackendSpec::Mock(load_script(path)?)
        }
        BackendKind::Openai => {
            if g.mock_script.is_some() {
                return Err(Failure::new(
                    EXIT_USAGE,
                    "--mock-script cannot be combined with --backend openai",
                ));
            }
            http(g.model.as_deref())?
        }
    };
    let parser = match g.parser {
        ParserMode::External => Some(match (&g.external_mock_script, &g.external_model) {
            (Some(_), Some(_)) => {
                return Err(Failure::new(
                    EXIT_USAGE,
                    "give --external-model or --external-mock-script, not both",
                ))
            }
            (Some(path), None) => BackendSpec::Mock(load_script(path)?),
            (None, Some(model)) => http(Some(model))?,
            (None, None) => {
                return Err(Failure::new(
                    EXIT_USAGE,
                    "--parser external needs --external-model or --external-mock-script",
                ))
            }
        }),
        _ => None,
    };
    Ok((main, parser))
}

fn agent_config(g: &Global) -> AgentConfig {
    AgentConfig {
        max_steps: g.max_steps as usize,
        parser: g.parser,
        shots: g.shots as usize,
        ..AgentConfig::default()
    }
}

fn write(path: &Path, contents: &str) -> CmdResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn cmd_agent(g: &Global, record: &Path, out: &Path) -> CmdResult {
    let record = load_record(record).map_err(|e| Failure::new(EXIT_USAGE, e))?;
    let (spec, parser_spec) = backends(g)?;
    let mut backend = spec.instantiate().map_err(|e| Failure::new(EXIT_BACKEND, e))?;
    let mut parser =
        parser_spec.map(|p| p.instantiate()).transpose().map_err(|e| Failure::new(EXIT_BACKEND, e))?;
    let parser: Option<&mut dyn Backend> = match parser.as_mut() {
        Some(p) => Some(p.as_mut()),
        None => None,
    };
    let t = run_agent(&record, &agent_config(g), backend.as_mut(), parser);

    let path = out.join(format!("{}.jsonl", record.id));
    write(&path, &t.to_jsonl())?;
    if g.verbose > 0 {
        eprint!("{}", t.to_jsonl());
    }
    eprintln!("transcript: {}", path.display());
    println!("{}", t.answer);
    match &t.reason {
        Some(reason) if reason.starts_with("backend error") => Err(Failure::new(EXIT_BACKEND, reason)),
        Some(reason) => {
            eprintln!("abstained: {reason}");
            Ok(())
        }
        None => Ok(()),
    }
}

struct EvalArgs<'a> {
    mode: Mode,
    task: Option<Task>,
    limit: Option<usize>,
    concurrency: u16,
    out: Option<&'a Path>,
}

fn cmd_eval(g: &Global, dataset: &Path, args: EvalArgs<'_>, format: Format) -> CmdResult {
    let (backend, parser_backend) = backends(g)?;
    let config = EvalConfig {
        mode: args.mode,
        backend,
        parser_backend,
        agent: agent_config(g),
        limit: args.limit,
        concurrency: args.concurrency as usize,
        transcripts: args.out.map(|d| d.join("transcripts")),
    };
    let report = run_eval(dataset, args.task, &config).map_err(|e| match e {
        EvalError::Backend(_) => Failure::new(EXIT_BACKEND, e),
        _ => Failure::new(EXIT_USAGE, e),
    })?;
    let aggregates = [report.aggregate.clone()];
    if let Some(dir) = args.out {
        write(&dir.join("report.csv"), &emit_report(&aggregates, Format::Csv))?;
        write(&dir.join("report.md"), &emit_report(&aggregates, Format::Markdown))?;
        write(&dir.join("predictions.jsonl"), &report.predictions_jsonl())?;
    }
    if g.verbose > 0 {
        let abstained = report.rows.iter().filter(|r| r.abstained).count();
        eprintln!("{} records, {abstained} abstained", report.rows.len());
    }
    print!("{}", emit_report(&aggregates, format));
    Ok(())
}

fn cmd_synth(seed: u64, per_label: usize, out: Option<&Path>) -> CmdResult {
    let text = to_jsonl(&synthesize_tf(seed, per_label));
    match out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
