//! `dualproof`: solve, benchmark, audit and generate first-order reasoning problems.
//!
//! Exit codes: 0 ok, 1 soundness violation, 2 bad input, 3 bad configuration.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use dualproof::engine::{EngineConfig, TraceVerbosity, DEFAULT_BACKTRACK_LIMIT, DEFAULT_I_MAX};
use dualproof::harness::{
    check_problem, generate_suite, load_problems, parse_problems, problems_to_jsonl, run_benchmark, symbolic,
    trace_file_name, Agreement, BenchConfig, CheckError, CheckOutcome, GenParams, Problem,
};
use dualproof::translator::{Dialect, RemoteTranslatorEndpoint};
use dualproof::{Answer, ProblemSource, Verdict};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "dualproof", version, about = "Dual-path resolution reasoner for first-order problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one problem and print its verdict.
    Solve(SolveArgs),
    /// Run every problem of a JSONL dataset and report accuracy.
    Bench(BenchArgs),
    /// Compare the engine with the brute-force oracle on one problem.
    Check(CheckArgs),
    /// Generate a seeded JSONL suite with oracle labels.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
struct EngineArgs {
    /// Resolution steps allowed per path.
    #[arg(long, default_value_t = DEFAULT_I_MAX)]
    i_max: usize,
    /// Cap on CNF clauses and on derived clauses per path.
    #[arg(long, default_value_t = dualproof::decompose::DEFAULT_CLAUSE_CAP)]
    clause_cap: usize,
    /// Backtracks allowed per path.
    #[arg(long, default_value_t = DEFAULT_BACKTRACK_LIMIT)]
    backtrack_limit: usize,
}

impl EngineArgs {
    fn config(&self) -> EngineConfig {
        EngineConfig {
            i_max: self.i_max,
            clause_cap: self.clause_cap,
            backtrack_limit: self.backtrack_limit,
            ..EngineConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct TranslatorArgs {
    /// Remote translation service for natural-language input.
    #[arg(long, env = "DUALPROOF_TRANSLATOR_URL")]
    translator_url: Option<String>,
    /// Per-request timeout in seconds.
    #[arg(long, default_value_t = 30)]
    translator_timeout: u64,
    /// Extra attempts after a failed request.
    #[arg(long, default_value_t = 2)]
    translator_retries: u32,
}

impl TranslatorArgs {
    fn endpoint(&self) -> Result<Option<RemoteTranslatorEndpoint>, CliError> {
        let Some(url) = &self.translator_url else { return Ok(None) };
        if self.translator_timeout == 0 {
            return Err(CliError::Config("--translator-timeout must be at least 1".into()));
        }
        Ok(Some(
            RemoteTranslatorEndpoint::new(url)
                .with_timeout(Duration::from_secs(self.translator_timeout))
                .with_retries(self.translator_retries),
        ))
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Problem file; `-` or nothing reads stdin. Either the line format
    /// (premises, then `? query`) or a single JSON problem record.
    input: Option<PathBuf>,
    /// Treat line-format input as natural-language sentences in this dialect.
    #[arg(long)]
    dialect: Option<Dialect>,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    translator: TranslatorArgs,
    /// Also write the trace to `<dir>/<id>.json`.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
    /// Print the trace document as JSON.
    #[arg(long)]
    json: bool,
    /// Include the intermediate decomposition forms of every formula.
    #[arg(long)]
    explain: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// JSONL dataset.
    dataset: PathBuf,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    translator: TranslatorArgs,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Remote translation requests in flight at once.
    #[arg(long, default_value_t = 4)]
    remote_concurrency: usize,
    /// Write one trace file per solved problem here.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
    /// Write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Zero every wall-clock field in the report.
    #[arg(long)]
    strip_timing: bool,
    /// Print the JSON report on stdout instead of the summary table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Problem file in the line format; `-` or nothing reads stdin.
    input: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
    /// Print the outcome as JSON.
    #[arg(long)]
    json: bool,
    /// Flip the engine's answer before comparing, to exercise the violation path.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = GenParams::default().problems)]
    problems: usize,
    #[arg(long, default_value_t = GenParams::default().constants)]
    constants: usize,
    #[arg(long, default_value_t = GenParams::default().predicates)]
    predicates: usize,
    /// Upper bound on premises per problem.
    #[arg(long, default_value_t = GenParams::default().clauses)]
    clauses: usize,
    /// Rules on the chain from fact to query.
    #[arg(long, default_value_t = GenParams::default().depth)]
    depth: usize,
    /// Share of unstructured random problems, 0 to 100.
    #[arg(long, default_value_t = GenParams::default().unstructured_percent)]
    unstructured_percent: u32,
    /// Write the suite here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Config(String),
    #[error("soundness violation: engine answered {engine}, oracle says {oracle}")]
    Violation { engine: Answer, oracle: Answer },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation { .. } => 1,
            CliError::Input(_) => 2,
            CliError::Config(_) => 3,
        }
    }
}

fn engine_config(args: &EngineArgs) -> Result<EngineConfig, CliError> {
    let cfg = args.config();
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(cfg)
}

fn read_input(path: Option<&Path>) -> Result<(String, String), CliError> {
    match path {
        None => read_stdin(),
        Some(p) if p.as_os_str() == "-" => read_stdin(),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            let id = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "problem".into());
            Ok((id, text))
        }
    }
}

fn read_stdin() -> Result<(String, String), CliError> {
    let mut text = String::new();
    io::stdin().read_to_string(&mut text).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
    Ok(("stdin".into(), text))
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Reads the solve input as a [`Problem`], whatever its format.
fn solve_problem(id: String, text: &str, dialect: Option<Dialect>) -> Result<Problem, CliError> {
    if text.trim_start().starts_with('{') {
        let mut problems = parse_problems(text).map_err(|e| CliError::Input(e.to_string()))?;
        if problems.len() != 1 {
            return Err(CliError::Input(format!("expected one JSON problem, found {}", problems.len())));
        }
        return Ok(problems.remove(0));
    }
    let src = ProblemSource::from_text(&id, text).map_err(|e| CliError::Input(e.to_string()))?;
    let premises = src
        .premises
        .iter()
        .map(|p| match &p.gloss {
            Some(g) => format!("{} ::: {g}", p.text),
            None => p.text.clone(),
        })
        .collect();
    Ok(Problem {
        id,
        premises,
        query: src.query,
        label: Answer::Unknown,
        dialect,
        nl: dialect.is_some(),
        depth: None,
        dataset: None,
    })
}

fn print_verdict(out: &mut impl Write, v: &Verdict, explain: bool) -> io::Result<()> {
    writeln!(out, "{}", v.answer)?;
    for p in v.paths() {
        writeln!(
            out,
            "  {:?} from {}: {} ({:?}, {} steps, {} backtracks)",
            p.determination.path,
            p.start,
            p.determination.claim(),
            p.termination,
            p.stats.iterations,
            p.stats.backtracks
        )?;
        for s in &p.steps {
            writeln!(out, "    {:>3}. {}  +  {} [{}]  =>  {}", s.step, s.current, s.complement, s.complement_origin, s.resolvent)?;
        }
    }
    if explain {
        for st in &v.decomposition.stages {
            writeln!(out, "  formula     {}", st.source)?;
            writeln!(out, "    no →↔⊕    {}", st.eliminated)?;
            writeln!(out, "    nnf       {}", st.nnf)?;
            writeln!(out, "    prenex    {}", st.prenex)?;
            writeln!(out, "    skolem    {}", st.skolemized)?;
            writeln!(out, "    clauses   {}", st.clauses.join("  |  "))?;
        }
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let mut cfg = engine_config(&args.engine)?;
    cfg.verbosity = TraceVerbosity::Full;
    let endpoint = args.translator.endpoint()?;
    let (id, text) = read_input(args.input.as_deref())?;
    let problem = solve_problem(id, &text, args.dialect)?;
    let (premises, query) = symbolic(&problem, endpoint.as_ref())
        .map_err(|f| CliError::Input(format!("{:?} failure: {}", f.kind, f.message)))?;
    let verdict = dualproof::solve(&premises, &query, &cfg).map_err(|e| match e {
        dualproof::EngineError::Config(c) => CliError::Config(c.to_string()),
        other => CliError::Input(other.to_string()),
    })?;
    let doc = verdict.trace(&problem.id, args.explain);
    let json = serde_json::to_string_pretty(&doc).expect("trace serializes") + "\n";
    if let Some(dir) = &args.trace_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        write_output(&dir.join(trace_file_name(&problem.id)), &json)?;
    }
    let mut out = io::stdout().lock();
    if args.json {
        out.write_all(json.as_bytes())
    } else {
        print_verdict(&mut out, &verdict, args.explain)
    }
    .map_err(|e| CliError::Input(format!("stdout: {e}")))
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let engine = engine_config(&args.engine)?;
    let cfg = BenchConfig {
        engine,
        jobs: args.jobs,
        translator: args.translator.endpoint()?,
        remote_concurrency: args.remote_concurrency,
        trace_dir: args.trace_dir,
    };
    let problems = load_problems(&args.dataset).map_err(|e| CliError::Input(e.to_string()))?;
    let mut report = run_benchmark(&problems, &cfg).map_err(|e| match e {
        dualproof::harness::HarnessError::Pool(e) => CliError::Config(e.to_string()),
        other => CliError::Input(other.to_string()),
    })?;
    if args.strip_timing {
        report.strip_timing();
    }
    let json = report.to_json();
    if let Some(out) = &args.out {
        write_output(out, &json)?;
    }
    if args.json {
        print!("{json}");
    } else {
        print!("{}", report.table());
    }
    Ok(())
}

fn fault(answer: Answer) -> Answer {
    match answer {
        Answer::True => Answer::False,
        Answer::False | Answer::Unknown => Answer::True,
        Answer::SelfContradictory => Answer::Unknown,
    }
}

fn cmd_check(args: CheckArgs) -> Result<(), CliError> {
    let cfg = engine_config(&args.engine)?;
    let (id, text) = read_input(args.input.as_deref())?;
    let src = ProblemSource::from_text(id, &text).map_err(|e| CliError::Input(e.to_string()))?;
    let mut outcome = check_problem(&src, &cfg).map_err(|e| match e {
        CheckError::Engine(dualproof::EngineError::Config(c)) => CliError::Config(c.to_string()),
        other => CliError::Input(other.to_string()),
    })?;
    if args.inject_fault {
        let engine = fault(outcome.engine);
        outcome = CheckOutcome { engine, agreement: dualproof::harness::agreement(engine, outcome.oracle), ..outcome };
    }
    if args.json {
        println!("{}", serde_json::to_string(&outcome).expect("outcome serializes"));
    } else {
        println!("engine     {}", outcome.engine);
        println!("oracle     {}", outcome.oracle);
        println!("agreement  {}", serde_json::to_value(outcome.agreement).expect("agreement serializes").as_str().unwrap_or(""));
    }
    match outcome.agreement {
        Agreement::Agree => Ok(()),
        Agreement::Incomplete => {
            eprintln!(
                "note: incomplete, the engine answered Unknown where the oracle has {}; this is permitted",
                outcome.oracle
            );
            Ok(())
        }
        Agreement::Violation => Err(CliError::Violation { engine: outcome.engine, oracle: outcome.oracle }),
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let params = GenParams {
        problems: args.problems,
        constants: args.constants,
        predicates: args.predicates,
        clauses: args.clauses,
        depth: args.depth,
        unstructured_percent: args.unstructured_percent,
    };
    let suite = generate_suite(args.seed, &params).map_err(|e| CliError::Config(e.to_string()))?;
    let text = problems_to_jsonl(&suite);
    match &args.out {
        Some(path) => write_output(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(3),
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Check(a) => cmd_check(a),
        Command::Gen(a) => cmd_gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
