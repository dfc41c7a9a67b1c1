use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ltltrace::automaton::{solve, ContainmentChecker, Deadline, Verdict};
use ltltrace::datagen::{
    dataset_stats, gen_cnf_dataset, gen_pattern_conjunctions, gen_random_ltl, gen_random_prop, gen_unsolved_patterns,
    histogram_csv, read_dataset, split_dataset, write_dataset, CnfParams, DatasetRecord, GenConfig, NodeWeights,
    PatternCatalog, PatternParams, SplitRatios, Task,
};
use ltltrace::eval::eval_concrete;
use ltltrace::formula::{Ltl, Prop, Supply};
use ltltrace::harness::{evaluate, read_predictions, BeamMode};
use ltltrace::manifest::RunManifest;
use ltltrace::sat::{check_partial_assignment, derive_partial_assignment, find_model, PartialAssignment};
use ltltrace::trace::{ConcreteTrace, SymbolicTrace};

const DOMAIN_FAILURE: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "ltltrace", version, about = "Generate, check and evaluate LTL traces and propositional assignments")]
struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a trace or partial assignment for each formula.
    Solve(SolveArgs),
    /// Check a candidate answer against a formula.
    Check(CheckArgs),
    /// Random LTL formulas with traces, spread evenly over sizes.
    GenRandomLtl(GenArgs),
    /// Conjunctions of specification patterns with traces.
    GenPattern(PatternArgs),
    /// Pattern conjunctions the solver cannot finish within the deadline.
    GenUnsolved(UnsolvedArgs),
    /// Random propositional formulas with partial assignments.
    GenProp(GenArgs),
    /// Random CNF formulas grown up to the satisfiability edge.
    GenCnf(CnfArgs),
    /// Shuffle a dataset into train, validation and test files.
    Split(SplitArgs),
    /// Histogram of formula sizes or answer lengths as CSV.
    Stats(StatsArgs),
    /// Classify a prediction file and report counts per size bucket.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Ltl,
    Prop,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Task {
        match t {
            TaskArg::Ltl => Task::LtlTrace,
            TaskArg::Prop => Task::PropAssignment,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.manifest.json`, or standard error
    /// when writing to standard output.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// A single LTL formula.
    #[arg(long, conflicts_with_all = ["prop", "input"])]
    ltl: Option<String>,
    /// A single propositional formula.
    #[arg(long, conflicts_with = "input")]
    prop: Option<String>,
    /// One formula per line (`-` for standard input); extra tab fields are ignored.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ltl")]
    task: TaskArg,
    /// Per-formula budget; 0 means unlimited.
    #[arg(long, default_value_t = 0)]
    timeout_ms: u64,
    /// Per-formula budget in automaton steps; 0 means unlimited.
    #[arg(long, default_value_t = 0)]
    step_budget: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CheckArgs {
    formula: Option<String>,
    candidate: Option<String>,
    /// Pairs `formula<TAB>candidate[<TAB>...]`, one per line (`-` for standard input).
    #[arg(long, conflicts_with_all = ["formula", "candidate"])]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ltl")]
    task: TaskArg,
    /// Read LTL candidates as concrete lassos whose positions are literal conjunctions.
    #[arg(long)]
    concrete: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the first N propositions.
    #[arg(long, conflicts_with = "supply")]
    props: Option<usize>,
    /// Explicit proposition letters, e.g. `abcde`.
    #[arg(long)]
    supply: Option<String>,
    #[arg(long)]
    min_size: Option<usize>,
    #[arg(long)]
    max_size: Option<usize>,
    /// Per-formula solver budget; 0 means unlimited.
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Per-formula solver budget in automaton steps; 0 means unlimited.
    /// Reproducible, unlike --timeout-ms.
    #[arg(long)]
    step_budget: Option<u64>,
    #[arg(long)]
    max_trace_tokens: Option<usize>,
    /// Consecutive draws without a new record before giving up.
    #[arg(long)]
    retry_budget: Option<usize>,
    /// Node weight override `name=value`; names: prop, not, and, or, implies,
    /// iff, xor, next, until, weak-until, eventually, globally.
    #[arg(long = "weight", value_name = "NAME=VALUE")]
    weights: Vec<String>,
    /// Propositions are this many times likelier than each constant.
    #[arg(long)]
    constant_factor: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PatternArgs {
    /// `dac`, `eh`, or a pattern file.
    #[arg(long, default_value = "dac")]
    patterns: String,
    #[arg(long, default_value_t = 8)]
    max_conjuncts: usize,
    #[command(flatten)]
    gen: GenArgs,
}

#[derive(Args)]
struct UnsolvedArgs {
    /// `dac`, `eh`, or a pattern file.
    #[arg(long, default_value = "dac")]
    patterns: String,
    #[command(flatten)]
    gen: GenArgs,
}

#[derive(Args)]
struct CnfArgs {
    #[arg(long, default_value_t = 0.9)]
    p_geo: f64,
    #[arg(long, default_value_t = 0.75)]
    p_k2: f64,
    #[arg(long, default_value_t = 1)]
    min_vars: usize,
    #[arg(long, default_value_t = 15)]
    max_vars: usize,
    #[command(flatten)]
    gen: GenArgs,
}

#[derive(Args)]
struct SplitArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Train, validation and test fractions.
    #[arg(long, default_value = "0.8,0.1,0.1")]
    ratios: String,
    /// Directory for `train.tsv`, `val.tsv`, `test.tsv` and the manifest.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    Formula,
    Answer,
}

#[derive(Args)]
struct StatsArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "ltl")]
    task: TaskArg,
    #[arg(long, value_enum, default_value = "formula")]
    field: Field,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct EvalArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "ltl")]
    task: TaskArg,
    #[arg(long, default_value_t = 1)]
    bucket_width: usize,
    /// Count a record by its best beam candidate instead of the first.
    #[arg(long)]
    any_beam: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Failure {
        Failure { code: USAGE, message: message.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::usage(format!("i/o error: {e}"))
    }
}

type Outcome = Result<u8, Failure>;

fn open_input(path: &Path) -> io::Result<Box<dyn BufRead>> {
    if path == Path::new("-") {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        File::open(path)
            .map(|f| Box::new(BufReader::new(f)) as Box<dyn BufRead>)
            .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    }
}

fn open_output(out: &OutputArgs) -> io::Result<Box<dyn Write>> {
    match &out.out {
        Some(p) => Ok(Box::new(BufWriter::new(File::create(p)?))),
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

fn emit_manifest(out: &OutputArgs, m: &RunManifest) -> io::Result<()> {
    match (&out.manifest, &out.out) {
        (Some(p), _) => m.write(p),
        (None, Some(o)) => m.write(&RunManifest::sidecar_path(o)),
        (None, None) => writeln!(io::stderr(), "{}", m.to_json()),
    }
}

fn apply_weight(w: &mut NodeWeights, spec: &str) -> Result<(), Failure> {
    let (name, value) =
        spec.split_once('=').ok_or_else(|| Failure::usage(format!("--weight `{spec}` is not NAME=VALUE")))?;
    let value: f64 =
        value.parse().map_err(|_| Failure::usage(format!("--weight `{spec}`: `{value}` is not a number")))?;
    let slot = match name {
        "prop" => &mut w.prop,
        "not" => &mut w.not,
        "and" => &mut w.and,
        "or" => &mut w.or,
        "implies" => &mut w.implies,
        "iff" => &mut w.iff,
        "xor" => &mut w.xor,
        "next" => &mut w.next,
        "until" => &mut w.until,
        "weak-until" => &mut w.weak_until,
        "eventually" => &mut w.eventually,
        "globally" => &mut w.globally,
        _ => return Err(Failure::usage(format!("--weight: unknown node `{name}`"))),
    };
    *slot = value;
    Ok(())
}

impl GenArgs {
    fn config(&self, mut cfg: GenConfig) -> Result<GenConfig, Failure> {
        if let Some(n) = self.props {
            cfg.supply = Supply::first(n).map_err(|e| Failure::usage(format!("--props: {e}")))?;
        }
        if let Some(s) = &self.supply {
            cfg.supply = Supply::from_letters(s).map_err(|e| Failure::usage(format!("--supply: {e}")))?;
        }
        cfg.seed = self.seed;
        cfg.count = self.count.unwrap_or(cfg.count);
        cfg.min_size = self.min_size.unwrap_or(cfg.min_size);
        cfg.max_size = self.max_size.unwrap_or(cfg.max_size);
        cfg.timeout_ms = self.timeout_ms.unwrap_or(cfg.timeout_ms);
        cfg.step_budget = self.step_budget.unwrap_or(cfg.step_budget);
        cfg.max_trace_tokens = self.max_trace_tokens.unwrap_or(cfg.max_trace_tokens);
        cfg.retry_budget = self.retry_budget.unwrap_or(cfg.retry_budget);
        cfg.weights.constant_factor = self.constant_factor.unwrap_or(cfg.weights.constant_factor);
        for w in &self.weights {
            apply_weight(&mut cfg.weights, w)?;
        }
        cfg.validate().map_err(Failure::usage)?;
        Ok(cfg)
    }

    fn finish(
        &self,
        name: &str,
        cfg: &GenConfig,
        records: &[DatasetRecord],
        counts: serde_json::Value,
        start: Instant,
    ) -> Outcome {
        write_dataset(open_output(&self.output)?, records)?;
        let config = serde_json::to_value(cfg).expect("config serializes");
        emit_manifest(&self.output, &RunManifest::new(name, config, Some(cfg.seed), start.elapsed(), counts))?;
        Ok(0)
    }
}

fn load_catalog(spec: &str) -> Result<PatternCatalog, Failure> {
    match PatternCatalog::builtin(spec) {
        Some(c) => Ok(c),
        None => PatternCatalog::load(Path::new(spec)).map_err(Failure::usage),
    }
}

enum Solved {
    Answer(String),
    Unsat,
    Timeout,
}

fn solve_one(task: Task, formula: &str, deadline: &Deadline) -> Result<Solved, String> {
    match task {
        Task::LtlTrace => {
            let f = Ltl::parse(formula).map_err(|e| e.to_string())?;
            Ok(match solve(&f, deadline) {
                Ok(Some(t)) => Solved::Answer(t.to_string()),
                Ok(None) => Solved::Unsat,
                Err(_) => Solved::Timeout,
            })
        }
        Task::PropAssignment => {
            let f = Prop::parse(formula).map_err(|e| e.to_string())?;
            Ok(derive_partial_assignment(&f).map_or(Solved::Unsat, |a| Solved::Answer(a.to_string())))
        }
    }
}

fn cmd_solve(a: &SolveArgs) -> Outcome {
    let start = Instant::now();
    let (task, inputs, single): (Task, Vec<String>, bool) = match (&a.ltl, &a.prop, &a.input) {
        (Some(f), _, _) => (Task::LtlTrace, vec![f.clone()], true),
        (_, Some(f), _) => (Task::PropAssignment, vec![f.clone()], true),
        (_, _, Some(p)) => {
            let lines: Vec<String> = open_input(p)?.lines().collect::<io::Result<_>>()?;
            (a.task.into(), lines, false)
        }
        _ => return Err(Failure::usage("give --ltl, --prop or --input")),
    };
    let mut out = open_output(&a.output)?;
    let (mut solved, mut unsat, mut timeouts, mut errors) = (0, 0, 0, 0);
    for (i, line) in inputs.iter().enumerate() {
        let formula = line.split('\t').next().unwrap_or_default();
        if !single && formula.trim().is_empty() {
            continue;
        }
        let line_out = match solve_one(task, formula, &Deadline::from_millis(a.timeout_ms).with_steps(a.step_budget)) {
            Err(e) => {
                errors += 1;
                eprintln!("line {}: {e}", i + 1);
                "ERROR".to_string()
            }
            Ok(Solved::Answer(t)) => {
                solved += 1;
                t
            }
            Ok(Solved::Unsat) => {
                unsat += 1;
                "UNSAT".to_string()
            }
            Ok(Solved::Timeout) => {
                timeouts += 1;
                "TIMEOUT".to_string()
            }
        };
        writeln!(out, "{line_out}")?;
    }
    out.flush()?;
    let counts = json!({"solved": solved, "unsat": unsat, "timeout": timeouts, "errors": errors});
    let config = json!({"task": task, "timeout_ms": a.timeout_ms, "step_budget": a.step_budget, "single": single});
    emit_manifest(&a.output, &RunManifest::new("solve", config, None, start.elapsed(), counts))?;
    Ok(if errors > 0 {
        USAGE
    } else if single && solved == 0 {
        DOMAIN_FAILURE
    } else {
        0
    })
}

enum CheckVerdict {
    Holds,
    Violated(String),
    Invalid(String),
}

impl CheckVerdict {
    fn line(&self) -> String {
        match self {
            CheckVerdict::Holds => "HOLDS".to_string(),
            CheckVerdict::Violated(w) => format!("VIOLATED\t{w}"),
            CheckVerdict::Invalid(why) => format!("INVALID\t{why}"),
        }
    }
}

fn check_ltl(f: &Ltl, candidate: &str, concrete: bool) -> CheckVerdict {
    let sym = match SymbolicTrace::parse(candidate) {
        Ok(t) => t,
        Err(e) => return CheckVerdict::Invalid(e.to_string()),
    };
    if concrete {
        let supply = f.vars().union(sym.vars());
        let word = match ConcreteTrace::parse(candidate, supply) {
            Ok(w) => w,
            Err(e) => return CheckVerdict::Invalid(e.to_string()),
        };
        return match eval_concrete(f, &word) {
            Ok(true) => CheckVerdict::Holds,
            Ok(false) => CheckVerdict::Violated(word.to_string()),
            Err(e) => CheckVerdict::Invalid(e.to_string()),
        };
    }
    match ContainmentChecker::new(f).check(&sym) {
        Verdict::Holds => CheckVerdict::Holds,
        Verdict::Violated(w) => CheckVerdict::Violated(w.to_string()),
    }
}

fn check_prop(f: &Prop, candidate: &str) -> CheckVerdict {
    let a = match PartialAssignment::parse(candidate, f.vars()) {
        Ok(a) => a,
        Err(e) => return CheckVerdict::Invalid(e.to_string()),
    };
    if check_partial_assignment(f, &a) == Ok(true) {
        return CheckVerdict::Holds;
    }
    // a completion of the assignment that falsifies the formula
    let letter = find_model(&Prop::and(Prop::not(f.clone()), a.to_prop())).expect("a falsifying completion exists");
    let witness: PartialAssignment = f.vars().vars().map(|v| (v, letter & v.bit() != 0)).collect();
    CheckVerdict::Violated(witness.to_string())
}

fn check_pair(task: Task, formula: &str, candidate: &str, concrete: bool) -> Result<CheckVerdict, String> {
    match task {
        Task::LtlTrace => Ltl::parse(formula).map(|f| check_ltl(&f, candidate, concrete)).map_err(|e| e.to_string()),
        Task::PropAssignment => Prop::parse(formula).map(|f| check_prop(&f, candidate)).map_err(|e| e.to_string()),
    }
}

fn cmd_check(a: &CheckArgs) -> Outcome {
    let start = Instant::now();
    let task: Task = a.task.into();
    let mut out = open_output(&a.output)?;
    let config = json!({"task": task, "concrete": a.concrete});
    if let Some(path) = &a.input {
        let (mut holds, mut violated, mut invalid, mut errors) = (0, 0, 0, 0);
        for (i, line) in open_input(path)?.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let formula = fields.next().unwrap_or_default();
            let candidate = fields.next().unwrap_or_default();
            let text = match check_pair(task, formula, candidate, a.concrete) {
                Ok(v) => {
                    match v {
                        CheckVerdict::Holds => holds += 1,
                        CheckVerdict::Violated(_) => violated += 1,
                        CheckVerdict::Invalid(_) => invalid += 1,
                    }
                    v.line()
                }
                Err(e) => {
                    errors += 1;
                    eprintln!("line {}: {e}", i + 1);
                    "ERROR".to_string()
                }
            };
            writeln!(out, "{text}")?;
        }
        out.flush()?;
        let counts = json!({"holds": holds, "violated": violated, "invalid": invalid, "errors": errors});
        emit_manifest(&a.output, &RunManifest::new("check", config, None, start.elapsed(), counts))?;
        return Ok(if errors > 0 { USAGE } else { 0 });
    }
    let (Some(formula), Some(candidate)) = (&a.formula, &a.candidate) else {
        return Err(Failure::usage("give FORMULA CANDIDATE or --input"));
    };
    let verdict =
        check_pair(task, formula, candidate, a.concrete).map_err(|e| Failure::usage(format!("formula: {e}")))?;
    writeln!(out, "{}", verdict.line())?;
    out.flush()?;
    let counts = json!({"verdict": verdict.line().split('\t').next()});
    emit_manifest(&a.output, &RunManifest::new("check", config, None, start.elapsed(), counts))?;
    Ok(match verdict {
        CheckVerdict::Holds => 0,
        _ => DOMAIN_FAILURE,
    })
}

fn cmd_gen_random(a: &GenArgs, task: Task) -> Outcome {
    let start = Instant::now();
    let (name, preset) = match task {
        Task::LtlTrace => ("gen-random-ltl", GenConfig::random_ltl()),
        Task::PropAssignment => ("gen-prop", GenConfig::random_prop()),
    };
    let cfg = a.config(preset)?;
    let (records, stats) = match task {
        Task::LtlTrace => gen_random_ltl(&cfg),
        Task::PropAssignment => gen_random_prop(&cfg),
    }
    .map_err(Failure::usage)?;
    a.finish(name, &cfg, &records, json!(stats), start)
}

fn cmd_gen_pattern(a: &PatternArgs) -> Outcome {
    let start = Instant::now();
    let catalog = load_catalog(&a.patterns)?;
    let cfg = a.gen.config(GenConfig::patterns())?;
    let params = PatternParams { max_conjuncts: a.max_conjuncts };
    let (records, stats, terminations) = gen_pattern_conjunctions(&catalog, &cfg, params).map_err(Failure::usage)?;
    let counts = json!({"generation": stats, "terminations": terminations, "patterns": a.patterns, "max_conjuncts": a.max_conjuncts});
    a.gen.finish("gen-pattern", &cfg, &records, counts, start)
}

fn cmd_gen_unsolved(a: &UnsolvedArgs) -> Outcome {
    let start = Instant::now();
    let catalog = load_catalog(&a.patterns)?;
    let cfg = a.gen.config(GenConfig::unsolved())?;
    let (records, stats) = gen_unsolved_patterns(&catalog, &cfg).map_err(Failure::usage)?;
    a.gen.finish("gen-unsolved", &cfg, &records, json!({"generation": stats, "patterns": a.patterns}), start)
}

fn cmd_gen_cnf(a: &CnfArgs) -> Outcome {
    let start = Instant::now();
    let cfg = a.gen.config(GenConfig::cnf())?;
    let params = CnfParams { p_geo: a.p_geo, p_k2: a.p_k2, min_vars: a.min_vars, max_vars: a.max_vars };
    let (records, stats) = gen_cnf_dataset(&cfg, params).map_err(Failure::usage)?;
    a.gen.finish("gen-cnf", &cfg, &records, json!({"generation": stats, "cnf": params}), start)
}

fn parse_ratios(s: &str) -> Result<SplitRatios, Failure> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::usage(format!("--ratios `{s}` is not three comma-separated numbers")))?;
    let [train, val, test] = parts[..] else {
        return Err(Failure::usage(format!("--ratios `{s}` needs exactly three values")));
    };
    let r = SplitRatios { train, val, test };
    let check = GenConfig { split: r, ..GenConfig::random_ltl() };
    check.validate().map_err(Failure::usage)?;
    Ok(r)
}

fn cmd_split(a: &SplitArgs) -> Outcome {
    let start = Instant::now();
    let ratios = parse_ratios(&a.ratios)?;
    let lines: Vec<String> = open_input(&a.input)?
        .lines()
        .filter(|l| l.as_ref().map_or(true, |l| !l.is_empty()))
        .collect::<io::Result<_>>()?;
    let total = lines.len();
    let parts = split_dataset(lines, ratios, a.seed);
    std::fs::create_dir_all(&a.out_dir)?;
    for (name, part) in [("train", &parts.train), ("val", &parts.val), ("test", &parts.test)] {
        let mut w = BufWriter::new(File::create(a.out_dir.join(format!("{name}.tsv")))?);
        for l in part {
            writeln!(w, "{l}")?;
        }
        w.flush()?;
    }
    let counts = json!({"input": total, "train": parts.train.len(), "val": parts.val.len(), "test": parts.test.len()});
    let config = json!({"input": a.input, "ratios": ratios});
    RunManifest::new("split", config, Some(a.seed), start.elapsed(), counts)
        .write(&a.out_dir.join("split.manifest.json"))?;
    Ok(0)
}

fn cmd_stats(a: &StatsArgs) -> Outcome {
    let start = Instant::now();
    let records = read_dataset(open_input(&a.input)?, a.task.into()).map_err(Failure::usage)?;
    let stats = dataset_stats(&records);
    let hist = match a.field {
        Field::Formula => &stats.formula_sizes,
        Field::Answer => &stats.answer_lengths,
    };
    let mut out = open_output(&a.output)?;
    out.write_all(histogram_csv(hist).as_bytes())?;
    out.flush()?;
    let field = match a.field {
        Field::Formula => "formula",
        Field::Answer => "answer",
    };
    let config = json!({"input": a.input, "task": Task::from(a.task), "field": field});
    let counts = json!({"records": records.len(), "buckets": hist.len()});
    emit_manifest(&a.output, &RunManifest::new("stats", config, None, start.elapsed(), counts))?;
    Ok(0)
}

fn cmd_eval(a: &EvalArgs) -> Outcome {
    let start = Instant::now();
    let file = read_predictions(open_input(&a.input)?, a.task.into())?;
    for e in &file.errors {
        eprintln!("line {}: {}", e.line, e.message);
    }
    let mode = if a.any_beam { BeamMode::AnyBeam } else { BeamMode::Rank1 };
    let report = evaluate(&file, a.bucket_width, mode);
    let text = match a.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json() + "\n",
    };
    let mut out = open_output(&a.output)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    let config =
        json!({"input": a.input, "task": Task::from(a.task), "bucket_width": a.bucket_width, "beam_mode": mode});
    let counts = json!({"totals": report.totals, "errors": report.errors});
    emit_manifest(&a.output, &RunManifest::new("eval", config, None, start.elapsed(), counts))?;
    Ok(0)
}

fn run(cli: &Cli) -> Outcome {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .map_err(|e| Failure::usage(format!("--jobs: {e}")))?;
    }
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Check(a) => cmd_check(a),
        Command::GenRandomLtl(a) => cmd_gen_random(a, Task::LtlTrace),
        Command::GenPattern(a) => cmd_gen_pattern(a),
        Command::GenUnsolved(a) => cmd_gen_unsolved(a),
        Command::GenProp(a) => cmd_gen_random(a, Task::PropAssignment),
        Command::GenCnf(a) => cmd_gen_cnf(a),
        Command::Split(a) => cmd_split(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Eval(a) => cmd_eval(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
