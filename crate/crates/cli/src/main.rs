use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Map, Value};

use wreathkit::hardness::{compile_formula, reduce_forall_powerword, reduce_qbf2, sym5_wreath_z, Dnf, GProgram};
use wreathkit::knapsack::{
    evaluate, magnitude_bounds, normalize_expression, nu_decompose, solve_box_with, verify_certificate,
    BoxSearch, DecompositionCertificate, KnapsackExpression, KnapsackFile, Valuation,
};
use wreathkit::par::Execution;
use wreathkit::periodic::{periodic_check, periodic_check_by_lcm, PeriodicFile};
use wreathkit::powerword::{naive_eval, powerpp, powerwp, PowerWordFile};
use wreathkit::sweep::{run_sweep, with_timeout, Suite, SweepConfig, DEFAULT_SEED};
use wreathkit::{Error, GroupDescriptor};

const GRAMMAR: &str = "\
Exit codes: 0 trivial/sat/reduced/pass, 1 nontrivial/unsat/fail, 2 error, 3 timeout.

Group descriptors:
  Z^r        free abelian group of rank r; generators g0.1 … g0.r
  W(m,r)     iterated wreath product Z^r ≀ (Z^r ≀ … ≀ Z^r), m+1 levels;
             generators g<level>.<i>, level 0 at the right (the acting ℤ^r)
  FS(d,r)    free solvable group of derived length d; generators x1 … xr
  Sym(n)     symmetric group; letters in cycle notation, e.g. (1,2,3)(4,5)
  Cyc(n)     cyclic group of order n; generator g0.1
  Dih(n)     dihedral group of order 2n; generators g0.1 (rotation), g0.2 (reflection)
  UT3        integer Heisenberg group; generators g0.1, g0.2
  wrZ(G)     G ≀ ℤ for G finite or UT3; G's letters at level 1, t = g0.1

Words: whitespace-separated letters; a letter is a generator, a generator
  followed by ^-1, a cycle product such as (1,2)(3,4) or (1,2)^-1, or 1 / e.

Power word file (.pw):
  group: <descriptor>
  (<word>) ^ <signed integer>        one factor per line

Periodic file (.per):
  group: <descriptor>
  <value>, <value>, …                one function per line, one period of values
  values: integers or [a,b,…] for Z^r and Cyc(n), [a,b,c] for UT3,
  cycle notation for Sym(n) and Dih(n)

Knapsack file (.kn):
  group: <descriptor>
  vars: x1 x2 …                      optional; fixes the variable order
  (<word>)                           a constant
  (<word>)^<var>                     a power; repeating a variable is allowed

DNF file (.dnf):
  exists: X1 X2 …
  forall: Y1 Y2 …
  X1 !Y2                             one term per line, ! negates
  true                               the empty term

G-program file (.gp):
  exists: X1 …
  forall: Y1 …
  <var> <a> <b>                      one instruction per line; a and b are
                                     whitespace-free Sym(5) words such as
                                     (1,2,3)(4,5), (1,5)^-1 or 1

Certificate blocks (knapsack --certify), one subbundle per line:
  stack <position key> | r:s..t …
  pack <class> <offset key> <length> | r:s..t@γ …
  keys are hex canonical keys, - for the identity; ranges are 0-based

Comments start with # in every file format.";

#[derive(Parser, Debug)]
#[command(name = "wreathkit", version, about = "Power words, knapsack and hardness reductions over wreath products")]
#[command(after_long_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Give up after this many milliseconds (per instance for `sweep`).
    #[arg(long, global = true, default_value_t = 60_000)]
    timeout_ms: u64,
    /// Seed for the random instance generators.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Decide by full expansion instead of the structural algorithms
    /// (powerwp, periodic, knapsack).
    #[arg(long, global = true)]
    oracle: bool,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a power word is trivial.
    Powerwp {
        /// Group; must agree with the file header when both are present.
        #[arg(long)]
        group: Option<GroupDescriptor>,
        /// Power word file.
        #[arg(long)]
        input: PathBuf,
    },
    /// Find z with u^z = v.
    Powerpp {
        #[arg(long)]
        group: Option<GroupDescriptor>,
        /// The word u.
        #[arg(long)]
        u: String,
        /// Power word file holding v.
        #[arg(long)]
        input: PathBuf,
    },
    /// Decide whether a pointwise product of periodic functions is trivial on [0, T].
    Periodic {
        #[arg(long)]
        group: Option<GroupDescriptor>,
        #[arg(long)]
        input: PathBuf,
        /// Last position checked.
        #[arg(long = "T", value_name = "T")]
        t: BigInt,
    },
    /// List the solutions of a knapsack expression inside a box.
    Knapsack {
        #[arg(long)]
        group: Option<GroupDescriptor>,
        #[arg(long)]
        input: PathBuf,
        /// Largest value tried for each variable.
        #[arg(long = "box", value_name = "B", default_value_t = 20)]
        bound: u64,
        /// Emit and re-verify a decomposition certificate per solution.
        #[arg(long)]
        certify: bool,
    },
    /// Build hardness instances.
    Reduce {
        #[command(subcommand)]
        kind: Reduction,
    },
    /// Run a seeded oracle-equivalence suite.
    Sweep {
        /// One of powerwp, periodic, knapsack, forall, qbf2.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Overrides the suite's default groups.
        #[arg(long)]
        group: Option<GroupDescriptor>,
    },
}

#[derive(Subcommand, Debug)]
enum Reduction {
    /// ∃∀ formula or program to a knapsack expression over Sym(5) ≀ ℤ.
    Qbf2 {
        #[arg(long, conflicts_with = "program", required_unless_present = "program")]
        formula: Option<PathBuf>,
        #[arg(long)]
        program: Option<PathBuf>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Universal formula or program to a power word over Sym(5) ≀ ℤ.
    Forall {
        #[arg(long, conflicts_with = "program", required_unless_present = "program")]
        formula: Option<PathBuf>,
        #[arg(long)]
        program: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Trivial,
    Nontrivial,
    Sat,
    Unsat,
    Reduced,
    Pass,
    Fail,
    Timeout,
    Error,
}

impl Verdict {
    fn name(self) -> &'static str {
        match self {
            Verdict::Trivial => "trivial",
            Verdict::Nontrivial => "nontrivial",
            Verdict::Sat => "sat",
            Verdict::Unsat => "unsat",
            Verdict::Reduced => "reduced",
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Timeout => "timeout",
            Verdict::Error => "error",
        }
    }

    fn exit_code(self) -> u8 {
        match self {
            Verdict::Trivial | Verdict::Sat | Verdict::Reduced | Verdict::Pass => 0,
            Verdict::Nontrivial | Verdict::Unsat | Verdict::Fail => 1,
            Verdict::Error => 2,
            Verdict::Timeout => 3,
        }
    }
}

/// What a command produced: the verdict, free-form text lines, and JSON fields.
struct Report {
    verdict: Verdict,
    lines: Vec<String>,
    fields: Map<String, Value>,
    warnings: Vec<String>,
}

impl Report {
    fn new(verdict: Verdict) -> Self {
        Report { verdict, lines: Vec::new(), fields: Map::new(), warnings: Vec::new() }
    }

    fn line(mut self, l: impl Into<String>) -> Self {
        self.lines.push(l.into());
        self
    }

    fn field(mut self, k: &str, v: Value) -> Self {
        self.fields.insert(k.into(), v);
        self
    }
}

/// An error with the offending file, so parse positions can be shown as line:column.
struct Failure {
    error: Error,
    source: Option<(PathBuf, String)>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, source: None }
    }
}

impl Failure {
    fn message(&self) -> String {
        match (&self.error, &self.source) {
            (Error::Parse { position, message }, Some((path, text))) => {
                let (line, col) = line_col(text, *position);
                format!("{}:{line}:{col}: {message}", path.display())
            }
            (e, Some((path, _))) => format!("{}: {e}", path.display()),
            (e, None) => e.to_string(),
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let head = &text[..offset.min(text.len())];
    let line = head.matches('\n').count() + 1;
    let col = head.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

type Outcome = Result<Report, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        error: Error::Precondition(format!("cannot read {}: {e}", path.display())),
        source: None,
    })
}

/// Reads `path` and parses it, keeping the text for error positions.
fn load<T>(path: &Path, parse: impl FnOnce(&str) -> wreathkit::Result<T>) -> Result<T, Failure> {
    let text = read(path)?;
    parse(&text).map_err(|error| Failure { error, source: Some((path.to_path_buf(), text)) })
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<Option<String>, Failure> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure {
                error: Error::Precondition(format!("cannot write {}: {e}", p.display())),
                source: None,
            })?;
            Ok(None)
        }
        None => Ok(Some(text.to_string())),
    }
}

fn valuation_json(nu: &Valuation) -> Value {
    Value::Object(nu.iter().map(|(k, v)| (k.clone(), Value::String(v.to_string()))).collect())
}

fn valuation_text(nu: &Valuation) -> String {
    nu.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn execution(common: &Common) -> Execution {
    if common.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn cmd_powerwp(common: &Common, group: Option<GroupDescriptor>, input: PathBuf) -> Outcome {
    let file = load(&input, |t| PowerWordFile::parse(t, group.as_ref()))?;
    let trivial = if common.oracle {
        naive_eval(&file.group, &file.word)?.is_identity()
    } else {
        powerwp(&file.group, &file.word)?
    };
    let verdict = if trivial { Verdict::Trivial } else { Verdict::Nontrivial };
    Ok(Report::new(verdict)
        .field("group", json!(file.group.to_string()))
        .field("factors", json!(file.word.len())))
}

fn cmd_powerpp(group: Option<GroupDescriptor>, u: String, input: PathBuf) -> Outcome {
    let file = load(&input, |t| PowerWordFile::parse(t, group.as_ref()))?;
    let u = file.group.parse_word(&u)?;
    match powerpp(&file.group, &u, &file.word)? {
        Some(z) => Ok(Report::new(Verdict::Sat)
            .line(format!("z = {z}"))
            .field("witness", json!({ "z": z.to_string() }))),
        None => Ok(Report::new(Verdict::Unsat)),
    }
}

fn cmd_periodic(common: &Common, group: Option<GroupDescriptor>, input: PathBuf, t: BigInt) -> Outcome {
    let file = load(&input, |text| PeriodicFile::parse(text, group.as_ref()))?;
    let trivial = if common.oracle {
        periodic_check_by_lcm(&file.group.structure(), &file.functions, &t)?
    } else {
        periodic_check(&file.group, &file.functions, &t)?
    };
    let verdict = if trivial { Verdict::Trivial } else { Verdict::Nontrivial };
    Ok(Report::new(verdict)
        .field("group", json!(file.group.to_string()))
        .field("functions", json!(file.functions.len())))
}

/// Every valuation in the box, checked by evaluation.
fn enumerate_box(e: &KnapsackExpression, vars: &[String], bound: u64) -> wreathkit::Result<Vec<Valuation>> {
    let mut out = Vec::new();
    let mut digits = vec![0u64; vars.len()];
    loop {
        let nu: Valuation = vars.iter().cloned().zip(digits.iter().map(|&x| BigUint::from(x))).collect();
        if evaluate(e, &nu)?.is_identity() {
            out.push(nu);
        }
        let mut i = vars.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if digits[i] < bound {
                digits[i] += 1;
                break;
            }
            digits[i] = 0;
        }
    }
}

fn cmd_knapsack(common: &Common, group: Option<GroupDescriptor>, input: PathBuf, bound: u64, certify: bool) -> Outcome {
    let file = load(&input, |t| KnapsackFile::parse(t, group.as_ref()))?;
    let e = &file.expression;
    let solutions = if common.oracle {
        enumerate_box(e, &file.vars, bound)?
    } else {
        let mut opts = BoxSearch::new(bound);
        opts.order = file.vars.clone();
        opts.execution = execution(common);
        solve_box_with(std::slice::from_ref(e), &opts)?
    };
    let mut report = Report::new(if solutions.is_empty() { Verdict::Unsat } else { Verdict::Sat });
    if let Some(w) = magnitude_bounds(std::slice::from_ref(e)).warning(bound) {
        report.warnings.push(w);
    }
    report = report.line(format!("solutions: {}", solutions.len()));
    let mut certificates = Vec::new();
    let normalized = if certify { Some(normalize_expression(e)?) } else { None };
    for nu in &solutions {
        report = report.line(valuation_text(nu));
        if let Some(n) = &normalized {
            let lifted = n.lift(nu);
            let cert = nu_decompose(&n.expression, &lifted)?;
            let text = cert.format();
            let back = DecompositionCertificate::parse(&text, &n.expression)?;
            if !verify_certificate(&n.expression, &lifted, &back)? {
                return Err(Error::Internal(format!("certificate for {} does not verify", valuation_text(nu))).into());
            }
            report = report.line("certificate verified:");
            for l in text.lines() {
                report = report.line(format!("  {l}"));
            }
            certificates.push(json!({ "valuation": valuation_json(&lifted), "certificate": text, "verified": true }));
        }
    }
    if let Some(n) = &normalized {
        report = report.field("pinned", json!(n.pinned));
        report = report.field("certificates", Value::Array(certificates));
    }
    let witness = solutions.first().map(valuation_json).unwrap_or(Value::Null);
    Ok(report
        .field("box", json!(bound))
        .field("witness", witness)
        .field("solutions", Value::Array(solutions.iter().map(valuation_json).collect())))
}

fn load_program(formula: &Option<PathBuf>, program: &Option<PathBuf>) -> Result<GProgram, Failure> {
    match (formula, program) {
        (Some(f), _) => {
            let dnf = load(f, Dnf::parse)?;
            Ok(compile_formula(&dnf)?)
        }
        (None, Some(p)) => load(p, GProgram::parse),
        (None, None) => Err(Error::Precondition("give --formula or --program".into()).into()),
    }
}

fn cmd_reduce(kind: Reduction) -> Outcome {
    match kind {
        Reduction::Qbf2 { formula, program, out } => {
            let p = load_program(&formula, &program)?;
            let e = reduce_qbf2(&p)?;
            let vars = e.variables();
            let file = KnapsackFile { expression: e, vars };
            let mut report = Report::new(Verdict::Reduced)
                .field("instructions", json!(p.len()))
                .field("powers", json!(file.vars.len()))
                .field("size", json!(file.expression.size()));
            report = match write_out(&out, &file.format())? {
                Some(text) => report.line(text.trim_end()),
                None => report.line(format!(
                    "wrote {} ({} powers, size {})",
                    out.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
                    file.vars.len(),
                    file.expression.size()
                )),
            };
            Ok(report)
        }
        Reduction::Forall { formula, program, out } => {
            let p = load_program(&formula, &program)?;
            if !p.existential.is_empty() {
                return Err(Error::Precondition("the ∀ reduction takes universal variables only".into()).into());
            }
            let word = reduce_forall_powerword(&p)?;
            let file = PowerWordFile { group: sym5_wreath_z(), word };
            let mut report = Report::new(Verdict::Reduced)
                .field("instructions", json!(p.len()))
                .field("factors", json!(file.word.len()));
            report = match write_out(&out, &file.format())? {
                Some(text) => report.line(text.trim_end()),
                None => report.line(format!(
                    "wrote {} ({} factors)",
                    out.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
                    file.word.len()
                )),
            };
            Ok(report)
        }
    }
}

fn cmd_sweep(common: &Common, suite: String, n: usize, group: Option<GroupDescriptor>) -> Outcome {
    let suite = Suite::parse(&suite).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        Error::Precondition(format!("unknown suite `{suite}`; expected one of {}", names.join(", ")))
    })?;
    let cfg = SweepConfig {
        suite,
        n,
        seed: common.seed,
        group,
        execution: execution(common),
        timeout: Some(Duration::from_millis(common.timeout_ms)),
    };
    let report = run_sweep(&cfg);
    let bad = report.mismatches() + report.errors();
    let verdict = if bad == 0 { Verdict::Pass } else { Verdict::Fail };
    let instances: Vec<Value> = report
        .instances
        .iter()
        .map(|i| {
            let (outcome, detail) = match &i.outcome {
                wreathkit::sweep::Outcome::Agree => ("agree", None),
                wreathkit::sweep::Outcome::Mismatch(m) => ("mismatch", Some(m.clone())),
                wreathkit::sweep::Outcome::Timeout => ("timeout", None),
                wreathkit::sweep::Outcome::Error(e) => ("error", Some(e.clone())),
            };
            json!({
                "index": i.index, "group": i.group, "origin": i.origin,
                "verdict": i.verdict, "outcome": outcome, "detail": detail,
            })
        })
        .collect();
    let mut out = Report::new(verdict)
        .field("suite", json!(suite.name()))
        .field("seed", json!(common.seed))
        .field("mismatches", json!(report.mismatches()))
        .field("timeouts", json!(report.timeouts()))
        .field("errors", json!(report.errors()))
        .field("instances", Value::Array(instances));
    for l in report.render().lines() {
        out = out.line(l);
    }
    Ok(out)
}

fn dispatch(common: Common, command: Command) -> Outcome {
    match command {
        Command::Powerwp { group, input } => cmd_powerwp(&common, group, input),
        Command::Powerpp { group, u, input } => cmd_powerpp(group, u, input),
        Command::Periodic { group, input, t } => cmd_periodic(&common, group, input, t),
        Command::Knapsack { group, input, bound, certify } => cmd_knapsack(&common, group, input, bound, certify),
        Command::Reduce { kind } => cmd_reduce(kind),
        Command::Sweep { suite, n, group } => cmd_sweep(&common, suite, n, group),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Powerwp { .. } => "powerwp",
        Command::Powerpp { .. } => "powerpp",
        Command::Periodic { .. } => "periodic",
        Command::Knapsack { .. } => "knapsack",
        Command::Reduce { kind: Reduction::Qbf2 { .. } } => "reduce qbf2",
        Command::Reduce { kind: Reduction::Forall { .. } } => "reduce forall",
        Command::Sweep { .. } => "sweep",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.common.clone();
    let name = command_name(&cli.command);
    let start = Instant::now();
    let is_sweep = matches!(cli.command, Command::Sweep { .. });
    let limit = (!is_sweep).then(|| Duration::from_millis(common.timeout_ms));
    let worker_common = common.clone();
    let command = cli.command;
    let result = with_timeout(limit, move || dispatch(worker_common, command).map_err(|f| f.message()));
    let elapsed = start.elapsed().as_millis() as u64;
    let report = match result {
        Some(Ok(r)) => r,
        Some(Err(message)) => {
            let mut r = Report::new(Verdict::Error).field("error", json!(message));
            r.warnings.clear();
            r.lines.push(format!("error: {message}"));
            r
        }
        None => Report::new(Verdict::Timeout).line(format!("no decision within {} ms", common.timeout_ms)),
    };
    emit(&common, name, &report, elapsed);
    ExitCode::from(report.verdict.exit_code())
}

fn emit(common: &Common, name: &str, report: &Report, elapsed: u64) {
    match common.format {
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("command".into(), json!(name));
            obj.insert("verdict".into(), json!(report.verdict.name()));
            obj.insert("witness".into(), Value::Null);
            obj.insert("timing_ms".into(), json!(elapsed));
            obj.insert("warnings".into(), json!(report.warnings));
            for (k, v) in &report.fields {
                obj.insert(k.clone(), v.clone());
            }
            println!("{}", Value::Object(obj));
        }
        Format::Text => {
            for w in &report.warnings {
                eprintln!("{w}");
            }
            if report.verdict == Verdict::Error {
                for l in &report.lines {
                    eprintln!("{l}");
                }
                return;
            }
            println!("verdict: {}", report.verdict.name());
            for l in &report.lines {
                println!("{l}");
            }
            eprintln!("time: {elapsed} ms");
        }
    }
}
