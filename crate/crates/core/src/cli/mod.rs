//! The `chaoprop` command line.
//!
//! Exit statuses: 0 converged (or stopped early on an empty component),
//! 1 bad input or configuration, 2 step limit reached, 3 the result is not
//! equivalent to the input (`--check-equivalence`).

pub mod json;
pub mod plan;
pub mod text;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::consistency::{achieve_with, Goal};
use crate::csp::Csp;
use crate::engine::{self, Outcome, RunConfig, RunStep, RunTrace, StrategyKind, DEFAULT_MAX_STEPS};
use crate::error::{Error, Result};
use crate::fixtures::{self, Omega};
use crate::layout::Layout;
use crate::lattice::ProductValue;

pub use plan::ReducerSpec;
pub use text::{fmt_value, parse_csp, to_text};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_STEP_LIMIT: i32 = 2;
pub const EXIT_NOT_EQUIVALENT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "chaoprop", version, about = "Constraint propagation by chaotic iteration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a CSP with a consistency goal or an explicit reducer list.
    Run(RunArgs),
    /// Check a CSP file for well-formedness.
    Validate { file: PathBuf },
    /// Enumerate the solutions of a CSP by brute force.
    Solutions {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the three functions on the naturals extended with ω.
    Omega(OmegaArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Schedule {
    /// ci, cii, ciq or ciiq.
    #[arg(long, default_value = "ci")]
    mode: String,
    /// det, seeded, lifo, roundrobin or block.
    #[arg(long, default_value = "det")]
    strategy: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write one line per function application to stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("what").required(true).args(["goal", "reducers"])))]
struct RunArgs {
    file: PathBuf,
    /// arc, path, dir-arc:<order>, dir-path:<order> or rel:<m>.
    #[arg(long)]
    goal: Option<String>,
    /// Reducer names, whitespace-separated; may be repeated.
    #[arg(long)]
    reducers: Vec<String>,
    #[command(flatten)]
    schedule: Schedule,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,
    /// Stop as soon as some component becomes empty.
    #[arg(long)]
    early_exit: bool,
    /// Append the new values of changed components to trace lines.
    #[arg(long)]
    trace_values: bool,
    /// Compare solution sets of input and result by enumeration.
    #[arg(long)]
    check_equivalence: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the reduced CSP here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OmegaArgs {
    /// Register the jump to ω first.
    #[arg(long)]
    with_f3: bool,
    #[command(flatten)]
    schedule: Schedule,
    #[arg(long, default_value_t = 1000)]
    max_steps: usize,
}

/// Runs the command line with explicit streams; returns the exit status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(&a, out, err),
        Command::Validate { file } => cmd_validate(&file, out, err),
        Command::Solutions { file, format } => cmd_solutions(&file, format, out, err),
        Command::Omega(a) => cmd_omega(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Resource(e.to_string())
}

fn read_csp(path: &Path) -> Result<Csp> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Resource(format!("{}: {e}", path.display())))?;
    parse_csp(&src)
}

/// Reads and validates; every issue is reported before failing.
fn load(path: &Path, err: &mut dyn Write) -> Result<Option<Csp>> {
    let p = read_csp(path)?;
    let issues = p.issues();
    for i in &issues {
        writeln!(err, "error: {i}").map_err(io_err)?;
    }
    Ok(issues.is_empty().then_some(p))
}

/// `step=<n> fn=<id> changed=<0|1> comps=<i,j,...>` with 1-based components.
pub fn trace_line<V>(s: &RunStep<V>, show: impl Fn(&V) -> String) -> String {
    let comps: Vec<String> = s.components.iter().map(|i| (i + 1).to_string()).collect();
    let mut line = format!("step={} fn={} changed={} comps={}", s.step, s.id, u8::from(s.changed), comps.join(","));
    if let Some(vs) = &s.values {
        let vs: Vec<String> = vs.iter().map(show).collect();
        line.push_str(&format!(" values={}", vs.join(" | ")));
    }
    line
}

fn outcome_line<V>(t: &RunTrace<V>) -> String {
    let o = match t.outcome {
        Outcome::Converged => "converged".to_string(),
        Outcome::StepLimitExceeded => "step-limit".to_string(),
        Outcome::EmptyComponent(i) => format!("empty-component:{}", i + 1),
    };
    format!("outcome={o} applications={}", t.applications())
}

fn schedule(s: &Schedule) -> Result<(engine::Mode, Box<dyn engine::Strategy>)> {
    Ok((s.mode.parse()?, StrategyKind::parse(&s.strategy, s.seed)?.build()))
}

fn cmd_run(a: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let Some(p) = load(&a.file, err)? else {
        return Ok(EXIT_INPUT);
    };
    let (mode, mut strategy) = schedule(&a.schedule)?;
    let cfg = RunConfig { mode, max_steps: a.max_steps, early_exit: a.early_exit, record_values: a.trace_values };
    let (csp, trace) = match &a.goal {
        Some(g) => {
            let goal: Goal = g.parse()?;
            let r = achieve_with(&p, &goal, &cfg, strategy.as_mut())?;
            (r.csp, r.trace)
        }
        None => {
            let specs = a
                .reducers
                .iter()
                .flat_map(|r| r.split_whitespace())
                .map(str::parse)
                .collect::<Result<Vec<ReducerSpec>>>()?;
            if specs.is_empty() {
                return Err(Error::Argument("no reducers given".into()));
            }
            let (q, fs) = plan::build(&p, &specs)?;
            let layout = Layout::new(&q);
            let r = engine::run(&fs, layout.encode(&q), &cfg, strategy.as_mut())?;
            (layout.decode(&q, &r.value)?, r.trace)
        }
    };
    if a.schedule.trace || a.trace_values {
        for s in &trace.steps {
            writeln!(err, "{}", trace_line(s, fmt_value)).map_err(io_err)?;
        }
    }
    let rendered = match a.format {
        Format::Text => to_text(&csp),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&json::csp_json(&csp)).expect("serializable")),
    };
    match &a.output {
        Some(path) => std::fs::write(path, rendered).map_err(|e| Error::Resource(format!("{}: {e}", path.display())))?,
        None => out.write_all(rendered.as_bytes()).map_err(io_err)?,
    }
    writeln!(err, "{}", outcome_line(&trace)).map_err(io_err)?;
    if a.check_equivalence {
        let same = p.equivalent(&csp)?;
        writeln!(err, "equivalence: {}", if same { "PASS" } else { "FAIL" }).map_err(io_err)?;
        if !same {
            return Ok(EXIT_NOT_EQUIVALENT);
        }
    }
    Ok(match trace.outcome {
        Outcome::StepLimitExceeded => EXIT_STEP_LIMIT,
        _ => EXIT_OK,
    })
}

fn cmd_validate(file: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match read_csp(file) {
        Err(e @ Error::Parse { .. }) => {
            writeln!(err, "error: {e}").map_err(io_err)?;
            Ok(EXIT_INPUT)
        }
        Err(e) => Err(e),
        Ok(p) => {
            let issues = p.issues();
            for i in &issues {
                writeln!(err, "error: {i}").map_err(io_err)?;
            }
            if issues.is_empty() {
                writeln!(out, "ok: {} domains, {} constraints", p.arity(), p.constraints.len()).map_err(io_err)?;
                Ok(EXIT_OK)
            } else {
                Ok(EXIT_INPUT)
            }
        }
    }
}

fn cmd_solutions(file: &Path, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let Some(p) = load(file, err)? else {
        return Ok(EXIT_INPUT);
    };
    let sols = p.solutions()?;
    let rendered = match format {
        Format::Text => sols
            .iter()
            .map(|t| format!("({})\n", t.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
            .collect::<String>(),
        Format::Json => format!("{}\n", json::tuples_json(&sols)),
    };
    out.write_all(rendered.as_bytes()).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_omega(a: &OmegaArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (mode, mut strategy) = schedule(&a.schedule)?;
    let mut fs = Vec::new();
    if a.with_f3 {
        fs.push(fixtures::f3());
    }
    fs.extend([fixtures::f1(), fixtures::f2()]);
    let cfg = RunConfig { mode, max_steps: a.max_steps, ..RunConfig::default() };
    let r = engine::run(&fs, ProductValue(vec![Omega::Nat(0)]), &cfg, strategy.as_mut())?;
    if a.schedule.trace {
        for s in &r.trace.steps {
            writeln!(err, "{}", trace_line(s, |v: &Omega| v.to_string())).map_err(io_err)?;
        }
    }
    writeln!(out, "value={}", r.value[0]).map_err(io_err)?;
    writeln!(err, "{}", outcome_line(&r.trace)).map_err(io_err)?;
    Ok(if r.converged() { EXIT_OK } else { EXIT_STEP_LIMIT })
}

