//! Command-line front end: argument parsing, dispatch, reports and replay.

use std::ffi::OsString;
use std::path::Path;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilseq_core::numeric::PrecisionPolicy;
use nilseq_core::{Error, Result};

pub mod certificate;
mod cmd;
pub mod inputs;
pub mod report;

pub use certificate::{Certificate, PredicateDef};
pub use report::{Output, RealRepr, Report, Series};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_MAX_BITS: u32 = 4096;
pub const MAX_BITS_ENV: &str = "NILSEQ_MAX_BITS";

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECISION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "nilseq",
    version,
    about = "Automatic sequences, generalised polynomials and nilmanifold orbits"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Precision ceiling in bits (overrides NILSEQ_MAX_BITS).
    #[arg(long, global = true)]
    max_bits: Option<u32>,
    /// Worker threads; 0 uses every core. Reports do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate and transform automata.
    #[command(subcommand)]
    Automaton(cmd::automaton::AutomatonCmd),
    /// Structure of sparse automatic sets.
    #[command(subcommand)]
    Sparsity(cmd::sparsity::SparsityCmd),
    /// Generalised polynomials.
    #[command(subcommand)]
    Gp(cmd::gp::GpCmd),
    /// The set `‖nα‖ < 1/(2n)` against the recurrence terms.
    Fib(cmd::recurrence::FibArgs),
    /// Cubic Pisot recurrences and their best approximations.
    #[command(subcommand)]
    Pisot(cmd::recurrence::PisotCmd),
    /// Finite sums and IP-type containment.
    #[command(subcommand)]
    Ip(cmd::ip::IpCmd),
    /// Skew products and Heisenberg orbits.
    #[command(subcommand)]
    Orbit(cmd::orbit::OrbitCmd),
    /// Scripted end-to-end scenarios.
    Demo(cmd::demo::DemoArgs),
    /// Replay every certificate of a report without searching.
    Verify {
        #[arg(long)]
        report: std::path::PathBuf,
    },
}

/// Everything a run depends on.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Vec<String>,
    pub policy: PrecisionPolicy,
    pub seed: u64,
    pub format: Format,
    pub workers: usize,
    pub timing: bool,
}

/// Process environment consulted by [`run`].
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub max_bits: Option<String>,
}

impl Env {
    pub fn from_process() -> Self {
        Env {
            max_bits: std::env::var(MAX_BITS_ENV).ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Per-run state handed to subcommands.
pub struct Ctx {
    pub policy: PrecisionPolicy,
    pub seed: u64,
    files: Vec<(String, Vec<u8>)>,
}

impl Ctx {
    pub fn new(policy: PrecisionPolicy, seed: u64) -> Self {
        Ctx {
            policy,
            seed,
            files: Vec::new(),
        }
    }

    /// Reads a text input and records it for the inputs digest.
    pub fn read_file(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        let text =
            String::from_utf8(bytes.clone()).map_err(|_| Error::Invalid(format!("{} is not UTF-8", path.display())))?;
        self.record(path, bytes);
        Ok(text)
    }

    pub fn record(&mut self, path: &Path, bytes: Vec<u8>) {
        self.files.push((path.display().to_string(), bytes));
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted { .. } => EXIT_PRECISION,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

/// The echoed command: arguments minus the program name and the options
/// that cannot change results.
fn echo(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--workers" {
            skip = true;
            continue;
        }
        if a.starts_with("--workers=") || a == "--timing" {
            continue;
        }
        out.push(a.clone());
    }
    out
}

fn resolve_max_bits(flag: Option<u32>, env: &Env) -> Result<u32> {
    let bits = match (flag, &env.max_bits) {
        (Some(b), _) => b,
        (None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("{MAX_BITS_ENV}=`{s}` is not a bit count")))?,
        (None, None) => DEFAULT_MAX_BITS,
    };
    if bits < 8 {
        return Err(Error::invalid("the precision ceiling must be at least 8 bits"));
    }
    Ok(bits)
}

fn fail(e: &Error) -> Outcome {
    Outcome {
        code: exit_code(e),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

/// Parses `argv` (program name first), runs the subcommand and renders
/// the report.
pub fn run<I, T>(argv: I, env: &Env) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<String> = argv
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let max_bits = match resolve_max_bits(cli.global.max_bits, env) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let config = RunConfig {
        command: echo(&args),
        policy: PrecisionPolicy::with_max_bits(max_bits),
        seed: cli.global.seed,
        format: cli.global.format,
        workers: cli.global.workers,
        timing: cli.global.timing,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.workers).build() {
        Ok(p) => p,
        Err(e) => return fail(&Error::Invalid(format!("cannot start workers: {e}"))),
    };
    let started = Instant::now();
    let mut ctx = Ctx::new(config.policy, config.seed);
    let result = pool.install(|| dispatch(&cli.command, &mut ctx));
    let out = match result {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    match render(&config, &ctx, out, started) {
        Ok(o) => o,
        Err(e) => fail(&e),
    }
}

fn dispatch(command: &Command, ctx: &mut Ctx) -> Result<Output> {
    match command {
        Command::Automaton(c) => cmd::automaton::run(c, ctx),
        Command::Sparsity(c) => cmd::sparsity::run(c, ctx),
        Command::Gp(c) => cmd::gp::run(c, ctx),
        Command::Fib(a) => cmd::recurrence::run_fib(a, ctx),
        Command::Pisot(c) => cmd::recurrence::run_pisot(c, ctx),
        Command::Ip(c) => cmd::ip::run(c, ctx),
        Command::Orbit(c) => cmd::orbit::run(c, ctx),
        Command::Demo(a) => cmd::demo::run(a, ctx),
        Command::Verify { report } => cmd::verify::run(report, ctx),
    }
}

fn render(config: &RunConfig, ctx: &Ctx, out: Output, started: Instant) -> Result<Outcome> {
    let code = if out.failed { EXIT_USAGE } else { EXIT_OK };
    if config.format == Format::Csv {
        let series = out
            .series
            .ok_or_else(|| Error::invalid("csv output is only available for series commands"))?;
        return Ok(Outcome {
            code,
            stdout: series.to_csv()?,
            stderr: String::new(),
        });
    }
    let report = Report {
        inputs_digest: report::digest(&config.command, &ctx.files),
        command: config.command.clone(),
        version: VERSION.to_string(),
        precision: config.policy,
        seed: config.seed,
        results: out.results,
        certificates: out.certificates,
        timing_ms: config.timing.then(|| started.elapsed().as_millis() as u64),
    };
    let mut text =
        serde_json::to_string_pretty(&report).map_err(|e| Error::Invalid(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(Outcome {
        code,
        stdout: text,
        stderr: if out.failed {
            "error: some certificates failed to verify\n".into()
        } else {
            String::new()
        },
    })
}
