//! Command-line interface. [`run`] is the whole program minus process exit.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use testlab_core::adversaries::{random_instance, AdaptiveAdversary, Family, Profile};
use testlab_core::algorithms::{alpha_beta_sort, Algorithm, Objective};
use testlab_core::analysis::montecarlo::Accumulator;
use testlab_core::analysis::{
    audit::audit_realization, bound::minimize_f_grid, minmax::optimize_beta, AuditReport, ContributionCase, Stats,
};
use testlab_core::rng::Seed;
use testlab_core::{outcome_from_schedule, Instance, InstanceOracle, Outcome, Schedule, Settle, StaticOracle};

use crate::csvio::{self, sig12, CsvError, ResultRow, StatsRow};
use crate::verify::{run_verify, Fault, VerifyConfig, MAX_N};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Violation(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Violation(_) => EXIT_VIOLATION,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Violation(m) | CliError::Io(m) => m,
        }
    }
}

impl From<CsvError> for CliError {
    fn from(e: CsvError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "testlab", version, about = "Online scheduling with testing: simulate, sweep, optimize, verify")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one algorithm on one instance and print a results row.
    Simulate(SimulateArgs),
    /// Write a family instance as CSV.
    Family(FamilyArgs),
    /// One results row per instance size or per ratio.
    Sweep(SweepArgs),
    /// Parameter searches.
    Optimize(OptimizeArgs),
    /// Contribution audit of (α,β)-SORT schedules.
    Audit(AuditArgs),
    /// Run the verification battery.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct AlgArgs {
    /// One of ab-sort, force-testing, grr, rand-sort, makespan-det, makespan-rand, small-limit.
    #[arg(long)]
    alg: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, env = "TESTLAB_SEED")]
    seed: Option<u64>,
    /// Independent seeded runs; more than one prints statistics.
    #[arg(long, default_value_t = 1)]
    trials: usize,
}

#[derive(Debug, Args, Clone)]
struct SourceArgs {
    /// Instance CSV with columns id,u,t,p.
    #[arg(long, conflicts_with_all = ["family", "adaptive"])]
    instance: Option<PathBuf>,
    /// Family name: lb3, lb-high-alpha, lb-high-beta, lb-two-sets, small-limit-trap,
    /// grr-tight, force-test-tight, makespan-det-lb, makespan-rand-lb.
    #[arg(long, conflicts_with = "adaptive")]
    family: Option<String>,
    /// Adaptive adversary with unit tests and common upper bound.
    #[arg(long)]
    adaptive: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 1e-4)]
    eps: f64,
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    /// β of the two-sets family; defaults to --beta, then 1.
    #[arg(long)]
    family_beta: Option<f64>,
    #[arg(long)]
    big_m: Option<f64>,
    #[arg(long)]
    big_u: Option<f64>,
    /// makespan-rand-lb: use p = u instead of p = 0.
    #[arg(long)]
    high: bool,
    #[arg(long, default_value_t = 0.6)]
    delta: f64,
    #[arg(long, default_value_t = 1.61)]
    u_bar: f64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    alg: AlgArgs,
    #[command(flatten)]
    source: SourceArgs,
    /// Results CSV destination; stdout if absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Event log CSV destination.
    #[arg(long)]
    events: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    alg: AlgArgs,
    #[command(flatten)]
    source: SourceArgs,
    /// Sizes as `a:b:step` or a comma list.
    #[arg(long, conflicts_with = "r_range")]
    n_range: Option<String>,
    /// Single-job ratios `u/t` as `a:b:step` or a comma list; each row is the
    /// worse of the responses `p = 0` and `p = u`.
    #[arg(long)]
    r_range: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Beta,
    Alphabeta,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long, value_enum)]
    target: Target,
    #[arg(long, default_value_t = 1.0)]
    lo: f64,
    #[arg(long, default_value_t = 3.0)]
    hi: f64,
    /// Grid spacing for the α,β grid.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// β of the audited algorithm.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Audit this many seeded random instances instead of one source.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 30)]
    max_n: usize,
    #[arg(long, env = "TESTLAB_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FaultArg {
    ReversedSpt,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, env = "TESTLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Also write the first counterexample here.
    #[arg(long)]
    counterexample: Option<PathBuf>,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

/// Oracle that can also settle its realization afterwards.
trait SimOracle: InstanceOracle + Settle {}
impl<T: InstanceOracle + Settle> SimOracle for T {}

#[derive(Debug, Clone)]
enum Source {
    Static { instance: Instance, label: String },
    Adaptive { n: usize, delta: f64, u_bar: f64 },
}

impl Source {
    fn label(&self) -> String {
        match self {
            Source::Static { label, .. } => label.clone(),
            Source::Adaptive { n, delta, u_bar } => format!("adaptive(n={n};delta={delta};u_bar={u_bar})"),
        }
    }

    fn len(&self) -> usize {
        match self {
            Source::Static { instance, .. } => instance.len(),
            Source::Adaptive { n, .. } => *n,
        }
    }

    fn oracle(&self) -> Result<Box<dyn SimOracle>, CliError> {
        Ok(match self {
            Source::Static { instance, .. } => Box::new(StaticOracle::new(instance.clone())),
            Source::Adaptive { n, delta, u_bar } => {
                Box::new(AdaptiveAdversary::new(*n, *delta, *u_bar).map_err(|e| usage(e.to_string()))?)
            }
        })
    }
}

fn build_family(name: &str, src: &SourceArgs, alg_beta: Option<f64>, size: Option<usize>) -> Result<Family, CliError> {
    let n = size.or(src.n);
    let need_n = || n.ok_or_else(|| usage(format!("family {name} needs --n")));
    let fam = match name {
        "lb3" => Family::Lb3 { n: need_n()?, eps: src.eps },
        "lb-high-alpha" => Family::LbHighAlpha,
        "lb-high-beta" => Family::LbHighBeta { n: need_n()? },
        "lb-two-sets" => {
            let n = need_n()?;
            Family::LbTwoSets {
                n,
                m: src.m.unwrap_or(n),
                beta: src.family_beta.or(alg_beta).unwrap_or(1.0),
                eps: src.eps,
                big_m: src.big_m,
            }
        }
        "small-limit-trap" => Family::SmallLimitTrap {
            m: size.or(src.m).or(src.n).ok_or_else(|| usage("family small-limit-trap needs --m"))?,
            lambda: src.lambda,
            eps: src.eps,
        },
        "grr-tight" => Family::GrrTight { n: need_n()? },
        "force-test-tight" => Family::ForceTestTight { n: need_n()?, big_u: src.big_u },
        "makespan-det-lb" => Family::MakespanDetLb,
        "makespan-rand-lb" => Family::MakespanRandLb { high: src.high },
        other => {
            return Err(usage(format!("unknown family {other:?}; expected one of {}", Family::NAMES.join(", "))));
        }
    };
    Ok(fam)
}

fn family_label(f: &Family) -> String {
    match *f {
        Family::Lb3 { n, eps } => format!("lb3(n={n};eps={eps})"),
        Family::LbHighAlpha => "lb-high-alpha".into(),
        Family::LbHighBeta { n } => format!("lb-high-beta(n={n})"),
        Family::LbTwoSets { n, m, beta, eps, .. } => format!("lb-two-sets(n={n};m={m};beta={beta};eps={eps})"),
        Family::SmallLimitTrap { m, lambda, eps } => format!("small-limit-trap(m={m};lambda={lambda};eps={eps})"),
        Family::GrrTight { n } => format!("grr-tight(n={n})"),
        Family::ForceTestTight { n, .. } => format!("force-test-tight(n={n})"),
        Family::MakespanDetLb => "makespan-det-lb".into(),
        Family::MakespanRandLb { high } => format!("makespan-rand-lb(p={})", if high { 2 } else { 0 }),
    }
}

fn resolve_source(src: &SourceArgs, alg_beta: Option<f64>, size: Option<usize>) -> Result<Source, CliError> {
    if let Some(path) = &src.instance {
        let instance = csvio::read_instance(path)?;
        return Ok(Source::Static { instance, label: path.display().to_string() });
    }
    if src.adaptive {
        let n = size.or(src.n).ok_or_else(|| usage("--adaptive needs --n"))?;
        return Ok(Source::Adaptive { n, delta: src.delta, u_bar: src.u_bar });
    }
    let name = src.family.as_deref().ok_or_else(|| usage("give one of --instance, --family or --adaptive"))?;
    let fam = build_family(name, src, alg_beta, size)?;
    let instance = fam.build().map_err(|e| usage(e.to_string()))?;
    Ok(Source::Static { instance, label: family_label(&fam) })
}

fn algorithm(args: &AlgArgs, lambda: f64) -> Result<Algorithm, CliError> {
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let alg = Algorithm::from_name(&args.alg, args.alpha, args.beta, Some(lambda)).ok_or_else(|| {
        usage(format!("unknown algorithm {:?}; expected one of {}", args.alg, Algorithm::NAMES.join(", ")))
    })?;
    if alg.is_randomized() && args.seed.is_none() {
        return Err(usage(format!("{} is randomized: pass --seed or set TESTLAB_SEED", alg.name())));
    }
    Ok(alg)
}

struct Run {
    schedule: Schedule,
    outcome: Outcome,
}

fn run_once(alg: &Algorithm, source: &Source, seed: Seed) -> Result<Run, CliError> {
    let mut oracle = source.oracle()?;
    let io: &mut dyn InstanceOracle = oracle.as_mut();
    let schedule = alg.run(io, seed).map_err(|e| usage(format!("{}: {e}", alg.name())))?;
    let settle: &dyn Settle = oracle.as_ref();
    let outcome =
        outcome_from_schedule(&schedule, settle).map_err(|e| CliError::Violation(format!("invalid schedule: {e}")))?;
    Ok(Run { schedule, outcome })
}

/// `(alg_value, opt_value, ratio)` for the algorithm's objective.
fn values(alg: &Algorithm, out: &Outcome) -> (f64, f64, f64) {
    match alg.objective() {
        Objective::SumCompletion => (out.sum_completion, out.opt_sum, out.ratio_sum),
        Objective::Makespan => (out.makespan, out.opt_makespan, out.ratio_makespan),
    }
}

/// Mean algorithm value and mean ratio over `trials` seeded runs.
fn averaged(alg: &Algorithm, source: &Source, base: u64, trials: usize) -> Result<(ResultRow, Stats), CliError> {
    let mut value = Accumulator::new();
    let mut ratio = Accumulator::new();
    let mut opt = 0.0;
    for i in 0..trials {
        let run = run_once(alg, source, Seed::new(base, i as u64))?;
        let (a, o, r) = values(alg, &run.outcome);
        value.push(a);
        ratio.push(r);
        opt = o;
    }
    let v = value.stats().expect("trials >= 1");
    let r = ratio.stats().expect("trials >= 1");
    let row = ResultRow {
        alg: alg.name().into(),
        instance: source.label(),
        n: source.len(),
        alg_value: v.mean,
        opt_value: opt,
        ratio: r.mean,
    };
    Ok((row, r))
}

/// Writes through to `path` or appends to `out`.
fn emit(
    path: &Option<PathBuf>,
    out: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<(), CsvError>,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        }
        None => f(out)?,
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let alg = algorithm(&args.alg, args.source.lambda)?;
    let source = resolve_source(&args.source, args.alg.beta, None)?;
    let base = args.alg.seed.unwrap_or(0);
    if args.alg.trials > 1 {
        let (_, stats) = averaged(&alg, &source, base, args.alg.trials)?;
        let row = StatsRow { alg: alg.name().into(), family: source.label(), n: source.len(), stats };
        return emit(&args.output, out, |w| csvio::write_stats(w, &[row]));
    }
    let run = run_once(&alg, &source, Seed::new(base, 0))?;
    let (alg_value, opt_value, ratio) = values(&alg, &run.outcome);
    let row =
        ResultRow { alg: alg.name().into(), instance: source.label(), n: source.len(), alg_value, opt_value, ratio };
    if let Some(path) = &args.events {
        emit(&Some(path.clone()), out, |w| csvio::write_events(w, &run.schedule))?;
    }
    emit(&args.output, out, |w| csvio::write_results(w, &[row]))
}

fn cmd_family(args: &FamilyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.source.adaptive {
        return Err(usage("the adaptive adversary has no fixed instance"));
    }
    let source = resolve_source(&args.source, None, None)?;
    let Source::Static { instance, .. } = source else { unreachable!("adaptive rejected above") };
    emit(&args.output, out, |w| csvio::write_instance(w, &instance))
}

/// `a:b:step` (inclusive) or a comma list.
fn parse_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || usage(format!("bad range {spec:?}: expected a:b:step or a comma list"));
    let values: Vec<f64> = if spec.contains(':') {
        let parts: Vec<f64> =
            spec.split(':').map(|s| s.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let [a, b, step] = parts[..] else { return Err(bad()) };
        if !(step > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(bad());
        }
        let count = ((b - a) / step + 1e-9).floor();
        if count < 0.0 {
            Vec::new()
        } else {
            (0..=count as usize).map(|i| a + i as f64 * step).collect()
        }
    } else {
        spec.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?
    };
    if values.is_empty() {
        return Err(usage(format!("range {spec:?} is empty")));
    }
    Ok(values)
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let alg = algorithm(&args.alg, args.source.lambda)?;
    let base = args.alg.seed.unwrap_or(0);
    let mut rows = Vec::new();
    match (&args.n_range, &args.r_range) {
        (Some(spec), None) => {
            for v in parse_range(spec)? {
                if v < 1.0 || v.fract() != 0.0 {
                    return Err(usage(format!("size {v} is not a positive integer")));
                }
                let source = resolve_source(&args.source, args.alg.beta, Some(v as usize))?;
                rows.push(averaged(&alg, &source, base, args.alg.trials)?.0);
            }
        }
        (None, Some(spec)) => {
            for r in parse_range(spec)? {
                if !(r > 0.0) {
                    return Err(usage(format!("ratio {r} must be positive")));
                }
                let mut worst: Option<ResultRow> = None;
                for p in [0.0, r] {
                    let source = Source::Static {
                        instance: Instance::from_triples([(r, 1.0, p)]),
                        label: format!("r={}", sig12(r)),
                    };
                    let row = averaged(&alg, &source, base, args.alg.trials)?.0;
                    if worst.as_ref().is_none_or(|w| row.ratio > w.ratio) {
                        worst = Some(row);
                    }
                }
                rows.extend(worst);
            }
        }
        _ => return Err(usage("give exactly one of --n-range or --r-range")),
    }
    emit(&args.output, out, |w| csvio::write_results(w, &rows))
}

fn cmd_optimize(args: &OptimizeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(args.lo >= 1.0 && args.hi >= args.lo && args.step > 0.0) {
        return Err(usage("need 1 <= lo <= hi and step > 0"));
    }
    match args.target {
        Target::Alphabeta => {
            let m = minimize_f_grid(args.lo, args.hi, args.step);
            writeln!(out, "alpha,beta,f")?;
            writeln!(out, "{},{},{}", sig12(m.alpha), sig12(m.beta), sig12(m.value))?;
        }
        Target::Beta => {
            let r = optimize_beta(args.lo, args.hi).map_err(|e| usage(e.to_string()))?;
            writeln!(out, "beta_star,worst_ratio,r_star,r_hat,capped_region_max")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                sig12(r.beta_star),
                sig12(r.worst_ratio),
                sig12(r.r_star),
                sig12(r.r_hat),
                sig12(r.capped_region_max)
            )?;
        }
    }
    Ok(())
}

fn audit_one(source: &Source, alpha: f64, beta: f64) -> Result<AuditReport, CliError> {
    let mut oracle = source.oracle()?;
    let io: &mut dyn InstanceOracle = oracle.as_mut();
    let schedule = alpha_beta_sort(io, alpha, beta).map_err(|e| usage(e.to_string()))?;
    let real = oracle.realization();
    audit_realization(&schedule, &real, alpha, beta)
        .map_err(|e| CliError::Violation(format!("{}: audit failed: {e}", source.label())))
}

fn cmd_audit(args: &AuditArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(args.alpha >= 1.0 && args.beta >= 1.0) {
        return Err(usage("alpha and beta must be at least 1"));
    }
    let mut total = AuditReport::empty();
    match args.random {
        Some(trials) => {
            if trials == 0 || args.max_n == 0 {
                return Err(usage("--random and --max-n must be positive"));
            }
            for i in 0..trials {
                let n = 1 + i % args.max_n;
                let profile = Profile::ALL[i % Profile::ALL.len()];
                let instance = random_instance(n, 10.0, Seed::new(args.seed, i as u64), profile);
                let label = format!("random(seed={};trial={i};profile={})", args.seed, profile.name());
                total.merge(&audit_one(&Source::Static { instance, label }, args.alpha, args.beta)?);
            }
        }
        None => total = audit_one(&resolve_source(&args.source, Some(args.beta), None)?, args.alpha, args.beta)?,
    }
    writeln!(out, "case,count")?;
    for case in ContributionCase::ALL {
        writeln!(out, "{},{}", case.name(), total.case_counts[case.index()])?;
    }
    writeln!(out, "pairs,{}", total.pairs)?;
    writeln!(out, "max_factor,{}", sig12(total.max_factor))?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.max_n == 0 || args.max_n > MAX_N {
        return Err(usage(format!("--max-n must be between 1 and {MAX_N}")));
    }
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let cfg = VerifyConfig {
        max_n: args.max_n,
        trials: args.trials,
        seed: args.seed,
        fault: args.inject_fault.map(|FaultArg::ReversedSpt| Fault::ReversedSpt),
    };
    let reports = run_verify(&cfg);
    writeln!(out, "suite,checks,failures,status")?;
    for r in &reports {
        writeln!(out, "{},{},{},{}", r.name, r.checks, r.failures, if r.passed() { "pass" } else { "FAIL" })?;
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    writeln!(out, "{passed}/{} suites passed", reports.len())?;
    if let Some(cx) = reports.iter().find_map(|r| r.first.as_ref()) {
        writeln!(out, "counterexample ({}): {}", cx.suite, cx.message)?;
        csvio::write_instance(&mut *out, &cx.instance)?;
        if let Some(path) = &args.counterexample {
            write_instance_file(path, &cx.instance)?;
        }
        return Err(CliError::Violation(format!("{} of {} suites failed", reports.len() - passed, reports.len())));
    }
    Ok(())
}

fn write_instance_file(path: &Path, instance: &Instance) -> Result<(), CliError> {
    let f = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    csvio::write_instance(BufWriter::new(f), instance)?;
    Ok(())
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Family(a) => cmd_family(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Optimize(a) => cmd_optimize(a, out),
        Command::Audit(a) => cmd_audit(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "testlab: {}", e.message());
            e.code()
        }
    }
}
