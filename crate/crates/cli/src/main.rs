//! Command-line front end: validates an input description, runs the
//! b-function pipeline and the commutative oracles, and prints either a
//! transcript-style text report or a machine-readable json report.
//!
//! Exit codes: 0 success, 2 validation/parse failure, 3 range exhausted or
//! non-principal fiber, 4 timeout (partial reports are still printed).

mod input;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reesb_core::bfun::BFunction;
use reesb_core::error::Error;
use reesb_core::oracle::{solution_kernel_dim, HilbertOracle};
use reesb_core::rees::{
    self, infer_generator_degrees, k_support_from_b, validate_input, ReesInput, ValidationReport,
};
use reesb_core::RunCtl;
use report::*;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const EXIT_VALIDATION: u8 = 2;
const EXIT_MATH: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "reesb",
    version,
    about = "Rees-algebra b-functions, bigraded K-support and fiber invariants \
             for height-two perfect ideals over Q[x_1..x_d]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the theorem-class hypotheses of the input
    Validate(Job),
    /// Print the factored b-function b_p for each p in the range
    Bfunction(Job),
    /// Bigraded support of K from the roots of the b-functions
    Ksupport(Job),
    /// Special-fiber invariants (p0, reltype, reg, e, r)
    Fiber(Job),
    /// Cross-check grid of the two commutative oracles
    Oracle(Job),
    /// Full pipeline: validation, b-functions, support, fiber, oracles
    Report(Job),
}

impl Command {
    fn job(&self) -> &Job {
        match self {
            Command::Validate(j)
            | Command::Bfunction(j)
            | Command::Ksupport(j)
            | Command::Fiber(j)
            | Command::Oracle(j)
            | Command::Report(j) => j,
        }
    }
}

#[derive(Args)]
struct Job {
    /// Input description file (vars/tvars + matrix: or gens:)
    input: PathBuf,

    /// Inclusive T-degree range, e.g. `3..7` or `5`
    #[arg(long = "p", value_name = "RANGE")]
    p: Option<String>,

    /// Inclusive x-degree range for oracle grids, e.g. `0..1`
    #[arg(long = "u", value_name = "RANGE")]
    u: Option<String>,

    /// Inclusive root search interval, e.g. `-3..0`
    #[arg(long = "root-range", value_name = "RANGE", allow_hyphen_values = true)]
    root_range: Option<String>,

    /// Worker threads for the parallel stages
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Per-p (and per-stage) timeout in seconds
    #[arg(long, value_name = "SECS", default_value_t = 300)]
    timeout: u64,

    /// Keep going past a failed validation, for diagnostics
    #[arg(long)]
    force: bool,

    /// Which oracles the oracle/report commands run
    #[arg(long, value_enum, default_value_t = OracleMode::Both)]
    oracle: OracleMode,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleMode {
    Hilbert,
    Kernel,
    Both,
    None,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let s = s.trim();
    let parts: Vec<&str> = if let Some((a, b)) = s.split_once("..=") {
        vec![a, b]
    } else if let Some((a, b)) = s.split_once("..") {
        vec![a, b]
    } else {
        vec![s]
    };
    let nums: Vec<i64> = parts
        .iter()
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    let (lo, hi) = match nums.as_slice() {
        [v] => (*v, *v),
        [a, b] => (*a, *b),
        _ => return Err("expected `lo..hi` or a single integer".into()),
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    // `reesb FILE` is shorthand for `reesb report FILE`
    let mut argv: Vec<std::ffi::OsString> = std::env::args_os().collect();
    if argv.len() >= 2 {
        let first = argv[1].to_string_lossy().to_string();
        let known = [
            "validate",
            "bfunction",
            "ksupport",
            "fiber",
            "oracle",
            "report",
            "help",
            "-h",
            "--help",
            "-V",
            "--version",
        ];
        if !known.contains(&first.as_str()) && PathBuf::from(&first).exists() {
            argv.insert(1, "report".into());
        }
    }
    let cli = Cli::parse_from(argv);
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}

struct Ctx<'a> {
    job: &'a Job,
    input: ReesInput,
    validation: ValidationReport,
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let job = cli.command.job();
    if let Some(jobs) = job.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let text = std::fs::read_to_string(&job.input)
        .map_err(|e| format!("cannot read {}: {e}", job.input.display()))?;
    let input = input::parse_input_file(&text).map_err(|e| e.to_string())?;
    let validation = validate_input(&input).map_err(|e| e.to_string())?;

    let ctx = Ctx {
        job,
        input,
        validation,
    };

    let needs_valid = !matches!(cli.command, Command::Validate(_));
    if needs_valid && !ctx.validation.all_pass() && !job.force {
        let rep = Report {
            validation: Some(validation_json(&ctx.validation)),
            ..Report::default()
        };
        emit(&rep, job, false);
        eprintln!("error: validation failed (use --force to proceed anyway)");
        return Ok(ExitCode::from(EXIT_VALIDATION));
    }

    match &cli.command {
        Command::Validate(_) => {
            let rep = Report {
                validation: Some(validation_json(&ctx.validation)),
                ..Report::default()
            };
            emit(&rep, job, false);
            Ok(if ctx.validation.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VALIDATION)
            })
        }
        Command::Bfunction(_) => {
            let mut rep = Report::default();
            let code = stage_bfunctions(&ctx, &mut rep)?;
            emit(&rep, job, true);
            Ok(code)
        }
        Command::Ksupport(_) => {
            let mut rep = Report::default();
            let code = stage_bfunctions(&ctx, &mut rep)?;
            fill_ksupport(&ctx, &mut rep, &BTreeMap::new())?;
            rep.bfunctions = None;
            emit(&rep, job, false);
            Ok(code)
        }
        Command::Fiber(_) => {
            let mut rep = Report::default();
            let code = stage_fiber(&ctx, &mut rep);
            emit(&rep, job, false);
            code
        }
        Command::Oracle(_) => {
            let mut rep = Report::default();
            let code = stage_oracle(&ctx, &mut rep, None, &BTreeMap::new())?;
            emit(&rep, job, false);
            Ok(code)
        }
        Command::Report(_) => {
            let mut rep = Report {
                validation: Some(validation_json(&ctx.validation)),
                ..Report::default()
            };
            let mut worst = 0u8;
            let bump = |worst: &mut u8, c: u8| {
                if c > *worst {
                    *worst = c;
                }
            };
            bump(&mut worst, code_of(stage_bfunctions(&ctx, &mut rep)?));
            fill_heuristic(&ctx, &mut rep);
            let known_bs: BTreeMap<i64, BFunction> = rep
                .bfunctions
                .iter()
                .flatten()
                .map(|b| (b.p, BFunction::from_integer_roots(&b.roots)))
                .collect();
            let hilbert = if matches!(ctx.job.oracle, OracleMode::Hilbert | OracleMode::Both) {
                let ctl = deadline_ctl(ctx.job);
                let t0 = Instant::now();
                match HilbertOracle::new(&ctx.input, &ctl) {
                    Ok(h) => {
                        rep.timings
                            .insert("hilbert_oracle".into(), t0.elapsed().as_secs_f64());
                        Some(h)
                    }
                    Err(Error::Timeout { stage }) => {
                        rep.timeouts.push(format!("hilbert oracle ({stage})"));
                        bump(&mut worst, EXIT_TIMEOUT);
                        None
                    }
                    Err(e) => return Err(e.to_string()),
                }
            } else {
                None
            };
            let dims = match &hilbert {
                Some(h) => {
                    let (ps, us) = oracle_grid(&ctx)?;
                    let mut dims = BTreeMap::new();
                    for &p in &ps {
                        for &u in &us {
                            dims.insert((p, u), h.k_dim(p, u));
                        }
                    }
                    dims
                }
                None => BTreeMap::new(),
            };
            fill_ksupport(&ctx, &mut rep, &dims)?;
            match stage_fiber(&ctx, &mut rep) {
                Ok(c) => bump(&mut worst, code_of(c)),
                Err(e) => rep.errors.push(e),
            }
            bump(
                &mut worst,
                code_of(stage_oracle(&ctx, &mut rep, hilbert.as_ref(), &known_bs)?),
            );
            if !ctx.validation.all_pass() {
                bump(&mut worst, EXIT_VALIDATION);
            }
            emit(&rep, job, false);
            Ok(ExitCode::from(worst))
        }
    }
}

fn code_of(c: ExitCode) -> u8 {
    // ExitCode has no accessor; track the codes we construct
    if c == ExitCode::SUCCESS {
        0
    } else if c == ExitCode::from(EXIT_VALIDATION) {
        EXIT_VALIDATION
    } else if c == ExitCode::from(EXIT_MATH) {
        EXIT_MATH
    } else if c == ExitCode::from(EXIT_TIMEOUT) {
        EXIT_TIMEOUT
    } else {
        1
    }
}

fn validation_json(v: &ValidationReport) -> ValidationJson {
    ValidationJson {
        pass: v.all_pass(),
        checks: v
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.name.clone(),
                pass: c.pass,
                detail: c.detail.clone(),
            })
            .collect(),
    }
}

fn p_range(ctx: &Ctx) -> Result<(i64, i64), String> {
    match &ctx.job.p {
        Some(s) => parse_range(s),
        None => ctx.input.default_p_range().map_err(|e| e.to_string()),
    }
}

fn root_range(ctx: &Ctx) -> Result<Option<(i64, i64)>, String> {
    ctx.job.root_range.as_deref().map(parse_range).transpose()
}

fn deadline_ctl(job: &Job) -> RunCtl {
    RunCtl::with_deadline(Instant::now() + Duration::from_secs(job.timeout))
}

/// Compute b_p over the p-range in parallel; record timeouts and range
/// failures without aborting other p values.
fn stage_bfunctions(ctx: &Ctx, rep: &mut Report) -> Result<ExitCode, String> {
    use rayon::prelude::*;
    let (plo, phi) = p_range(ctx)?;
    let d = ctx.input.d() as i64;
    let plo = plo.max(d);
    let rr = root_range(ctx)?;
    let t0 = Instant::now();
    let ps: Vec<i64> = (plo..=phi).collect();
    let results: Vec<(i64, Result<BFunction, Error>)> = ps
        .par_iter()
        .map(|&p| {
            let ctl = deadline_ctl(ctx.job);
            (p, rees::b_p(&ctx.input, p, rr, &ctl))
        })
        .collect();
    rep.timings
        .insert("bfunctions".into(), t0.elapsed().as_secs_f64());
    let mut out = Vec::new();
    let mut saw_timeout = false;
    let mut saw_math = false;
    for (p, res) in results {
        match res {
            Ok(b) => out.push(BFunctionJson {
                p,
                roots: b.integer_roots(),
                factored: b.to_string(),
            }),
            Err(Error::Timeout { stage }) => {
                saw_timeout = true;
                rep.timeouts.push(format!("b_p at p = {p} ({stage})"));
            }
            Err(e) => {
                saw_math = true;
                rep.errors.push(format!("b_p at p = {p}: {e}"));
            }
        }
    }
    rep.bfunctions = Some(out);
    Ok(if saw_timeout {
        ExitCode::from(EXIT_TIMEOUT)
    } else if saw_math {
        ExitCode::from(EXIT_MATH)
    } else {
        ExitCode::SUCCESS
    })
}

fn fill_ksupport(
    ctx: &Ctx,
    rep: &mut Report,
    dims: &BTreeMap<(i64, i64), usize>,
) -> Result<(), String> {
    let Some(bs) = &rep.bfunctions else {
        return Ok(());
    };
    let nu = ctx.input.nu().map_err(|e| e.to_string())?;
    let d = ctx.input.d();
    let mut cells = Vec::new();
    for b in bs {
        let bf = BFunction::from_integer_roots(&b.roots);
        for (p, u) in k_support_from_b(&bf, b.p, nu, d) {
            cells.push(KSupportJson {
                p,
                u,
                dim: dims.get(&(p, u)).copied(),
            });
        }
    }
    cells.sort_by_key(|c| (c.p, c.u));
    rep.ksupport = Some(cells);
    Ok(())
}

/// Heuristic generator degrees from the consecutive prefix p = d, d+1, ...
fn fill_heuristic(ctx: &Ctx, rep: &mut Report) {
    let d = ctx.input.d();
    let Ok(nu) = ctx.input.nu() else { return };
    let Some(bs) = &rep.bfunctions else { return };
    let mut seq: Vec<(i64, BFunction)> = Vec::new();
    for b in bs {
        if b.p == d as i64 + seq.len() as i64 {
            seq.push((b.p, BFunction::from_integer_roots(&b.roots)));
        }
    }
    if seq.is_empty() {
        return;
    }
    if let Ok((degs, lb)) = infer_generator_degrees(&seq, nu, d) {
        rep.heuristic_generators = Some(HeuristicJson {
            degrees: degs.iter().map(|bd| (bd.p, bd.q)).collect(),
            reltype_lower_bound: lb,
            note: "HEURISTIC: observed drops of the minimal supported x-degree; \
                   not a certified generator list"
                .into(),
        });
    }
}

fn stage_fiber(ctx: &Ctx, rep: &mut Report) -> Result<ExitCode, String> {
    let t0 = Instant::now();
    let ctl = deadline_ctl(ctx.job);
    match rees::fiber_invariants(&ctx.input, &ctl) {
        Ok(f) => {
            rep.timings
                .insert("fiber".into(), t0.elapsed().as_secs_f64());
            rep.fiber = Some(FiberJson {
                p0: f.p0,
                reltype: f.reltype,
                reg: f.reg,
                e: f.multiplicity,
                r: f.reduction_number,
                equation: f.fiber_equation.to_string(),
            });
            Ok(ExitCode::SUCCESS)
        }
        Err(Error::Timeout { stage }) => {
            rep.timeouts.push(format!("fiber ({stage})"));
            Ok(ExitCode::from(EXIT_TIMEOUT))
        }
        Err(e @ Error::NotPrincipal(_)) => {
            rep.errors.push(e.to_string());
            Ok(ExitCode::from(EXIT_MATH))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn oracle_grid(ctx: &Ctx) -> Result<(Vec<i64>, Vec<i64>), String> {
    let d = ctx.input.d() as i64;
    let nu = ctx.input.nu().map_err(|e| e.to_string())? as i64;
    let (plo, phi) = match &ctx.job.p {
        Some(s) => parse_range(s)?,
        None => (d, d + 3),
    };
    let (ulo, uhi) = match &ctx.job.u {
        Some(s) => parse_range(s)?,
        None => (0, nu - d),
    };
    Ok(((plo..=phi).collect(), (ulo..=uhi).collect()))
}

fn stage_oracle(
    ctx: &Ctx,
    rep: &mut Report,
    prior_hilbert: Option<&HilbertOracle>,
    prior_bs: &BTreeMap<i64, BFunction>,
) -> Result<ExitCode, String> {
    if matches!(ctx.job.oracle, OracleMode::None) {
        return Ok(ExitCode::SUCCESS);
    }
    let (ps, us) = oracle_grid(ctx)?;
    let rr = root_range(ctx)?;
    let run_hilbert = matches!(ctx.job.oracle, OracleMode::Hilbert | OracleMode::Both);
    let run_kernel = matches!(ctx.job.oracle, OracleMode::Kernel | OracleMode::Both);

    let mut timed_out = false;

    let t0 = Instant::now();
    let local_hilbert: Option<HilbertOracle> = if run_hilbert && prior_hilbert.is_none() {
        let ctl = deadline_ctl(ctx.job);
        match HilbertOracle::new(&ctx.input, &ctl) {
            Ok(h) => Some(h),
            Err(Error::Timeout { stage }) => {
                rep.timeouts.push(format!("hilbert oracle ({stage})"));
                timed_out = true;
                None
            }
            Err(e) => return Err(e.to_string()),
        }
    } else {
        None
    };
    let hilbert: Option<&HilbertOracle> = if run_hilbert {
        prior_hilbert.or(local_hilbert.as_ref())
    } else {
        None
    };

    // support column from b_p roots
    let mut support: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    let nu = ctx.input.nu().map_err(|e| e.to_string())?;
    let d = ctx.input.d();
    for &p in &ps {
        if p < d as i64 {
            support.insert(p, Vec::new());
            continue;
        }
        let b = match prior_bs.get(&p) {
            Some(b) => Some(b.clone()),
            None => {
                let ctl = deadline_ctl(ctx.job);
                match rees::b_p(&ctx.input, p, rr, &ctl) {
                    Ok(b) => Some(b),
                    Err(Error::Timeout { stage }) => {
                        rep.timeouts.push(format!("b_p at p = {p} ({stage})"));
                        timed_out = true;
                        None
                    }
                    Err(e) => {
                        rep.errors.push(format!("b_p at p = {p}: {e}"));
                        None
                    }
                }
            }
        };
        if let Some(b) = b {
            let sup_us: Vec<i64> = k_support_from_b(&b, p, nu, d)
                .into_iter()
                .map(|(_, u)| u)
                .collect();
            support.insert(p, sup_us);
        }
    }

    let mut cells = Vec::new();
    for &p in &ps {
        for &u in &us {
            let hdim = hilbert.map(|h| h.k_dim(p, u));
            let kdim = if run_kernel {
                match solution_kernel_dim(&ctx.input, p, u) {
                    Ok(v) => Some(v),
                    Err(e) => {
                        rep.errors.push(format!("kernel oracle at ({p},{u}): {e}"));
                        None
                    }
                }
            } else {
                None
            };
            let sup = support.get(&p).map(|v| v.contains(&u));
            cells.push(OracleCellJson {
                p,
                u,
                hilbert: hdim,
                kernel: kdim,
                support_from_b: sup,
            });
        }
    }
    rep.timings
        .insert("oracle_grid".into(), t0.elapsed().as_secs_f64());
    rep.oracle = Some(cells);

    Ok(if timed_out {
        ExitCode::from(EXIT_TIMEOUT)
    } else {
        ExitCode::SUCCESS
    })
}

fn emit(rep: &Report, job: &Job, bare_bfunctions: bool) {
    match job.format {
        Format::Json => print!("{}", rep.to_json()),
        Format::Text => print!("{}", rep.to_text(bare_bfunctions)),
    }
}
