use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use hitchin_core::batch::{sweep, verify, VerifyConfig};
use hitchin_core::classifier::{branches, classify_with_weights, FiberReport};
use hitchin_core::exact::rational_to_json;
use hitchin_core::numerics::DEFAULT_ROOT_TOL;
use hitchin_core::oracle::DEFAULT_T_TOL;
use hitchin_core::{validate, CaseTag, Error, ParabolicWeights, PolarData};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hitchin", version, about = "Singular fibers of rank-2 irregular Hitchin fibrations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one parameter set.
    Classify(ClassifyArgs),
    /// Compare classifier and oracle on random elliptic samples.
    Verify(VerifyArgs),
    /// Classify random points of every decision-branch stratum both ways.
    Sweep(SweepArgs),
    /// Follow the fiber classes as the extended weight crosses walls.
    Wallcross(WallcrossArgs),
}

#[derive(Args)]
struct Common {
    /// Root clustering tolerance, in (0, 1).
    #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
    tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Parameter file, or inline JSON.
    #[arg(long)]
    params: String,
    /// Expected case; must match the file.
    #[arg(long)]
    case: Option<CaseTag>,
    /// Weights file, or inline JSON.
    #[arg(long)]
    weights: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    case: CaseTag,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    /// Restrict to one branch, e.g. `d22-ss/2i2`.
    #[arg(long)]
    branch: Option<String>,
    /// Restrict to the branches of one case.
    #[arg(long)]
    case: Option<CaseTag>,
    /// Samples per branch.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct WallcrossArgs {
    #[arg(long)]
    params: String,
    #[arg(long)]
    weights: String,
    /// Start of the extended `α₊` range, e.g. `-1/2`.
    #[arg(long, allow_hyphen_values = true)]
    from: String,
    #[arg(long, allow_hyphen_values = true)]
    to: String,
    #[arg(long, default_value = "1/4")]
    step: String,
    #[command(flatten)]
    common: Common,
}

/// Failure with its exit code and the JSON document to report.
struct Failure {
    code: u8,
    report: Value,
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::NotElliptic(_)) => 3,
        Some(
            Error::Schema(_)
            | Error::ResidueViolation { .. }
            | Error::InvalidWeights(_)
            | Error::ToleranceOutOfRange(_),
        ) => 2,
        Some(_) => 1,
        None if e.downcast_ref::<serde_json::Error>().is_some() => 2,
        None if e.downcast_ref::<SchemaError>().is_some() => 2,
        None => 1,
    }
}

#[derive(Debug)]
struct SchemaError(String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SchemaError {}

fn error_report(e: &anyhow::Error) -> Value {
    let mut v = json!({ "error": format!("{e:#}") });
    if let Some(Error::NotElliptic(reason)) = e.downcast_ref::<Error>() {
        v["reason"] = json!(reason.code());
    }
    v
}

/// Reads a file, or takes the argument itself as JSON when it starts with `{`.
fn read_json(arg: &str) -> anyhow::Result<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    Ok(serde_json::from_str(&text)?)
}

fn check_tol(tol: f64) -> anyhow::Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::ToleranceOutOfRange(tol).into())
    }
}

fn parse_rational(s: &str) -> anyhow::Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| SchemaError(format!("not a rational: {s:?}")).into())
}

fn load_params(arg: &str, case: Option<CaseTag>) -> anyhow::Result<PolarData> {
    let d = PolarData::from_json(&read_json(arg)?)?;
    if let Some(c) = case {
        if c != d.case() {
            return Err(SchemaError(format!("--case {c} but the parameters are {}", d.case())).into());
        }
    }
    Ok(d)
}

fn report_json(r: &FiberReport, d: &PolarData) -> anyhow::Result<Value> {
    let inv = validate(d)?;
    let mut v = r.to_json();
    v["entries"] = v["fibers"].take();
    v["fibers"] = json!(r.fibers.iter().map(|f| f.surface.name()).collect::<Vec<_>>());
    v["invariants"] = inv.to_json();
    Ok(v)
}

fn run_classify(a: &ClassifyArgs) -> anyhow::Result<Value> {
    check_tol(a.common.tol)?;
    let d = load_params(&a.params, a.case)?;
    let w = a
        .weights
        .as_deref()
        .map(|s| read_json(s).and_then(|v| Ok(ParabolicWeights::from_json(&v)?)))
        .transpose()?;
    let inv = validate(&d)?;
    let r = classify_with_weights(&inv, d.case(), w.as_ref())?;
    report_json(&r, &d)
}

fn run_verify(a: &VerifyArgs) -> Result<Value, Failure> {
    let fail = |e: anyhow::Error| Failure {
        code: exit_code(&e),
        report: error_report(&e),
    };
    check_tol(a.common.tol).map_err(fail)?;
    let mut cfg = VerifyConfig::new(a.case, a.samples as usize, a.seed);
    cfg.root_tol = a.common.tol;
    cfg.t_tol = DEFAULT_T_TOL;
    let report = verify(&cfg);
    let mut v = serde_json::to_value(&report).expect("serializable");
    v["rejection_rate"] = json!(report.rejection_rate());
    v["tol"] = json!(a.common.tol);
    if report.disagree.is_empty() {
        Ok(v)
    } else {
        Err(Failure { code: 4, report: v })
    }
}

fn run_sweep(a: &SweepArgs) -> anyhow::Result<Value> {
    check_tol(a.common.tol)?;
    let mut selected: Vec<&'static str> = CaseTag::ALL
        .iter()
        .filter(|c| a.case.is_none_or(|k| k == **c))
        .flat_map(|c| branches(*c).iter().copied())
        .collect();
    if let Some(b) = &a.branch {
        selected.retain(|x| x == b);
        if selected.is_empty() {
            return Err(SchemaError(format!("unknown branch {b:?}")).into());
        }
    }
    let rows = sweep(&selected, a.samples as usize, a.seed, a.common.tol, DEFAULT_T_TOL);
    let agree = rows.iter().filter(|r| r.comparison.agree).count();
    let on_target = rows.iter().filter(|r| r.comparison.branch == r.target).count();
    Ok(json!({
        "seed": a.seed,
        "per_branch": a.samples,
        "tol": a.common.tol,
        "rows": rows,
        "summary": { "rows": rows.len(), "agree": agree, "on_target": on_target },
    }))
}

fn run_wallcross(a: &WallcrossArgs) -> anyhow::Result<Value> {
    check_tol(a.common.tol)?;
    let d = load_params(&a.params, None)?;
    let w = ParabolicWeights::from_json(&read_json(&a.weights)?)?;
    let (from, to, step) = (parse_rational(&a.from)?, parse_rational(&a.to)?, parse_rational(&a.step)?);
    if !step.is_positive() || to < from {
        bail!(SchemaError("need --from <= --to and --step > 0".into()));
    }
    let inv = validate(&d)?;
    let mut steps = Vec::new();
    let mut alpha = from.clone();
    while alpha <= to {
        let r = classify_with_weights(&inv, d.case(), Some(&w.clone().with_extended(alpha.clone())))?;
        steps.push(json!({
            "alpha_plus": rational_to_json(&alpha),
            "on_wall": alpha.is_integer(),
            "report": report_json(&r, &d)?,
        }));
        alpha = &alpha + &step;
    }
    let first = from.ceil().to_integer().to_i64().context("wall index overflow")?;
    let last = to.floor().to_integer().to_i64().context("wall index overflow")?;
    let walls: Vec<i64> = (first..=last).collect();
    let hits: Vec<Value> = steps
        .iter()
        .filter(|s| s["on_wall"] == json!(true))
        .map(|s| s["alpha_plus"].clone())
        .collect();
    Ok(json!({
        "from": rational_to_json(&from),
        "to": rational_to_json(&to),
        "step": rational_to_json(&step),
        "walls": walls,
        "wall_hits": hits,
        "steps": steps,
    }))
}

fn emit(v: &Value, out: Option<&Path>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Classify(a) => a.common.out.clone(),
        Command::Verify(a) => a.common.out.clone(),
        Command::Sweep(a) => a.common.out.clone(),
        Command::Wallcross(a) => a.common.out.clone(),
    };
    let result = match &cli.command {
        Command::Classify(a) => run_classify(a),
        Command::Verify(a) => return finish(run_verify(a), out.as_deref()),
        Command::Sweep(a) => run_sweep(a),
        Command::Wallcross(a) => run_wallcross(a),
    };
    let result = result.map_err(|e| {
        eprintln!("error: {e:#}");
        Failure {
            code: exit_code(&e),
            report: error_report(&e),
        }
    });
    finish(result, out.as_deref())
}

fn finish(result: Result<Value, Failure>, out: Option<&Path>) -> ExitCode {
    let (code, report) = match result {
        Ok(v) => (0, v),
        Err(f) => (f.code, f.report),
    };
    if let Err(e) = emit(&report, out) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
