//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure, 2 on
//! a usage or configuration error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::causality::{
    causality_report, dualize_pointwise, integral_i_with, ContourSpec, DualizationTask, Entry, HalfPlane, LogMix,
    ResponseForm, Scheme,
};
use crate::liealg::{
    build_representation, central_extension_table, expected_table, jacobi_check, verify_closure, verify_dynamical_symmetry,
    verify_matrix_central_charges, verify_structure, GeneratorLabel, CATALOG_IDS,
};
use crate::liealg::catalog::schroedinger_operator;
use crate::par::Execution;
use crate::report::Report;
use crate::suite::{self, CLOSED_IDS, CRITERIA};
use crate::symcore::{ParamScalar, Sign, Q};
use crate::ward::cases::{case, corrupt_leading_term, verify_covariance};
use crate::ward::constraints::constraint_report;
use crate::ward::{mutations, CASE_IDS};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "lsi", version, about = "Verification engine for local scale-invariance")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run every sub-check on the current thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    #[command(subcommand)]
    Verify(Verify),
    #[command(subcommand)]
    Causality(Causality),
    #[command(subcommand)]
    Response(Response),
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Brackets of a catalog representation against its table, plus Jacobi.
    Algebra(AlgebraArgs),
    /// Multipliers of the dual CGA generators on the Schroedinger operator.
    Symmetry(SymbolicArgs),
    /// Covariance of a catalog two-point function.
    Ward(WardArgs),
    /// Re-derived constraint relations.
    Constraints,
    /// The full acceptance matrix.
    All(AllArgs),
}

#[derive(Args, Debug)]
pub struct SymbolicArgs {
    /// Exact parameter binding `name=p/q`; repeatable.
    #[arg(long = "bind", value_name = "NAME=VALUE")]
    pub bind: Vec<String>,
}

#[derive(Args, Debug)]
pub struct AlgebraArgs {
    #[arg(long)]
    pub id: String,
    #[arg(long, default_value_t = 1)]
    pub dim: u32,
    #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
    pub window: String,
    /// Corrupt the leading term of this generator before checking.
    #[arg(long, value_name = "LABEL")]
    pub mutate: Option<String>,
    #[command(flatten)]
    pub sym: SymbolicArgs,
}

#[derive(Args, Debug)]
pub struct WardArgs {
    #[arg(long = "case")]
    pub case_id: String,
    /// `t>0` or `t<0`; both of the case's branches when absent.
    #[arg(long)]
    pub branch: Option<String>,
    /// Also run the mutation suite.
    #[arg(long)]
    pub mutations: bool,
    #[command(flatten)]
    pub sym: SymbolicArgs,
}

#[derive(Args, Debug)]
pub struct AllArgs {
    /// Run only these criteria (1-8); repeatable.
    #[arg(long)]
    pub criterion: Vec<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Causality {
    /// One of the line integrals `I^(n)(x)`.
    Integral(IntegralArgs),
    /// Pointwise dual two-point function at `(t, r)`.
    Dualize(DualizeArgs),
    /// Grid evaluation and the causality aggregates.
    Report(TaskArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlaneArg {
    Below,
    Above,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Staple,
    CutWrap,
}

#[derive(Args, Debug)]
pub struct ContourArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long = "half-width")]
    pub half_width: Option<f64>,
    #[arg(long = "tail-depth")]
    pub tail_depth: Option<f64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Args, Debug)]
pub struct IntegralArgs {
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long)]
    pub x: f64,
    #[arg(long = "half-plane", value_enum, default_value_t = PlaneArg::Below)]
    pub half_plane: PlaneArg,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    #[command(flatten)]
    pub contour: ContourArgs,
}

#[derive(Args, Debug)]
pub struct TaskArgs {
    #[arg(long)]
    pub x: f64,
    #[arg(long, default_value_t = 0.0)]
    pub xi: f64,
    /// `x1' = 0, x2' = 1` instead of the symmetric doublet.
    #[arg(long)]
    pub asymmetric: bool,
    /// Real binding for `M`, `g0`, `h0` or `xip`; repeatable.
    #[arg(long = "bind", value_name = "NAME=VALUE")]
    pub bind: Vec<String>,
    #[command(flatten)]
    pub contour: ContourArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EntryArg {
    G,
    H,
}

#[derive(Args, Debug)]
pub struct DualizeArgs {
    #[command(flatten)]
    pub task: TaskArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = EntryArg::G)]
    pub entry: EntryArg,
}

#[derive(Subcommand, Debug)]
pub enum Response {
    /// Collapse of `s^{1+a} R(t, s)` onto `f_R(t/s)`.
    Collapse(CollapseArgs),
}

#[derive(Args, Debug)]
pub struct CollapseArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long = "a-prime", allow_hyphen_values = true, default_value_t = 0.0)]
    pub a_prime: f64,
    #[arg(long = "lambda-over-z", default_value_t = 1.0)]
    pub lambda_over_z: f64,
    #[arg(long, default_value_t = 1.0)]
    pub f0: f64,
    /// Ratio `y = t/s` shared by the samples.
    #[arg(long, default_value_t = 3.0)]
    pub y: f64,
    /// Waiting times; repeatable.
    #[arg(long = "s")]
    pub waiting: Vec<f64>,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

pub struct Outcome {
    pub report: Report,
    pub data: Value,
}

fn outcome(report: Report) -> Outcome {
    Outcome { report, data: Value::Null }
}

pub fn parse_window(s: &str) -> Result<(i64, i64), UsageError> {
    let (a, b) = s.split_once("..").ok_or_else(|| UsageError(format!("window `{}` is not of the form a..b", s)))?;
    let a: i64 = a.trim().parse()?;
    let b: i64 = b.trim().parse()?;
    if a > b {
        return Err(UsageError(format!("empty window {}..{}", a, b)));
    }
    Ok((a, b))
}

fn split_binding(s: &str) -> Result<(&str, &str), UsageError> {
    match s.split_once('=') {
        Some((n, v)) if !n.trim().is_empty() => Ok((n.trim(), v.trim())),
        _ => Err(UsageError(format!("binding `{}` is not of the form name=value", s))),
    }
}

/// Exact bindings: integers or `p/q`.
pub fn exact_bindings(items: &[String]) -> Result<BTreeMap<String, ParamScalar>, UsageError> {
    let mut out = BTreeMap::new();
    for s in items {
        let (n, v) = split_binding(s)?;
        let q: Q = v
            .parse()
            .map_err(|_| UsageError(format!("`{}` is not an exact rational p/q", v)))?;
        out.insert(n.to_string(), ParamScalar::rational(q));
    }
    Ok(out)
}

pub fn real_bindings(items: &[String], allowed: &[&str]) -> Result<BTreeMap<String, f64>, UsageError> {
    let mut out = BTreeMap::new();
    for s in items {
        let (n, v) = split_binding(s)?;
        if !allowed.contains(&n) {
            return Err(UsageError(format!("unknown parameter `{}`; expected one of {}", n, allowed.join(", "))));
        }
        let x: f64 = v.parse()?;
        if !x.is_finite() {
            return Err(UsageError(format!("`{}` is not finite", v)));
        }
        out.insert(n.to_string(), x);
    }
    Ok(out)
}

fn parse_sign(s: &str) -> Result<Sign, UsageError> {
    match s.trim() {
        "t>0" | "+" | "positive" => Ok(Sign::Positive),
        "t<0" | "-" | "negative" => Ok(Sign::Negative),
        _ => Err(UsageError(format!("branch `{}` must be t>0 or t<0", s))),
    }
}

fn contour(base: ContourSpec, c: &ContourArgs) -> Result<ContourSpec, UsageError> {
    let s = ContourSpec {
        epsilon: c.epsilon.unwrap_or(base.epsilon),
        l: c.half_width.unwrap_or(base.l),
        tail_depth: c.tail_depth.unwrap_or(base.tail_depth),
        tolerance: c.tolerance.unwrap_or(base.tolerance),
        ..base
    };
    s.validate()?;
    Ok(s)
}

fn algebra(a: &AlgebraArgs, exec: Execution) -> Result<Outcome, UsageError> {
    let window = parse_window(&a.window)?;
    if a.id == "central" {
        let mut r = Report::new("two-charge extension");
        let t = central_extension_table(window);
        r.extend(jacobi_check(&t, exec));
        r.extend(verify_matrix_central_charges(window)?);
        return Ok(Outcome { report: r, data: t.to_json() });
    }
    if !CATALOG_IDS.contains(&a.id.as_str()) {
        return Err(UsageError(format!("unknown catalog id `{}`; expected one of {}, central", a.id, CATALOG_IDS.join(", "))));
    }
    let mut rep = build_representation(&a.id, a.dim, window)?;
    let b = exact_bindings(&a.sym.bind)?;
    if !b.is_empty() {
        rep = rep.substitute_params(&b)?;
    }
    let table = expected_table(&rep);
    if let Some(m) = &a.mutate {
        let l: GeneratorLabel = m.parse().map_err(UsageError)?;
        let g = rep.generators.get(&l).ok_or_else(|| UsageError(format!("{} is not a generator of {}", l, a.id)))?;
        rep = rep.with_generator(&l, corrupt_leading_term(g));
    }
    let mut r = Report::new(format!("algebra {}({})", a.id, a.dim));
    r.extend(verify_structure(&rep, &table, exec));
    r.extend(jacobi_check(&table, exec));
    if CLOSED_IDS.contains(&a.id.as_str()) {
        r.extend(verify_closure(&rep, exec));
    }
    Ok(Outcome { report: r, data: table.to_json() })
}

fn symmetry(a: &SymbolicArgs, exec: Execution) -> Result<Outcome, UsageError> {
    let mut rep = build_representation("dual-cga", 1, suite::WINDOW)?;
    let b = exact_bindings(&a.bind)?;
    let mut s = schroedinger_operator();
    if !b.is_empty() {
        rep = rep.substitute_params(&b)?;
        s = s.substitute_params(&b)?;
    }
    let (r, found) = verify_dynamical_symmetry(&rep, &s, exec);
    let data: serde_json::Map<String, Value> = found
        .iter()
        .map(|m| (m.label.to_string(), m.lambda.as_ref().map_or(Value::Null, |l| Value::String(l.to_string()))))
        .collect();
    Ok(Outcome { report: r, data: Value::Object(data) })
}

fn ward(a: &WardArgs, exec: Execution) -> Result<Outcome, UsageError> {
    if !CASE_IDS.contains(&a.case_id.as_str()) {
        return Err(UsageError(format!("unknown case `{}`; expected one of {}", a.case_id, CASE_IDS.join(", "))));
    }
    let c = case(&a.case_id)?;
    let mut spec = c.spec.clone();
    let b = exact_bindings(&a.sym.bind)?;
    let known: std::collections::BTreeSet<String> = spec
        .legs
        .iter()
        .flat_map(|l| [&l.x, &l.xp, &l.xi, &l.xip, &l.mass])
        .flat_map(|p| p.params())
        .collect();
    if let Some(n) = b.keys().find(|n| !known.contains(*n)) {
        let k: Vec<&str> = known.iter().map(|s| s.as_str()).collect();
        return Err(UsageError(format!("case {} has no parameter `{}`; free parameters: {}", a.case_id, n, k.join(", "))));
    }
    for leg in spec.legs.iter_mut() {
        for p in [&mut leg.x, &mut leg.xp, &mut leg.xi, &mut leg.xip, &mut leg.mass] {
            *p = p.substitute(&b)?;
        }
    }
    spec.validate()?;
    let branches = match &a.branch {
        Some(s) => {
            let s = parse_sign(s)?;
            if !c.branches.contains(&s) {
                return Err(UsageError(format!("case {} is not defined on this branch", a.case_id)));
            }
            vec![s]
        }
        None => c.branches.clone(),
    };
    let mut r = Report::new(format!("ward {}", a.case_id));
    r.extend(verify_covariance(&a.case_id, &c.generators, &spec, &branches, exec)?);
    if a.mutations {
        r.extend(mutations(&a.case_id, exec)?);
    }
    Ok(outcome(r))
}

fn task(a: &TaskArgs) -> Result<DualizationTask, UsageError> {
    let b = real_bindings(&a.bind, &["M", "g0", "h0", "xip"])?;
    let mut t = if a.asymmetric {
        DualizationTask::asymmetric(a.x, a.xi)
    } else {
        DualizationTask::symmetric(a.x, a.xi)
    };
    if let Some(m) = b.get("M") {
        t.mass = *m;
    }
    if let Some(g) = b.get("g0") {
        t.g0 = *g;
    }
    if let Some(h) = b.get("h0") {
        t.h0 = *h;
    }
    if let Some(x) = b.get("xip") {
        t.log_mix = if a.asymmetric { LogMix::Asymmetric { xip1: *x } } else { LogMix::Symmetric { xip_sum: *x } };
    }
    t.validate()?;
    Ok(t)
}

/// Threshold used for the vanishing lower-plane integrals.
pub const VANISHING: f64 = 1e-10;

fn integral(a: &IntegralArgs) -> Result<Outcome, UsageError> {
    let plane = match a.half_plane {
        PlaneArg::Below => HalfPlane::Below,
        PlaneArg::Above => HalfPlane::Above,
    };
    let spec = contour(ContourSpec::default().with_half_plane(plane), &a.contour)?;
    let scheme = match (a.scheme, plane) {
        (Some(SchemeArg::Staple), _) | (None, HalfPlane::Below) => Scheme::Staple,
        (Some(SchemeArg::CutWrap), _) | (None, HalfPlane::Above) => Scheme::CutWrap,
    };
    let v = integral_i_with(a.n, a.x, &spec, scheme)?;
    let mut r = Report::new(format!("I^({})({}) {:?}", a.n, a.x, plane));
    r.push("converged", v.converged, v.warning.clone().unwrap_or_default());
    if plane == HalfPlane::Below {
        r.push("vanishes", v.abs() <= VANISHING, format!("|I| = {:.3e}", v.abs()));
    } else {
        r.push("nonzero", v.abs() > v.err + v.tail, format!("I = {:.12} {:+.12}i", v.re, v.im));
    }
    Ok(Outcome { report: r, data: serde_json::to_value(&v)? })
}

fn dualize(a: &DualizeArgs) -> Result<Outcome, UsageError> {
    let t = task(&a.task)?;
    let spec = contour(ContourSpec::default(), &a.task.contour)?;
    let entry = match a.entry {
        EntryArg::G => Entry::G,
        EntryArg::H => Entry::H,
    };
    let v = dualize_pointwise(&t, &spec, a.t, a.r, entry)?;
    let mut r = Report::new(format!("{:?}(t={}, r={})", entry, a.t, a.r));
    r.push("converged", v.converged, format!("{:.12} {:+.12}i", v.re, v.im));
    Ok(Outcome { report: r, data: serde_json::to_value(&v)? })
}

fn causality(a: &TaskArgs, exec: Execution) -> Result<Outcome, UsageError> {
    let t = task(a)?;
    let spec = contour(ContourSpec::default(), &a.contour)?;
    let c = causality_report(&t, &spec, exec)?;
    let g = &c.aggregates;
    let mut r = Report::new(format!("causality x={} xi={}", t.x, t.xi_sum));
    r.push("points used", g.points_dropped == 0, format!("{} of {}", g.points_used, c.grid.len()));
    r.push("t<0 suppression", g.suppression <= 1e-6, format!("{:.3e}", g.suppression));
    r.push("gaussian spread", g.gaussian_spread <= 1e-6, format!("{:.3e}", g.gaussian_spread));
    r.push("G0 identity", g.g0_identity_rel <= 1e-8, format!("rel {:.3e}", g.g0_identity_rel));
    let want = match t.log_mix {
        LogMix::Symmetric { .. } => -1.0,
        LogMix::Asymmetric { .. } => 0.0,
    };
    let s = g.h_slope_over_g0;
    let ok = (s[0] - want).abs() <= 1e-4 && s[1].abs() <= 1e-4;
    r.push("H log-slope / G0", ok, format!("{:.8} {:+.2e}i, expected {}", s[0], s[1], want));
    r.push("H0 identity", g.h0_identity_rel <= 1e-6, format!("rel {:.3e}", g.h0_identity_rel));
    Ok(Outcome { report: r, data: serde_json::to_value(&c)? })
}

fn collapse(a: &CollapseArgs) -> Result<Outcome, UsageError> {
    let f = ResponseForm { a: a.a, a_prime: a.a_prime, lambda_over_z: a.lambda_over_z, f0: a.f0 };
    let waiting = if a.waiting.is_empty() { vec![1.0, 2.0, 4.0] } else { a.waiting.clone() };
    let samples: Vec<(f64, f64)> = waiting.iter().map(|s| (a.y * s, *s)).collect();
    let mut r = Report::new("response collapse");
    let below = (0..100).all(|k| f.scaling_function(k as f64 / 100.0) == Ok(0.0));
    r.push("f_R(y < 1) = 0", below, "");
    let res = f.collapse_residual(&samples)?;
    r.push("collapse residual", res == 0.0, format!("{:e}", res));
    let rows: Vec<Value> = samples
        .iter()
        .map(|&(t, s)| json!({"t": t, "s": s, "R": f.response(t, s).ok()}))
        .collect();
    Ok(Outcome { report: r, data: Value::Array(rows) })
}

fn all(a: &AllArgs, exec: Execution) -> Result<Outcome, UsageError> {
    let ns: Vec<usize> = if a.criterion.is_empty() { (1..=CRITERIA.len()).collect() } else { a.criterion.clone() };
    let mut r = Report::new("acceptance");
    let mut rows = Vec::new();
    for n in ns {
        let c = suite::criterion(n, exec).ok_or_else(|| UsageError(format!("no criterion {}", n)))?;
        rows.push(json!({"criterion": n, "title": CRITERIA[n - 1], "passed": c.passed(), "failed": c.failure_count()}));
        r.push(format!("criterion {}: {}", n, CRITERIA[n - 1]), c.passed(), format!("{} checks, {} failed", c.checks.len(), c.failure_count()));
        r.extend(c);
    }
    Ok(Outcome { report: r, data: Value::Array(rows) })
}

fn dispatch(cli: &Cli) -> Result<Outcome, UsageError> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    match &cli.command {
        Command::Verify(Verify::Algebra(a)) => algebra(a, exec),
        Command::Verify(Verify::Symmetry(a)) => symmetry(a, exec),
        Command::Verify(Verify::Ward(a)) => ward(a, exec),
        Command::Verify(Verify::Constraints) => Ok(outcome(constraint_report()?)),
        Command::Verify(Verify::All(a)) => all(a, exec),
        Command::Causality(Causality::Integral(a)) => integral(a),
        Command::Causality(Causality::Dualize(a)) => dualize(a),
        Command::Causality(Causality::Report(a)) => causality(a, exec),
        Command::Response(Response::Collapse(a)) => collapse(a),
    }
}

/// Machine-readable report; `wall_time_ms` is the only nondeterministic field.
pub fn json_report(command: &[String], o: &Outcome, wall_time_ms: f64) -> Value {
    json!({
        "command": command,
        "version": VERSION,
        "passed": o.report.passed(),
        "report": o.report.to_json(),
        "data": o.data,
        "wall_time_ms": wall_time_ms,
    })
}

/// Run with the given arguments (including the program name), writing the report to `out`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    let start = Instant::now();
    let o = match dispatch(&cli) {
        Ok(o) => o,
        Err(UsageError(m)) => {
            let _ = writeln!(err, "error: {}", m);
            return 2;
        }
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let command: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&json_report(&command, &o, ms)).expect("report serializes") + "\n",
        Format::Text => format!("{}\nwall time {:.1} ms\n", o.report, ms),
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, &text).map_err(|e| e.to_string()),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {}", e);
        return 2;
    }
    if o.report.passed() {
        0
    } else {
        1
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}
