//! Command-line front end. Every command emits one JSON report
//! `{command, status, payload, elapsed_us}`.
//!
//! Exit codes: 0 success, 2 unmet precondition, 3 parse error, 4 internal
//! failure (including a late integral-convexity failure).

use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::{unit_displacements, IntegralBox, LatticePoint, Rational};
use crate::bisubmodular::{
    box_convolution, convolution_audit, half_integer_samples, is_bisubmodular, minmax_cgk, minmax_fp,
    polyhedron_membership, random_bisubmodular, signed_from_sets, BisubFunction,
};
use crate::error::{Error, Result};
use crate::fenchel::{
    counterexample_gap_report, fenchel_certificate, minimize_difference, CertificateTrace, ConjugateMode,
    DualityCertificate,
};
use crate::functions::{generate, Orientation, SeparableFunction, TableFunction};
use crate::integral_convexity::{is_integrally_convex_function, local_extension, IcMode};
use crate::io::*;
use crate::subdifferential::{
    build_subgradient_system, enumerate_vertices, fm_reduced_system, integral_subgradient_with_trace, membership_check,
    ExtractionStep,
};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "icdual",
    version,
    about = "Exact discrete Fenchel duality for integrally convex functions"
)]
pub struct Cli {
    /// Instance file; `-` reads standard input.
    #[arg(long, global = true)]
    pub instance: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Generate the instance from this seed when no file is given.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Domain check plus pairs at distance two.
    DistanceTwo,
    /// Every pair at distance two or more.
    AllPairs,
}

impl ModeArg {
    fn name(self) -> &'static str {
        match self {
            ModeArg::DistanceTwo => "distance-two",
            ModeArg::AllPairs => "all-pairs",
        }
    }
}

impl From<ModeArg> for IcMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::DistanceTwo => IcMode::DomainAndDistanceTwo,
            ModeArg::AllPairs => IcMode::AllFarPairs,
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Test integral convexity of the table.
    CheckIc {
        #[arg(long, value_enum, default_value_t = ModeArg::DistanceTwo)]
        mode: ModeArg,
    },
    /// Minimize f, or f - Psi when the instance has a separable concave Psi.
    Minimize,
    /// Conjugate values at --p, or at every point of the instance box.
    Conjugate {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p: Option<Vec<BigInt>>,
    },
    /// Subgradient system, reduced system and integral subgradient at the
    /// instance point.
    Subdiff {
        /// Also list the vertices of the subdifferential.
        #[arg(long)]
        vertices: bool,
    },
    /// Duality certificate for f and Psi; the four-value gap chain under the
    /// `no_ic_assumption` flag.
    Fenchel,
    /// Bisubmodular min-max formulas and box convolution.
    Bisub {
        #[command(subcommand)]
        op: BisubOp,
    },
    /// Re-check a report against the instance.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum BisubOp {
    /// Upper-bounded maximum of z(N).
    Cgk {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        w: Vec<BigInt>,
    },
    /// Box-bounded maximum of z(A) - z(B).
    Fp {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        alpha: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        beta: Vec<i64>,
        /// Elements of A (1-based).
        #[arg(long, value_delimiter = ',')]
        a: Vec<usize>,
        /// Elements of B (1-based).
        #[arg(long, value_delimiter = ',')]
        b: Vec<usize>,
    },
    /// Convolution with the box function of [alpha, beta].
    Conv {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        alpha: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        beta: Vec<i64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckIc { .. } => "check-ic",
            Command::Minimize => "minimize",
            Command::Conjugate { .. } => "conjugate",
            Command::Subdiff { .. } => "subdiff",
            Command::Fenchel => "fenchel",
            Command::Bisub { op } => match op {
                BisubOp::Cgk { .. } => "bisub-cgk",
                BisubOp::Fp { .. } => "bisub-fp",
                BisubOp::Conv { .. } => "bisub-conv",
            },
            Command::Verify { .. } => "verify",
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 3,
        Error::NotIntegrallyConvex(_)
        | Error::InternalInfeasible(_)
        | Error::OppositeInfinities
        | Error::UnboundedEnumeration => 4,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::OppositeInfinities => "opposite_infinities",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::PointOutsideDomain(_) => "point_outside_domain",
        Error::NotIntegrallyConvex(_) => "not_integrally_convex",
        Error::EmptyIntersection => "empty_intersection",
        Error::InternalInfeasible(_) => "internal_infeasible",
        Error::UnboundedRegion => "unbounded_region",
        Error::UnboundedEnumeration => "unbounded_enumeration",
        Error::UnsupportedDimension { .. } => "unsupported_dimension",
        Error::BoxTooSmall(_) => "box_too_small",
        Error::InfeasiblePrecondition(_) => "infeasible_precondition",
        Error::InvalidBox(_) => "invalid_box",
        Error::InvalidFunction(_) => "invalid_function",
        Error::Parse { .. } => "parse",
    }
}

pub fn error_payload(e: &Error) -> Value {
    let mut v = json!({ "kind": error_kind(e), "message": e.to_string() });
    if let Error::Parse { line, column, .. } = e {
        v["line"] = json!(line);
        v["column"] = json!(column);
    }
    v
}

struct Outcome {
    status: &'static str,
    payload: Value,
    code: i32,
}

fn ok(status: &'static str, payload: Value) -> Result<Outcome> {
    Ok(Outcome {
        status,
        payload,
        code: 0,
    })
}

/// Instance used when only `--seed` is given: a random 2-separable convex
/// table on `[-2,2]^2`, a random separable concave `Psi`, a random
/// bisubmodular function on two elements and the origin as point.
pub fn generated_instance(seed: u64) -> Instance {
    Instance {
        dimension: 2,
        table: Some(generate::random_2separable(seed, 2, 2, false)),
        separable: Some(generate::random_separable_concave(seed, 2, true)),
        bisub: Some(random_bisubmodular(seed, 2)),
        point: Some(LatticePoint::zero(2)),
        ..Default::default()
    }
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::InfeasiblePrecondition(format!("cannot read standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InfeasiblePrecondition(format!("cannot read {}: {e}", path.display())))?
    };
    Instance::parse(&text)
}

fn need<'a, T>(v: &'a Option<T>, what: &str) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| Error::InfeasiblePrecondition(format!("instance has no {what}")))
}

fn need_instance(inst: Option<&Instance>) -> Result<&Instance> {
    inst.ok_or_else(|| Error::InfeasiblePrecondition("no instance: pass --instance or --seed".into()))
}

/// Runs one command on an already loaded instance.
pub fn execute(command: &Command, inst: Option<&Instance>) -> Report {
    execute_with_code(command, inst).0
}

/// Like [`execute`], also returning the exit code.
pub fn execute_with_code(command: &Command, inst: Option<&Instance>) -> (Report, i32) {
    let start = Instant::now();
    let out = dispatch(command, inst);
    let elapsed_us = start.elapsed().as_micros();
    let (status, payload, code) = match out {
        Ok(o) => (o.status.to_string(), o.payload, o.code),
        Err(e) => ("error".to_string(), error_payload(&e), exit_code(&e)),
    };
    (
        Report {
            command: command.name().to_string(),
            status,
            payload,
            elapsed_us,
        },
        code,
    )
}

/// Loads the instance named by the flags and runs the command.
pub fn run(cli: &Cli) -> (Report, i32) {
    let inst = match (&cli.instance, cli.seed) {
        (Some(path), _) => match load_instance(path) {
            Ok(i) => Some(i),
            Err(e) => {
                return (
                    Report {
                        command: cli.command.name().to_string(),
                        status: "error".into(),
                        payload: error_payload(&e),
                        elapsed_us: 0,
                    },
                    exit_code(&e),
                )
            }
        },
        (None, Some(seed)) => Some(generated_instance(seed)),
        (None, None) => None,
    };
    execute_with_code(&cli.command, inst.as_ref())
}

/// Parses `args` (program name first) without exiting on error.
pub fn parse_cli<I, T>(args: I) -> std::result::Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args)
}

/// Entry point for the binary.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match parse_cli(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (report, code) = run(&cli);
    let text = canonical_string(&report.to_json());
    if report.status == "error" {
        eprintln!("icdual: {}", report.payload["message"].as_str().unwrap_or("error"));
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("icdual: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    code
}

fn dispatch(command: &Command, inst: Option<&Instance>) -> Result<Outcome> {
    match command {
        Command::CheckIc { mode } => check_ic(need_instance(inst)?, *mode),
        Command::Minimize => minimize(need_instance(inst)?),
        Command::Conjugate { p } => conjugate(need_instance(inst)?, p.as_deref()),
        Command::Subdiff { vertices } => subdiff(need_instance(inst)?, *vertices),
        Command::Fenchel => fenchel(need_instance(inst)?),
        Command::Bisub { op } => bisub(need_instance(inst)?, op),
        Command::Verify { report } => {
            let text = std::fs::read_to_string(report)
                .map_err(|e| Error::InfeasiblePrecondition(format!("cannot read {}: {e}", report.display())))?;
            let report = Report::parse(&text)?;
            let checks = verify_report(need_instance(inst)?, &report)?;
            let valid = checks.iter().all(|(_, ok)| *ok);
            Ok(Outcome {
                status: if valid { "valid" } else { "invalid" },
                payload: json!({
                    "command": report.command,
                    "checks": checks.iter().map(|(n, ok)| json!({"name": n, "ok": ok})).collect::<Vec<_>>(),
                }),
                code: if valid { 0 } else { 4 },
            })
        }
    }
}

fn ext_rat_json(v: &Option<Rational>) -> Value {
    match v {
        Some(r) => rat_json(r),
        None => json!("+inf"),
    }
}

fn check_ic(inst: &Instance, mode: ModeArg) -> Result<Outcome> {
    let f = need(&inst.table, "table")?;
    let chk = is_integrally_convex_function(f, mode.into());
    match chk.failure {
        None => ok("integrally_convex", json!({ "mode": mode.name() })),
        Some(fl) => ok(
            "not_integrally_convex",
            json!({
                "mode": mode.name(),
                "witness": {
                    "x": point_json(&fl.x),
                    "y": point_json(&fl.y),
                    "midpoint": rat_vec_json(&fl.midpoint),
                    "local_value": ext_rat_json(&fl.local_value),
                    "bound": rat_json(&fl.bound),
                    "domain": fl.domain,
                },
            }),
        ),
    }
}

fn concave_psi(inst: &Instance) -> Result<SeparableFunction> {
    match &inst.separable {
        Some(psi) if psi.orientation() == Orientation::Concave => Ok(psi.clone()),
        Some(_) => Err(Error::InvalidFunction("separable part must be concave".into())),
        None => Ok(SeparableFunction::zero(inst.dimension, Orientation::Concave)),
    }
}

/// `f - Psi` at `x` is no larger than at any neighbour in both domains.
fn local_minimum_of_difference(f: &TableFunction, psi: &SeparableFunction, x: &LatticePoint) -> Option<bool> {
    let at = |y: &LatticePoint| Some(f.get(y)? - psi.value(y)?);
    let vx = at(x)?;
    Some(
        unit_displacements(f.dim())
            .iter()
            .filter_map(|d| at(&x.offset(d)))
            .all(|v| vx <= v),
    )
}

fn minimize(inst: &Instance) -> Result<Outcome> {
    let f = need(&inst.table, "table")?;
    let psi = concave_psi(inst)?;
    let (x, v) = minimize_difference(f, &psi)?;
    let local = local_minimum_of_difference(f, &psi, &x).unwrap_or(false);
    ok(
        "minimized",
        json!({ "point": point_json(&x), "value": int_json(&v), "local_minimum": local }),
    )
}

fn conjugate(inst: &Instance, p: Option<&[BigInt]>) -> Result<Outcome> {
    let duals = match p {
        Some(p) => {
            if p.len() != inst.dimension {
                return Err(Error::DimensionMismatch {
                    expected: inst.dimension,
                    found: p.len(),
                });
            }
            vec![LatticePoint::new(p.to_vec())]
        }
        None => need(&inst.bx, "box or --p")?
            .lattice_points()
            .ok_or_else(|| Error::InvalidBox("conjugate box must be bounded".into()))?,
    };
    let (kind, values) = if let Some(f) = &inst.table {
        let vs = duals
            .iter()
            .map(|p| {
                let (v, arg) = f.conjugate_argmax(p)?;
                Ok(json!({
                    "p": point_json(p),
                    "value": int_json(&v),
                    "argmax": arg.iter().map(point_json).collect::<Vec<_>>(),
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        ("table", vs)
    } else {
        let psi = need(&inst.separable, "table or separable function")?;
        let vs = duals
            .iter()
            .map(|p| Ok(json!({ "p": point_json(p), "value": ext_json(&psi.conjugate(p)?) })))
            .collect::<Result<Vec<_>>>()?;
        ("separable", vs)
    };
    ok("computed", json!({ "function": kind, "values": values }))
}

fn step_json(s: &ExtractionStep) -> Value {
    json!({
        "level": s.level,
        "interval": s.interval.to_string(),
        "chosen": s.chosen.as_ref().map_or(Value::Null, int_json),
    })
}

fn subdiff(inst: &Instance, with_vertices: bool) -> Result<Outcome> {
    let f = need(&inst.table, "table")?;
    let x = need(&inst.point, "point")?;
    let n = f.dim();
    let bx = inst.bx.clone().unwrap_or_else(|| IntegralBox::unbounded(n));
    let sys = build_subgradient_system(f, x)?;
    let boxed = sys.with_box(bx.clone())?;
    let mut payload = json!({
        "point": point_json(x),
        "box": box_json(&bx),
        "rows": sys.rows().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "reduced": fm_reduced_system(&sys).iter().map(ToString::to_string).collect::<Vec<_>>(),
        "real_nonempty": boxed.to_rational().is_feasible(),
    });
    if with_vertices {
        payload["vertices"] = match enumerate_vertices(&boxed) {
            Ok(vs) => Value::Array(
                vs.iter()
                    .map(|v| json!({ "point": rat_vec_json(v), "integral": v.iter().all(|c| c.is_integer()) }))
                    .collect(),
            ),
            Err(Error::UnboundedRegion) => json!("unbounded"),
            Err(e) => return Err(e),
        };
    }
    match integral_subgradient_with_trace(f, x, &bx) {
        Ok(trace) => {
            payload["steps"] = Value::Array(trace.steps.iter().map(step_json).collect());
            match trace.result {
                Some(p) => {
                    payload["subgradient"] = point_json(&p);
                    ok("subgradient_found", payload)
                }
                None => ok("empty", payload),
            }
        }
        Err(Error::NotIntegrallyConvex(msg)) => {
            payload["note"] = json!(msg);
            Ok(Outcome {
                status: "no_integral_subgradient",
                payload,
                code: 4,
            })
        }
        Err(e) => Err(e),
    }
}

fn fenchel(inst: &Instance) -> Result<Outcome> {
    let f = need(&inst.table, "table")?;
    if inst.flags.contains("no_ic_assumption") {
        let g = match &inst.concave_table {
            Some(g) => g.clone(),
            None => concave_psi(inst)?.tabulate(&f.bounding_box())?,
        };
        let dual_box = need(&inst.bx, "dual box")?;
        let mode = if inst.flags.contains("window") {
            ConjugateMode::Window
        } else {
            ConjugateMode::Exact
        };
        let rep = counterexample_gap_report(f, &g, dual_box, mode)?;
        let chain = rep.chain();
        let opt_point = |p: &Option<LatticePoint>| p.as_ref().map_or(Value::Null, point_json);
        return ok(
            "gap_report",
            json!({
                "chain": chain.iter().map(|v| json!(v.to_string())).collect::<Vec<_>>(),
                "gap": chain[0] != chain[3],
                "minimizer": opt_point(&rep.minimizer),
                "maximizer": opt_point(&rep.maximizer),
                "dual_box": box_json(dual_box),
                "mode": if mode == ConjugateMode::Window { "window" } else { "exact" },
            }),
        );
    }
    let psi = concave_psi(inst)?;
    let c = fenchel_certificate(f, &psi)?;
    ok(
        "certified",
        json!({
            "primal_point": point_json(&c.primal_point),
            "dual_point": point_json(&c.dual_point),
            "primal_value": int_json(&c.primal_value),
            "dual_value": int_json(&c.dual_value),
            "dual_box": box_json(&c.trace.dual_box),
            "conjugate_f": int_json(&c.trace.conjugate_f),
            "conjugate_psi": int_json(&c.trace.conjugate_psi),
            "primal_argmax": c.trace.primal_argmax,
            "concave_argmin": c.trace.concave_argmin,
        }),
    )
}

fn signed_pair(n: usize, a: &[usize], b: &[usize]) -> Result<Vec<i8>> {
    let zero_based = |v: &[usize]| -> Result<Vec<usize>> {
        v.iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or_else(|| Error::InfeasiblePrecondition("elements start at 1".into()))
            })
            .collect()
    };
    signed_from_sets(n, &zero_based(a)?, &zero_based(b)?)
}

fn bisub(inst: &Instance, op: &BisubOp) -> Result<Outcome> {
    let f = need(&inst.bisub, "bisubmodular function")?;
    let minmax = |r: crate::bisubmodular::MinMaxReport, params: Value| {
        json!({
            "params": params,
            "lhs": int_json(&r.lhs),
            "rhs": int_json(&r.rhs),
            "primal_witness": point_json(&r.primal_witness),
            "dual_witness": signed_set_json(&r.dual_witness),
            "holds": r.holds,
        })
    };
    match op {
        BisubOp::Cgk { w } => {
            let r = minmax_cgk(f, &LatticePoint::new(w.clone()))?;
            let status = if r.holds { "equal" } else { "unequal" };
            let params = json!({ "w": w.iter().map(int_json).collect::<Vec<_>>() });
            ok(status, minmax(r, params))
        }
        BisubOp::Fp { alpha, beta, a, b } => {
            let ab = signed_pair(f.ground_size(), a, b)?;
            let r = minmax_fp(f, alpha, beta, &ab)?;
            let status = if r.holds { "equal" } else { "unequal" };
            let params = json!({ "alpha": alpha, "beta": beta, "A": a, "B": b });
            ok(status, minmax(r, params))
        }
        BisubOp::Conv { alpha, beta } => {
            let conv = box_convolution(f, alpha, beta)?;
            let lo = alpha.iter().min().copied().unwrap_or(0) - 1;
            let hi = beta.iter().max().copied().unwrap_or(0) + 1;
            let audit = convolution_audit(f, &conv, alpha, beta, &half_integer_samples(f.ground_size(), lo, hi))?;
            ok(
                "convolved",
                json!({
                    "params": { "alpha": alpha, "beta": beta },
                    "table": bisub_json(&conv),
                    "bisubmodular": is_bisubmodular(&conv).holds,
                    "audit": audit,
                }),
            )
        }
    }
}

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value> {
    v.get(k).ok_or_else(|| Error::Parse {
        line: 0,
        column: 0,
        message: format!("report payload lacks \"{k}\""),
    })
}

fn i64_list(v: &Value) -> Result<Vec<i64>> {
    v.as_array()
        .ok_or_else(|| Error::InfeasiblePrecondition("expected a list".into()))?
        .iter()
        .map(|e| {
            let b = parse_int(e)?;
            i64::try_from(&b).map_err(|_| Error::InfeasiblePrecondition(format!("{b} does not fit in i64")))
        })
        .collect()
}

fn usize_list(v: &Value) -> Result<Vec<usize>> {
    i64_list(v)?
        .into_iter()
        .map(|i| usize::try_from(i).map_err(|_| Error::InfeasiblePrecondition("negative element".into())))
        .collect()
}

fn parse_signed(n: usize, v: &Value) -> Result<Vec<i8>> {
    signed_pair(n, &usize_list(field(v, "X")?)?, &usize_list(field(v, "Y")?)?)
}

type Checks = Vec<(&'static str, bool)>;

/// Re-checks a report by evaluation and membership tests against the
/// instance. A positive integral-convexity verdict has no short certificate
/// and is re-run.
pub fn verify_report(inst: &Instance, report: &Report) -> Result<Checks> {
    let p = &report.payload;
    if report.status == "error" {
        return Err(Error::InfeasiblePrecondition("cannot verify an error report".into()));
    }
    let mut checks: Checks = Vec::new();
    match report.command.as_str() {
        "check-ic" => {
            let f = need(&inst.table, "table")?;
            if report.status == "integrally_convex" {
                let mode = match field(p, "mode")?.as_str() {
                    Some("all-pairs") => IcMode::AllFarPairs,
                    _ => IcMode::DomainAndDistanceTwo,
                };
                checks.push(("recheck", is_integrally_convex_function(f, mode).holds));
            } else {
                let w = field(p, "witness")?;
                let x = parse_point(field(w, "x")?)?;
                let y = parse_point(field(w, "y")?)?;
                let mid = parse_rat_vec(field(w, "midpoint")?)?;
                let bound = parse_rat(field(w, "bound")?)?;
                let (fx, fy) = match (f.get(&x), f.get(&y)) {
                    (Some(a), Some(b)) => (a.clone(), b.clone()),
                    _ => {
                        checks.push(("pair_in_domain", false));
                        return Ok(checks);
                    }
                };
                checks.push(("pair_in_domain", true));
                let two = BigInt::from(2);
                let expect_mid: Vec<Rational> = x
                    .coords()
                    .iter()
                    .zip(y.coords())
                    .map(|(a, b)| Rational::new(a + b, two.clone()))
                    .collect();
                checks.push(("midpoint", mid == expect_mid));
                checks.push(("bound", bound == Rational::new(fx + fy, two)));
                let local = local_extension(f, &mid);
                let claimed = match field(w, "local_value")?.as_str() {
                    Some("+inf") => None,
                    _ => Some(parse_rat(field(w, "local_value")?)?),
                };
                checks.push(("local_value", local == claimed));
                checks.push(("violation", local.is_none_or(|v| v > bound)));
            }
        }
        "minimize" => {
            let f = need(&inst.table, "table")?;
            let psi = concave_psi(inst)?;
            let x = parse_point(field(p, "point")?)?;
            let v = parse_int(field(p, "value")?)?;
            let at = f.get(&x).and_then(|fx| Some(fx - psi.value(&x)?));
            checks.push(("value", at == Some(v)));
            checks.push(("local_minimum", local_minimum_of_difference(f, &psi, &x) == Some(true)));
        }
        "conjugate" => {
            let values = field(p, "values")?
                .as_array()
                .ok_or_else(|| Error::InfeasiblePrecondition("values must be a list".into()))?;
            let mut good = true;
            if let Some(f) = &inst.table {
                for e in values {
                    let q = parse_point(field(e, "p")?)?;
                    let v = parse_int(field(e, "value")?)?;
                    let upper = f.iter().all(|(y, fy)| q.dot(y) - fy <= v);
                    let args = field(e, "argmax")?.as_array().cloned().unwrap_or_default();
                    let attained = !args.is_empty()
                        && args.iter().all(|a| {
                            parse_point(a)
                                .ok()
                                .and_then(|y| f.get(&y).map(|fy| q.dot(&y) - fy == v))
                                .unwrap_or(false)
                        });
                    good &= upper && attained;
                }
            } else {
                let psi = need(&inst.separable, "table or separable function")?;
                for e in values {
                    let q = parse_point(field(e, "p")?)?;
                    good &= psi.conjugate(&q)? == parse_ext(field(e, "value")?)?;
                }
            }
            checks.push(("conjugate_values", good));
        }
        "subdiff" => {
            let f = need(&inst.table, "table")?;
            let x = parse_point(field(p, "point")?)?;
            let bx = parse_box(field(p, "box")?)?;
            match report.status.as_str() {
                "subgradient_found" => {
                    let q = parse_point(field(p, "subgradient")?)?.to_rational();
                    checks.push(("membership", membership_check(f, &x, &q)?));
                    checks.push(("in_box", bx.contains(&q)?));
                }
                _ => {
                    // Negative answers: replay the recorded back-substitution.
                    let replay = integral_subgradient_with_trace(f, &x, &bx);
                    let same = match (&replay, report.status.as_str()) {
                        (Ok(t), "empty") => {
                            t.result.is_none()
                                && Value::Array(t.steps.iter().map(step_json).collect()) == *field(p, "steps")?
                        }
                        (Err(Error::NotIntegrallyConvex(_)), "no_integral_subgradient") => true,
                        _ => false,
                    };
                    checks.push(("trace_replay", same));
                }
            }
        }
        "fenchel" if report.status == "gap_report" => {
            let f = need(&inst.table, "table")?;
            let g = match &inst.concave_table {
                Some(g) => g.clone(),
                None => concave_psi(inst)?.tabulate(&f.bounding_box())?,
            };
            let chain: Vec<String> = field(p, "chain")?
                .as_array()
                .map(|a| a.iter().filter_map(|v| v.as_str().map(str::to_owned)).collect())
                .unwrap_or_default();
            let num = |s: &str| -> Option<Rational> {
                match s {
                    "-inf" | "+inf" => None,
                    _ => parse_rat(&json!(s)).ok(),
                }
            };
            if let Some(x) = field(p, "minimizer")?.as_array().map(|_| parse_point(&p["minimizer"])) {
                let x = x?;
                let at = f.get(&x).and_then(|fx| g.get(&x).map(|gx| fx - gx));
                let claimed = chain.first().and_then(|s| num(s)).map(|r| r.to_integer());
                checks.push(("discrete_min_value", at.is_some() && at == claimed));
            }
            // -inf < finite < +inf; compare as (rank, value).
            let key = |s: &str| match s {
                "-inf" => (0, None),
                "+inf" => (2, None),
                _ => (1, num(s)),
            };
            let ordered = chain.len() == 4 && chain.windows(2).all(|w| key(&w[1]) <= key(&w[0]));
            checks.push(("chain_order", ordered));
        }
        "fenchel" => {
            let f = need(&inst.table, "table")?;
            let psi = concave_psi(inst)?;
            let cert = DualityCertificate {
                primal_point: parse_point(field(p, "primal_point")?)?,
                dual_point: parse_point(field(p, "dual_point")?)?,
                primal_value: parse_int(field(p, "primal_value")?)?,
                dual_value: parse_int(field(p, "dual_value")?)?,
                trace: CertificateTrace {
                    primal_argmax: true,
                    concave_argmin: true,
                    dual_box: parse_box(field(p, "dual_box")?)?,
                    conjugate_f: parse_int(field(p, "conjugate_f")?)?,
                    conjugate_psi: parse_int(field(p, "conjugate_psi")?)?,
                },
            };
            checks.push(("certificate", cert.verify(f, &psi)?));
            let dp = cert.dual_point.to_rational();
            checks.push(("dual_in_box", cert.trace.dual_box.contains(&dp)?));
            checks.push(("subgradient", membership_check(f, &cert.primal_point, &dp)?));
        }
        "bisub-cgk" | "bisub-fp" => {
            let f = need(&inst.bisub, "bisubmodular function")?;
            verify_minmax(f, report, &mut checks)?;
        }
        "bisub-conv" => {
            let f = need(&inst.bisub, "bisubmodular function")?;
            let params = field(p, "params")?;
            let alpha = i64_list(field(params, "alpha")?)?;
            let beta = i64_list(field(params, "beta")?)?;
            let conv = parse_bisub(f.ground_size(), field(p, "table")?)?;
            checks.push(("bisubmodular", is_bisubmodular(&conv).holds));
            let lo = alpha.iter().min().copied().unwrap_or(0) - 1;
            let hi = beta.iter().max().copied().unwrap_or(0) + 1;
            let samples = half_integer_samples(f.ground_size(), lo, hi);
            checks.push(("polyhedron", convolution_audit(f, &conv, &alpha, &beta, &samples)?));
        }
        other => {
            return Err(Error::InfeasiblePrecondition(format!(
                "cannot verify command {other:?}"
            )));
        }
    }
    Ok(checks)
}

fn verify_minmax(f: &BisubFunction, report: &Report, checks: &mut Checks) -> Result<()> {
    let p = &report.payload;
    let n = f.ground_size();
    let params = field(p, "params")?;
    let z = parse_point(field(p, "primal_witness")?)?;
    let s = parse_signed(n, field(p, "dual_witness")?)?;
    let lhs = parse_int(field(p, "lhs")?)?;
    let rhs = parse_int(field(p, "rhs")?)?;
    let in_x = |i: usize| s[i] == 1;
    let in_y = |i: usize| s[i] == -1;
    let (bounds_ok, objective, dual) = if report.command == "bisub-cgk" {
        let w: Vec<BigInt> = field(params, "w")?
            .as_array()
            .ok_or_else(|| Error::InfeasiblePrecondition("w must be a list".into()))?
            .iter()
            .map(parse_int)
            .collect::<Result<_>>()?;
        let bounds_ok = z.coords().iter().zip(&w).all(|(a, b)| a <= b);
        let objective: BigInt = z.coords().iter().sum();
        // f(X,Y) + w(N \ X) + w(Y)
        let dual = (0..n).fold(f.value(&s).clone(), |acc, i| {
            let mut acc = acc;
            if !in_x(i) {
                acc += &w[i];
            }
            if in_y(i) {
                acc += &w[i];
            }
            acc
        });
        (bounds_ok, objective, dual)
    } else {
        let alpha = i64_list(field(params, "alpha")?)?;
        let beta = i64_list(field(params, "beta")?)?;
        let ab = signed_pair(n, &usize_list(field(params, "A")?)?, &usize_list(field(params, "B")?)?)?;
        let bounds_ok = z
            .coords()
            .iter()
            .enumerate()
            .all(|(i, c)| *c >= BigInt::from(alpha[i]) && *c <= BigInt::from(beta[i]));
        let objective: BigInt = (0..n).map(|i| &z.0[i] * BigInt::from(ab[i])).sum();
        // f(X,Y) + beta(A\X) + beta(Y\B) - alpha(B\Y) - alpha(X\A)
        let mut dual = f.value(&s).clone();
        for i in 0..n {
            let (a, b) = (ab[i] == 1, ab[i] == -1);
            if a && !in_x(i) {
                dual += beta[i];
            }
            if in_y(i) && !b {
                dual += beta[i];
            }
            if b && !in_y(i) {
                dual -= alpha[i];
            }
            if in_x(i) && !a {
                dual -= alpha[i];
            }
        }
        (bounds_ok, objective, dual)
    };
    checks.push((
        "primal_feasible",
        polyhedron_membership(f, &z.to_rational())? && bounds_ok,
    ));
    checks.push(("primal_value", objective == lhs));
    checks.push(("dual_value", dual == rhs));
    checks.push(("equality", lhs == rhs));
    Ok(())
}
