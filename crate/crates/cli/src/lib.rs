//! The `coverdist` command line, callable in-process for tests.
//!
//! Exit codes: `0` success, `2` invalid input (including rejected
//! certificates), `3` resource or budget refusal, `4` internal soundness
//! failure.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use coverdist::bounds::{moduli_eta_majorant, BoundError};
use coverdist::distortion::{contribution, sum_rationals};
use coverdist::json::{self as cj, JsonError};
use coverdist::ring::{primes_up_to_norm, RingError};
use coverdist::{
    BoundConfig, BoundEngine, CertifyOutcome, CoveringInstance, Coverage, DeltaPolicy, DistortionError,
    FieldSpec, Limits, SystemError,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Budget(String),
    #[error("internal soundness failure: {0}")]
    Soundness(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Soundness(_) => 4,
        }
    }
}

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        match e {
            JsonError::Ring(r) => r.into(),
            e => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        match e {
            RingError::EnumerationTooLarge { .. } | RingError::NormTooLargeToFactor(_) => CliError::Budget(e.to_string()),
            e => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<SystemError> for CliError {
    fn from(e: SystemError) -> Self {
        match e {
            SystemError::Ring(r) => r.into(),
            SystemError::Problem(p) => CliError::Soundness(p.to_string()),
            e => CliError::Invalid(format!("{e:?}: {e}")),
        }
    }
}

impl From<DistortionError> for CliError {
    fn from(e: DistortionError) -> Self {
        match e {
            DistortionError::DeltaOutOfRange { .. } | DistortionError::DeltaCount { .. } => {
                CliError::Invalid(e.to_string())
            }
            e => CliError::Soundness(e.to_string()),
        }
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::SearchBudgetExceeded(_) | BoundError::YTooSmall { .. } => CliError::Budget(e.to_string()),
            BoundError::System(s) => s.into(),
            e => CliError::Invalid(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "coverdist", version, about = "Covering systems over Z and quadratic fields: coverage checks, distortion certificates, effective bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Largest residue-ring size that may be enumerated.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_enum: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide coverage by enumerating the residues mod Q.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the distortion method and emit a non-cover certificate if η < 1.
    Certify {
        #[arg(long)]
        input: PathBuf,
        /// threshold:y or explicit:"δ_1,δ_2,…" (default threshold:s³).
        #[arg(long)]
        delta: Option<String>,
    },
    /// Residue-free η majorant for a list of moduli.
    CertifyModuli {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        delta: Option<String>,
        /// Multiplicity to assume (at least the actual one).
        #[arg(long)]
        s: Option<usize>,
    },
    /// Per-level moment table.
    Moments {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Effective minimum-norm bound for multiplicity s.
    Bound {
        #[arg(long)]
        field: String,
        #[arg(long)]
        s: usize,
        /// log2 of the largest cutoff y to try.
        #[arg(long, default_value_t = BoundConfig::default().max_y_log2)]
        max_y_log2: u32,
    },
    /// Ad-hoc ideal operations on JSON ideals.
    IdealTool {
        #[arg(value_enum)]
        op: IdealOp,
        #[arg(long)]
        field: String,
        /// Ideal as JSON: 12, {"hnf":[u,v,w]}, {"gens":[...]} or {"principal":x}.
        #[arg(long)]
        ideal: String,
        /// Second ideal (intersect, mul).
        #[arg(long)]
        other: Option<String>,
    },
    /// List prime ideals of norm at most y.
    Primes {
        #[arg(long)]
        field: String,
        #[arg(long)]
        y: u64,
    },
    /// Re-check a certificate from its own numbers.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Instance file; when given, non-cover certificates are also re-derived from it.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdealOp {
    Norm,
    Factor,
    Distinguishable,
    Intersect,
    Mul,
}

/// What a finished invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse the arguments (including `argv[0]`) and run.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let limits = Limits { max_enum: cli.common.max_enum, ..Limits::default() };
    match dispatch(&cli.command, &limits) {
        Ok(report) => {
            let body = match cli.common.format {
                Format::Json => cj::to_canonical_string(&report.json),
                Format::Text => report.text,
            };
            if let Some(path) = &cli.common.output {
                if let Err(e) = std::fs::write(path, &body) {
                    return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {}: {e}\n", path.display()) };
                }
                return Outcome { code: report.code, stdout: String::new(), stderr: String::new() };
            }
            Outcome { code: report.code, stdout: body, stderr: String::new() }
        }
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

struct Report {
    json: Value,
    text: String,
    code: i32,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, code: 0 }
    }
}

fn read_json(path: &PathBuf) -> Result<Value, CliError> {
    let raw = std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn load_instance(path: &PathBuf, limits: &Limits) -> Result<CoveringInstance, CliError> {
    let (field, classes) = cj::parse_instance(&read_json(path)?)?;
    Ok(CoveringInstance::validate(&field, classes, *limits)?)
}

fn parse_field(s: &str) -> Result<FieldSpec, CliError> {
    Ok(cj::parse_field_str(s)?)
}

/// `threshold:y` or `explicit:δ_1,δ_2,…`.
pub fn parse_delta(s: &str) -> Result<DeltaPolicy, CliError> {
    let bad = |m: &str| CliError::Invalid(format!("--delta {s:?}: {m}"));
    if let Some(y) = s.strip_prefix("threshold:") {
        let y: BigInt = y.trim().parse().map_err(|_| bad("threshold needs an integer"))?;
        return Ok(DeltaPolicy::Threshold(y));
    }
    if let Some(list) = s.strip_prefix("explicit:") {
        let list = list.trim().trim_matches('"');
        if list.is_empty() {
            return Ok(DeltaPolicy::Explicit(Vec::new()));
        }
        let ds = list
            .split(',')
            .map(|t| cj::parse_rational_str(t).map_err(|_| bad("entries are rationals like 0 or 1/2")))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(DeltaPolicy::Explicit(ds));
    }
    Err(bad("expected threshold:y or explicit:list"))
}

fn policy_for(delta: &Option<String>, s: usize) -> Result<(DeltaPolicy, String), CliError> {
    match delta {
        Some(d) => Ok((parse_delta(d)?, d.clone())),
        None => {
            let y = BigInt::from(s).pow(3);
            let label = format!("threshold:{y}");
            Ok((DeltaPolicy::Threshold(y), label))
        }
    }
}

fn rat(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn dispatch(cmd: &Command, limits: &Limits) -> Result<Report, CliError> {
    match cmd {
        Command::Check { input } => cmd_check(&load_instance(input, limits)?),
        Command::Certify { input, delta } => cmd_certify(&load_instance(input, limits)?, delta),
        Command::CertifyModuli { input, delta, s } => cmd_certify_moduli(input, delta, *s, limits),
        Command::Moments { input, delta } => cmd_moments(&load_instance(input, limits)?, delta),
        Command::Bound { field, s, max_y_log2 } => cmd_bound(&parse_field(field)?, *s, *max_y_log2),
        Command::IdealTool { op, field, ideal, other } => cmd_ideal_tool(*op, &parse_field(field)?, ideal, other, limits),
        Command::Primes { field, y } => cmd_primes(&parse_field(field)?, *y, limits),
        Command::Verify { input, instance } => cmd_verify(input, instance.as_ref(), limits),
    }
}

fn cmd_check(inst: &CoveringInstance) -> Result<Report, CliError> {
    let field = inst.field();
    let mut j = json!({ "command": "check", "field": cj::field_to_json(field), "modulus_q": cj::ideal_to_json(inst.modulus_q()) });
    let text = match inst.covers()? {
        Coverage::Covers => {
            j["verdict"] = json!("covers");
            format!("covers: every residue mod {} lies in some class\n", inst.modulus_q())
        }
        Coverage::Uncovered(x) => {
            j["verdict"] = json!("uncovered");
            j["witness"] = cj::element_to_json(field, &x);
            format!("uncovered: witness {}\n", cj::element_to_json(field, &x))
        }
    };
    Ok(Report::ok(j, text))
}

fn level_text(inst: &CoveringInstance, out: &mut String, rows: &[coverdist::MomentReport]) {
    let _ = writeln!(out, "{:>3}  {:>8}  {:>6}  {:>16}  {:>16}  {:>16}", "j", "norm", "delta", "M1", "M2", "contribution");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>3}  {:>8}  {:>6}  {:>16}  {:>16}  {:>16}",
            r.j,
            inst.prime(r.j).norm().to_string(),
            rat(&r.delta),
            rat(&r.m1),
            rat(&r.m2),
            rat(&r.contribution)
        );
    }
}

fn prime_order_text(inst: &CoveringInstance) -> String {
    let parts: Vec<String> = inst
        .primes()
        .iter()
        .enumerate()
        .map(|(i, (p, e))| format!("p{}={}^{}", i + 1, p, e))
        .collect();
    format!("prime order: {}\n", parts.join(", "))
}

fn cmd_certify(inst: &CoveringInstance, delta: &Option<String>) -> Result<Report, CliError> {
    let (policy, label) = policy_for(delta, inst.multiplicity())?;
    let deltas = policy.resolve(&inst.prime_norms())?;
    let problem = inst.distortion_problem()?;
    let outcome = problem.certify(&deltas)?;
    // brute force is available whenever the engine ran
    let coverage = inst.covers()?;
    let mut j = json!({
        "command": "certify",
        "delta_policy": label,
        "field": cj::field_to_json(inst.field()),
        "prime_order": cj::prime_order_to_json(inst),
    });
    let mut text = prime_order_text(inst);
    match &outcome {
        CertifyOutcome::Certificate(cert) => {
            if coverage == Coverage::Covers {
                return Err(CliError::Soundness("certificate issued for a covering system".into()));
            }
            let w = inst.residue_at(cert.witness);
            if inst.classes().iter().any(|c| c.modulus.in_class(&w, &c.residue)) {
                return Err(CliError::Soundness("certificate witness is covered".into()));
            }
            let body = cj::noncover_to_json(inst, cert);
            for (k, v) in body.as_object().expect("object") {
                j[k] = v.clone();
            }
            j["verdict"] = json!("certified-noncover");
            j["brute_force"] = json!("uncovered");
            level_text(inst, &mut text, &cert.reports);
            let _ = writeln!(text, "η = {} < 1: certified non-cover, witness {}", rat(&cert.eta), cj::element_to_json(inst.field(), &w));
        }
        CertifyOutcome::Inconclusive { eta, reports } => {
            j["verdict"] = json!("inconclusive");
            j["eta"] = cj::rational_to_json(eta);
            j["levels"] = cj::moment_table_to_json(inst, reports);
            j["brute_force"] = json!(if coverage == Coverage::Covers { "covers" } else { "uncovered" });
            level_text(inst, &mut text, reports);
            let _ = writeln!(text, "η = {} ≥ 1: inconclusive", rat(eta));
        }
    }
    Ok(Report::ok(j, text))
}

fn cmd_moments(inst: &CoveringInstance, delta: &Option<String>) -> Result<Report, CliError> {
    let (policy, label) = policy_for(delta, inst.multiplicity())?;
    let deltas = policy.resolve(&inst.prime_norms())?;
    let out = inst.distortion_problem()?.run(&deltas, false)?;
    let j = json!({
        "command": "moments",
        "delta_policy": label,
        "eta": cj::rational_to_json(&out.eta),
        "field": cj::field_to_json(inst.field()),
        "levels": cj::moment_table_to_json(inst, &out.reports),
        "prime_order": cj::prime_order_to_json(inst),
    });
    let mut text = prime_order_text(inst);
    level_text(inst, &mut text, &out.reports);
    let _ = writeln!(text, "η = {}", rat(&out.eta));
    Ok(Report::ok(j, text))
}

/// Moduli whose smallest norm is at least this many bits are also tried
/// against the effective bound.
const EFFECTIVE_ROUTE_BITS: u64 = 1000;

fn cmd_certify_moduli(
    input: &PathBuf,
    delta: &Option<String>,
    s: Option<usize>,
    limits: &Limits,
) -> Result<Report, CliError> {
    let (field, moduli, file_s) = cj::parse_moduli(&read_json(input)?)?;
    let inst = CoveringInstance::from_moduli(&field, moduli, s.or(file_s), *limits)?;
    let s = inst.multiplicity();
    let (policy, label) = policy_for(delta, s)?;
    let deltas = policy.resolve(&inst.prime_norms())?;
    let (rows, eta) = moduli_eta_majorant(&inst, &deltas);
    let min_norm = inst.min_norm();
    let mut j = json!({
        "command": "certify-moduli",
        "delta_policy": label,
        "eta_major": cj::rational_to_json(&eta),
        "field": cj::field_to_json(&field),
        "levels": cj::majorant_table_to_json(&rows),
        "min_norm": cj::int_to_json(&min_norm),
        "prime_order": cj::prime_order_to_json(&inst),
        "s": s,
    });
    let mut text = prime_order_text(&inst);
    for r in &rows {
        let _ = writeln!(text, "j={} norm={} delta={} M2≤{} contribution≤{}", r.j, r.norm, rat(&r.delta), rat(&r.m2), rat(&r.contribution));
    }
    let _ = writeln!(text, "η ≤ {}", rat(&eta));
    if eta < BigRational::one() {
        j["route"] = json!("level-majorants");
        j["verdict"] = json!("certified-noncover");
        text.push_str("no residue assignment on these moduli covers\n");
        return Ok(Report::ok(j, text));
    }
    if min_norm.bits() >= EFFECTIVE_ROUTE_BITS {
        let mut engine = BoundEngine::new(&field, BoundConfig::default());
        let cert = engine.effective_bound(s)?;
        if min_norm > cert.x {
            j["route"] = json!("effective-bound");
            j["verdict"] = json!("certified-noncover");
            j["bound"] = cj::bound_certificate_to_json(&cert);
            let _ = writeln!(text, "smallest norm exceeds the effective bound ({}): no residue assignment on these moduli covers", cert.summary());
            return Ok(Report::ok(j, text));
        }
    }
    j["verdict"] = json!("inconclusive");
    text.push_str("inconclusive\n");
    Ok(Report::ok(j, text))
}

fn cmd_bound(field: &FieldSpec, s: usize, max_y_log2: u32) -> Result<Report, CliError> {
    if s == 0 {
        return Err(CliError::Invalid("s must be at least 1".into()));
    }
    let config = BoundConfig { max_y_log2, ..BoundConfig::default() };
    if max_y_log2 < config.y_min_log2 || max_y_log2 > 40 {
        return Err(CliError::Invalid(format!("--max-y-log2 must lie in [{}, 40]", config.y_min_log2)));
    }
    let cert = BoundEngine::new(field, config).effective_bound(s)?;
    cert.verify().map_err(CliError::Soundness)?;
    let mut j = cj::bound_certificate_to_json(&cert);
    j["command"] = json!("bound");
    let text = format!(
        "{}\ny = 2^{} ({} prime ideals), tail cutoff 2^{}\nη₁ ≤ {:.6e}, η₂ ≤ {:.6}\n",
        cert,
        cert.y.trailing_zeros(),
        cert.prime_count,
        cert.tail.z_log2,
        coverdist::bounds::certified::approx(&cert.eta1_major),
        coverdist::bounds::certified::approx(&cert.eta2_major),
    );
    Ok(Report::ok(j, text))
}

fn factor_text(field: &FieldSpec, f: &coverdist::IdealFactorization) -> String {
    if f.factors.is_empty() {
        return "(1)".into();
    }
    let parts: Vec<String> = f
        .factors
        .iter()
        .map(|(p, e)| {
            let base = if field.is_rational() { p.under.to_string() } else { p.to_string() };
            if *e == 1 {
                base
            } else {
                format!("{base}^{e}")
            }
        })
        .collect();
    parts.join("·")
}

fn cmd_ideal_tool(
    op: IdealOp,
    field: &FieldSpec,
    ideal: &str,
    other: &Option<String>,
    limits: &Limits,
) -> Result<Report, CliError> {
    let parse = |s: &str| -> Result<coverdist::Ideal, CliError> {
        let v: Value = serde_json::from_str(s).map_err(|e| CliError::Invalid(format!("ideal {s:?}: {e}")))?;
        Ok(cj::parse_ideal(field, &v)?)
    };
    let i = parse(ideal)?;
    let mut j = json!({ "command": "ideal-tool", "field": cj::field_to_json(field), "ideal": cj::ideal_to_json(&i) });
    let text = match op {
        IdealOp::Norm => {
            j["norm"] = cj::int_to_json(&i.norm());
            format!("norm {} = {}\n", i, i.norm())
        }
        IdealOp::Factor => {
            let f = field.factor_ideal(&i, limits)?;
            j["factorization"] = cj::factorization_to_json(&f);
            j["text"] = json!(factor_text(field, &f));
            format!("{} = {}\n", i, factor_text(field, &f))
        }
        IdealOp::Distinguishable => {
            let f = field.factor_ideal(&i, limits)?;
            let d = f.is_distinguishable();
            j["distinguishable"] = json!(d);
            j["p_min"] = match f.p_min() {
                Ok((p, e)) => json!({ "exponent": e, "prime": cj::prime_to_json(p) }),
                Err(_) => Value::Null,
            };
            format!("{} is {}distinguishable\n", i, if d { "" } else { "not " })
        }
        IdealOp::Intersect | IdealOp::Mul => {
            let other = other.as_deref().ok_or_else(|| CliError::Invalid("--other is required".into()))?;
            let k = parse(other)?;
            let r = if op == IdealOp::Intersect { i.intersect(&k) } else { field.ideal_mul(&i, &k) };
            j["other"] = cj::ideal_to_json(&k);
            j["result"] = cj::ideal_to_json(&r);
            format!("{r}\n")
        }
    };
    Ok(Report::ok(j, text))
}

fn cmd_primes(field: &FieldSpec, y: u64, limits: &Limits) -> Result<Report, CliError> {
    if y > limits.max_enum {
        return Err(CliError::Budget(format!("y = {y} exceeds --max-enum {}", limits.max_enum)));
    }
    let primes = primes_up_to_norm(field, y);
    let list: Vec<Value> = primes.iter().map(cj::prime_to_json).collect();
    let mut text = String::new();
    for p in &primes {
        let _ = writeln!(text, "{:>10}  {:<9} {}", p.norm().to_string(), p.splitting.as_str(), p);
    }
    let j = json!({ "command": "primes", "count": primes.len(), "field": cj::field_to_json(field), "primes": list, "y": y });
    Ok(Report::ok(j, text))
}

fn reject(msg: impl Into<String>) -> CliError {
    CliError::Invalid(format!("certificate rejected: {}", msg.into()))
}

fn cmd_verify(input: &PathBuf, instance: Option<&PathBuf>, limits: &Limits) -> Result<Report, CliError> {
    let v = read_json(input)?;
    if v.get("tail").is_some() {
        let cert = cj::parse_bound_certificate(&v)?;
        cert.verify().map_err(reject)?;
        let j = json!({ "command": "verify", "kind": "bound", "summary": cert.summary(), "valid": true });
        return Ok(Report::ok(j, format!("valid bound certificate: {}\n", cert.summary())));
    }
    if v.get("verdict").and_then(Value::as_str) != Some("certified-noncover") || v.get("levels").is_none() {
        return Err(CliError::Invalid("not a certificate (need a bound or certified-noncover report)".into()));
    }
    let eta = cj::parse_rational(v.get("eta").ok_or_else(|| reject("missing eta"))?)?;
    let levels = v["levels"].as_array().ok_or_else(|| reject("levels must be a list"))?;
    let mut contribs = Vec::with_capacity(levels.len());
    for row in levels {
        let g = |k: &str| -> Result<BigRational, CliError> {
            Ok(cj::parse_rational(row.get(k).ok_or_else(|| reject(format!("level row lacks {k}")))?)?)
        };
        let (d, m1, m2, c) = (g("delta")?, g("m1")?, g("m2")?, g("contribution")?);
        if d < BigRational::zero() || d > BigRational::new(1.into(), 2.into()) {
            return Err(reject("δ outside [0, 1/2]"));
        }
        if contribution(&m1, &m2, &d) != c {
            return Err(reject(format!("level row {row} has a wrong contribution")));
        }
        contribs.push(c);
    }
    if sum_rationals(&contribs) != eta {
        return Err(reject("η is not the sum of the level contributions"));
    }
    if eta >= BigRational::one() {
        return Err(reject("η ≥ 1"));
    }
    let mut rederived = false;
    if let Some(path) = instance {
        let inst = load_instance(path, limits)?;
        let label = v.get("delta_policy").and_then(Value::as_str).ok_or_else(|| reject("missing delta_policy"))?;
        let deltas = parse_delta(label)?.resolve(&inst.prime_norms())?;
        let out = inst.distortion_problem()?.run(&deltas, false)?;
        if cj::moment_table_to_json(&inst, &out.reports) != v["levels"] || out.eta != eta {
            return Err(reject("moment table differs from a fresh run on the instance"));
        }
        let w = cj::parse_element(inst.field(), v.get("witness").ok_or_else(|| reject("missing witness"))?)?;
        if inst.classes().iter().any(|c| c.modulus.in_class(&w, &c.residue)) {
            return Err(reject("witness lies in a class"));
        }
        rederived = true;
    }
    let j = json!({ "command": "verify", "eta": cj::rational_to_json(&eta), "kind": "noncover", "rederived": rederived, "valid": true });
    Ok(Report::ok(j, format!("valid non-cover certificate: η = {} < 1\n", rat(&eta))))
}
