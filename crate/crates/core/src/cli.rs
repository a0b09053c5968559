//! Command-line front end. Every command prints JSON lines on stdout;
//! sweeps can print CSV instead.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::calculus::{Accuracy, CalculusConfig, Computed, DerivKind, GridFunction};
use crate::error::{Error, Result};
use crate::funcspec::{parse_function_spec, Function};
use crate::monomials::{monomial, MonomialKind};
use crate::number::Number;
use crate::parse::{parse_scale_arg, parse_series_spec_with, SeriesDefaults};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::scalar::Scalar;
use crate::scale::TimeScale;
use crate::series::{series_eval, taylor_with_config, SeriesSpec, TaylorDirection, TruncationPolicy, Verdict};

/// Environment variable overriding the default series tolerance.
pub const ABS_TOL_ENV: &str = "TSCALE_ABS_TOL";

const MAX_SWEEP: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "tscale", version, about = "Calculus on time scales")]
pub struct Cli {
    /// JSON file with numerical settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generalized monomial h_k(t,t0) or ĥ_k(t,t0).
    Monomial(MonomialArgs),
    /// Evaluate a function.
    Eval(EvalArgs),
    /// Delta, nabla or diamond-alpha derivative.
    Deriv(DerivArgs),
    /// Delta, nabla or diamond-alpha integral.
    Integral(IntegralArgs),
    /// Taylor expansion with remainder.
    Taylor(TaylorArgs),
    /// Evaluate a series specification.
    Series(SeriesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpKind {
    Delta,
    Nabla,
    Diamond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirArg {
    Delta,
    Nabla,
    Combined,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MonomialArgs {
    #[arg(long, default_value = "z")]
    pub scale: String,
    #[arg(long, value_enum, default_value = "forward")]
    pub kind: KindArg,
    #[arg(short = 'k')]
    pub k: usize,
    #[arg(short = 't')]
    pub t: String,
    #[arg(long, default_value = "0")]
    pub t0: String,
    /// Also print the duality partner (−1)^k h_k(t0,t) or (−1)^k ĥ_k(t0,t).
    #[arg(long)]
    pub both: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    #[arg(long, default_value = "z")]
    pub scale: String,
    #[arg(long = "fn")]
    pub function: String,
    #[arg(short = 't')]
    pub t: String,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DerivArgs {
    #[arg(long, default_value = "z")]
    pub scale: String,
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long, value_enum, default_value = "delta")]
    pub kind: OpKind,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(short = 't')]
    pub t: String,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct IntegralArgs {
    #[arg(long, default_value = "z")]
    pub scale: String,
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long, value_enum, default_value = "delta")]
    pub kind: OpKind,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TaylorArgs {
    #[arg(long, default_value = "z")]
    pub scale: String,
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long = "dir", value_enum, default_value = "delta")]
    pub direction: DirArg,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(long, default_value = "0")]
    pub t0: String,
    #[arg(short = 't')]
    pub t: String,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SeriesArgs {
    /// Series specification (JSON).
    pub spec: PathBuf,
    #[arg(short = 't', required_unless_present = "sweep", conflicts_with = "sweep")]
    pub t: Option<String>,
    /// Evaluate at every grid point in [TMIN, TMAX].
    #[arg(long, num_args = 2, value_names = ["TMIN", "TMAX"])]
    pub sweep: Option<Vec<String>>,
    /// Sweep spacing on the real line.
    #[arg(long, requires = "sweep")]
    pub step: Option<String>,
    /// CSV output for sweeps.
    #[arg(long, requires = "sweep")]
    pub csv: bool,
    /// Report a truncated value even when the series is judged divergent.
    #[arg(long)]
    pub force: bool,
}

/// Numerical settings read from `--config`.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub fd_step: Option<f64>,
    pub quad_tol: Option<f64>,
    pub quad_max_depth: Option<u32>,
    pub abs_tol: Option<f64>,
    pub max_terms: Option<usize>,
    pub consecutive_small: Option<usize>,
}

/// Resolved settings: built-in defaults, then the environment override,
/// then the config file.
#[derive(Debug, Clone)]
pub struct Settings {
    pub calculus: CalculusConfig,
    pub policy: TruncationPolicy,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Settings {
    pub fn resolve(config: Option<&ConfigFile>, env_abs_tol: Option<&str>) -> Result<Self> {
        let mut calculus = CalculusConfig::default();
        let mut policy = TruncationPolicy::default();
        if let Some(text) = env_abs_tol {
            policy.abs_tol = text
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("{ABS_TOL_ENV}: {e}")))?;
        }
        if let Some(c) = config {
            if let Some(h) = c.fd_step {
                calculus = calculus.with_fd_step(h)?;
            }
            if let Some(tol) = c.quad_tol {
                calculus = calculus.with_quad_tol(tol)?;
            }
            if let Some(d) = c.quad_max_depth {
                calculus = calculus.with_quad_max_depth(d)?;
            }
            policy.abs_tol = c.abs_tol.unwrap_or(policy.abs_tol);
            policy.max_terms = c.max_terms.unwrap_or(policy.max_terms);
            policy.consecutive_small = c.consecutive_small.unwrap_or(policy.consecutive_small);
        }
        policy.validate()?;
        Ok(Self { calculus, policy })
    }

    pub fn load(path: Option<&PathBuf>) -> Result<Self> {
        let config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                Some(ConfigFile::parse(&text)?)
            }
            None => None,
        };
        let env = std::env::var(ABS_TOL_ENV).ok();
        Self::resolve(config.as_ref(), env.as_deref())
    }
}

/// One line of output.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub command: &'static str,
    pub inputs: BTreeMap<&'static str, String>,
    /// Exact values as `p/q`, others as decimals; `null` when withheld.
    pub value: Option<Number>,
    pub exact: bool,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub fields: serde_json::Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Value>,
}

impl OutputRecord {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            inputs: BTreeMap::new(),
            value: None,
            exact: false,
            fields: serde_json::Map::new(),
            diagnostics: None,
        }
    }

    fn input(mut self, key: &'static str, value: impl ToString) -> Self {
        self.inputs.insert(key, value.to_string());
        self
    }

    fn value(mut self, value: Number) -> Self {
        self.exact = value.is_exact();
        self.value = Some(value);
        self
    }

    fn field(mut self, key: &str, value: impl Serialize) -> Self {
        self.fields.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }
}

/// What a command produced, and the exit code it implies.
pub struct Outcome {
    pub lines: Vec<String>,
    pub exit_code: i32,
}

impl Outcome {
    fn records(records: Vec<OutputRecord>, exit_code: i32) -> Result<Self> {
        let lines = records
            .iter()
            .map(|r| serde_json::to_string(r).map_err(|e| Error::Invalid(e.to_string())))
            .collect::<Result<_>>()?;
        Ok(Self { lines, exit_code })
    }
}

/// Values that can be reported.
trait Report: Scalar {
    fn number(&self) -> Number;
}

impl Report for Rational {
    fn number(&self) -> Number {
        Number::Exact(self.clone())
    }
}

impl Report for f64 {
    fn number(&self) -> Number {
        Number::Float(*self)
    }
}

fn reported<V: Report>(c: &Computed<V>) -> Number {
    match c.accuracy {
        Accuracy::Exact => c.value.number(),
        _ => Number::Float(c.value.number().to_f64()),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let settings = Settings::load(cli.config.as_ref())?;
    run_with(&cli.command, &settings)
}

pub fn run_with(command: &Command, settings: &Settings) -> Result<Outcome> {
    match command {
        Command::Monomial(a) => Outcome::records(vec![cmd_monomial(a)?], 0),
        Command::Eval(a) => Outcome::records(vec![cmd_eval(a)?], 0),
        Command::Deriv(a) => Outcome::records(vec![cmd_deriv(a, settings)?], 0),
        Command::Integral(a) => Outcome::records(vec![cmd_integral(a, settings)?], 0),
        Command::Taylor(a) => Outcome::records(vec![cmd_taylor(a, settings)?], 0),
        Command::Series(a) => cmd_series(a, settings),
    }
}

fn point(text: &str) -> Result<Rational> {
    parse_rational(text)
}

pub fn cmd_monomial(a: &MonomialArgs) -> Result<OutputRecord> {
    let scale = parse_scale_arg(&a.scale)?;
    let (t, t0) = (point(&a.t)?, point(&a.t0)?);
    let kind = match a.kind {
        KindArg::Forward => MonomialKind::Forward,
        KindArg::Backward => MonomialKind::Backward,
    };
    let value = monomial(&scale, kind, a.k, &t, &t0)?;
    let mut rec = OutputRecord::new("monomial")
        .input("scale", &scale)
        .input("kind", format!("{:?}", a.kind).to_lowercase())
        .input("k", a.k)
        .input("t", format_rational(&t))
        .input("t0", format_rational(&t0))
        .value(Number::Exact(value));
    if a.both {
        let other = match kind {
            MonomialKind::Forward => MonomialKind::Backward,
            MonomialKind::Backward => MonomialKind::Forward,
        };
        let mut partner = monomial(&scale, other, a.k, &t0, &t)?;
        if a.k % 2 == 1 {
            partner = -partner;
        }
        let name = if other == MonomialKind::Forward { "h" } else { "ĥ" };
        rec = rec
            .field("partner", Number::Exact(partner))
            .field("partner_expr", format!("(-1)^{} {name}_{}(t0,t)", a.k, a.k));
    }
    Ok(rec)
}

fn build_function(scale: &str, function: &str) -> Result<(TimeScale, Function)> {
    let scale = parse_scale_arg(scale)?;
    let f = parse_function_spec(function)?.build(&scale)?;
    Ok((scale, f))
}

fn deriv_kind(kind: OpKind, alpha: Option<&str>) -> Result<DerivKind> {
    match (kind, alpha) {
        (OpKind::Delta, None) => Ok(DerivKind::Delta),
        (OpKind::Nabla, None) => Ok(DerivKind::Nabla),
        (OpKind::Diamond, Some(a)) => DerivKind::diamond(parse_rational(a)?),
        (OpKind::Diamond, None) => Err(Error::Invalid("--kind diamond needs --alpha".into())),
        (_, Some(_)) => Err(Error::Invalid("--alpha applies to --kind diamond only".into())),
    }
}

fn kind_label(kind: &DerivKind) -> String {
    match kind {
        DerivKind::Delta => "delta".into(),
        DerivKind::Nabla => "nabla".into(),
        DerivKind::Diamond(a) => format!("diamond({})", format_rational(a)),
    }
}

fn with_computed<V: Report>(rec: OutputRecord, c: &Computed<V>) -> OutputRecord {
    let mut rec = rec.value(reported(c)).field("accuracy", c.accuracy);
    if let Some(w) = &c.warning {
        rec = rec.field("warning", w);
    }
    rec
}

pub fn cmd_eval(a: &EvalArgs) -> Result<OutputRecord> {
    let (scale, f) = build_function(&a.scale, &a.function)?;
    let t = point(&a.t)?;
    let rec = OutputRecord::new("eval").input("scale", &scale).input("fn", &a.function).input("t", format_rational(&t));
    Ok(match f {
        Function::Exact(f) => with_computed(rec, &computed(f.eval(&t)?, f.accuracy())),
        Function::Float(f) => with_computed(rec, &computed(f.eval(&t)?, f.accuracy())),
    })
}

fn computed<V>(value: V, accuracy: Accuracy) -> Computed<V> {
    Computed { value, accuracy, warning: None }
}

pub fn cmd_deriv(a: &DerivArgs, settings: &Settings) -> Result<OutputRecord> {
    let (scale, f) = build_function(&a.scale, &a.function)?;
    let kind = deriv_kind(a.kind, a.alpha.as_deref())?;
    let t = point(&a.t)?;
    let rec = OutputRecord::new("deriv")
        .input("scale", &scale)
        .input("fn", &a.function)
        .input("kind", kind_label(&kind))
        .input("t", format_rational(&t));
    let cfg = &settings.calculus;
    Ok(match f {
        Function::Exact(f) => with_computed(rec, &cfg.derivative(&f, &kind, &t)?),
        Function::Float(f) => with_computed(rec, &cfg.derivative(&f, &kind, &t)?),
    })
}

fn integrate<V: Scalar>(
    cfg: &CalculusConfig,
    f: &GridFunction<V>,
    kind: &DerivKind,
    a: &Rational,
    b: &Rational,
) -> Result<Computed<V>> {
    match kind {
        DerivKind::Delta => cfg.delta_integral(f, a, b),
        DerivKind::Nabla => cfg.nabla_integral(f, a, b),
        DerivKind::Diamond(alpha) => cfg.diamond_integral(f, a, b, alpha),
    }
}

pub fn cmd_integral(a: &IntegralArgs, settings: &Settings) -> Result<OutputRecord> {
    let (scale, f) = build_function(&a.scale, &a.function)?;
    let kind = deriv_kind(a.kind, a.alpha.as_deref())?;
    let (from, to) = (point(&a.from)?, point(&a.to)?);
    let rec = OutputRecord::new("integral")
        .input("scale", &scale)
        .input("fn", &a.function)
        .input("kind", kind_label(&kind))
        .input("from", format_rational(&from))
        .input("to", format_rational(&to));
    let cfg = &settings.calculus;
    Ok(match f {
        Function::Exact(f) => with_computed(rec, &integrate(cfg, &f, &kind, &from, &to)?),
        Function::Float(f) => with_computed(rec, &integrate(cfg, &f, &kind, &from, &to)?),
    })
}

fn taylor_record<V: Report>(
    rec: OutputRecord,
    cfg: &CalculusConfig,
    f: &GridFunction<V>,
    dir: &TaylorDirection,
    n: usize,
    t0: &Rational,
    t: &Rational,
) -> Result<OutputRecord> {
    let e = taylor_with_config(cfg, f, dir, n, t0, t)?;
    let exact = e.accuracy == Accuracy::Exact;
    let num = |v: &V| if exact { v.number() } else { Number::Float(v.number().to_f64()) };
    let list = |v: &[V]| v.iter().map(num).collect::<Vec<_>>();
    let closes = if exact {
        e.reconstructed == e.target
    } else {
        (e.reconstructed.number().to_f64() - e.target.number().to_f64()).abs()
            <= 1e-6 * (1.0 + e.target.number().to_f64().abs())
    };
    let mut rec = rec
        .value(num(&e.reconstructed))
        .field("partial_sum", num(&e.partial_sum))
        .field("remainder", num(&e.remainder))
        .field("reconstructed", num(&e.reconstructed))
        .field("target", num(&e.target))
        .field("closes", closes)
        .field("accuracy", e.accuracy);
    if !e.delta_coefficients.is_empty() {
        rec = rec.field("delta_coefficients", list(&e.delta_coefficients));
    }
    if !e.nabla_coefficients.is_empty() {
        rec = rec.field("nabla_coefficients", list(&e.nabla_coefficients));
    }
    if let Some(d) = &e.degraded {
        rec = rec.field("degraded", d);
    }
    Ok(rec)
}

pub fn cmd_taylor(a: &TaylorArgs, settings: &Settings) -> Result<OutputRecord> {
    let (scale, f) = build_function(&a.scale, &a.function)?;
    let dir = match (a.direction, a.alpha.as_deref()) {
        (DirArg::Delta, None) => TaylorDirection::Delta,
        (DirArg::Nabla, None) => TaylorDirection::Nabla,
        (DirArg::Combined, Some(alpha)) => {
            let alpha = parse_rational(alpha)?;
            crate::calculus::check_alpha(&alpha)?;
            TaylorDirection::Combined(alpha)
        }
        (DirArg::Combined, None) => return Err(Error::Invalid("--dir combined needs --alpha".into())),
        (_, Some(_)) => return Err(Error::Invalid("--alpha applies to --dir combined only".into())),
    };
    let (t0, t) = (point(&a.t0)?, point(&a.t)?);
    let rec = OutputRecord::new("taylor")
        .input("scale", &scale)
        .input("fn", &a.function)
        .input("dir", &dir)
        .input("n", a.n)
        .input("t0", format_rational(&t0))
        .input("t", format_rational(&t));
    let cfg = &settings.calculus;
    match f {
        Function::Exact(f) => taylor_record(rec, cfg, &f, &dir, a.n, &t0, &t),
        Function::Float(f) => taylor_record(rec, cfg, &f, &dir, a.n, &t0, &t),
    }
}

fn load_series(a: &SeriesArgs, settings: &Settings) -> Result<SeriesSpec> {
    let text = std::fs::read_to_string(&a.spec).map_err(|e| Error::Io(format!("{}: {e}", a.spec.display())))?;
    let defaults = SeriesDefaults { policy: settings.policy.clone(), allow_files: true };
    parse_series_spec_with(&text, &defaults)
}

struct SweepRow {
    t: Rational,
    value: Option<Number>,
    verdict: Verdict,
    terms_used: usize,
    report: Value,
}

fn sweep_points(spec: &SeriesSpec, lo: &Rational, hi: &Rational, step: Option<&Rational>) -> Result<Vec<Rational>> {
    if lo > hi {
        return Err(Error::Invalid("sweep needs TMIN <= TMAX".into()));
    }
    match (&spec.scale, step) {
        (TimeScale::Real, Some(h)) => {
            if h <= &Rational::default() {
                return Err(Error::Invalid("--step must be positive".into()));
            }
            let mut pts = Vec::new();
            let mut t = lo.clone();
            while &t <= hi {
                pts.push(t.clone());
                t += h;
                if pts.len() > MAX_SWEEP {
                    return Err(Error::Invalid("sweep too long".into()));
                }
            }
            Ok(pts)
        }
        (TimeScale::Real, None) => Err(Error::Invalid("a sweep on the real line needs --step".into())),
        (_, Some(_)) => Err(Error::Invalid("--step applies to the real line only".into())),
        (scale, None) => {
            if let Some(c) = scale.homogeneous_step() {
                if (hi - lo) / c > Rational::from_integer(MAX_SWEEP.into()) {
                    return Err(Error::Invalid("sweep too long".into()));
                }
            }
            scale.points_between(lo, hi)
        }
    }
}

pub fn cmd_series(a: &SeriesArgs, settings: &Settings) -> Result<Outcome> {
    let spec = load_series(a, settings)?;
    let base = |t: &Rational| {
        OutputRecord::new("series")
            .input("spec", a.spec.display())
            .input("scale", &spec.scale)
            .input("alpha", format_rational(&spec.alpha))
            .input("t0", format_rational(&spec.t0))
            .input("t", format_rational(t))
    };
    let Some(range) = &a.sweep else {
        let t = point(a.t.as_deref().expect("clap requires -t or --sweep"))?;
        let v = series_eval(&spec, &t, a.force)?;
        let withheld = v.value.is_none();
        let mut rec = base(&t).field("verdict", v.report.verdict);
        if let Some(x) = v.value.clone() {
            rec = rec.value(x);
        }
        rec.diagnostics = Some(serde_json::to_value(&v.report).map_err(|e| Error::Invalid(e.to_string()))?);
        return Outcome::records(vec![rec], if withheld { 4 } else { 0 });
    };
    let (lo, hi) = (point(&range[0])?, point(&range[1])?);
    let step = a.step.as_deref().map(point).transpose()?;
    let pts = sweep_points(&spec, &lo, &hi, step.as_ref())?;
    let rows: Vec<SweepRow> = pts
        .par_iter()
        .map(|t| {
            let v = series_eval(&spec, t, a.force)?;
            let terms_used = v.report.delta.iter().chain(v.report.nabla.iter()).map(|r| r.terms_used).sum();
            Ok(SweepRow {
                t: t.clone(),
                value: v.value,
                verdict: v.report.verdict,
                terms_used,
                report: serde_json::to_value(&v.report).map_err(|e| Error::Invalid(e.to_string()))?,
            })
        })
        .collect::<Result<_>>()?;
    let exit = if rows.iter().any(|r| r.value.is_none()) { 4 } else { 0 };
    if a.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["t", "value", "verdict", "terms_used"]).map_err(io)?;
        for r in &rows {
            let value = r.value.as_ref().map(|v| v.to_string()).unwrap_or_default();
            w.write_record([format_rational(&r.t), value, r.verdict.to_string(), r.terms_used.to_string()])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        let text = String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))?;
        return Ok(Outcome { lines: text.lines().map(str::to_string).collect(), exit_code: exit });
    }
    let records = rows
        .into_iter()
        .map(|r| {
            let mut rec = base(&r.t).field("verdict", r.verdict).field("terms_used", r.terms_used);
            if let Some(v) = r.value {
                rec = rec.value(v);
            }
            rec.diagnostics = Some(r.report);
            rec
        })
        .collect();
    Outcome::records(records, exit)
}

/// Error line printed on stderr.
pub fn error_line(e: &Error) -> String {
    json!({ "error": e.to_string(), "exit_code": e.exit_code() }).to_string()
}

/// Parses arguments, runs the command and writes its output. Returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            for line in &outcome.lines {
                if writeln!(out, "{line}").is_err() {
                    return 1;
                }
            }
            outcome.exit_code
        }
        Err(e) => {
            let _ = writeln!(err, "{}", error_line(&e));
            e.exit_code()
        }
    }
}
