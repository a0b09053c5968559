//! Text formats: scale descriptions, series specifications and tabulated
//! samples.

use std::collections::BTreeMap;
use std::io::Read;

use serde::de::{self, Deserializer};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};
use crate::scale::TimeScale;
use crate::series::{CoefficientRule, SeriesSpec, TruncationPolicy};

/// A rational written as a JSON string (`"3/4"`, `"-0.25"`) or integer.
#[derive(Debug, Clone)]
struct Rat(Rational);

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => parse_rational(&s).map(Rat).map_err(de::Error::custom),
            Raw::Int(n) => Ok(Rat(Rational::from_integer(n.into()))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ScaleDoc {
    Real,
    Uniform { offset: Option<Rat>, step: Rat },
    Finite { points: Vec<Rat> },
}

impl ScaleDoc {
    fn build(self) -> Result<TimeScale> {
        match self {
            ScaleDoc::Real => Ok(TimeScale::real()),
            ScaleDoc::Uniform { offset, step } => {
                TimeScale::uniform(offset.map(|r| r.0).unwrap_or_default(), step.0)
            }
            ScaleDoc::Finite { points } => TimeScale::finite(points.into_iter().map(|r| r.0).collect()),
        }
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// `{"type":"real"}`, `{"type":"uniform","offset":"0","step":"1/2"}` or
/// `{"type":"finite","points":["0","1","3/2"]}`.
pub fn parse_scale_json(text: &str) -> Result<TimeScale> {
    serde_json::from_str::<ScaleDoc>(text).map_err(json_error)?.build()
}

/// Scale as given on the command line: `r`, `real`, `z`, `cz:<c>`,
/// `uniform:<offset>,<step>`, `finite:<p>,<p>,…`, or a JSON document.
pub fn parse_scale_arg(text: &str) -> Result<TimeScale> {
    let text = text.trim();
    if text.starts_with('{') {
        return parse_scale_json(text);
    }
    let (head, rest) = match text.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (text, None),
    };
    match (head.to_ascii_lowercase().as_str(), rest) {
        ("r" | "real", None) => Ok(TimeScale::real()),
        ("z", None) => Ok(TimeScale::integers()),
        ("cz", Some(c)) => TimeScale::uniform(Rational::default(), parse_rational(c)?),
        ("uniform", Some(r)) => match parse_list(r)?.as_slice() {
            [offset, step] => TimeScale::uniform(offset.clone(), step.clone()),
            _ => Err(Error::Parse("uniform scale needs <offset>,<step>".into())),
        },
        ("finite", Some(r)) => TimeScale::finite(parse_list(r)?),
        _ => Err(Error::Parse(format!("unrecognised scale {text:?}"))),
    }
}

/// Comma-separated rationals.
pub fn parse_list(text: &str) -> Result<Vec<Rational>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|s| parse_rational(s.trim())).collect()
}

#[derive(Debug, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase", deny_unknown_fields)]
enum RuleDoc {
    Geometric { p: Rat, scale: Option<Rat> },
    Explicit { values: Vec<Rat> },
    Taylor { #[serde(rename = "fn")] function: String },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyDoc {
    max_terms: Option<usize>,
    abs_tol: Option<f64>,
    consecutive_small: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesDoc {
    alpha: Option<Rat>,
    t0: Rat,
    scale: ScaleDoc,
    a: Option<RuleDoc>,
    b: Option<RuleDoc>,
    policy: Option<PolicyDoc>,
}

/// Fallbacks for fields a series document leaves out.
#[derive(Debug, Clone)]
pub struct SeriesDefaults {
    pub policy: TruncationPolicy,
    /// Whether `taylor` rules may read files through `table:` functions.
    pub allow_files: bool,
}

impl Default for SeriesDefaults {
    fn default() -> Self {
        Self { policy: TruncationPolicy::default(), allow_files: true }
    }
}

pub fn parse_series_spec(text: &str) -> Result<SeriesSpec> {
    parse_series_spec_with(text, &SeriesDefaults::default())
}

/// Series document, e.g.
/// `{"alpha":"1/2","t0":"0","scale":{"type":"uniform","step":"1"},
///   "a":{"rule":"geometric","p":"1"},"b":{"rule":"explicit","values":["1"]}}`.
/// A missing branch is the zero series.
pub fn parse_series_spec_with(text: &str, defaults: &SeriesDefaults) -> Result<SeriesSpec> {
    let doc: SeriesDoc = serde_json::from_str(text).map_err(json_error)?;
    let scale = doc.scale.build()?;
    let t0 = doc.t0.0;
    scale.check(&t0)?;
    let branch = |rule: Option<RuleDoc>, side: crate::series::Branch| -> Result<CoefficientRule> {
        Ok(match rule {
            None => CoefficientRule::zero(),
            Some(RuleDoc::Geometric { p, scale: s }) => CoefficientRule::Geometric {
                scale: s.map(|r| r.0).unwrap_or_else(|| Rational::from_integer(1.into())),
                ratio: p.0,
            },
            Some(RuleDoc::Explicit { values }) => CoefficientRule::Explicit(values.into_iter().map(|r| r.0).collect()),
            Some(RuleDoc::Taylor { function }) => {
                let spec = crate::funcspec::parse_function_spec(&function)?;
                if !defaults.allow_files && spec.reads_files() {
                    return Err(Error::Unsupported("tabulated functions are disabled here".into()));
                }
                let f = spec.build_exact(&scale)?;
                let s = crate::series::taylor_series_of(&f, side, &t0)?;
                match side {
                    crate::series::Branch::Delta => s.a,
                    crate::series::Branch::Nabla => s.b,
                }
            }
        })
    };
    let a = branch(doc.a, crate::series::Branch::Delta)?;
    let b = branch(doc.b, crate::series::Branch::Nabla)?;
    let p = doc.policy.unwrap_or_default();
    let base = &defaults.policy;
    let policy = TruncationPolicy {
        max_terms: p.max_terms.unwrap_or(base.max_terms),
        abs_tol: p.abs_tol.unwrap_or(base.abs_tol),
        consecutive_small: p.consecutive_small.unwrap_or(base.consecutive_small),
    };
    let alpha = doc.alpha.map(|r| r.0).unwrap_or_else(|| Rational::from_integer(1.into()));
    SeriesSpec::new(alpha, t0, a, b, scale)?.with_policy(policy)
}

/// Two-column `t,value` CSV with rational entries. A header row whose
/// first field is `t` is skipped; blank lines and `#` comments are ignored.
pub fn parse_table(reader: impl Read) -> Result<BTreeMap<Rational, Rational>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut out = BTreeMap::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if i == 0 && record.get(0).is_some_and(|s| s.eq_ignore_ascii_case("t")) {
            continue;
        }
        let line = i + 1;
        if record.len() != 2 {
            return Err(Error::Parse(format!("row {line}: expected 2 columns, found {}", record.len())));
        }
        let t = parse_rational(&record[0]).map_err(|e| Error::Parse(format!("row {line}: {e}")))?;
        let v = parse_rational(&record[1]).map_err(|e| Error::Parse(format!("row {line}: {e}")))?;
        if let Some(old) = out.insert(t.clone(), v.clone()) {
            if old != v {
                return Err(Error::Parse(format!("row {line}: conflicting values for t = {}", &record[0])));
            }
        }
    }
    Ok(out)
}
