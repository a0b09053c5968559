//! The function mini-grammar used on the command line and in `taylor`
//! coefficient rules:
//!
//! ```text
//! exp:p=<rat>[,t0=<rat>]        hatexp:p=<rat>[,t0=<rat>]
//! sin|cos|sinh|cosh:p=<rat>[,t0=<rat>]   (prefix "hat" for the ∇ family)
//! pow2
//! mono:k=<int>[,kind=forward|backward][,t0=<rat>]
//! poly:<c0>,<c1>,…                c0 + c1 t + c2 t² + …
//! table:<path>                   two-column t,value CSV
//! ```

use std::fmt;
use std::fs::File;
use std::path::PathBuf;

use num::{ToPrimitive, Zero};

use crate::calculus::GridFunction;
use crate::error::{Error, Result};
use crate::monomials::{factorial, monomial, MonomialKind};
use crate::parse::{parse_list, parse_table};
use crate::rational::{format_rational, parse_rational, pow_rational, to_f64, Rational};
use crate::scale::TimeScale;
use crate::specials::{exp_function, trig_function, ExpKind, ExpParams, Coefficient, TrigFamily, TrigKind};

/// Closed-form derivatives attached on the real line.
const CHAIN_DEPTH: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Exp { p: Rational, kind: ExpKind, t0: Rational },
    Trig { family: TrigFamily, t0: Rational },
    Pow2,
    Monomial { k: usize, kind: MonomialKind, t0: Rational },
    Poly(Vec<Rational>),
    Table(PathBuf),
}

/// A built function: exact on discrete scales, floating on ℝ.
#[derive(Debug, Clone)]
pub enum Function {
    Exact(GridFunction<Rational>),
    Float(GridFunction<f64>),
}

impl Function {
    pub fn domain(&self) -> &TimeScale {
        match self {
            Function::Exact(f) => f.domain(),
            Function::Float(f) => f.domain(),
        }
    }
}

struct Params<'a> {
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(text: &'a str, allowed: &[&str]) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, found {item:?}")))?;
            let k = k.trim();
            if !allowed.contains(&k) {
                return Err(Error::Parse(format!("unknown parameter {k:?}")));
            }
            if pairs.iter().any(|(seen, _)| *seen == k) {
                return Err(Error::Parse(format!("parameter {k:?} given twice")));
            }
            pairs.push((k, v.trim()));
        }
        Ok(Self { pairs })
    }

    fn get(&self, key: &str) -> Option<&'a str> {
        self.pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn rational(&self, key: &str) -> Result<Option<Rational>> {
        self.get(key).map(parse_rational).transpose()
    }

    fn required(&self, key: &str) -> Result<Rational> {
        self.rational(key)?.ok_or_else(|| Error::Parse(format!("missing parameter {key}")))
    }

    fn origin(&self) -> Result<Rational> {
        Ok(self.rational("t0")?.unwrap_or_default())
    }
}

pub fn parse_function_spec(text: &str) -> Result<FunctionSpec> {
    let text = text.trim();
    let (head, rest) = match text.split_once(':') {
        Some((h, r)) => (h.trim(), r),
        None => (text, ""),
    };
    let trig = |name: &str| -> Option<(TrigKind, bool)> {
        let (hatted, base) = match name.strip_prefix("hat") {
            Some(b) => (true, b),
            None => (false, name),
        };
        let kind = match base {
            "sin" => TrigKind::Sin,
            "cos" => TrigKind::Cos,
            "sinh" => TrigKind::Sinh,
            "cosh" => TrigKind::Cosh,
            _ => return None,
        };
        Some((kind, hatted))
    };
    match head {
        "exp" | "hatexp" => {
            let p = Params::parse(rest, &["p", "t0"])?;
            let kind = if head == "exp" { ExpKind::Delta } else { ExpKind::Nabla };
            Ok(FunctionSpec::Exp { p: p.required("p")?, kind, t0: p.origin()? })
        }
        "pow2" if rest.trim().is_empty() => Ok(FunctionSpec::Pow2),
        "mono" => {
            let p = Params::parse(rest, &["k", "kind", "t0"])?;
            let k = p
                .get("k")
                .ok_or_else(|| Error::Parse("missing parameter k".into()))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("k: {e}")))?;
            if k > crate::monomials::DEFAULT_MAX_ORDER {
                return Err(Error::Parse(format!("monomial order {k} is too large")));
            }
            let kind = match p.get("kind").unwrap_or("forward") {
                "forward" | "delta" => MonomialKind::Forward,
                "backward" | "nabla" => MonomialKind::Backward,
                other => return Err(Error::Parse(format!("unknown monomial kind {other:?}"))),
            };
            Ok(FunctionSpec::Monomial { k, kind, t0: p.origin()? })
        }
        "poly" => Ok(FunctionSpec::Poly(parse_list(rest)?)),
        "table" if !rest.trim().is_empty() => Ok(FunctionSpec::Table(PathBuf::from(rest.trim()))),
        name => match trig(name) {
            Some((kind, hatted)) => {
                let p = Params::parse(rest, &["p", "t0"])?;
                Ok(FunctionSpec::Trig { family: TrigFamily::new(kind, hatted, p.required("p")?), t0: p.origin()? })
            }
            None => Err(Error::Parse(format!("unrecognised function {text:?}"))),
        },
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Exp { p, kind, t0 } => {
                let name = if *kind == ExpKind::Delta { "exp" } else { "hatexp" };
                write!(f, "{name}:p={},t0={}", format_rational(p), format_rational(t0))
            }
            FunctionSpec::Trig { family, t0 } => {
                write!(f, "{}:p={},t0={}", family.name(), format_rational(&family.p), format_rational(t0))
            }
            FunctionSpec::Pow2 => f.write_str("pow2"),
            FunctionSpec::Monomial { k, kind, t0 } => {
                let kind = if *kind == MonomialKind::Forward { "forward" } else { "backward" };
                write!(f, "mono:k={k},kind={kind},t0={}", format_rational(t0))
            }
            FunctionSpec::Poly(c) => {
                let c: Vec<String> = c.iter().map(format_rational).collect();
                write!(f, "poly:{}", c.join(","))
            }
            FunctionSpec::Table(p) => write!(f, "table:{}", p.display()),
        }
    }
}

impl FunctionSpec {
    pub fn reads_files(&self) -> bool {
        matches!(self, FunctionSpec::Table(_))
    }

    /// Exact on discrete scales, floating with attached derivatives on ℝ.
    pub fn build(&self, scale: &TimeScale) -> Result<Function> {
        if scale.is_dense() {
            self.build_float(scale).map(Function::Float)
        } else {
            self.build_exact(scale).map(Function::Exact)
        }
    }

    pub fn build_exact(&self, scale: &TimeScale) -> Result<GridFunction<Rational>> {
        if scale.is_dense() {
            return Err(Error::Unsupported(format!("{self} has no exact form on the real line")));
        }
        let s = scale.clone();
        Ok(match self {
            FunctionSpec::Exp { p, kind, t0 } => {
                exp_function(scale, &ExpParams { p: Coefficient::Constant(p.clone()), kind: *kind, t0: t0.clone() })
            }
            FunctionSpec::Trig { family, t0 } => trig_function::<Rational>(scale, family, t0),
            FunctionSpec::Pow2 => GridFunction::try_new(s, |t: &Rational| {
                if !t.is_integer() {
                    return Err(Error::Unsupported(format!("2^t is irrational at t = {}", format_rational(t))));
                }
                let n = t.to_integer().to_i64().ok_or_else(|| Error::Invalid("exponent out of range".into()))?;
                if n.unsigned_abs() > 1 << 20 {
                    return Err(Error::Invalid("exponent out of range".into()));
                }
                pow_rational(&Rational::from_integer(2.into()), n)
            }),
            FunctionSpec::Monomial { k, kind, t0 } => {
                let (k, kind, t0) = (*k, *kind, t0.clone());
                GridFunction::try_new(s.clone(), move |t: &Rational| monomial(&s, kind, k, t, &t0))
            }
            FunctionSpec::Poly(c) => {
                let c = c.clone();
                GridFunction::new(s, move |t: &Rational| horner(&c, t))
            }
            FunctionSpec::Table(path) => {
                let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                GridFunction::from_samples(s, parse_table(file)?)?
            }
        })
    }

    pub fn build_float(&self, scale: &TimeScale) -> Result<GridFunction<f64>> {
        if !scale.is_dense() {
            return Err(Error::Unsupported("floating functions are built on the real line only".into()));
        }
        Ok(match self {
            FunctionSpec::Exp { p, kind, t0 } => {
                exp_function(scale, &ExpParams { p: Coefficient::Constant(to_f64(p)), kind: *kind, t0: t0.clone() })
            }
            FunctionSpec::Trig { family, t0 } => trig_function::<f64>(scale, family, t0),
            FunctionSpec::Pow2 => exp_function(scale, &ExpParams::delta(std::f64::consts::LN_2, Rational::zero())),
            FunctionSpec::Monomial { k, t0, .. } => {
                // (t−t0)^k/k! as the polynomial expanded about t0
                let mut c = vec![0.0; *k + 1];
                c[*k] = 1.0 / to_f64(&Rational::from_integer(factorial(*k as u64)));
                float_poly_chain(scale, c, to_f64(t0))
            }
            FunctionSpec::Poly(c) => float_poly_chain(scale, c.iter().map(to_f64).collect(), 0.0),
            FunctionSpec::Table(_) => {
                return Err(Error::Unsupported("tabulated functions need a discrete scale".into()));
            }
        })
    }
}

fn horner(c: &[Rational], t: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, a| acc * t + a)
}

/// `Σ c_j (t − shift)^j` with its derivatives attached.
fn float_poly_chain(scale: &TimeScale, coeffs: Vec<f64>, shift: f64) -> GridFunction<f64> {
    let mut levels = vec![coeffs];
    for _ in 0..CHAIN_DEPTH {
        let last = levels.last().expect("nonempty");
        let d: Vec<f64> = last.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect();
        levels.push(d);
    }
    let mut chain: Option<GridFunction<f64>> = None;
    for c in levels.into_iter().rev() {
        let f = GridFunction::new(scale.clone(), move |t: &Rational| {
            let x = to_f64(t) - shift;
            c.iter().rev().fold(0.0, |acc, a| acc * x + a)
        });
        chain = Some(match chain {
            Some(d) => f.with_derivative(d),
            None => f,
        });
    }
    chain.expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{delta_derivative, nabla_derivative};
    use crate::rational::{int, ratio};

    #[test]
    fn grammar() {
        assert_eq!(parse_function_spec("pow2").unwrap(), FunctionSpec::Pow2);
        assert_eq!(
            parse_function_spec("exp:p=1").unwrap(),
            FunctionSpec::Exp { p: int(1), kind: ExpKind::Delta, t0: int(0) }
        );
        assert_eq!(
            parse_function_spec("mono:k=3,kind=backward,t0=2").unwrap(),
            FunctionSpec::Monomial { k: 3, kind: MonomialKind::Backward, t0: int(2) }
        );
        assert_eq!(parse_function_spec("poly:1,0,1/2").unwrap(), FunctionSpec::Poly(vec![int(1), int(0), ratio(1, 2)]));
        assert!(matches!(parse_function_spec("hatcosh:p=1/2").unwrap(), FunctionSpec::Trig { .. }));
        for bad in ["", "exp", "exp:q=1", "exp:p=1,p=2", "mono:k=-1", "sec:p=1", "pow2:3", "table:"] {
            assert!(parse_function_spec(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn round_trips_through_display() {
        for text in ["exp:p=1/2,t0=1", "mono:k=4,kind=backward,t0=0", "poly:1,2,3", "pow2"] {
            let spec = parse_function_spec(text).unwrap();
            assert_eq!(parse_function_spec(&spec.to_string()).unwrap(), spec);
        }
    }

    #[test]
    fn exact_functions() {
        let z = TimeScale::integers();
        let f = parse_function_spec("pow2").unwrap().build_exact(&z).unwrap();
        assert_eq!(nabla_derivative(&f, &int(0)).unwrap().value, ratio(1, 2));
        let f = parse_function_spec("poly:0,0,1").unwrap().build_exact(&z).unwrap();
        assert_eq!(delta_derivative(&f, &int(3)).unwrap().value, int(7));
        let f = parse_function_spec("mono:k=3").unwrap().build_exact(&z).unwrap();
        assert_eq!(f.eval(&int(6)).unwrap(), int(20));
        let half = TimeScale::uniform(int(0), ratio(1, 2)).unwrap();
        let f = parse_function_spec("pow2").unwrap().build_exact(&half).unwrap();
        assert!(f.eval(&ratio(1, 2)).is_err());
    }

    #[test]
    fn float_functions() {
        let r = TimeScale::real();
        let f = parse_function_spec("poly:1,2,3").unwrap().build_float(&r).unwrap();
        let d = delta_derivative(&f, &int(2)).unwrap();
        assert_eq!(d.value, 14.0);
        assert!(parse_function_spec("table:x.csv").unwrap().build_float(&r).is_err());
        let f = parse_function_spec("pow2").unwrap().build_float(&r).unwrap();
        assert!((f.eval(&int(3)).unwrap() - 8.0).abs() < 1e-12);
    }
}
