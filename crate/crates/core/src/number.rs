//! Values as reported to callers: exact rationals or floats.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::rational::{format_rational, to_f64, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(Rational),
    Float(f64),
}

impl Number {
    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => to_f64(r),
            Number::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Float(_) => None,
        }
    }

    /// Weighted combination `w1 * a + w2 * b`; stays exact only if both
    /// operands are.
    pub fn combine(w1: &Rational, a: &Number, w2: &Rational, b: &Number) -> Number {
        match (a, b) {
            (Number::Exact(x), Number::Exact(y)) => Number::Exact(w1 * x + w2 * y),
            _ => Number::Float(to_f64(w1) * a.to_f64() + to_f64(w2) * b.to_f64()),
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) => f.write_str(&format_rational(r)),
            Number::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Number {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl From<Rational> for Number {
    fn from(r: Rational) -> Self {
        Number::Exact(r)
    }
}

impl From<f64> for Number {
    fn from(x: f64) -> Self {
        Number::Float(x)
    }
}
