//! Value types a grid function may take.
//!
//! Exact types (`Rational`, `Complex<Rational>`) keep every discrete-scale
//! identity an equality; floating types serve the continuous scale.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{Complex, One, Zero};

use crate::rational::{to_f64, Rational};

pub type ComplexRational = Complex<Rational>;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    /// Absolute value as a float, used for tolerances and ratio estimates.
    fn magnitude(&self) -> f64;

    fn is_finite(&self) -> bool {
        self.magnitude().is_finite()
    }

    /// `exp(self)` where the type supports it.
    fn try_exp(&self) -> Option<Self> {
        None
    }

    fn powi(&self, n: u64) -> Self {
        num::pow(self.clone(), n as usize)
    }
}

/// A real scalar paired with its complex counterpart, used by the
/// trigonometric families.
pub trait RealScalar: Scalar {
    type Complex: Scalar;

    fn to_complex(&self) -> Self::Complex;
    fn imaginary_unit() -> Self::Complex;
    fn re(z: &Self::Complex) -> Self;
    fn im(z: &Self::Complex) -> Self;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn magnitude(&self) -> f64 {
        to_f64(self).abs()
    }

    fn is_finite(&self) -> bool {
        true
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn try_exp(&self) -> Option<Self> {
        Some(self.exp())
    }

    fn powi(&self, n: u64) -> Self {
        match i32::try_from(n) {
            Ok(n) => f64::powi(*self, n),
            Err(_) => self.powf(n as f64),
        }
    }
}

impl Scalar for ComplexRational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        Complex::new(r.clone(), Rational::zero())
    }

    fn magnitude(&self) -> f64 {
        to_f64(&self.re).hypot(to_f64(&self.im))
    }

    fn is_finite(&self) -> bool {
        true
    }
}

impl Scalar for Complex<f64> {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        Complex::new(to_f64(r), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn try_exp(&self) -> Option<Self> {
        Some(self.exp())
    }
}

impl RealScalar for Rational {
    type Complex = ComplexRational;

    fn to_complex(&self) -> ComplexRational {
        Complex::new(self.clone(), Rational::zero())
    }

    fn imaginary_unit() -> ComplexRational {
        Complex::new(Rational::zero(), Rational::one())
    }

    fn re(z: &ComplexRational) -> Self {
        z.re.clone()
    }

    fn im(z: &ComplexRational) -> Self {
        z.im.clone()
    }
}

impl RealScalar for f64 {
    type Complex = Complex<f64>;

    fn to_complex(&self) -> Complex<f64> {
        Complex::new(*self, 0.0)
    }

    fn imaginary_unit() -> Complex<f64> {
        Complex::new(0.0, 1.0)
    }

    fn re(z: &Complex<f64>) -> Self {
        z.re
    }

    fn im(z: &Complex<f64>) -> Self {
        z.im
    }
}
