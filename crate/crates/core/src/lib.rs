//! Calculus on time scales.
//!
//! Delta, nabla and diamond-alpha derivatives and integrals, generalized
//! monomials `h_k` / `ĥ_k`, exponential and trigonometric functions on time
//! scales, and combined delta/nabla polynomial series with Taylor expansion
//! and convergence diagnostics. Everything on discrete scales is computed in
//! exact rational arithmetic.

pub mod calculus;
pub mod cli;
pub mod error;
pub mod funcspec;
pub mod monomials;
pub mod number;
pub mod parse;
pub mod rational;
pub mod scalar;
pub mod scale;
pub mod series;
pub mod specials;

pub use calculus::{Accuracy, CalculusConfig, Computed, DerivKind, GridFunction};
pub use error::{Error, Result};
pub use monomials::MonomialKind;
pub use number::Number;
pub use rational::Rational;
pub use scalar::{ComplexRational, RealScalar, Scalar};
pub use scale::{PointClass, Side, TimeScale, TrimmedScale};
