//! Exponential, trigonometric and hyperbolic functions on time scales.
//!
//! On a uniform grid with constant `p` the exponentials have the product
//! forms `e_p(t,t0) = (1 + cp)^((t−t0)/c)` and `ê_p(t,t0) = (1 − cp)^(−(t−t0)/c)`;
//! with a variable coefficient they are finite products over the grid.
//! Trigonometric families are combinations of exponentials with imaginary
//! or real exponents.

use std::fmt;
use std::sync::Arc;

use num::{One, Signed, ToPrimitive, Zero};

use crate::calculus::{check_alpha, GridFunction};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::scalar::{RealScalar, Scalar};
use crate::scale::TimeScale;

/// Depth of the closed-form derivative chain attached on the real line.
const REAL_DERIVATIVE_DEPTH: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpKind {
    /// `e_p`, solving `y^Δ = p y`.
    Delta,
    /// `ê_p`, solving `y^∇ = p y`.
    Nabla,
}

#[derive(Clone)]
pub enum Coefficient<V> {
    Constant(V),
    Function(Arc<dyn Fn(&Rational) -> V + Send + Sync>),
}

impl<V: Scalar> Coefficient<V> {
    pub fn at(&self, t: &Rational) -> V {
        match self {
            Coefficient::Constant(p) => p.clone(),
            Coefficient::Function(f) => f(t),
        }
    }
}

impl<V: fmt::Debug> fmt::Debug for Coefficient<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Constant(p) => write!(f, "Constant({p:?})"),
            Coefficient::Function(_) => f.write_str("Function(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExpParams<V> {
    pub p: Coefficient<V>,
    pub kind: ExpKind,
    pub t0: Rational,
}

impl<V: Scalar> ExpParams<V> {
    pub fn delta(p: V, t0: Rational) -> Self {
        Self { p: Coefficient::Constant(p), kind: ExpKind::Delta, t0 }
    }

    pub fn nabla(p: V, t0: Rational) -> Self {
        Self { p: Coefficient::Constant(p), kind: ExpKind::Nabla, t0 }
    }
}

fn singular(what: &str, t: &Rational) -> Error {
    Error::Singular(format!("{what} vanishes at t = {}", format_rational(t)))
}

/// `e_p(t, t0)` or `ê_p(t, t0)`.
pub fn exp_eval<V: Scalar>(scale: &TimeScale, params: &ExpParams<V>, t: &Rational) -> Result<V> {
    scale.check(t)?;
    scale.check(&params.t0)?;
    let t0 = &params.t0;
    match (scale, &params.p) {
        (TimeScale::Real, Coefficient::Constant(p)) => {
            let x = p.clone() * V::from_rational(&(t - t0));
            x.try_exp()
                .ok_or_else(|| Error::Unsupported("continuous exponential needs a floating value type".into()))
        }
        (TimeScale::Real, Coefficient::Function(_)) => Err(Error::Unsupported(
            "variable coefficients on the real line are not supported".into(),
        )),
        (TimeScale::Uniform(g), Coefficient::Constant(p)) => {
            let c = V::from_rational(g.step());
            let steps = ((t - t0) / g.step())
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Invalid("exponent out of range".into()))?;
            let base = match params.kind {
                ExpKind::Delta => V::one() + c * p.clone(),
                ExpKind::Nabla => V::one() - c * p.clone(),
            };
            if base.is_zero() {
                return Err(singular(regressivity_label(params.kind), t0));
            }
            // ê_p uses the reciprocal base.
            let exponent = match params.kind {
                ExpKind::Delta => steps,
                ExpKind::Nabla => -steps,
            };
            let magnitude = base.powi(exponent.unsigned_abs());
            Ok(if exponent >= 0 { magnitude } else { V::one() / magnitude })
        }
        _ => exp_product(scale, params, t),
    }
}

fn regressivity_label(kind: ExpKind) -> &'static str {
    match kind {
        ExpKind::Delta => "1 + μp",
        ExpKind::Nabla => "1 − νp",
    }
}

/// `∏ (1 + μ(τ)p(τ))` over `[t0, t)`, or `∏ (1 − ν(τ)p(τ))^{-1}` over
/// `(t0, t]`, inverted when `t < t0`.
fn exp_product<V: Scalar>(scale: &TimeScale, params: &ExpParams<V>, t: &Rational) -> Result<V> {
    let t0 = &params.t0;
    let (lo, hi) = if t >= t0 { (t0, t) } else { (t, t0) };
    let pts = scale.points_between(lo, hi)?;
    let mut prod = V::one();
    for w in pts.windows(2) {
        let gap = V::from_rational(&(&w[1] - &w[0]));
        let factor = match params.kind {
            ExpKind::Delta => V::one() + gap * params.p.at(&w[0]),
            ExpKind::Nabla => V::one() - gap * params.p.at(&w[1]),
        };
        if factor.is_zero() {
            let at = match params.kind {
                ExpKind::Delta => &w[0],
                ExpKind::Nabla => &w[1],
            };
            return Err(singular(regressivity_label(params.kind), at));
        }
        prod = prod * factor;
    }
    let grows = matches!(params.kind, ExpKind::Delta) == (t >= t0);
    Ok(if grows { prod } else { V::one() / prod })
}

/// The exponential as a grid function, with closed-form derivatives
/// attached on the real line.
pub fn exp_function<V: Scalar>(scale: &TimeScale, params: &ExpParams<V>) -> GridFunction<V> {
    build_exp_function(scale, params, V::one(), REAL_DERIVATIVE_DEPTH)
}

fn build_exp_function<V: Scalar>(scale: &TimeScale, params: &ExpParams<V>, factor: V, depth: usize) -> GridFunction<V> {
    let (s, pr, fac) = (scale.clone(), params.clone(), factor.clone());
    let f = GridFunction::try_new(scale.clone(), move |t: &Rational| Ok(fac.clone() * exp_eval(&s, &pr, t)?));
    match (scale, &params.p) {
        (TimeScale::Real, Coefficient::Constant(p)) if depth > 0 => {
            f.with_derivative(build_exp_function(scale, params, factor * p.clone(), depth - 1))
        }
        _ => f,
    }
}

fn require_interior(scale: &TimeScale, t: &Rational) -> Result<(Rational, Rational)> {
    let rho = scale.rho(t)?;
    let sigma = scale.sigma(t)?;
    if scale.is_discrete() && (rho == *t || sigma == *t) {
        return Err(Error::Domain(format!("{} is not an interior point", format_rational(t))));
    }
    if scale.sigma(&rho)? != *t || scale.rho(&sigma)? != *t {
        return Err(Error::Domain(format!("jump operators do not invert at {}", format_rational(t))));
    }
    Ok((rho, sigma))
}

/// Closed-form ⋄α-derivative of `e_p` or `ê_p`:
/// `[α p + (1−α) p^ρ/(1 + ν p^ρ)] e_p` and
/// `[(1−α) p + α p^σ/(1 − μ p^σ)] ê_p`.
pub fn exp_diamond_derivative<V: Scalar>(
    scale: &TimeScale,
    params: &ExpParams<V>,
    t: &Rational,
    alpha: &Rational,
) -> Result<V> {
    check_alpha(alpha)?;
    let (rho, sigma) = require_interior(scale, t)?;
    let a = V::from_rational(alpha);
    let a1 = V::from_rational(&(Rational::one() - alpha));
    let value = exp_eval(scale, params, t)?;
    let p = params.p.at(t);
    let factor = match params.kind {
        ExpKind::Delta => {
            let p_rho = params.p.at(&rho);
            let denom = V::one() + V::from_rational(&scale.nu(t)?) * p_rho.clone();
            if denom.is_zero() {
                return Err(singular("1 + νp^ρ", t));
            }
            a * p + a1 * p_rho / denom
        }
        ExpKind::Nabla => {
            let p_sigma = params.p.at(&sigma);
            let denom = V::one() - V::from_rational(&scale.mu(t)?) * p_sigma.clone();
            if denom.is_zero() {
                return Err(singular("1 − μp^σ", t));
            }
            a1 * p + a * p_sigma / denom
        }
    };
    Ok(factor * value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrigKind {
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl TrigKind {
    fn hyperbolic(self) -> bool {
        matches!(self, TrigKind::Sinh | TrigKind::Cosh)
    }

    /// The function paired with this one in the derivative formulas.
    fn partner(self) -> Self {
        match self {
            TrigKind::Sin => TrigKind::Cos,
            TrigKind::Cos => TrigKind::Sin,
            TrigKind::Sinh => TrigKind::Cosh,
            TrigKind::Cosh => TrigKind::Sinh,
        }
    }
}

/// `sin_p`, `cos_p`, `sinh_p`, `cosh_p`, or their hatted (∇) versions, for a
/// constant real `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigFamily {
    pub kind: TrigKind,
    pub hatted: bool,
    pub p: Rational,
}

impl TrigFamily {
    pub fn new(kind: TrigKind, hatted: bool, p: Rational) -> Self {
        Self { kind, hatted, p }
    }

    fn with_kind(&self, kind: TrigKind) -> Self {
        Self { kind, ..self.clone() }
    }
}

impl TrigFamily {
    /// Function name without the parameter, e.g. `"hatcos"`.
    pub fn name(&self) -> String {
        let name = match self.kind {
            TrigKind::Sin => "sin",
            TrigKind::Cos => "cos",
            TrigKind::Sinh => "sinh",
            TrigKind::Cosh => "cosh",
        };
        if self.hatted { format!("hat{name}") } else { name.to_string() }
    }
}

impl fmt::Display for TrigFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.name(), format_rational(&self.p))
    }
}

pub fn trig_eval<R: RealScalar>(scale: &TimeScale, family: &TrigFamily, t: &Rational, t0: &Rational) -> Result<R> {
    if scale.homogeneous_step().is_none() {
        return Err(Error::Unsupported("trigonometric families need a homogeneous scale".into()));
    }
    let p = R::from_rational(&family.p).to_complex();
    let q = if family.kind.hyperbolic() { p } else { R::imaginary_unit() * p };
    let kind = if family.hatted { ExpKind::Nabla } else { ExpKind::Delta };
    let plus = exp_eval(scale, &ExpParams { p: Coefficient::Constant(q.clone()), kind, t0: t0.clone() }, t)?;
    let minus = exp_eval(scale, &ExpParams { p: Coefficient::Constant(-q), kind, t0: t0.clone() }, t)?;
    let two = R::from_rational(&Rational::from_integer(2.into())).to_complex();
    let z = match family.kind {
        TrigKind::Sin => (plus - minus) / (two * R::imaginary_unit()),
        TrigKind::Cos | TrigKind::Cosh => (plus + minus) / two,
        TrigKind::Sinh => (plus - minus) / two,
    };
    Ok(R::re(&z))
}

pub fn trig_function<R: RealScalar>(scale: &TimeScale, family: &TrigFamily, t0: &Rational) -> GridFunction<R> {
    build_trig_function(scale, family, t0, R::one(), REAL_DERIVATIVE_DEPTH)
}

fn build_trig_function<R: RealScalar>(
    scale: &TimeScale,
    family: &TrigFamily,
    t0: &Rational,
    factor: R,
    depth: usize,
) -> GridFunction<R> {
    let (s, fam, origin, fac) = (scale.clone(), family.clone(), t0.clone(), factor.clone());
    let f = GridFunction::try_new(scale.clone(), move |t: &Rational| Ok(fac.clone() * trig_eval::<R>(&s, &fam, t, &origin)?));
    if !scale.is_dense() || depth == 0 {
        return f;
    }
    // sin' = p cos, cos' = −p sin, sinh' = p cosh, cosh' = p sinh
    let p = R::from_rational(&family.p);
    let next = match family.kind {
        TrigKind::Cos => -(factor * p),
        _ => factor * p,
    };
    let d = build_trig_function(scale, &family.with_kind(family.kind.partner()), t0, next, depth - 1);
    f.with_derivative(d)
}

/// The ⋄α-derivative formulas for the four non-hatted functions in terms of
/// `ν(t)`, and for the hatted ones in terms of `μ(t)`, evaluated directly.
pub fn trig_diamond_derivative<R: RealScalar>(
    scale: &TimeScale,
    family: &TrigFamily,
    t: &Rational,
    t0: &Rational,
    alpha: &Rational,
) -> Result<R> {
    check_alpha(alpha)?;
    require_interior(scale, t)?;
    let gap = if family.hatted { scale.mu(t)? } else { scale.nu(t)? };
    let p = &family.p;
    let gp = &gap * p;
    let gp2 = &gp * &gp;
    let denom = if family.kind.hyperbolic() { Rational::one() - &gp2 } else { Rational::one() + &gp2 };
    if denom.is_zero() {
        let what = if family.hatted { "1 − μ²p²" } else { "1 − ν²p²" };
        return Err(singular(what, t));
    }
    let one = Rational::one();
    let a = alpha.clone();
    let a1 = &one - alpha;
    let this = trig_eval::<R>(scale, family, t, t0)?;
    let other = trig_eval::<R>(scale, &family.with_kind(family.kind.partner()), t, t0)?;
    let r = |x: &Rational| R::from_rational(x);
    let lead = r(&(p / &denom));
    // Weight of the partner function and of the function itself.
    let (w_other, w_this, sign) = match (family.hatted, family.kind) {
        (false, TrigKind::Sin) => (&one + &a * &gp2, &a1 * &gp, one.clone()),
        (false, TrigKind::Cos) => (&one + &a * &gp2, -(&a1 * &gp), -one.clone()),
        (false, TrigKind::Sinh) => (&one - &a * &gp2, -(&a1 * &gp), one.clone()),
        (false, TrigKind::Cosh) => (&one - &a * &gp2, -(&a1 * &gp), one.clone()),
        (true, TrigKind::Sin) => (&one + &a1 * &gp2, -(&a * &gp), one.clone()),
        (true, TrigKind::Cos) => (&one + &a1 * &gp2, &a * &gp, -one.clone()),
        (true, TrigKind::Sinh) => (&one - &a1 * &gp2, &a * &gp, one.clone()),
        (true, TrigKind::Cosh) => (&one - &a1 * &gp2, &a * &gp, one.clone()),
    };
    debug_assert!(!sign.is_zero() && sign.abs().is_one());
    Ok(r(&sign) * lead * (r(&w_other) * other + r(&w_this) * this))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{delta_derivative, diamond_derivative, nabla_derivative};
    use crate::rational::{int, ratio};

    #[test]
    fn pow2_is_unit_exponential() {
        let z = TimeScale::integers();
        let e = ExpParams::delta(int(1), int(0));
        for t in -5..=10 {
            let expect = if t >= 0 { int(1 << t) } else { ratio(1, 1 << (-t)) };
            assert_eq!(exp_eval(&z, &e, &int(t)).unwrap(), expect);
        }
    }

    #[test]
    fn origin_gives_one() {
        let s = TimeScale::uniform(int(0), ratio(1, 2)).unwrap();
        for kind in [ExpKind::Delta, ExpKind::Nabla] {
            let e = ExpParams { p: Coefficient::Constant(ratio(2, 3)), kind, t0: int(1) };
            assert_eq!(exp_eval(&s, &e, &int(1)).unwrap(), int(1));
        }
    }

    #[test]
    fn continuous_exponential() {
        let e = ExpParams::delta(2.0f64, int(0));
        let v = exp_eval(&TimeScale::real(), &e, &int(1)).unwrap();
        assert!((v - 2f64.exp()).abs() < 1e-12);
        let exact = ExpParams::delta(int(2), int(0));
        assert!(matches!(exp_eval(&TimeScale::real(), &exact, &int(1)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn regressivity_violations() {
        let z = TimeScale::integers();
        assert!(matches!(exp_eval(&z, &ExpParams::delta(int(-1), int(0)), &int(3)), Err(Error::Singular(_))));
        assert!(matches!(exp_eval(&z, &ExpParams::nabla(int(1), int(0)), &int(3)), Err(Error::Singular(_))));
        let g = TimeScale::finite(vec![int(0), int(2), int(3)]).unwrap();
        let e = ExpParams::delta(ratio(-1, 2), int(0));
        assert!(matches!(exp_eval(&g, &e, &int(3)), Err(Error::Singular(_))));
    }

    #[test]
    fn variable_coefficient_products() {
        let g = TimeScale::finite(vec![int(0), int(1), int(3), int(4)]).unwrap();
        let p: Coefficient<Rational> = Coefficient::Function(Arc::new(|t: &Rational| t + int(1)));
        let e = ExpParams { p: p.clone(), kind: ExpKind::Delta, t0: int(0) };
        // (1 + 1·1)(1 + 2·2)(1 + 1·4)
        assert_eq!(exp_eval(&g, &e, &int(4)).unwrap(), int(2 * 5 * 5));
        assert_eq!(exp_eval(&g, &ExpParams { t0: int(4), ..e.clone() }, &int(0)).unwrap(), ratio(1, 50));
        let f = exp_function(&g, &e);
        for t in [0, 1, 3] {
            let t = int(t);
            let d = delta_derivative(&f, &t).unwrap().value;
            assert_eq!(d, p.at(&t) * f.eval(&t).unwrap());
        }
        let e = ExpParams { p: p.clone(), kind: ExpKind::Nabla, t0: int(0) };
        let f = exp_function(&g, &ExpParams { p: Coefficient::Function(Arc::new(|_: &Rational| ratio(1, 5))), ..e });
        for t in [1, 3, 4] {
            let t = int(t);
            assert_eq!(nabla_derivative(&f, &t).unwrap().value, ratio(1, 5) * f.eval(&t).unwrap());
        }
    }

    #[test]
    fn diamond_derivative_example() {
        let z = TimeScale::integers();
        let e = ExpParams::delta(int(1), int(0));
        assert_eq!(exp_diamond_derivative(&z, &e, &int(2), &ratio(1, 2)).unwrap(), int(3));
        let f = exp_function(&z, &e);
        assert_eq!(diamond_derivative(&f, &int(2), &ratio(1, 2)).unwrap().value, int(3));
    }

    #[test]
    fn trig_at_origin_and_on_integers() {
        let z = TimeScale::integers();
        let sin = TrigFamily::new(TrigKind::Sin, false, int(1));
        let cos = TrigFamily::new(TrigKind::Cos, false, int(1));
        assert_eq!(trig_eval::<Rational>(&z, &sin, &int(4), &int(4)).unwrap(), int(0));
        assert_eq!(trig_eval::<Rational>(&z, &cos, &int(4), &int(4)).unwrap(), int(1));
        assert_eq!(trig_eval::<Rational>(&z, &cos, &int(2), &int(0)).unwrap(), int(0));
        assert_eq!(trig_eval::<Rational>(&z, &sin, &int(2), &int(0)).unwrap(), int(2));
    }

    #[test]
    fn continuous_trig_matches_std() {
        let r = TimeScale::real();
        let sin = TrigFamily::new(TrigKind::Sin, false, int(1));
        let cos = TrigFamily::new(TrigKind::Cos, true, int(1));
        let t = ratio(7, 5);
        let s: f64 = trig_eval(&r, &sin, &t, &int(0)).unwrap();
        let c: f64 = trig_eval(&r, &cos, &t, &int(0)).unwrap();
        assert!((s - 1.4f64.sin()).abs() < 1e-12);
        assert!((c - 1.4f64.cos()).abs() < 1e-12);
        let d: f64 = trig_diamond_derivative(&r, &sin, &t, &int(0), &ratio(1, 3)).unwrap();
        assert!((d - 1.4f64.cos()).abs() < 1e-12);
        let f = trig_function::<f64>(&r, &sin, &int(0));
        let d = delta_derivative(&f, &t).unwrap();
        assert!((d.value - 1.4f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_singularity_on_integers() {
        let z = TimeScale::integers();
        let sinh = TrigFamily::new(TrigKind::Sinh, false, int(1));
        assert!(matches!(trig_diamond_derivative::<Rational>(&z, &sinh, &int(2), &int(0), &ratio(1, 2)), Err(Error::Singular(_))));
        assert!(matches!(trig_eval::<Rational>(&z, &sinh, &int(2), &int(0)), Err(Error::Singular(_))));
    }

    #[test]
    fn trig_requires_homogeneous_scale() {
        let g = TimeScale::finite(vec![int(0), int(1), int(3)]).unwrap();
        let sin = TrigFamily::new(TrigKind::Sin, false, int(1));
        assert!(trig_eval::<Rational>(&g, &sin, &int(1), &int(0)).is_err());
    }
}
