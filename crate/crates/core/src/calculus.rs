//! Delta, nabla and diamond-alpha derivatives and integrals.
//!
//! On discrete scales every operator reduces to exact difference quotients
//! and weighted sums. On the real line a derivative uses an attached
//! closed-form derivative when one is available and otherwise falls back to
//! central differences; integrals use adaptive Simpson quadrature.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, from_f64, int, Rational};
use crate::scalar::Scalar;
use crate::scale::TimeScale;

/// How far a reported value may be from the mathematically exact one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Accuracy {
    /// Exact arithmetic throughout.
    Exact,
    /// Direct formula evaluated in floating point.
    Rounded,
    /// Numerical fallback (finite differences or quadrature).
    Approximate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Computed<V> {
    pub value: V,
    pub accuracy: Accuracy,
    /// Set when a numerical fallback produced a non-finite value.
    pub warning: Option<String>,
}

impl<V: Scalar> Computed<V> {
    fn new(value: V, accuracy: Accuracy) -> Self {
        let warning = (accuracy == Accuracy::Approximate && !value.is_finite())
            .then(|| "numerical fallback produced a non-finite value".to_string());
        Self { value, accuracy, warning }
    }

    pub fn is_exact(&self) -> bool {
        self.accuracy == Accuracy::Exact
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivKind {
    Delta,
    Nabla,
    Diamond(Rational),
}

impl DerivKind {
    pub fn diamond(alpha: Rational) -> Result<Self> {
        check_alpha(&alpha)?;
        Ok(DerivKind::Diamond(alpha).normalized())
    }

    /// `Diamond(1)` is `Delta` and `Diamond(0)` is `Nabla`.
    pub fn normalized(self) -> Self {
        match self {
            DerivKind::Diamond(a) if a.is_one() => DerivKind::Delta,
            DerivKind::Diamond(a) if a.is_zero() => DerivKind::Nabla,
            other => other,
        }
    }

    fn uses_forward(&self) -> bool {
        !matches!(self, DerivKind::Nabla)
    }

    fn uses_backward(&self) -> bool {
        !matches!(self, DerivKind::Delta)
    }
}

pub(crate) fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha.is_negative() || *alpha > Rational::one() {
        return Err(Error::Invalid(format!("alpha must lie in [0, 1], got {}", format_rational(alpha))));
    }
    Ok(())
}

/// Numerical settings for the continuous scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CalculusConfig {
    /// Central-difference step, `2^-20` by default.
    pub fd_step: Rational,
    /// Absolute tolerance of adaptive Simpson quadrature.
    pub quad_tol: f64,
    pub quad_max_depth: u32,
}

impl Default for CalculusConfig {
    fn default() -> Self {
        Self {
            fd_step: Rational::new(1.into(), num::pow(num::BigInt::from(2), 20)),
            quad_tol: 1e-10,
            quad_max_depth: 40,
        }
    }
}

impl CalculusConfig {
    pub fn with_fd_step(mut self, h: f64) -> Result<Self> {
        if h.is_nan() || h <= 0.0 {
            return Err(Error::Invalid(format!("finite-difference step must be positive, got {h}")));
        }
        self.fd_step = from_f64(h)?;
        Ok(self)
    }

    pub fn with_quad_tol(mut self, tol: f64) -> Result<Self> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Invalid(format!("quadrature tolerance must be positive, got {tol}")));
        }
        self.quad_tol = tol;
        Ok(self)
    }

    /// Bisection depth of the adaptive quadrature, at most 64.
    pub fn with_quad_max_depth(mut self, depth: u32) -> Result<Self> {
        if !(1..=64).contains(&depth) {
            return Err(Error::Invalid(format!("quadrature depth must be in 1..=64, got {depth}")));
        }
        self.quad_max_depth = depth;
        Ok(self)
    }
}

type Evaluator<V> = Arc<dyn Fn(&Rational) -> Result<V> + Send + Sync>;

/// A function on a time scale.
#[derive(Clone)]
pub struct GridFunction<V> {
    domain: TimeScale,
    source: Source<V>,
}

#[derive(Clone)]
enum Source<V> {
    Closure { eval: Evaluator<V>, derivative: Option<Arc<GridFunction<V>>> },
    Samples(Arc<BTreeMap<Rational, V>>),
    Derived { base: Arc<GridFunction<V>>, kinds: Vec<DerivKind>, config: CalculusConfig },
}

impl<V> fmt::Debug for GridFunction<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let source = match &self.source {
            Source::Closure { derivative, .. } => {
                if derivative.is_some() { "closure+derivative".to_string() } else { "closure".to_string() }
            }
            Source::Samples(s) => format!("{} samples", s.len()),
            Source::Derived { kinds, .. } => format!("derived {kinds:?}"),
        };
        f.debug_struct("GridFunction").field("domain", &self.domain).field("source", &source).finish()
    }
}

impl<V: Scalar> GridFunction<V> {
    pub fn new(domain: TimeScale, f: impl Fn(&Rational) -> V + Send + Sync + 'static) -> Self {
        Self::try_new(domain, move |t| Ok(f(t)))
    }

    pub fn try_new(domain: TimeScale, f: impl Fn(&Rational) -> Result<V> + Send + Sync + 'static) -> Self {
        Self { domain, source: Source::Closure { eval: Arc::new(f), derivative: None } }
    }

    /// Tabulated values. On a finite grid every point must be present; on an
    /// unbounded grid lookups outside the table are domain errors.
    pub fn from_samples(domain: TimeScale, samples: BTreeMap<Rational, V>) -> Result<Self> {
        if domain.is_dense() {
            return Err(Error::Unsupported("tabulated functions need a discrete scale".into()));
        }
        if let Some(t) = samples.keys().find(|t| !domain.contains(t)) {
            return Err(Error::Domain(format!("sample at {} is not a point of {domain}", format_rational(t))));
        }
        if let TimeScale::Finite(g) = &domain {
            if let Some(t) = g.points().iter().find(|t| !samples.contains_key(t)) {
                return Err(Error::Domain(format!("no sample for grid point {}", format_rational(t))));
            }
        }
        Ok(Self { domain, source: Source::Samples(Arc::new(samples)) })
    }

    /// Attaches a closed-form derivative, used on the real line instead of
    /// finite differences. Iterate to attach higher derivatives.
    pub fn with_derivative(mut self, derivative: GridFunction<V>) -> Self {
        if let Source::Closure { derivative: d, .. } = &mut self.source {
            *d = Some(Arc::new(derivative));
        }
        self
    }

    pub fn domain(&self) -> &TimeScale {
        &self.domain
    }

    pub fn eval(&self, t: &Rational) -> Result<V> {
        self.domain.check(t)?;
        match &self.source {
            Source::Closure { eval, .. } => eval(t),
            Source::Samples(s) => s
                .get(t)
                .cloned()
                .ok_or_else(|| Error::Domain(format!("no sample at {}", format_rational(t)))),
            Source::Derived { base, kinds, config } => {
                if base.domain.is_dense() {
                    eval_dense_derivative(base, kinds.len(), t, config)
                } else {
                    eval_stencil(base, kinds, t)
                }
            }
        }
    }

    pub fn accuracy(&self) -> Accuracy {
        let own = if V::EXACT { Accuracy::Exact } else { Accuracy::Rounded };
        match &self.source {
            Source::Derived { base, kinds, .. } if base.domain.is_dense() => {
                match base.closed_form_chain(kinds.len()) {
                    Some(g) => g.accuracy(),
                    None => Accuracy::Approximate,
                }
            }
            Source::Derived { base, .. } => base.accuracy(),
            _ => own,
        }
    }

    fn attached_derivative(&self) -> Option<&GridFunction<V>> {
        match &self.source {
            Source::Closure { derivative, .. } => derivative.as_deref(),
            _ => None,
        }
    }

    /// Follows attached derivatives `n` levels down.
    fn closed_form_chain(&self, n: usize) -> Option<&GridFunction<V>> {
        let mut g = self;
        for _ in 0..n {
            g = g.attached_derivative()?;
        }
        Some(g)
    }
}

fn eval_dense_derivative<V: Scalar>(
    base: &GridFunction<V>,
    order: usize,
    t: &Rational,
    config: &CalculusConfig,
) -> Result<V> {
    let mut g = base;
    let mut remaining = order;
    while remaining > 0 {
        match g.attached_derivative() {
            Some(d) => {
                g = d;
                remaining -= 1;
            }
            None => break,
        }
    }
    if remaining == 0 {
        return g.eval(t);
    }
    // Nested central differences lose accuracy quickly; widen the step with
    // the order.
    let widened = Rational::new(1.into(), num::pow(num::BigInt::from(2), 52 / (remaining + 2)));
    let h = if remaining == 1 { config.fd_step.clone() } else { widened.max(config.fd_step.clone()) };
    central_difference(g, remaining, t, &h)
}

fn central_difference<V: Scalar>(g: &GridFunction<V>, order: usize, t: &Rational, h: &Rational) -> Result<V> {
    if order == 0 {
        return g.eval(t);
    }
    let plus = central_difference(g, order - 1, &(t + h), h)?;
    let minus = central_difference(g, order - 1, &(t - h), h)?;
    Ok((plus - minus) / V::from_rational(&(h * int(2))))
}

/// Evaluates a chain of derivatives at `t` on a discrete scale by reducing
/// function values on the stencil of neighbouring points.
#[allow(clippy::needless_range_loop)]
fn eval_stencil<V: Scalar>(base: &GridFunction<V>, kinds: &[DerivKind], t: &Rational) -> Result<V> {
    let ahead = kinds.iter().filter(|k| k.uses_forward()).count();
    let behind = kinds.iter().filter(|k| k.uses_backward()).count();
    let scale = &base.domain;

    let mut points = Vec::with_capacity(ahead + behind + 1);
    let mut cur = t.clone();
    for _ in 0..behind {
        let prev = scale.rho(&cur)?;
        if prev == cur {
            return Err(no_neighbour(t, "backward"));
        }
        points.push(prev.clone());
        cur = prev;
    }
    points.reverse();
    points.push(t.clone());
    let mut cur = t.clone();
    for _ in 0..ahead {
        let next = scale.sigma(&cur)?;
        if next == cur {
            return Err(no_neighbour(t, "forward"));
        }
        points.push(next.clone());
        cur = next;
    }

    let mut values = points.iter().map(|p| base.eval(p)).collect::<Result<Vec<V>>>()?;
    let (mut lo, mut hi) = (0usize, points.len() - 1);
    for kind in kinds {
        let fwd = |v: &[V], i: usize| (v[i + 1].clone() - v[i].clone()) / V::from_rational(&(&points[i + 1] - &points[i]));
        let bwd = |v: &[V], i: usize| (v[i].clone() - v[i - 1].clone()) / V::from_rational(&(&points[i] - &points[i - 1]));
        let mut next = values.clone();
        match kind {
            DerivKind::Delta => {
                for i in lo..hi {
                    next[i] = fwd(&values, i);
                }
                hi -= 1;
            }
            DerivKind::Nabla => {
                for i in lo + 1..=hi {
                    next[i] = bwd(&values, i);
                }
                lo += 1;
            }
            DerivKind::Diamond(a) => {
                let w = V::from_rational(a);
                let w1 = V::from_rational(&(Rational::one() - a));
                for i in lo + 1..hi {
                    next[i] = w.clone() * fwd(&values, i) + w1.clone() * bwd(&values, i);
                }
                lo += 1;
                hi -= 1;
            }
        }
        values = next;
    }
    debug_assert_eq!(lo, hi);
    Ok(values.swap_remove(lo))
}

fn no_neighbour(t: &Rational, dir: &str) -> Error {
    Error::Domain(format!("{} has no {dir} neighbour at the required depth", format_rational(t)))
}

impl CalculusConfig {
    pub fn delta_derivative<V: Scalar>(&self, f: &GridFunction<V>, t: &Rational) -> Result<Computed<V>> {
        self.derivative(f, &DerivKind::Delta, t)
    }

    pub fn nabla_derivative<V: Scalar>(&self, f: &GridFunction<V>, t: &Rational) -> Result<Computed<V>> {
        self.derivative(f, &DerivKind::Nabla, t)
    }

    /// `α f^Δ(t) + (1 − α) f^∇(t)`. Both one-sided derivatives must exist
    /// unless `α` is an endpoint.
    pub fn diamond_derivative<V: Scalar>(&self, f: &GridFunction<V>, t: &Rational, alpha: &Rational) -> Result<Computed<V>> {
        self.derivative(f, &DerivKind::diamond(alpha.clone())?, t)
    }

    pub fn derivative<V: Scalar>(&self, f: &GridFunction<V>, kind: &DerivKind, t: &Rational) -> Result<Computed<V>> {
        f.domain.check(t)?;
        if f.domain.is_dense() {
            let d = self.iterated_derivative(f, kind.clone(), 1)?;
            let value = d.eval(t)?;
            return Ok(Computed::new(value, d.accuracy()));
        }
        let value = match kind.clone().normalized() {
            DerivKind::Delta => self.forward_quotient(f, t)?,
            DerivKind::Nabla => self.backward_quotient(f, t)?,
            DerivKind::Diamond(a) => {
                let fwd = self.forward_quotient(f, t)?;
                let bwd = self.backward_quotient(f, t)?;
                V::from_rational(&a) * fwd + V::from_rational(&(Rational::one() - &a)) * bwd
            }
        };
        Ok(Computed::new(value, f.accuracy()))
    }

    fn forward_quotient<V: Scalar>(&self, f: &GridFunction<V>, t: &Rational) -> Result<V> {
        let s = f.domain.sigma(t)?;
        if &s == t {
            return Err(no_neighbour(t, "forward"));
        }
        Ok((f.eval(&s)? - f.eval(t)?) / V::from_rational(&(s - t)))
    }

    fn backward_quotient<V: Scalar>(&self, f: &GridFunction<V>, t: &Rational) -> Result<V> {
        let r = f.domain.rho(t)?;
        if &r == t {
            return Err(no_neighbour(t, "backward"));
        }
        Ok((f.eval(t)? - f.eval(&r)?) / V::from_rational(&(t - r)))
    }

    /// Checks `f^∇(t) = f^Δ(ρ(t))` and `f^Δ(t) = f^∇(σ(t))`.
    pub fn cross_relation_check<V: Scalar>(&self, f: &GridFunction<V>, t: &Rational) -> Result<(bool, bool)> {
        let rho = f.domain.rho(t)?;
        let sigma = f.domain.sigma(t)?;
        let nabla_t = self.nabla_derivative(f, t)?.value;
        let delta_t = self.delta_derivative(f, t)?.value;
        let delta_rho = self.delta_derivative(f, &rho)?.value;
        let nabla_sigma = self.nabla_derivative(f, &sigma)?.value;
        Ok((nabla_t == delta_rho, delta_t == nabla_sigma))
    }

    /// `∫_a^b f(t) Δt`; reversed bounds flip the sign.
    pub fn delta_integral<V: Scalar>(&self, f: &GridFunction<V>, a: &Rational, b: &Rational) -> Result<Computed<V>> {
        self.integral(f, a, b, Side::Forward)
    }

    /// `∫_a^b f(t) ∇t`; reversed bounds flip the sign.
    pub fn nabla_integral<V: Scalar>(&self, f: &GridFunction<V>, a: &Rational, b: &Rational) -> Result<Computed<V>> {
        self.integral(f, a, b, Side::Backward)
    }

    /// `α ∫ f Δτ + (1 − α) ∫ f ∇τ`.
    pub fn diamond_integral<V: Scalar>(&self, f: &GridFunction<V>, a: &Rational, b: &Rational, alpha: &Rational) -> Result<Computed<V>> {
        check_alpha(alpha)?;
        if alpha.is_one() {
            return self.delta_integral(f, a, b);
        }
        if alpha.is_zero() {
            return self.nabla_integral(f, a, b);
        }
        let d = self.delta_integral(f, a, b)?;
        let n = self.nabla_integral(f, a, b)?;
        let value = V::from_rational(alpha) * d.value + V::from_rational(&(Rational::one() - alpha)) * n.value;
        Ok(Computed::new(value, d.accuracy.max(n.accuracy)))
    }

    fn integral<V: Scalar>(&self, f: &GridFunction<V>, a: &Rational, b: &Rational, side: Side) -> Result<Computed<V>> {
        f.domain.check(a)?;
        f.domain.check(b)?;
        if a == b {
            return Ok(Computed::new(V::zero(), f.accuracy()));
        }
        if a > b {
            let r = self.integral(f, b, a, side)?;
            return Ok(Computed { value: -r.value, ..r });
        }
        if f.domain.is_dense() {
            let value = adaptive_simpson(f, a, b, self.quad_tol, self.quad_max_depth)?;
            return Ok(Computed::new(value, Accuracy::Approximate));
        }
        let pts = f.domain.points_between(a, b)?;
        let mut sum = V::zero();
        for w in pts.windows(2) {
            let node = match side {
                Side::Forward => &w[0],
                Side::Backward => &w[1],
            };
            sum = sum + V::from_rational(&(&w[1] - &w[0])) * f.eval(node)?;
        }
        Ok(Computed::new(sum, f.accuracy()))
    }

    /// `f^{Δ^n}`, `f^{∇^n}` or the `n`-fold diamond derivative, as a function
    /// on the correspondingly trimmed scale.
    pub fn iterated_derivative<V: Scalar>(&self, f: &GridFunction<V>, kind: DerivKind, n: usize) -> Result<GridFunction<V>> {
        if n == 0 {
            return Ok(f.clone());
        }
        if let DerivKind::Diamond(a) = &kind {
            check_alpha(a)?;
        }
        let kind = kind.normalized();
        let (base, mut kinds) = match &f.source {
            Source::Derived { base, kinds, .. } => (base.clone(), kinds.clone()),
            _ => (Arc::new(f.clone()), Vec::new()),
        };
        kinds.extend(std::iter::repeat_n(kind, n));
        let ahead = kinds.iter().filter(|k| k.uses_forward()).count();
        let behind = kinds.iter().filter(|k| k.uses_backward()).count();
        let domain = base.domain.trim(ahead, behind)?.to_scale();
        Ok(GridFunction { domain, source: Source::Derived { base, kinds, config: self.clone() } })
    }
}

#[derive(Clone, Copy)]
enum Side {
    Forward,
    Backward,
}

fn adaptive_simpson<V: Scalar>(f: &GridFunction<V>, a: &Rational, b: &Rational, tol: f64, max_depth: u32) -> Result<V> {
    let two = int(2);
    let m = (a + b) / &two;
    let (fa, fm, fb) = (f.eval(a)?, f.eval(&m)?, f.eval(b)?);
    let whole = simpson_rule(a, b, &fa, &fm, &fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, 0)
}

fn simpson_rule<V: Scalar>(a: &Rational, b: &Rational, fa: &V, fm: &V, fb: &V) -> V {
    let width = V::from_rational(&((b - a) / int(6)));
    width * (fa.clone() + V::from_rational(&int(4)) * fm.clone() + fb.clone())
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<V: Scalar>(
    f: &GridFunction<V>,
    a: &Rational,
    b: &Rational,
    fa: V,
    fm: V,
    fb: V,
    whole: V,
    tol: f64,
    max_depth: u32,
    depth: u32,
) -> Result<V> {
    let two = int(2);
    let m = (a + b) / &two;
    let lm = (a + &m) / &two;
    let rm = (&m + b) / &two;
    let (flm, frm) = (f.eval(&lm)?, f.eval(&rm)?);
    let left = simpson_rule(a, &m, &fa, &flm, &fm);
    let right = simpson_rule(&m, b, &fm, &frm, &fb);
    let err = left.clone() + right.clone() - whole;
    if depth >= max_depth || (depth >= 3 && err.magnitude() <= 15.0 * tol) {
        return Ok(left + right + err / V::from_rational(&int(15)));
    }
    let l = simpson_step(f, a, &m, fa, flm, fm.clone(), left, tol / 2.0, max_depth, depth + 1)?;
    let r = simpson_step(f, &m, b, fm, frm, fb, right, tol / 2.0, max_depth, depth + 1)?;
    Ok(l + r)
}

pub fn delta_derivative<V: Scalar>(f: &GridFunction<V>, t: &Rational) -> Result<Computed<V>> {
    CalculusConfig::default().delta_derivative(f, t)
}

pub fn nabla_derivative<V: Scalar>(f: &GridFunction<V>, t: &Rational) -> Result<Computed<V>> {
    CalculusConfig::default().nabla_derivative(f, t)
}

pub fn diamond_derivative<V: Scalar>(f: &GridFunction<V>, t: &Rational, alpha: &Rational) -> Result<Computed<V>> {
    CalculusConfig::default().diamond_derivative(f, t, alpha)
}

pub fn cross_relation_check<V: Scalar>(f: &GridFunction<V>, t: &Rational) -> Result<(bool, bool)> {
    CalculusConfig::default().cross_relation_check(f, t)
}

pub fn delta_integral<V: Scalar>(f: &GridFunction<V>, a: &Rational, b: &Rational) -> Result<Computed<V>> {
    CalculusConfig::default().delta_integral(f, a, b)
}

pub fn nabla_integral<V: Scalar>(f: &GridFunction<V>, a: &Rational, b: &Rational) -> Result<Computed<V>> {
    CalculusConfig::default().nabla_integral(f, a, b)
}

pub fn diamond_integral<V: Scalar>(f: &GridFunction<V>, a: &Rational, b: &Rational, alpha: &Rational) -> Result<Computed<V>> {
    CalculusConfig::default().diamond_integral(f, a, b, alpha)
}

pub fn iterated_derivative<V: Scalar>(f: &GridFunction<V>, kind: DerivKind, n: usize) -> Result<GridFunction<V>> {
    CalculusConfig::default().iterated_derivative(f, kind, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{pow_rational, ratio, to_f64};

    fn pow2(scale: TimeScale) -> GridFunction<Rational> {
        GridFunction::try_new(scale, |t: &Rational| pow_rational(&int(2), t.to_integer().try_into().unwrap()))
    }

    fn square(scale: TimeScale) -> GridFunction<Rational> {
        GridFunction::new(scale, |t: &Rational| t * t)
    }

    #[test]
    fn delta_of_pow2_on_integers() {
        let f = pow2(TimeScale::integers());
        let d = delta_derivative(&f, &int(3)).unwrap();
        assert_eq!(d.value, int(8));
        assert!(d.is_exact());
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let s = TimeScale::uniform(int(0), ratio(1, 3)).unwrap();
        let f = GridFunction::new(s, |_: &Rational| int(7));
        assert_eq!(delta_derivative(&f, &int(1)).unwrap().value, int(0));
        assert_eq!(nabla_derivative(&f, &int(1)).unwrap().value, int(0));
    }

    #[test]
    fn quotient_on_explicit_grid() {
        let g = TimeScale::finite(vec![int(0), int(1), int(3)]).unwrap();
        let f = square(g);
        assert_eq!(delta_derivative(&f, &int(1)).unwrap().value, int(4));
        assert_eq!(nabla_derivative(&f, &int(1)).unwrap().value, int(1));
        assert!(matches!(delta_derivative(&f, &int(3)), Err(Error::Domain(_))));
        assert!(matches!(nabla_derivative(&f, &int(0)), Err(Error::Domain(_))));
        assert!(matches!(delta_derivative(&f, &int(2)), Err(Error::Domain(_))));
    }

    #[test]
    fn iterated_nabla_of_pow2() {
        let f = pow2(TimeScale::integers());
        for k in 0..8usize {
            let d = iterated_derivative(&f, DerivKind::Nabla, k).unwrap();
            assert_eq!(d.eval(&int(0)).unwrap(), ratio(1, 1 << k));
        }
    }

    #[test]
    fn identity_has_unit_derivative_everywhere() {
        let cases = [
            (TimeScale::integers(), int(1)),
            (TimeScale::finite(vec![int(0), ratio(1, 2), int(3)]).unwrap(), ratio(1, 2)),
        ];
        for (s, t) in cases {
            let f = GridFunction::new(s, |t: &Rational| t.clone());
            assert_eq!(nabla_derivative(&f, &t).unwrap().value, int(1));
            assert_eq!(diamond_derivative(&f, &t, &ratio(2, 7)).unwrap().value, int(1));
        }
    }

    #[test]
    fn diamond_is_convex_combination() {
        let f = pow2(TimeScale::integers());
        assert_eq!(diamond_derivative(&f, &int(3), &ratio(1, 2)).unwrap().value, int(6));
        for t in -3..4 {
            let t = int(t);
            let d = delta_derivative(&f, &t).unwrap().value;
            let n = nabla_derivative(&f, &t).unwrap().value;
            assert_eq!(diamond_derivative(&f, &t, &int(1)).unwrap().value, d);
            assert_eq!(diamond_derivative(&f, &t, &int(0)).unwrap().value, n);
        }
        assert!(diamond_derivative(&f, &int(0), &ratio(3, 2)).is_err());
    }

    #[test]
    fn diamond_endpoints_on_grid_boundaries() {
        let g = TimeScale::finite(vec![int(0), int(1), int(3)]).unwrap();
        let f = square(g);
        assert_eq!(diamond_derivative(&f, &int(0), &int(1)).unwrap().value, int(1));
        assert!(diamond_derivative(&f, &int(0), &ratio(1, 2)).is_err());
    }

    #[test]
    fn cross_relations_on_integers() {
        let f = GridFunction::new(TimeScale::integers(), |t: &Rational| t * t * t);
        assert_eq!(cross_relation_check(&f, &int(2)).unwrap(), (true, true));
    }

    #[test]
    fn integral_examples() {
        let z = TimeScale::integers();
        let one = GridFunction::new(z, |_: &Rational| int(1));
        assert_eq!(delta_integral(&one, &int(0), &int(5)).unwrap().value, int(5));
        assert_eq!(nabla_integral(&one, &int(0), &int(5)).unwrap().value, int(5));
        assert_eq!(delta_integral(&one, &int(2), &int(2)).unwrap().value, int(0));

        let c2 = TimeScale::uniform(int(0), int(2)).unwrap();
        let id = GridFunction::new(c2, |t: &Rational| t.clone());
        assert_eq!(delta_integral(&id, &int(0), &int(6)).unwrap().value, int(12));
        assert_eq!(nabla_integral(&id, &int(0), &int(6)).unwrap().value, int(24));
        assert_eq!(delta_integral(&id, &int(6), &int(0)).unwrap().value, int(-12));

        let id = GridFunction::new(TimeScale::integers(), |t: &Rational| t.clone());
        assert_eq!(diamond_integral(&id, &int(0), &int(3), &ratio(1, 2)).unwrap().value, ratio(9, 2));
        assert!(delta_integral(&id, &ratio(1, 2), &int(3)).is_err());
    }

    #[test]
    fn real_line_with_attached_derivative() {
        let r = TimeScale::real();
        let cos = GridFunction::new(r.clone(), |t: &Rational| to_f64(t).cos());
        let sin = GridFunction::new(r, |t: &Rational| to_f64(t).sin()).with_derivative(cos);
        let d = delta_derivative(&sin, &int(1)).unwrap();
        assert_eq!(d.value, 1f64.cos());
        assert_eq!(d.accuracy, Accuracy::Rounded);
        assert_eq!(cross_relation_check(&sin, &int(1)).unwrap(), (true, true));
    }

    #[test]
    fn real_line_fallback_is_flagged() {
        let f = GridFunction::new(TimeScale::real(), |t: &Rational| to_f64(t).exp());
        let d = delta_derivative(&f, &int(0)).unwrap();
        assert_eq!(d.accuracy, Accuracy::Approximate);
        assert!((d.value - 1.0).abs() < 1e-8);
        let d2 = iterated_derivative(&f, DerivKind::Delta, 2).unwrap();
        assert!((d2.eval(&int(0)).unwrap() - 1.0).abs() < 1e-4);

        let blowup = GridFunction::new(TimeScale::real(), |t: &Rational| if t.is_zero() { 0.0 } else { f64::INFINITY });
        let d = delta_derivative(&blowup, &int(0)).unwrap();
        assert!(d.warning.is_some());
    }

    #[test]
    fn real_line_simpson() {
        let f = GridFunction::new(TimeScale::real(), |t: &Rational| to_f64(t).sin());
        let v = delta_integral(&f, &int(0), &int(3)).unwrap();
        assert!((v.value - (1.0 - 3f64.cos())).abs() < 1e-9);
        assert_eq!(v.accuracy, Accuracy::Approximate);
    }

    #[test]
    fn iterated_domains_trim() {
        let g = TimeScale::finite((0..6).map(int).collect()).unwrap();
        let f = square(g);
        let d2 = iterated_derivative(&f, DerivKind::Delta, 2).unwrap();
        assert_eq!(d2.domain(), &TimeScale::finite((0..4).map(int).collect()).unwrap());
        assert_eq!(d2.eval(&int(0)).unwrap(), int(2));
        assert!(d2.eval(&int(4)).is_err());
        let dd = iterated_derivative(&f, DerivKind::Diamond(ratio(1, 2)), 2).unwrap();
        assert_eq!(dd.domain(), &TimeScale::finite((2..4).map(int).collect()).unwrap());
        assert!(iterated_derivative(&f, DerivKind::Nabla, 6).is_err());
    }

    #[test]
    fn repeated_iteration_flattens() {
        let f = pow2(TimeScale::integers());
        let once = iterated_derivative(&f, DerivKind::Delta, 3).unwrap();
        let twice = iterated_derivative(&once, DerivKind::Nabla, 2).unwrap();
        // Δ³∇² 2^t = 2^t · 2^-2
        assert_eq!(twice.eval(&int(4)).unwrap(), int(4));
        assert!(format!("{twice:?}").contains("derived"));
    }

    #[test]
    fn samples_cover_finite_grids() {
        let g = TimeScale::finite(vec![int(0), int(1)]).unwrap();
        let mut m = BTreeMap::new();
        m.insert(int(0), int(1));
        assert!(GridFunction::from_samples(g.clone(), m.clone()).is_err());
        m.insert(int(1), int(4));
        let f = GridFunction::from_samples(g, m).unwrap();
        assert_eq!(delta_derivative(&f, &int(0)).unwrap().value, int(3));
    }

    #[test]
    fn non_inversion_witness() {
        // F(t) = ∫_0^t τ² ⋄τ with α = 1/2 on ℤ; F^⋄(t) = t² + 1/2.
        let z = TimeScale::integers();
        let half = ratio(1, 2);
        let f = square(z.clone());
        let fc = f.clone();
        let h = half.clone();
        let big_f = GridFunction::try_new(z, move |t: &Rational| Ok(diamond_integral(&fc, &int(0), t, &h)?.value));
        let d = diamond_derivative(&big_f, &int(3), &half).unwrap().value;
        assert_eq!(d - int(9), half);
    }
}
