//! Generalized monomials `h_k` (iterated Δ-integrals of 1) and `ĥ_k`
//! (iterated ∇-integrals of 1), factorial functions, and the derivative
//! rules of both families.
//!
//! Uniform grids and the real line use closed forms; finite grids use one
//! integration sweep per order.

use num::{BigInt, One, Signed, Zero};

use crate::calculus::{check_alpha, DerivKind};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::scale::{FiniteGrid, TimeScale};

/// Orders above this are rejected by [`monomial`] unless a larger limit is
/// passed explicitly.
pub const DEFAULT_MAX_ORDER: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialKind {
    /// `h_k`, built by Δ-integration.
    Forward,
    /// `ĥ_k`, built by ∇-integration.
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorialDirection {
    Falling,
    Rising,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorialValue {
    pub base: Rational,
    pub order: u64,
    pub direction: FactorialDirection,
    pub value: Rational,
}

impl FactorialValue {
    pub fn new(base: Rational, order: u64, direction: FactorialDirection) -> Self {
        let value = match direction {
            FactorialDirection::Falling => falling_factorial(&base, order),
            FactorialDirection::Rising => rising_factorial(&base, order),
        };
        Self { base, order, direction, value }
    }
}

/// `t(t−1)⋯(t−k+1)`, with `t^(0) = 1`.
pub fn falling_factorial(t: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut factor = t.clone();
    for _ in 0..k {
        acc *= &factor;
        factor -= Rational::one();
    }
    acc
}

/// `t(t+1)⋯(t+k−1)`, with `t^(0) = 1`.
pub fn rising_factorial(t: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut factor = t.clone();
    for _ in 0..k {
        acc *= &factor;
        factor += Rational::one();
    }
    acc
}

pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `h_k(t, t0)` or `ĥ_k(t, t0)`.
pub fn monomial(scale: &TimeScale, kind: MonomialKind, k: usize, t: &Rational, t0: &Rational) -> Result<Rational> {
    monomial_with_limit(scale, kind, k, t, t0, DEFAULT_MAX_ORDER)
}

pub fn monomial_with_limit(
    scale: &TimeScale,
    kind: MonomialKind,
    k: usize,
    t: &Rational,
    t0: &Rational,
    max_order: usize,
) -> Result<Rational> {
    if k > max_order {
        return Err(Error::Invalid(format!("monomial order {k} exceeds the limit {max_order}")));
    }
    scale.check(t)?;
    scale.check(t0)?;
    match scale {
        TimeScale::Real => {
            let d = t - t0;
            Ok(num::pow(d, k) / Rational::from_integer(factorial(k as u64)))
        }
        TimeScale::Uniform(g) => {
            let c = g.step();
            let x = (t - t0) / c;
            let rising = match kind {
                MonomialKind::Forward => falling_factorial(&x, k as u64),
                MonomialKind::Backward => rising_factorial(&x, k as u64),
            };
            Ok(num::pow(c.clone(), k) * rising / Rational::from_integer(factorial(k as u64)))
        }
        TimeScale::Finite(g) => {
            let table = MonomialTable::build(g, kind, t0, k)?;
            table.get(k, t)
        }
    }
}

/// All orders `0..=max_order` of one monomial family with a fixed origin,
/// sampled on every point of a finite grid.
#[derive(Debug, Clone)]
pub struct MonomialTable {
    points: Vec<Rational>,
    kind: MonomialKind,
    origin: Rational,
    levels: Vec<Vec<Rational>>,
}

impl MonomialTable {
    pub fn build(grid: &FiniteGrid, kind: MonomialKind, t0: &Rational, max_order: usize) -> Result<Self> {
        let origin_idx = grid
            .index_of(t0)
            .ok_or_else(|| Error::Domain(format!("origin {} is not a grid point", format_rational(t0))))?;
        let points = grid.points().to_vec();
        let mut levels = vec![vec![Rational::one(); points.len()]];
        for _ in 0..max_order {
            let prev = levels.last().expect("level 0 present");
            levels.push(integrate_level(&points, origin_idx, kind, prev));
        }
        Ok(Self { points, kind, origin: t0.clone(), levels })
    }

    pub fn kind(&self) -> MonomialKind {
        self.kind
    }

    pub fn origin(&self) -> &Rational {
        &self.origin
    }

    pub fn max_order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn get(&self, k: usize, t: &Rational) -> Result<Rational> {
        let level = self
            .levels
            .get(k)
            .ok_or_else(|| Error::Invalid(format!("order {k} beyond table depth {}", self.max_order())))?;
        let i = self
            .points
            .binary_search(t)
            .map_err(|_| Error::Domain(format!("{} is not a grid point", format_rational(t))))?;
        Ok(level[i].clone())
    }
}

/// One Δ- (or ∇-) integration sweep from the origin in both directions.
fn integrate_level(points: &[Rational], origin: usize, kind: MonomialKind, prev: &[Rational]) -> Vec<Rational> {
    let n = points.len();
    let mut next = vec![Rational::zero(); n];
    // Forward: node τ ∈ [t0, t) weighted by μ(τ); backward: τ ∈ (t0, t]
    // weighted by ν(τ). Below the origin the orientation flips the sign.
    let mut acc = Rational::zero();
    for i in origin + 1..n {
        let gap = &points[i] - &points[i - 1];
        let node = match kind {
            MonomialKind::Forward => &prev[i - 1],
            MonomialKind::Backward => &prev[i],
        };
        acc += gap * node;
        next[i] = acc.clone();
    }
    let mut acc = Rational::zero();
    for i in (0..origin).rev() {
        let gap = &points[i + 1] - &points[i];
        let node = match kind {
            MonomialKind::Forward => &prev[i],
            MonomialKind::Backward => &prev[i + 1],
        };
        acc -= gap * node;
        next[i] = acc.clone();
    }
    next
}

/// Successive values `h_0(t,t0), h_1(t,t0), …` at a fixed pair of points.
pub struct MonomialSeq {
    state: SeqState,
    k: usize,
}

enum SeqState {
    /// `value_k = step^k · binom_k`, with `binom_k` the integer generalized
    /// binomial coefficient.
    Uniform { kind: MonomialKind, x: BigInt, step: Rational, step_pow: Rational, binom: BigInt },
    Real { delta: Rational, value: Rational },
    Finite { points: Vec<Rational>, origin: usize, at: usize, kind: MonomialKind, level: Vec<Rational> },
}

impl MonomialSeq {
    pub fn new(scale: &TimeScale, kind: MonomialKind, t: &Rational, t0: &Rational) -> Result<Self> {
        scale.check(t)?;
        scale.check(t0)?;
        let state = match scale {
            TimeScale::Real => SeqState::Real { delta: t - t0, value: Rational::one() },
            TimeScale::Uniform(g) => {
                let x = ((t - t0) / g.step()).to_integer();
                SeqState::Uniform {
                    kind,
                    x,
                    step: g.step().clone(),
                    step_pow: Rational::one(),
                    binom: BigInt::one(),
                }
            }
            TimeScale::Finite(g) => {
                let origin = g.index_of(t0).expect("checked");
                let at = g.index_of(t).expect("checked");
                SeqState::Finite {
                    points: g.points().to_vec(),
                    origin,
                    at,
                    kind,
                    level: vec![Rational::one(); g.len()],
                }
            }
        };
        Ok(Self { state, k: 0 })
    }

    /// Order of the value the next call to `next` returns.
    pub fn order(&self) -> usize {
        self.k
    }

    fn current(&self) -> Rational {
        match &self.state {
            SeqState::Uniform { step_pow, binom, .. } => step_pow * Rational::from_integer(binom.clone()),
            SeqState::Real { value, .. } => value.clone(),
            SeqState::Finite { level, at, .. } => level[*at].clone(),
        }
    }

    fn advance(&mut self) {
        let k = self.k;
        match &mut self.state {
            SeqState::Uniform { kind, x, step, step_pow, binom } => {
                // binom(x, k+1) = binom(x, k)·(x − k)/(k + 1); the rising
                // family uses (x + k) in place of (x − k). Division is exact.
                let factor = match kind {
                    MonomialKind::Forward => &*x - BigInt::from(k),
                    MonomialKind::Backward => &*x + BigInt::from(k),
                };
                *binom = (&*binom * factor) / BigInt::from(k + 1);
                *step_pow *= &*step;
            }
            SeqState::Real { delta, value } => {
                *value = &*value * &*delta / Rational::from_integer(BigInt::from(k + 1));
            }
            SeqState::Finite { points, origin, kind, level, .. } => {
                *level = integrate_level(points, *origin, *kind, level);
            }
        }
        self.k += 1;
    }

    /// Skips ahead so that the next value returned has order `k`.
    pub fn advance_to(&mut self, k: usize) {
        while self.k < k {
            self.advance();
        }
    }
}

impl Iterator for MonomialSeq {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        let v = self.current();
        self.advance();
        Some(v)
    }
}

/// Both sides of `ĥ_k(t,t0) = (−1)^k h_k(t0,t)`.
pub fn duality(scale: &TimeScale, k: usize, t: &Rational, t0: &Rational) -> Result<(Rational, Rational)> {
    let lhs = monomial(scale, MonomialKind::Backward, k, t, t0)?;
    let mut rhs = monomial(scale, MonomialKind::Forward, k, t0, t)?;
    if k % 2 == 1 {
        rhs = -rhs;
    }
    Ok((lhs, rhs))
}

/// Derivative of `h_k(·, t0)` or `ĥ_k(·, t0)` at `t` from the recurrence
/// rules, valid wherever `σ(ρ(t)) = t` and `ρ(σ(t)) = t`.
pub fn monomial_derivative(
    scale: &TimeScale,
    kind: MonomialKind,
    k: usize,
    t: &Rational,
    t0: &Rational,
    dkind: &DerivKind,
) -> Result<Rational> {
    if let DerivKind::Diamond(a) = dkind {
        check_alpha(a)?;
    }
    let dkind = dkind.clone().normalized();
    scale.check(t)?;
    scale.check(t0)?;
    let discrete = scale.is_discrete();
    let mu = scale.mu(t)?;
    let nu = scale.nu(t)?;
    let needs_forward = !matches!(dkind, DerivKind::Nabla);
    let needs_backward = !matches!(dkind, DerivKind::Delta);
    if discrete && needs_forward && mu.is_zero() {
        return Err(Error::Domain(format!("{} has no forward neighbour", format_rational(t))));
    }
    if discrete && needs_backward && nu.is_zero() {
        return Err(Error::Domain(format!("{} has no backward neighbour", format_rational(t))));
    }
    if k == 0 {
        return Ok(Rational::zero());
    }
    let lower: Vec<Rational> = MonomialSeq::new(scale, kind, t, t0)?.take(k).collect();
    // lower[i] = h_i (or ĥ_i) for i < k
    let own = lower[k - 1].clone();
    // Σ_{j=1}^{k-1} g^j · lower[k-1-j]
    let tail = |g: &Rational| {
        let mut acc = Rational::zero();
        let mut gp = Rational::one();
        for j in 1..k {
            gp *= g;
            acc += &gp * &lower[k - 1 - j];
        }
        acc
    };
    let neg_nu = -nu;
    let value = match (kind, dkind) {
        (MonomialKind::Forward, DerivKind::Delta) | (MonomialKind::Backward, DerivKind::Nabla) => own,
        (MonomialKind::Forward, DerivKind::Nabla) => own + tail(&neg_nu),
        (MonomialKind::Backward, DerivKind::Delta) => own + tail(&mu),
        (MonomialKind::Forward, DerivKind::Diamond(a)) => own + (Rational::one() - a) * tail(&neg_nu),
        (MonomialKind::Backward, DerivKind::Diamond(a)) => own + a * tail(&mu),
    };
    Ok(value)
}

/// Whether the zero-region remark forces `h_k(t,t0) = 0` (forward) or
/// `ĥ_k(t,t0) = 0` (backward) on a uniform grid.
pub fn in_zero_region(scale: &TimeScale, kind: MonomialKind, k: usize, t: &Rational, t0: &Rational) -> bool {
    let Some(c) = scale.homogeneous_step().filter(|c| c.is_positive()) else {
        return t == t0 && k >= 1;
    };
    let steps = (t - t0) / c;
    let bound = steps.abs() + Rational::one();
    let k = Rational::from_integer(BigInt::from(k));
    match kind {
        MonomialKind::Forward => !steps.is_negative() && k >= bound,
        MonomialKind::Backward => !steps.is_positive() && k >= bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn factorials() {
        assert_eq!(falling_factorial(&int(5), 2), int(20));
        assert_eq!(rising_factorial(&int(5), 2), int(30));
        assert_eq!(falling_factorial(&ratio(7, 3), 0), int(1));
        assert_eq!(rising_factorial(&int(-4), 0), int(1));
        let v = FactorialValue::new(int(9), 3, FactorialDirection::Falling);
        assert_eq!(v.value, int(9 * 8 * 7));
    }

    #[test]
    fn factorial_ratios() {
        for t in -6..6 {
            for k in 0..6u64 {
                let t = int(t);
                let f0 = falling_factorial(&t, k);
                if !f0.is_zero() {
                    assert_eq!(falling_factorial(&t, k + 1) / f0, &t - int(k as i64));
                }
                let r0 = rising_factorial(&t, k);
                if !r0.is_zero() {
                    assert_eq!(rising_factorial(&t, k + 1) / r0, &t + int(k as i64));
                }
            }
        }
    }

    #[test]
    fn low_orders_on_every_scale() {
        let scales = [
            TimeScale::real(),
            TimeScale::integers(),
            TimeScale::uniform(int(0), ratio(1, 2)).unwrap(),
            TimeScale::finite(vec![int(0), int(1), int(3), int(4), int(7)]).unwrap(),
        ];
        for s in &scales {
            for kind in [MonomialKind::Forward, MonomialKind::Backward] {
                assert_eq!(monomial(s, kind, 0, &int(3), &int(1)).unwrap(), int(1));
                assert_eq!(monomial(s, kind, 1, &int(3), &int(1)).unwrap(), int(2));
                assert_eq!(monomial(s, kind, 1, &int(0), &int(4)).unwrap(), int(-4));
            }
        }
    }

    #[test]
    fn binomial_values_on_integers() {
        let z = TimeScale::integers();
        assert_eq!(monomial(&z, MonomialKind::Forward, 3, &int(6), &int(0)).unwrap(), int(20));
        assert_eq!(monomial(&z, MonomialKind::Backward, 2, &int(0), &int(3)).unwrap(), int(3));
        for k in 7..12 {
            assert_eq!(monomial(&z, MonomialKind::Forward, k, &int(6), &int(0)).unwrap(), int(0));
        }
    }

    #[test]
    fn real_line_power_over_factorial() {
        let r = TimeScale::real();
        assert_eq!(monomial(&r, MonomialKind::Forward, 3, &int(2), &int(0)).unwrap(), ratio(8, 6));
        assert_eq!(monomial(&r, MonomialKind::Backward, 2, &int(-1), &int(0)).unwrap(), ratio(1, 2));
    }

    #[test]
    fn degenerate_origin() {
        let z = TimeScale::integers();
        for k in 1..5 {
            assert_eq!(monomial(&z, MonomialKind::Forward, k, &int(4), &int(4)).unwrap(), int(0));
            assert_eq!(monomial(&z, MonomialKind::Backward, k, &int(4), &int(4)).unwrap(), int(0));
        }
    }

    #[test]
    fn order_limit() {
        let z = TimeScale::integers();
        assert!(monomial(&z, MonomialKind::Forward, DEFAULT_MAX_ORDER + 1, &int(1), &int(0)).is_err());
        assert!(monomial_with_limit(&z, MonomialKind::Forward, 5000, &int(1), &int(0), 5000).is_ok());
    }

    #[test]
    fn sequence_matches_closed_form() {
        let scales = [
            TimeScale::integers(),
            TimeScale::uniform(int(1), int(3)).unwrap(),
            TimeScale::real(),
            TimeScale::finite(vec![int(-2), int(0), int(1), int(5)]).unwrap(),
        ];
        for s in &scales {
            let (t, t0) = match s {
                TimeScale::Uniform(_) if s != &TimeScale::integers() => (int(-8), int(7)),
                TimeScale::Finite(_) => (int(-2), int(5)),
                _ => (int(-3), int(2)),
            };
            for kind in [MonomialKind::Forward, MonomialKind::Backward] {
                let seq: Vec<_> = MonomialSeq::new(s, kind, &t, &t0).unwrap().take(9).collect();
                for (k, v) in seq.iter().enumerate() {
                    assert_eq!(v, &monomial(s, kind, k, &t, &t0).unwrap(), "{s} {kind:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn duality_examples() {
        let z = TimeScale::integers();
        assert_eq!(duality(&z, 2, &int(0), &int(3)).unwrap(), (int(3), int(3)));
        assert_eq!(duality(&z, 0, &int(2), &int(9)).unwrap(), (int(1), int(1)));
        assert_eq!(duality(&z, 3, &int(2), &int(2)).unwrap(), (int(0), int(0)));
    }

    #[test]
    fn derivative_rule_examples() {
        let z = TimeScale::integers();
        let fwd_nabla = monomial_derivative(&z, MonomialKind::Forward, 2, &int(4), &int(0), &DerivKind::Nabla).unwrap();
        assert_eq!(fwd_nabla, int(3));
        let h3 = monomial(&z, MonomialKind::Forward, 3, &int(9), &int(2)).unwrap();
        let d = monomial_derivative(&z, MonomialKind::Forward, 4, &int(9), &int(2), &DerivKind::Delta).unwrap();
        assert_eq!(d, h3);
        for a in [ratio(0, 1), ratio(1, 3), ratio(1, 1)] {
            for kind in [MonomialKind::Forward, MonomialKind::Backward] {
                let d = monomial_derivative(&z, kind, 1, &int(5), &int(-1), &DerivKind::Diamond(a.clone())).unwrap();
                assert_eq!(d, int(1));
            }
        }
        assert_eq!(monomial_derivative(&z, MonomialKind::Forward, 0, &int(5), &int(0), &DerivKind::Delta).unwrap(), int(0));
    }

    #[test]
    fn derivative_rules_respect_boundaries() {
        let g = TimeScale::finite(vec![int(0), int(1), int(3)]).unwrap();
        assert!(monomial_derivative(&g, MonomialKind::Forward, 2, &int(3), &int(0), &DerivKind::Delta).is_err());
        assert!(monomial_derivative(&g, MonomialKind::Forward, 2, &int(0), &int(0), &DerivKind::Nabla).is_err());
        assert!(monomial_derivative(&g, MonomialKind::Forward, 2, &int(3), &int(0), &DerivKind::Nabla).is_ok());
    }

    #[test]
    fn zero_regions() {
        let s = TimeScale::uniform(int(0), int(2)).unwrap();
        for t in [0i64, 2, 4, 6] {
            for k in 0..8usize {
                let forced = in_zero_region(&s, MonomialKind::Forward, k, &int(t), &int(0));
                let v = monomial(&s, MonomialKind::Forward, k, &int(t), &int(0)).unwrap();
                if forced {
                    assert!(v.is_zero());
                }
                let forced = in_zero_region(&s, MonomialKind::Backward, k, &int(-t), &int(0));
                let v = monomial(&s, MonomialKind::Backward, k, &int(-t), &int(0)).unwrap();
                if forced {
                    assert!(v.is_zero());
                }
            }
        }
        assert!(!in_zero_region(&s, MonomialKind::Forward, 2, &int(4), &int(0)));
        assert!(in_zero_region(&s, MonomialKind::Forward, 3, &int(4), &int(0)));
    }
}
