//! Δ-, ∇- and combined-polynomial series, their derivatives, convergence
//! diagnostics and Taylor expansions.
//!
//! A combined series at origin `t0` is
//! `S_α(t) = α Σ a_k h_k(t,t0) + (1−α) Σ b_k ĥ_k(t,t0)`.
//! On a discrete scale the Δ-branch is a finite sum for `t ≥ t0` and the
//! ∇-branch for `t ≤ t0`; elsewhere the branches are summed exactly when a
//! closed form exists and truncated otherwise.

use std::fmt;
use std::sync::{Arc, Mutex};

use num::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::calculus::{check_alpha, Accuracy, CalculusConfig, DerivKind, GridFunction};
use crate::error::{Error, Result};
use crate::monomials::{monomial, MonomialKind, MonomialSeq};
use crate::number::Number;
use crate::rational::{format_rational, from_f64, to_f64, Rational};
use crate::scalar::Scalar;
use crate::scale::TimeScale;
use crate::specials::{exp_eval, ExpKind, ExpParams};

/// Upper index of the window `[K/2, K]` used to estimate coefficient ratios.
pub const RATIO_WINDOW: usize = 256;
const RATIO_MARGIN: f64 = 1e-9;

type CoefficientFn = Arc<dyn Fn(usize) -> Result<Rational> + Send + Sync>;

/// The coefficient sequence of one branch.
#[derive(Clone)]
pub enum CoefficientRule {
    /// Listed values, zero beyond the end of the list.
    Explicit(Vec<Rational>),
    /// `a_k = scale · ratio^k`.
    Geometric { scale: Rational, ratio: Rational },
    Custom { label: String, f: CoefficientFn },
}

impl fmt::Debug for CoefficientRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRule::Explicit(v) => {
                let v: Vec<String> = v.iter().map(format_rational).collect();
                write!(f, "Explicit[{}]", v.join(", "))
            }
            CoefficientRule::Geometric { scale, ratio } => {
                write!(f, "Geometric({} · {}^k)", format_rational(scale), format_rational(ratio))
            }
            CoefficientRule::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

impl CoefficientRule {
    pub fn zero() -> Self {
        CoefficientRule::Explicit(Vec::new())
    }

    pub fn geometric(p: Rational) -> Self {
        CoefficientRule::Geometric { scale: Rational::one(), ratio: p }
    }

    pub fn custom(label: impl Into<String>, f: impl Fn(usize) -> Result<Rational> + Send + Sync + 'static) -> Self {
        CoefficientRule::Custom { label: label.into(), f: Arc::new(f) }
    }

    /// A custom rule whose values are computed once, in index order.
    pub fn memoized(label: impl Into<String>, f: impl Fn(usize) -> Result<Rational> + Send + Sync + 'static) -> Self {
        let cache: Mutex<Vec<Rational>> = Mutex::new(Vec::new());
        Self::custom(label, move |k| {
            let mut cache = cache.lock().unwrap_or_else(|e| e.into_inner());
            while cache.len() <= k {
                let v = f(cache.len())?;
                cache.push(v);
            }
            Ok(cache[k].clone())
        })
    }

    pub fn coefficient(&self, k: usize) -> Result<Rational> {
        match self {
            CoefficientRule::Explicit(v) => Ok(v.get(k).cloned().unwrap_or_else(Rational::zero)),
            CoefficientRule::Geometric { scale, ratio } => Ok(scale * pow(ratio, k)),
            CoefficientRule::Custom { f, .. } => f(k),
        }
    }

    /// Whether every coefficient is known to vanish.
    pub fn is_zero(&self) -> bool {
        match self {
            CoefficientRule::Explicit(v) => v.iter().all(Zero::is_zero),
            CoefficientRule::Geometric { scale, .. } => scale.is_zero(),
            CoefficientRule::Custom { .. } => false,
        }
    }

    /// `(a_1, a_2, …)`.
    pub fn shifted(&self) -> Self {
        match self {
            CoefficientRule::Explicit(v) => CoefficientRule::Explicit(v.iter().skip(1).cloned().collect()),
            CoefficientRule::Geometric { scale, ratio } => {
                CoefficientRule::Geometric { scale: scale * ratio, ratio: ratio.clone() }
            }
            CoefficientRule::Custom { label, f } => {
                let f = f.clone();
                CoefficientRule::Custom { label: format!("{label}+1"), f: Arc::new(move |k| f(k + 1)) }
            }
        }
    }

    /// Estimated `limsup |a_{k+1}/a_k|`: exact for geometric and finite
    /// rules, the largest ratio over `[K/2, K]` for custom ones. `None` when
    /// the window cannot be evaluated.
    pub fn ratio_estimate(&self, window: usize) -> Option<f64> {
        match self {
            CoefficientRule::Explicit(_) => Some(0.0),
            CoefficientRule::Geometric { scale, ratio } => {
                Some(if scale.is_zero() { 0.0 } else { to_f64(&ratio.abs()) })
            }
            CoefficientRule::Custom { f, .. } => {
                let mut best = 0.0f64;
                let mut prev = f(window / 2).ok()?;
                for k in window / 2..window {
                    let next = f(k + 1).ok()?;
                    let r = if prev.is_zero() {
                        if next.is_zero() { 0.0 } else { f64::INFINITY }
                    } else {
                        to_f64(&(&next / &prev).abs())
                    };
                    best = best.max(r);
                    prev = next;
                }
                Some(best)
            }
        }
    }
}

fn pow(base: &Rational, k: usize) -> Rational {
    num::pow::pow(base.clone(), k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Delta,
    Nabla,
}

impl Branch {
    fn monomial_kind(self) -> MonomialKind {
        match self {
            Branch::Delta => MonomialKind::Forward,
            Branch::Nabla => MonomialKind::Backward,
        }
    }

    fn deriv_kind(self) -> DerivKind {
        match self {
            Branch::Delta => DerivKind::Delta,
            Branch::Nabla => DerivKind::Nabla,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    pub abs_tol: f64,
    pub consecutive_small: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { max_terms: 10_000, abs_tol: 1e-12, consecutive_small: 3 }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(Error::Invalid("max_terms must be at least 1".into()));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Invalid("abs_tol must be a positive number".into()));
        }
        if self.consecutive_small == 0 {
            return Err(Error::Invalid("consecutive_small must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub alpha: Rational,
    pub t0: Rational,
    pub a: CoefficientRule,
    pub b: CoefficientRule,
    pub scale: TimeScale,
    pub policy: TruncationPolicy,
}

impl SeriesSpec {
    pub fn new(alpha: Rational, t0: Rational, a: CoefficientRule, b: CoefficientRule, scale: TimeScale) -> Result<Self> {
        let spec = Self { alpha, t0, a, b, scale, policy: TruncationPolicy::default() };
        spec.validate()?;
        Ok(spec)
    }

    /// A pure Δ-series (`α = 1`).
    pub fn delta(t0: Rational, a: CoefficientRule, scale: TimeScale) -> Result<Self> {
        Self::new(Rational::one(), t0, a, CoefficientRule::zero(), scale)
    }

    /// A pure ∇-series (`α = 0`).
    pub fn nabla(t0: Rational, b: CoefficientRule, scale: TimeScale) -> Result<Self> {
        Self::new(Rational::zero(), t0, CoefficientRule::zero(), b, scale)
    }

    pub fn with_policy(mut self, policy: TruncationPolicy) -> Result<Self> {
        policy.validate()?;
        self.policy = policy;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(&self.alpha)?;
        self.scale.check(&self.t0)?;
        self.policy.validate()
    }

    fn weight(&self, branch: Branch) -> Rational {
        match branch {
            Branch::Delta => self.alpha.clone(),
            Branch::Nabla => Rational::one() - &self.alpha,
        }
    }

    fn rule(&self, branch: Branch) -> &CoefficientRule {
        match branch {
            Branch::Delta => &self.a,
            Branch::Nabla => &self.b,
        }
    }

    fn active(&self) -> Vec<Branch> {
        [Branch::Delta, Branch::Nabla].into_iter().filter(|b| !self.weight(*b).is_zero()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    FiniteSum,
    Convergent,
    Inconclusive,
    Divergent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::FiniteSum => "FiniteSum",
            Verdict::Convergent => "Convergent",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::Divergent => "Divergent",
        };
        f.write_str(s)
    }
}

/// How a branch value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Zero,
    FiniteSum,
    Explicit,
    ClosedForm,
    Truncated,
    Withheld,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    pub verdict: Verdict,
    pub method: Method,
    pub terms_used: usize,
    pub coeff_ratio: Option<f64>,
    pub monomial_ratio: Option<f64>,
    pub term_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Number>,
}

/// A set of points described by a single bound.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Empty,
    AtLeast(Rational),
    AtMost(Rational),
    Points(Vec<Rational>),
}

impl Region {
    pub fn contains(&self, t: &Rational) -> bool {
        match self {
            Region::Empty => false,
            Region::AtLeast(lo) => t >= lo,
            Region::AtMost(hi) => t <= hi,
            Region::Points(p) => p.contains(t),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Empty => f.write_str("empty"),
            Region::AtLeast(lo) => write!(f, "t >= {}", format_rational(lo)),
            Region::AtMost(hi) => write!(f, "t <= {}", format_rational(hi)),
            Region::Points(p) => {
                let p: Vec<String> = p.iter().map(format_rational).collect();
                write!(f, "{{{}}}", p.join(", "))
            }
        }
    }
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<BranchReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nabla: Option<BranchReport>,
    /// `M` with `|a_k|, |b_k| ≤ M^k` asymptotically.
    pub bound_m: Option<Number>,
    /// Where the term-wise ∇-derivative of the Δ-branch is valid.
    pub region_i: Region,
    /// Where the term-wise Δ-derivative of the ∇-branch is valid.
    pub region_j: Region,
}

impl ConvergenceReport {
    pub fn branch(&self, branch: Branch) -> Option<&BranchReport> {
        match branch {
            Branch::Delta => self.delta.as_ref(),
            Branch::Nabla => self.nabla.as_ref(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeriesValue {
    /// `None` when the series was judged divergent and not forced.
    pub value: Option<Number>,
    pub report: ConvergenceReport,
}

impl SeriesValue {
    pub fn require_value(&self) -> Result<&Number> {
        self.value
            .as_ref()
            .ok_or_else(|| Error::Divergent(format!("series judged {}; value withheld", self.report.verdict)))
    }
}

/// Number of nonzero terms when the zero-region remark applies, i.e. the
/// branch is a finite sum at `t`.
fn finite_terms(scale: &TimeScale, branch: Branch, t: &Rational, t0: &Rational) -> Result<Option<usize>> {
    let ahead = match branch {
        Branch::Delta => t >= t0,
        Branch::Nabla => t <= t0,
    };
    if !ahead || !scale.is_discrete() {
        return Ok(if t == t0 { Some(1) } else { None });
    }
    let (lo, hi) = if t0 <= t { (t0, t) } else { (t, t0) };
    let steps = match scale {
        TimeScale::Uniform(g) => ((hi - lo) / g.step())
            .to_integer()
            .to_usize()
            .ok_or_else(|| Error::Invalid("point too far from origin".into()))?,
        _ => scale.points_between(lo, hi)?.len() - 1,
    };
    Ok(Some(steps + 1))
}

/// Asymptotic `|h_{k+1}/h_k|`: the step on a uniform grid, zero on ℝ.
fn monomial_ratio(scale: &TimeScale) -> Option<f64> {
    scale.homogeneous_step().map(|c| to_f64(&c))
}

/// Term-ratio estimate for the branch at `t`, from coefficient ratios.
fn term_ratio_estimate(scale: &TimeScale, coeff: Option<f64>, t: &Rational, t0: &Rational) -> Option<f64> {
    let r = coeff?;
    match scale {
        TimeScale::Uniform(g) => Some(r * to_f64(g.step())),
        // (t−t0)^k/k! contributes |t−t0|/(k+1); the coefficient estimate is
        // taken at the top of the window.
        TimeScale::Real => Some(r * to_f64(&(t - t0).abs()) / (RATIO_WINDOW as f64 + 1.0)),
        TimeScale::Finite(_) => None,
    }
}

fn eval_branch(spec: &SeriesSpec, branch: Branch, t: &Rational, force: bool) -> Result<BranchReport> {
    let rule = spec.rule(branch);
    let scale = &spec.scale;
    let t0 = &spec.t0;
    let kind = branch.monomial_kind();
    let mono_ratio = monomial_ratio(scale);
    let report = |verdict, method, terms_used, value: Option<Number>| BranchReport {
        verdict,
        method,
        terms_used,
        coeff_ratio: None,
        monomial_ratio: mono_ratio,
        term_ratio: None,
        value,
    };

    if rule.is_zero() {
        return Ok(report(Verdict::Convergent, Method::Zero, 0, Some(Number::Exact(Rational::zero()))));
    }
    if let Some(n) = finite_terms(scale, branch, t, t0)? {
        let limit = match rule {
            CoefficientRule::Explicit(v) => n.min(v.len()),
            _ => n,
        };
        let mut seq = MonomialSeq::new(scale, kind, t, t0)?;
        let mut sum = Rational::zero();
        for k in 0..limit {
            let h = seq.next().expect("unbounded");
            if !h.is_zero() {
                sum += rule.coefficient(k)? * h;
            }
        }
        return Ok(report(Verdict::FiniteSum, Method::FiniteSum, limit, Some(Number::Exact(sum))));
    }
    if let CoefficientRule::Explicit(v) = rule {
        let mut seq = MonomialSeq::new(scale, kind, t, t0)?;
        let sum: Rational = v.iter().map(|a| a * seq.next().expect("unbounded")).sum();
        return Ok(report(Verdict::Convergent, Method::Explicit, v.len(), Some(Number::Exact(sum))));
    }

    let coeff = rule.ratio_estimate(RATIO_WINDOW);
    let term_ratio = term_ratio_estimate(scale, coeff, t, t0);
    let with_ratios = |mut r: BranchReport| {
        r.coeff_ratio = coeff;
        r.term_ratio = term_ratio.or(r.term_ratio);
        r
    };

    // Σ s p^k h_k is s·e_p below t0 and Σ s p^k ĥ_k is s·ê_p above t0
    // whenever |cp| < 1.
    if let (CoefficientRule::Geometric { scale: s, ratio: p }, TimeScale::Uniform(g)) = (rule, scale) {
        if (g.step() * p).abs() < Rational::one() {
            let kind = match branch {
                Branch::Delta => ExpKind::Delta,
                Branch::Nabla => ExpKind::Nabla,
            };
            let params = ExpParams { p: crate::specials::Coefficient::Constant(p.clone()), kind, t0: t0.clone() };
            let value = s * exp_eval(scale, &params, t)?;
            return Ok(with_ratios(report(Verdict::Convergent, Method::ClosedForm, 0, Some(Number::Exact(value)))));
        }
    }

    let divergent = term_ratio.is_some_and(|r| r > 1.0 + RATIO_MARGIN);
    if divergent && !force {
        return Ok(with_ratios(report(Verdict::Divergent, Method::Withheld, 0, None)));
    }
    let (value, terms, observed, ending) = truncate(rule, scale, kind, t, t0, &spec.policy)?;
    let verdict = match ending {
        _ if divergent => Verdict::Divergent,
        Ending::NotShrinking => Verdict::Divergent,
        Ending::Converged => Verdict::Convergent,
        Ending::Exhausted => Verdict::Inconclusive,
    };
    let mut r = if verdict == Verdict::Divergent && !force {
        with_ratios(report(verdict, Method::Withheld, terms, None))
    } else {
        with_ratios(report(verdict, Method::Truncated, terms, Some(Number::Float(value))))
    };
    r.term_ratio = r.term_ratio.or(observed);
    Ok(r)
}

/// Sums terms until `m` consecutive ones fall below `ε` while the observed
/// term ratio is below one. Returns the sum, the number of terms, the last
/// observed ratio and how the run ended.
fn truncate(
    rule: &CoefficientRule,
    scale: &TimeScale,
    kind: MonomialKind,
    t: &Rational,
    t0: &Rational,
    policy: &TruncationPolicy,
) -> Result<(f64, usize, Option<f64>, Ending)> {
    let mut seq = MonomialSeq::new(scale, kind, t, t0)?;
    let mut sum = 0.0f64;
    let mut midway = 0.0f64;
    let mut small = 0usize;
    let mut prev: Option<f64> = None;
    let mut ratio: Option<f64> = None;
    for k in 0..policy.max_terms {
        let h = seq.next().expect("unbounded");
        let term = to_f64(&(rule.coefficient(k)? * h));
        sum += term;
        if let Some(p) = prev.filter(|p| *p != 0.0) {
            ratio = Some((term / p).abs());
        }
        prev = Some(term);
        if k == policy.max_terms / 2 {
            midway = term.abs();
        }
        if term.abs() < policy.abs_tol {
            small += 1;
        } else {
            small = 0;
        }
        let shrinking = term == 0.0 || ratio.is_some_and(|r| r < 1.0);
        if small >= policy.consecutive_small && shrinking {
            return Ok((sum, k + 1, ratio, Ending::Converged));
        }
        if !sum.is_finite() {
            return Ok((sum, k + 1, ratio, Ending::NotShrinking));
        }
    }
    // Terms that are no smaller than halfway through do not tend to zero.
    let last = prev.unwrap_or(0.0).abs();
    let ending = if last >= policy.abs_tol && last >= midway { Ending::NotShrinking } else { Ending::Exhausted };
    Ok((sum, policy.max_terms, ratio, ending))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ending {
    Converged,
    Exhausted,
    NotShrinking,
}

fn combine_verdicts(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let v: Vec<Verdict> = verdicts.into_iter().collect();
    if v.is_empty() {
        return Verdict::FiniteSum;
    }
    let worst = *v.iter().max().expect("nonempty");
    if worst > Verdict::Convergent {
        return worst;
    }
    // A convergent branch dominates an exactly finite one.
    if v.contains(&Verdict::Convergent) { Verdict::Convergent } else { Verdict::FiniteSum }
}

fn bound_and_regions(spec: &SeriesSpec) -> (Option<Number>, Region, Region) {
    let mut bound: Option<Rational> = Some(Rational::zero());
    for branch in spec.active() {
        let m = match spec.rule(branch) {
            CoefficientRule::Geometric { scale, ratio } if !scale.is_zero() => Some(ratio.abs()),
            rule => rule.ratio_estimate(RATIO_WINDOW).and_then(|r| from_f64(r).ok()),
        };
        bound = match (bound, m) {
            (Some(b), Some(m)) => Some(if m > b { m } else { b }),
            _ => None,
        };
    }
    let Some(m) = bound else {
        return (None, Region::Empty, Region::Empty);
    };
    let t0 = &spec.t0;
    let (i, j) = match &spec.scale {
        TimeScale::Real => (Region::AtLeast(t0.clone()), Region::AtMost(t0.clone())),
        TimeScale::Uniform(g) => {
            if g.step() * &m < Rational::one() {
                (Region::AtLeast(t0 + g.step()), Region::AtMost(t0 - g.step()))
            } else {
                (Region::Empty, Region::Empty)
            }
        }
        TimeScale::Finite(g) => {
            let mut i = Vec::new();
            let mut j = Vec::new();
            for t in g.points() {
                let (Ok(rho), Ok(sigma), Ok(nu), Ok(mu)) =
                    (spec.scale.rho(t), spec.scale.sigma(t), spec.scale.nu(t), spec.scale.mu(t))
                else {
                    continue;
                };
                if rho >= *t0 && &nu * &m < Rational::one() {
                    i.push(t.clone());
                }
                if sigma <= *t0 && &mu * &m < Rational::one() {
                    j.push(t.clone());
                }
            }
            let wrap = |p: Vec<Rational>| if p.is_empty() { Region::Empty } else { Region::Points(p) };
            (wrap(i), wrap(j))
        }
    };
    (Some(Number::Exact(m)), i, j)
}

/// Evaluates the combined series at `t`. A divergent branch withholds the
/// value unless `force` is set, in which case a truncated sum is returned.
pub fn series_eval(spec: &SeriesSpec, t: &Rational, force: bool) -> Result<SeriesValue> {
    spec.validate()?;
    spec.scale.check(t)?;
    let mut delta = None;
    let mut nabla = None;
    for branch in spec.active() {
        let r = eval_branch(spec, branch, t, force)?;
        match branch {
            Branch::Delta => delta = Some(r),
            Branch::Nabla => nabla = Some(r),
        }
    }
    let verdict = combine_verdicts(delta.iter().chain(nabla.iter()).map(|r| r.verdict));
    let part = |r: &Option<BranchReport>| r.as_ref().map(|r| r.value.clone());
    let one_minus = Rational::one() - &spec.alpha;
    let value = match (part(&delta), part(&nabla)) {
        (Some(Some(d)), Some(Some(n))) => Some(Number::combine(&spec.alpha, &d, &one_minus, &n)),
        (Some(Some(d)), None) => Some(Number::combine(&spec.alpha, &d, &Rational::zero(), &Number::Exact(Rational::zero()))),
        (None, Some(Some(n))) => Some(Number::combine(&Rational::zero(), &Number::Exact(Rational::zero()), &one_minus, &n)),
        _ => None,
    };
    let (bound_m, region_i, region_j) = bound_and_regions(spec);
    Ok(SeriesValue { value, report: ConvergenceReport { verdict, delta, nabla, bound_m, region_i, region_j } })
}

/// Convergence diagnosis from coefficient ratios alone: convergent
/// everywhere when every active ratio estimate is below `1/c`; finite at
/// `at` when the zero region applies there; inconclusive otherwise.
pub fn combined_convergence(spec: &SeriesSpec, at: Option<&Rational>) -> Result<ConvergenceReport> {
    spec.validate()?;
    if let Some(t) = at {
        spec.scale.check(t)?;
    }
    let mono = monomial_ratio(&spec.scale);
    let mut branch_reports = [None, None];
    for branch in spec.active() {
        let rule = spec.rule(branch);
        let coeff = rule.ratio_estimate(RATIO_WINDOW);
        let term = match (coeff, mono) {
            (Some(r), Some(c)) => Some(r * c),
            _ => None,
        };
        let finite = match at {
            Some(t) => finite_terms(&spec.scale, branch, t, &spec.t0)?,
            None => None,
        };
        let verdict = if rule.is_zero()
            || matches!(rule, CoefficientRule::Explicit(_))
            || term.is_some_and(|r| r < 1.0 - RATIO_MARGIN)
        {
            Verdict::Convergent
        } else if finite.is_some() {
            Verdict::FiniteSum
        } else {
            Verdict::Inconclusive
        };
        let report = BranchReport {
            verdict,
            method: Method::Withheld,
            terms_used: 0,
            coeff_ratio: coeff,
            monomial_ratio: mono,
            term_ratio: term,
            value: None,
        };
        branch_reports[branch as usize] = Some(report);
    }
    let [delta, nabla] = branch_reports;
    let verdict = combine_verdicts(delta.iter().chain(nabla.iter()).map(|r| r.verdict));
    let (bound_m, region_i, region_j) = bound_and_regions(spec);
    Ok(ConvergenceReport { verdict, delta, nabla, bound_m, region_i, region_j })
}

/// Same-direction derivative of one branch: the coefficients shift by one.
pub fn series_shift_derivative(spec: &SeriesSpec, branch: Branch) -> Result<SeriesSpec> {
    spec.validate()?;
    let shifted = spec.rule(branch).shifted();
    let out = match branch {
        Branch::Delta => SeriesSpec::delta(spec.t0.clone(), shifted, spec.scale.clone())?,
        Branch::Nabla => SeriesSpec::nabla(spec.t0.clone(), shifted, spec.scale.clone())?,
    };
    out.with_policy(spec.policy.clone())
}

/// Cross-direction derivative of one branch on a homogeneous scale: the ∇-
/// derivative of the Δ-branch has coefficients `Σ_j (−c)^j a_{j+k+1}` and
/// the Δ-derivative of the ∇-branch has `Σ_j c^j b_{j+k+1}`.
pub fn series_cross_derivative(spec: &SeriesSpec, branch: Branch) -> Result<SeriesSpec> {
    spec.validate()?;
    let c = spec
        .scale
        .homogeneous_step()
        .ok_or_else(|| Error::Unsupported("cross derivatives need a homogeneous scale".into()))?;
    // g = −c for the Δ-branch, c for the ∇-branch.
    let g = match branch {
        Branch::Delta => -c.clone(),
        Branch::Nabla => c.clone(),
    };
    let rule = spec.rule(branch);
    let out = match rule {
        _ if rule.is_zero() => CoefficientRule::zero(),
        CoefficientRule::Geometric { scale, ratio } => {
            if (&c * ratio).abs() >= Rational::one() {
                return Err(Error::RegionViolation(format!(
                    "c·M = {} is not below 1",
                    format_rational(&(&c * ratio.abs()))
                )));
            }
            let factor = ratio / (Rational::one() - &g * ratio);
            CoefficientRule::Geometric { scale: scale * factor, ratio: ratio.clone() }
        }
        CoefficientRule::Explicit(v) => {
            let n = v.len();
            let mut out = Vec::with_capacity(n.saturating_sub(1));
            for k in 0..n.saturating_sub(1) {
                let mut s = Rational::zero();
                let mut gj = Rational::one();
                for a in &v[k + 1..] {
                    s += &gj * a;
                    gj *= &g;
                }
                out.push(s);
            }
            CoefficientRule::Explicit(out)
        }
        CoefficientRule::Custom { label, f } => {
            let m = rule
                .ratio_estimate(RATIO_WINDOW)
                .filter(|m| m.is_finite())
                .ok_or_else(|| Error::RegionViolation("no coefficient bound M could be inferred".into()))?;
            if to_f64(&c) * m >= 1.0 - RATIO_MARGIN {
                return Err(Error::RegionViolation(format!("c·M ≈ {} is not below 1", to_f64(&c) * m)));
            }
            let (f, g, policy) = (f.clone(), g.clone(), spec.policy.clone());
            CoefficientRule::memoized(format!("cross({label})"), move |k| inner_sum(&f, &g, k, &policy))
        }
    };
    let out = match branch {
        Branch::Delta => SeriesSpec::delta(spec.t0.clone(), out, spec.scale.clone())?,
        Branch::Nabla => SeriesSpec::nabla(spec.t0.clone(), out, spec.scale.clone())?,
    };
    out.with_policy(spec.policy.clone())
}

fn inner_sum(f: &CoefficientFn, g: &Rational, k: usize, policy: &TruncationPolicy) -> Result<Rational> {
    let mut s = Rational::zero();
    let mut gj = Rational::one();
    let mut small = 0;
    for j in 0..policy.max_terms {
        let term = &gj * f(j + k + 1)?;
        let tiny = to_f64(&term).abs() < policy.abs_tol;
        s += term;
        small = if tiny { small + 1 } else { 0 };
        if small >= policy.consecutive_small {
            break;
        }
        if g.is_zero() {
            break;
        }
        gj *= g;
    }
    Ok(s)
}

/// Direction of a Taylor expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaylorDirection {
    Delta,
    Nabla,
    /// `α · (Δ expansion) + (1−α) · (∇ expansion)`.
    Combined(Rational),
}

impl fmt::Display for TaylorDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaylorDirection::Delta => f.write_str("delta"),
            TaylorDirection::Nabla => f.write_str("nabla"),
            TaylorDirection::Combined(a) => write!(f, "combined({})", format_rational(a)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TaylorExpansion<V> {
    pub direction: TaylorDirection,
    pub order: usize,
    /// `f^{Δ^k}(t0)` for `k ≤ n`; empty when the Δ side is not used.
    pub delta_coefficients: Vec<V>,
    /// `f^{∇^k}(t0)` for `k ≤ n`; empty when the ∇ side is not used.
    pub nabla_coefficients: Vec<V>,
    pub partial_sum: V,
    pub remainder: V,
    pub reconstructed: V,
    pub target: V,
    pub accuracy: Accuracy,
    /// Set when a combined expansion fell back to a single direction.
    pub degraded: Option<String>,
}

struct OneSided<V> {
    coefficients: Vec<V>,
    partial: V,
    remainder: V,
    accuracy: Accuracy,
}

fn one_sided<V: Scalar>(
    cfg: &CalculusConfig,
    f: &GridFunction<V>,
    branch: Branch,
    n: usize,
    t0: &Rational,
    t: &Rational,
) -> Result<OneSided<V>> {
    let scale = f.domain().clone();
    let kind = branch.deriv_kind();
    let mono = branch.monomial_kind();
    let mut accuracy = f.accuracy();
    let mut coefficients = Vec::with_capacity(n + 1);
    let mut partial = V::zero();
    for k in 0..=n {
        let d = cfg.iterated_derivative(f, kind.clone(), k)?;
        accuracy = accuracy.max(d.accuracy());
        let c = d.eval(t0)?;
        partial = partial + c.clone() * V::from_rational(&monomial(&scale, mono, k, t, t0)?);
        coefficients.push(c);
    }
    // R_n = ∫ f^{Δ^{n+1}}(τ) h_n(t, σ(τ)) Δτ and
    // R̂_n = ∫ f^{∇^{n+1}}(τ) ĥ_n(t, ρ(τ)) ∇τ.
    let top = cfg.iterated_derivative(f, kind, n + 1)?;
    accuracy = accuracy.max(top.accuracy());
    let (s, tt) = (scale.clone(), t.clone());
    let integrand = GridFunction::try_new(scale.clone(), move |tau: &Rational| {
        let shifted = match branch {
            Branch::Delta => s.sigma(tau)?,
            Branch::Nabla => s.rho(tau)?,
        };
        let h = monomial(&s, mono, n, &tt, &shifted)?;
        Ok(top.eval(tau)? * V::from_rational(&h))
    });
    let r = match branch {
        Branch::Delta => cfg.delta_integral(&integrand, t0, t)?,
        Branch::Nabla => cfg.nabla_integral(&integrand, t0, t)?,
    };
    Ok(OneSided { coefficients, partial, remainder: r.value, accuracy: accuracy.max(r.accuracy) })
}

/// Taylor expansion of order `n` about `t0`, evaluated at `t`.
pub fn taylor<V: Scalar>(
    f: &GridFunction<V>,
    direction: &TaylorDirection,
    n: usize,
    t0: &Rational,
    t: &Rational,
) -> Result<TaylorExpansion<V>> {
    taylor_with_config(&CalculusConfig::default(), f, direction, n, t0, t)
}

pub fn taylor_with_config<V: Scalar>(
    cfg: &CalculusConfig,
    f: &GridFunction<V>,
    direction: &TaylorDirection,
    n: usize,
    t0: &Rational,
    t: &Rational,
) -> Result<TaylorExpansion<V>> {
    let scale = f.domain();
    scale.check(t)?;
    scale.check(t0)?;
    let target = f.eval(t)?;
    let mut degraded = None;
    let (delta, nabla, alpha) = match direction {
        TaylorDirection::Delta => (Some(one_sided(cfg, f, Branch::Delta, n, t0, t)?), None, Rational::one()),
        TaylorDirection::Nabla => (None, Some(one_sided(cfg, f, Branch::Nabla, n, t0, t)?), Rational::zero()),
        TaylorDirection::Combined(alpha) => {
            check_alpha(alpha)?;
            let d = one_sided(cfg, f, Branch::Delta, n, t0, t);
            let b = one_sided(cfg, f, Branch::Nabla, n, t0, t);
            match (d, b) {
                (Ok(d), Ok(b)) => (Some(d), Some(b), alpha.clone()),
                (Ok(d), Err(Error::Domain(why))) => {
                    degraded = Some(format!("nabla side unavailable ({why}); using delta expansion"));
                    (Some(d), None, Rational::one())
                }
                (Err(Error::Domain(why)), Ok(b)) => {
                    degraded = Some(format!("delta side unavailable ({why}); using nabla expansion"));
                    (None, Some(b), Rational::zero())
                }
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
    };
    let a = V::from_rational(&alpha);
    let a1 = V::from_rational(&(Rational::one() - &alpha));
    let mix = |d: Option<&V>, b: Option<&V>| match (d, b) {
        (Some(d), Some(b)) => a.clone() * d.clone() + a1.clone() * b.clone(),
        (Some(d), None) => d.clone(),
        (None, Some(b)) => b.clone(),
        (None, None) => V::zero(),
    };
    let partial_sum = mix(delta.as_ref().map(|s| &s.partial), nabla.as_ref().map(|s| &s.partial));
    let remainder = mix(delta.as_ref().map(|s| &s.remainder), nabla.as_ref().map(|s| &s.remainder));
    let reconstructed = partial_sum.clone() + remainder.clone();
    let accuracy = delta.iter().chain(nabla.iter()).map(|s| s.accuracy).max().unwrap_or(Accuracy::Exact);
    if accuracy == Accuracy::Exact && reconstructed != target {
        return Err(Error::Inconsistent(format!(
            "Taylor identity failed to close at t = {}",
            format_rational(t)
        )));
    }
    Ok(TaylorExpansion {
        direction: direction.clone(),
        order: n,
        delta_coefficients: delta.map(|s| s.coefficients).unwrap_or_default(),
        nabla_coefficients: nabla.map(|s| s.coefficients).unwrap_or_default(),
        partial_sum,
        remainder,
        reconstructed,
        target,
        accuracy,
        degraded,
    })
}

/// Running anti-diagonal of the derivative table along `t0, σ(t0), …`
/// (or `t0, ρ(t0), …`).
struct DiffTable {
    points: Vec<Rational>,
    diagonal: Vec<Rational>,
}

/// The Taylor series of `f` about `t0` in one direction: `a_k = f^{Δ^k}(t0)`
/// or `b_k = f^{∇^k}(t0)`, computed incrementally and cached.
pub fn taylor_series_of(f: &GridFunction<Rational>, branch: Branch, t0: &Rational) -> Result<SeriesSpec> {
    let scale = f.domain().clone();
    if !scale.is_discrete() {
        return Err(Error::Unsupported("exact Taylor coefficients need a discrete scale".into()));
    }
    scale.check(t0)?;
    let table = Mutex::new(DiffTable { points: Vec::new(), diagonal: Vec::new() });
    let (func, s, origin) = (f.clone(), scale.clone(), t0.clone());
    let rule = CoefficientRule::memoized(format!("taylor[{branch:?}]"), move |k| {
        let mut tb = table.lock().unwrap_or_else(|e| e.into_inner());
        while tb.points.len() <= k {
            let next = match tb.points.last() {
                None => origin.clone(),
                Some(p) => {
                    let q = match branch {
                        Branch::Delta => s.sigma(p)?,
                        Branch::Nabla => s.rho(p)?,
                    };
                    if &q == p {
                        return Err(Error::Domain(format!(
                            "derivative of order {} at {} runs past the end of the scale",
                            tb.points.len(),
                            format_rational(&origin)
                        )));
                    }
                    q
                }
            };
            let m = tb.points.len();
            let mut fresh = Vec::with_capacity(m + 1);
            fresh.push(func.eval(&next)?);
            tb.points.push(next);
            for j in 1..=m {
                let gap = &tb.points[m - j + 1] - &tb.points[m - j];
                let v = (&fresh[j - 1] - &tb.diagonal[j - 1]) / gap;
                fresh.push(v);
            }
            tb.diagonal = fresh;
        }
        Ok(tb.diagonal[k].clone())
    });
    let spec = match branch {
        Branch::Delta => SeriesSpec::delta(t0.clone(), rule, scale)?,
        Branch::Nabla => SeriesSpec::nabla(t0.clone(), rule, scale)?,
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn pow2(scale: TimeScale) -> GridFunction<Rational> {
        GridFunction::try_new(scale, |t: &Rational| {
            let n = t.to_integer().to_i64().ok_or_else(|| Error::Invalid("range".into()))?;
            crate::rational::pow_rational(&int(2), n)
        })
    }

    fn exact(v: &SeriesValue) -> Rational {
        v.value.as_ref().and_then(Number::as_exact).cloned().expect("exact value")
    }

    #[test]
    fn origin_value() {
        let spec = SeriesSpec::new(
            ratio(1, 3),
            int(2),
            CoefficientRule::Explicit(vec![int(5), int(7)]),
            CoefficientRule::geometric(int(9)),
            TimeScale::integers(),
        )
        .unwrap();
        let v = series_eval(&spec, &int(2), false).unwrap();
        assert_eq!(exact(&v), ratio(1, 3) * int(5) + ratio(2, 3));
    }

    #[test]
    fn binomial_sum() {
        let spec = SeriesSpec::delta(int(0), CoefficientRule::geometric(int(1)), TimeScale::integers()).unwrap();
        let v = series_eval(&spec, &int(3), false).unwrap();
        assert_eq!(exact(&v), int(8));
        assert_eq!(v.report.verdict, Verdict::FiniteSum);
    }

    #[test]
    fn both_branches_represent_pow2() {
        let spec = SeriesSpec::new(
            ratio(1, 4),
            int(0),
            CoefficientRule::geometric(int(1)),
            CoefficientRule::geometric(ratio(1, 2)),
            TimeScale::integers(),
        )
        .unwrap();
        let v = series_eval(&spec, &int(4), false).unwrap();
        assert_eq!(exact(&v), int(16));
        assert_eq!(v.report.delta.as_ref().unwrap().verdict, Verdict::FiniteSum);
        assert_eq!(v.report.nabla.as_ref().unwrap().verdict, Verdict::Convergent);
    }

    #[test]
    fn growing_terms_are_divergent() {
        // binom(−3, k) grows in magnitude, ratio → 1 from above
        let ones = SeriesSpec::delta(int(0), CoefficientRule::custom("1", |_| Ok(Rational::one())), TimeScale::integers())
            .unwrap()
            .with_policy(TruncationPolicy { max_terms: 500, ..TruncationPolicy::default() })
            .unwrap();
        let v = series_eval(&ones, &int(-3), false).unwrap();
        assert_eq!(v.report.verdict, Verdict::Divergent);
        assert!(v.value.is_none());
        assert!(series_eval(&ones, &int(-3), true).unwrap().value.is_some());
    }

    #[test]
    fn truncated_nabla_branch() {
        let b = CoefficientRule::custom("half", |k| Ok(pow(&ratio(1, 2), k)));
        let spec = SeriesSpec::nabla(int(0), b, TimeScale::integers()).unwrap();
        let v = series_eval(&spec, &int(4), false).unwrap();
        let x = v.value.unwrap().to_f64();
        assert!((x - 16.0).abs() < 1e-9, "{x}");
        let r = v.report.nabla.unwrap();
        assert_eq!(r.method, Method::Truncated);
        assert_eq!(r.verdict, Verdict::Convergent);
    }

    #[test]
    fn divergence_withheld() {
        let spec = SeriesSpec::delta(int(0), CoefficientRule::geometric(int(2)), TimeScale::integers()).unwrap();
        let v = series_eval(&spec, &int(-1), false).unwrap();
        assert_eq!(v.report.verdict, Verdict::Divergent);
        assert!(matches!(v.require_value(), Err(Error::Divergent(_))));
        let forced = series_eval(&spec.clone().with_policy(TruncationPolicy { max_terms: 50, ..Default::default() }).unwrap(), &int(-1), true).unwrap();
        assert!(forced.value.is_some());
        assert_eq!(forced.report.verdict, Verdict::Divergent);
    }

    #[test]
    fn factorial_coefficients_never_convergent() {
        let rule = CoefficientRule::memoized("k!", |k| Ok(Rational::from_integer(crate::monomials::factorial(k as u64))));
        let spec = SeriesSpec::delta(int(0), rule.clone(), TimeScale::integers()).unwrap();
        let v = series_eval(&spec, &int(-2), false).unwrap();
        assert!(v.report.verdict >= Verdict::Inconclusive);
        let c = combined_convergence(&spec, None).unwrap();
        assert_ne!(c.verdict, Verdict::Convergent);
    }

    #[test]
    fn convergence_reports() {
        let g = || CoefficientRule::geometric(ratio(1, 2));
        let spec = SeriesSpec::new(ratio(1, 2), int(0), g(), g(), TimeScale::integers()).unwrap();
        assert_eq!(combined_convergence(&spec, None).unwrap().verdict, Verdict::Convergent);
        let ones = SeriesSpec::delta(int(0), CoefficientRule::geometric(int(1)), TimeScale::integers()).unwrap();
        assert_eq!(combined_convergence(&ones, Some(&int(3))).unwrap().verdict, Verdict::FiniteSum);
        assert_eq!(combined_convergence(&ones, Some(&int(-3))).unwrap().verdict, Verdict::Inconclusive);
        let r = combined_convergence(&spec, None).unwrap();
        assert_eq!(r.region_i, Region::AtLeast(int(1)));
        assert_eq!(r.region_j, Region::AtMost(int(-1)));
    }

    #[test]
    fn endpoint_collapse() {
        let a = CoefficientRule::Explicit(vec![int(1), int(2), int(3)]);
        let b = CoefficientRule::geometric(ratio(1, 3));
        let z = TimeScale::integers();
        let both = SeriesSpec::new(int(1), int(0), a.clone(), b.clone(), z.clone()).unwrap();
        let only = SeriesSpec::delta(int(0), a.clone(), z.clone()).unwrap();
        for t in -3..=3 {
            let t = int(t);
            assert_eq!(exact(&series_eval(&both, &t, false).unwrap()), exact(&series_eval(&only, &t, false).unwrap()));
        }
        let both = SeriesSpec::new(int(0), int(0), a, b.clone(), z.clone()).unwrap();
        let only = SeriesSpec::nabla(int(0), b, z).unwrap();
        for t in -3..=3 {
            let t = int(t);
            assert_eq!(exact(&series_eval(&both, &t, false).unwrap()), exact(&series_eval(&only, &t, false).unwrap()));
        }
    }

    #[test]
    fn shift_derivative() {
        let z = TimeScale::integers();
        let spec = SeriesSpec::delta(int(0), CoefficientRule::Explicit(vec![int(3)]), z.clone()).unwrap();
        assert!(series_shift_derivative(&spec, Branch::Delta).unwrap().a.is_zero());
        let spec = SeriesSpec::delta(int(0), CoefficientRule::geometric(int(3)), z).unwrap();
        let d = series_shift_derivative(&spec, Branch::Delta).unwrap();
        assert_eq!(d.a.coefficient(2).unwrap(), int(27));
    }

    #[test]
    fn cross_derivative_closed_forms() {
        let z = TimeScale::integers();
        let p = ratio(1, 2);
        let spec = SeriesSpec::delta(int(0), CoefficientRule::geometric(p.clone()), z.clone()).unwrap();
        let d = series_cross_derivative(&spec, Branch::Delta).unwrap();
        assert_eq!(d.a.coefficient(0).unwrap(), &p / (int(1) + &p));
        let spec = SeriesSpec::nabla(int(0), CoefficientRule::geometric(p.clone()), z.clone()).unwrap();
        let d = series_cross_derivative(&spec, Branch::Nabla).unwrap();
        assert_eq!(d.b.coefficient(1).unwrap(), &p * &p / (int(1) - &p));
        let spec = SeriesSpec::delta(int(0), CoefficientRule::geometric(int(2)), z.clone()).unwrap();
        assert!(matches!(series_cross_derivative(&spec, Branch::Delta), Err(Error::RegionViolation(_))));
        let zero = SeriesSpec::delta(int(0), CoefficientRule::zero(), z).unwrap();
        assert!(series_cross_derivative(&zero, Branch::Delta).unwrap().a.is_zero());
    }

    #[test]
    fn cross_derivative_custom_matches_geometric() {
        let z = TimeScale::integers();
        let rule = CoefficientRule::custom("third", |k| Ok(pow(&ratio(1, 3), k)));
        let spec = SeriesSpec::delta(int(0), rule, z).unwrap();
        let d = series_cross_derivative(&spec, Branch::Delta).unwrap();
        for k in 0..5 {
            let expect = to_f64(&(pow(&ratio(1, 3), k + 1) / ratio(4, 3)));
            assert!((to_f64(&d.a.coefficient(k).unwrap()) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn taylor_of_pow2() {
        let f = pow2(TimeScale::integers());
        let e = taylor(&f, &TaylorDirection::Delta, 4, &int(0), &int(4)).unwrap();
        assert_eq!(e.partial_sum, int(16));
        assert_eq!(e.remainder, int(0));
        assert_eq!(e.delta_coefficients, vec![int(1); 5]);
        let e = taylor(&f, &TaylorDirection::Nabla, 3, &int(0), &int(2)).unwrap();
        assert_eq!(e.nabla_coefficients, vec![int(1), ratio(1, 2), ratio(1, 4), ratio(1, 8)]);
        assert_eq!(e.reconstructed, int(4));
        let e = taylor(&f, &TaylorDirection::Combined(ratio(1, 2)), 2, &int(1), &int(-3)).unwrap();
        assert_eq!(e.reconstructed, ratio(1, 8));
        let e = taylor(&f, &TaylorDirection::Delta, 0, &int(1), &int(5)).unwrap();
        assert_eq!(e.partial_sum, int(2));
        assert_eq!(e.remainder, int(30));
    }

    #[test]
    fn nabla_remainder_uses_backward_kernel() {
        let f = GridFunction::new(TimeScale::integers(), |t: &Rational| t * t * t);
        let e = taylor(&f, &TaylorDirection::Nabla, 2, &int(0), &int(2)).unwrap();
        // coefficients 0, 1, −6 against ĥ_1(2,0) = 2, ĥ_2(2,0) = 3
        assert_eq!(e.partial_sum, int(-16));
        assert_eq!(e.remainder, int(24));
        assert_eq!(e.reconstructed, int(8));
    }

    #[test]
    fn combined_taylor_degrades_at_boundary() {
        let g = TimeScale::finite((0..6).map(int).collect()).unwrap();
        let f = GridFunction::new(g, |t: &Rational| t * t);
        let e = taylor(&f, &TaylorDirection::Combined(ratio(1, 2)), 1, &int(0), &int(3)).unwrap();
        assert!(e.degraded.is_some());
        assert!(e.nabla_coefficients.is_empty());
        assert_eq!(e.reconstructed, int(9));
    }

    #[test]
    fn taylor_on_real_line() {
        let f = crate::specials::exp_function(&TimeScale::real(), &ExpParams::delta(1.0f64, int(0)));
        let e = taylor(&f, &TaylorDirection::Delta, 3, &int(0), &int(1)).unwrap();
        assert!((e.partial_sum - (1.0 + 1.0 + 0.5 + 1.0 / 6.0)).abs() < 1e-12);
        assert!((e.reconstructed - 1f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn taylor_series_coefficients() {
        let z = TimeScale::integers();
        let f = pow2(z.clone());
        let s = taylor_series_of(&f, Branch::Delta, &int(0)).unwrap();
        for k in 0..10 {
            assert_eq!(s.a.coefficient(k).unwrap(), int(1));
        }
        let s = taylor_series_of(&f, Branch::Nabla, &int(0)).unwrap();
        for k in 0..10 {
            assert_eq!(s.b.coefficient(k).unwrap(), pow(&ratio(1, 2), k));
        }
        let c = GridFunction::new(z, |_: &Rational| int(7));
        let s = taylor_series_of(&c, Branch::Delta, &int(3)).unwrap();
        assert_eq!(s.a.coefficient(0).unwrap(), int(7));
        assert_eq!(s.a.coefficient(4).unwrap(), int(0));
    }

    #[test]
    fn taylor_series_runs_out_on_finite_grid() {
        let g = TimeScale::finite(vec![int(0), int(1), int(3)]).unwrap();
        let f = GridFunction::new(g, |t: &Rational| t * t);
        let s = taylor_series_of(&f, Branch::Delta, &int(0)).unwrap();
        assert_eq!(s.a.coefficient(1).unwrap(), int(1));
        assert!(matches!(s.a.coefficient(3), Err(Error::Domain(_))));
    }
}
