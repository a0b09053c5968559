//! Time scales, jump operators, graininess and domain trimming.
//!
//! Three homogeneous-or-finite shapes are modelled: the real line, a uniform
//! grid `offset + c·ℤ`, and a finite strictly increasing grid. Discrete
//! points are exact rationals; points of the real line are rationals too,
//! so any finite `f64` can be passed through [`crate::rational::from_f64`].

use std::fmt;

use num::{BigInt, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformGrid {
    offset: Rational,
    step: Rational,
}

impl UniformGrid {
    pub fn new(offset: Rational, step: Rational) -> Result<Self> {
        if !step.is_positive() {
            return Err(Error::Invalid(format!(
                "uniform grid step must be positive, got {}",
                format_rational(&step)
            )));
        }
        Ok(Self { offset, step })
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn step(&self) -> &Rational {
        &self.step
    }

    /// Grid index of `t`, i.e. `(t - offset) / step` when integral.
    pub fn index_of(&self, t: &Rational) -> Option<BigInt> {
        let q = (t - &self.offset) / &self.step;
        q.is_integer().then(|| q.to_integer())
    }

    pub fn point(&self, index: &BigInt) -> Rational {
        &self.offset + &self.step * Rational::from_integer(index.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGrid {
    points: Vec<Rational>,
}

impl FiniteGrid {
    pub fn new(points: Vec<Rational>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Invalid("finite grid needs at least two points".into()));
        }
        Self::from_sorted(points)
    }

    /// Trimmed grids may shrink to a single point.
    fn from_sorted(points: Vec<Rational>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyDomain("finite grid has no points".into()));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(format!(
                "finite grid points must be strictly increasing ({} then {})",
                format_rational(&w[0]),
                format_rational(&w[1])
            )));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, t: &Rational) -> Option<usize> {
        self.points.binary_search(t).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TimeScale {
    Real,
    Uniform(UniformGrid),
    Finite(FiniteGrid),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Dense,
    Scattered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointClass {
    pub left: Side,
    pub right: Side,
}

impl TimeScale {
    pub fn real() -> Self {
        TimeScale::Real
    }

    /// `ℤ`.
    pub fn integers() -> Self {
        TimeScale::Uniform(UniformGrid {
            offset: Rational::zero(),
            step: Rational::from_integer(1.into()),
        })
    }

    /// `c·ℤ` shifted by `offset`.
    pub fn uniform(offset: Rational, step: Rational) -> Result<Self> {
        UniformGrid::new(offset, step).map(TimeScale::Uniform)
    }

    pub fn finite(points: Vec<Rational>) -> Result<Self> {
        FiniteGrid::new(points).map(TimeScale::Finite)
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, TimeScale::Real)
    }

    pub fn is_discrete(&self) -> bool {
        !self.is_dense()
    }

    /// Constant graininess of a homogeneous scale: `0` on `ℝ`, `c` on `c·ℤ`.
    pub fn homogeneous_step(&self) -> Option<Rational> {
        match self {
            TimeScale::Real => Some(Rational::zero()),
            TimeScale::Uniform(g) => Some(g.step.clone()),
            TimeScale::Finite(_) => None,
        }
    }

    pub fn contains(&self, t: &Rational) -> bool {
        match self {
            TimeScale::Real => true,
            TimeScale::Uniform(g) => g.index_of(t).is_some(),
            TimeScale::Finite(g) => g.index_of(t).is_some(),
        }
    }

    pub fn check(&self, t: &Rational) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{} is not a point of {self}", format_rational(t))))
        }
    }

    pub fn inf(&self) -> Option<&Rational> {
        match self {
            TimeScale::Finite(g) => g.points.first(),
            _ => None,
        }
    }

    pub fn sup(&self) -> Option<&Rational> {
        match self {
            TimeScale::Finite(g) => g.points.last(),
            _ => None,
        }
    }

    /// Forward jump `σ(t) = inf{s > t}`, with `σ(sup) = sup`.
    pub fn sigma(&self, t: &Rational) -> Result<Rational> {
        match self {
            TimeScale::Real => Ok(t.clone()),
            TimeScale::Uniform(g) => {
                self.check(t)?;
                Ok(t + &g.step)
            }
            TimeScale::Finite(g) => {
                let i = g.index_of(t).ok_or_else(|| self.off_scale(t))?;
                Ok(g.points.get(i + 1).unwrap_or(&g.points[i]).clone())
            }
        }
    }

    /// Backward jump `ρ(t) = sup{s < t}`, with `ρ(inf) = inf`.
    pub fn rho(&self, t: &Rational) -> Result<Rational> {
        match self {
            TimeScale::Real => Ok(t.clone()),
            TimeScale::Uniform(g) => {
                self.check(t)?;
                Ok(t - &g.step)
            }
            TimeScale::Finite(g) => {
                let i = g.index_of(t).ok_or_else(|| self.off_scale(t))?;
                Ok(g.points[i.saturating_sub(1)].clone())
            }
        }
    }

    /// Forward graininess `μ(t) = σ(t) − t`.
    pub fn mu(&self, t: &Rational) -> Result<Rational> {
        Ok(self.sigma(t)? - t)
    }

    /// Backward graininess `ν(t) = t − ρ(t)`.
    pub fn nu(&self, t: &Rational) -> Result<Rational> {
        Ok(t - self.rho(t)?)
    }

    pub fn point_class(&self, t: &Rational) -> Result<PointClass> {
        let side = |gap: Rational| if gap.is_zero() { Side::Dense } else { Side::Scattered };
        Ok(PointClass { left: side(self.nu(t)?), right: side(self.mu(t)?) })
    }

    /// `𝕋^{k^upper} ∩ 𝕋_{k^lower}`.
    pub fn trim(&self, upper: usize, lower: usize) -> Result<TrimmedScale> {
        if let TimeScale::Finite(g) = self {
            if upper + lower >= g.len() {
                return Err(Error::EmptyDomain(format!(
                    "trimming {upper} top and {lower} bottom points leaves nothing of {self}"
                )));
            }
        }
        Ok(TrimmedScale { base: self.clone(), upper, lower })
    }

    /// Every scale point in the closed interval `[lo, hi]`, ascending.
    pub fn points_between(&self, lo: &Rational, hi: &Rational) -> Result<Vec<Rational>> {
        match self {
            TimeScale::Real => Err(Error::Unsupported(
                "the real line has no enumerable points".into(),
            )),
            TimeScale::Uniform(g) => {
                if lo > hi {
                    return Ok(Vec::new());
                }
                let first = ((lo - &g.offset) / &g.step).ceil().to_integer();
                let last = ((hi - &g.offset) / &g.step).floor().to_integer();
                let mut out = Vec::new();
                let mut i = first;
                while i <= last {
                    out.push(g.point(&i));
                    i += 1;
                }
                Ok(out)
            }
            TimeScale::Finite(g) => {
                Ok(g.points.iter().filter(|p| *p >= lo && *p <= hi).cloned().collect())
            }
        }
    }

    fn off_scale(&self, t: &Rational) -> Error {
        Error::Domain(format!("{} is not a point of {self}", format_rational(t)))
    }
}

impl fmt::Display for TimeScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeScale::Real => f.write_str("R"),
            TimeScale::Uniform(g) => {
                write!(f, "{}Z", format_rational(&g.step))?;
                if !g.offset.is_zero() {
                    write!(f, "+{}", format_rational(&g.offset))?;
                }
                Ok(())
            }
            TimeScale::Finite(g) => {
                let pts: Vec<String> = g.points.iter().map(format_rational).collect();
                write!(f, "{{{}}}", pts.join(", "))
            }
        }
    }
}

/// A scale with `upper` points cut from the top and `lower` from the bottom.
/// Unbounded sides are unaffected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrimmedScale {
    base: TimeScale,
    upper: usize,
    lower: usize,
}

impl TrimmedScale {
    pub fn base(&self) -> &TimeScale {
        &self.base
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn contains(&self, t: &Rational) -> bool {
        match &self.base {
            TimeScale::Finite(g) => match g.index_of(t) {
                Some(i) => i >= self.lower && i + self.upper < g.len(),
                None => false,
            },
            other => other.contains(t),
        }
    }

    /// The trimmed set as a time scale in its own right.
    pub fn to_scale(&self) -> TimeScale {
        match &self.base {
            TimeScale::Finite(g) => {
                let pts = g.points[self.lower..g.len() - self.upper].to_vec();
                TimeScale::Finite(FiniteGrid::from_sorted(pts).expect("trim keeps order"))
            }
            other => other.clone(),
        }
    }
}
