//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the library's monomial, exponential or
//! trigonometric code.

#![allow(dead_code)]

use num::{BigInt, One, Zero};
use timescale::Rational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn pow(base: &Rational, n: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..n.unsigned_abs() {
        acc *= base;
    }
    if n < 0 { acc.recip() } else { acc }
}

/// `x(x−1)…(x−n+1)/n!` for rational `x`.
pub fn binom(x: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..n {
        acc = acc * (x - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// `h_n(t,s)` on `cℤ` from the falling-factorial formula.
pub fn h_uniform(c: &Rational, n: usize, t: &Rational, s: &Rational) -> Rational {
    pow(c, n as i64) * binom(&((t - s) / c), n)
}

/// `ĥ_n(t,s)` on `cℤ`: `c^n · x(x+1)…(x+n−1)/n!` with `x = (t−s)/c`.
pub fn hhat_uniform(c: &Rational, n: usize, t: &Rational, s: &Rational) -> Rational {
    let x = (t - s) / c;
    pow(c, n as i64) * binom(&(&x + int(n as i64) - int(1)), n)
}

/// Monomials on the grid `offset + c·i`, `i ∈ [lo, hi]`, built straight
/// from the recursive integral definitions:
/// `h_{k+1}(t) = ∫_{t0}^t h_k(τ) Δτ`, `ĥ_{k+1}(t) = ∫_{t0}^t ĥ_k(τ) ∇τ`.
/// Returns `table[k][i - lo]`.
pub struct RecursiveTable {
    pub lo: i64,
    pub forward: Vec<Vec<Rational>>,
    pub backward: Vec<Vec<Rational>>,
}

impl RecursiveTable {
    pub fn build(c: &Rational, lo: i64, hi: i64, origin: i64, kmax: usize) -> Self {
        let n = (hi - lo + 1) as usize;
        let j = (origin - lo) as usize;
        let mut forward = vec![vec![Rational::one(); n]];
        let mut backward = vec![vec![Rational::one(); n]];
        for _ in 0..kmax {
            let f = forward.last().unwrap();
            let b = backward.last().unwrap();
            let mut nf = vec![Rational::zero(); n];
            let mut nb = vec![Rational::zero(); n];
            for i in 0..n {
                if i >= j {
                    // Δ: sum over [t0, t); ∇: sum over (t0, t]
                    nf[i] = (j..i).map(|m| c * &f[m]).sum();
                    nb[i] = (j + 1..=i).map(|m| c * &b[m]).sum();
                } else {
                    nf[i] = -(i..j).map(|m| c * &f[m]).sum::<Rational>();
                    nb[i] = -(i + 1..=j).map(|m| c * &b[m]).sum::<Rational>();
                }
            }
            forward.push(nf);
            backward.push(nb);
        }
        Self { lo, forward, backward }
    }

    pub fn h(&self, k: usize, i: i64) -> &Rational {
        &self.forward[k][(i - self.lo) as usize]
    }

    pub fn hhat(&self, k: usize, i: i64) -> &Rational {
        &self.backward[k][(i - self.lo) as usize]
    }
}

/// Minimal exact complex arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct Cx {
    pub re: Rational,
    pub im: Rational,
}

impl Cx {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        Cx::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn recip(&self) -> Cx {
        let d = &self.re * &self.re + &self.im * &self.im;
        Cx::new(&self.re / &d, -&self.im / &d)
    }

    pub fn powi(&self, n: i64) -> Cx {
        let mut acc = Cx::new(Rational::one(), Rational::zero());
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(self);
        }
        if n < 0 { acc.recip() } else { acc }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}
