use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{rational_to_f64, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    #[default]
    X,
    Y,
}

impl Var {
    fn symbol(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
        }
    }
}

/// Dense univariate polynomial over the rationals. `coeffs[k]` is the
/// coefficient of `t^k`; the last stored coefficient is nonzero, so the zero
/// polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
    var: Var,
}

impl UniPoly {
    pub fn zero(var: Var) -> Self {
        UniPoly { coeffs: Vec::new(), var }
    }

    pub fn constant(c: Rational, var: Var) -> Self {
        Self::new(vec![c], var)
    }

    /// The monomial `t`.
    pub fn variable(var: Var) -> Self {
        Self::new(vec![Rational::zero(), Rational::one()], var)
    }

    pub fn new(mut coeffs: Vec<Rational>, var: Var) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs, var }
    }

    pub fn from_ints(coeffs: &[i64], var: Var) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(), var)
    }

    /// `∏ (t - r)` over the given roots.
    pub fn from_roots(roots: &[Rational], var: Var) -> Self {
        roots.iter().fold(Self::constant(Rational::one(), var), |acc, r| {
            &acc * &Self::new(vec![-r.clone(), Rational::one()], var)
        })
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.to_f64_coeffs().iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
            .collect();
        Self::new(coeffs, self.var)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect(), self.var)
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect(), self.var)
    }

    /// Positive rational multiple with coprime integer coefficients. The sign
    /// of every value is preserved.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let (ints, _) = self.to_integer_coeffs();
        let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        Self::new(
            ints.into_iter()
                .map(|c| Rational::from_integer(c / &content))
                .collect(),
            self.var,
        )
    }

    /// Integer coefficients `c_k` and a positive denominator `L` with
    /// `self = (Σ c_k t^k) / L`.
    pub fn to_integer_coeffs(&self) -> (Vec<BigInt>, BigInt) {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        (ints, lcm)
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(self.var), Self::zero(self.var)));
        };
        if nd < dd {
            return Ok((Self::zero(self.var), self.clone()));
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot, self.var), Self::new(rem, self.var)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Number of sign changes in the coefficient sequence, zeros skipped.
    pub fn coefficient_sign_changes(&self) -> usize {
        let signs: Vec<bool> = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Cauchy root bound `1 + max |a_k / a_d|`.
    pub fn cauchy_bound(&self) -> Result<Rational> {
        let lc = self.leading();
        if lc.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let d = self.coeffs.len() - 1;
        let m = self.coeffs[..d]
            .iter()
            .map(|c| (c / &lc).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        Ok(m + Rational::one())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let v = self.var.symbol();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c}){v}")?,
                _ => write!(f, "({c}){v}^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        UniPoly::new(coeffs, self.var)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        UniPoly::new(coeffs, self.var)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.var);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out, self.var)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect(), self.var)
    }
}

/// Monic greatest common divisor.
///
/// Runs the Euclidean remainder sequence on primitive integer representatives
/// to keep coefficient growth down.
pub fn poly_gcd(a: &UniPoly, b: &UniPoly) -> Result<UniPoly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZero);
    }
    let (mut u, mut v) = (a.primitive(), b.primitive());
    if u.degree() < v.degree() {
        std::mem::swap(&mut u, &mut v);
    }
    while !v.is_zero() {
        let r = u.rem(&v)?.primitive();
        u = v;
        v = r;
    }
    Ok(u.monic().with_var(a.var))
}

/// `a / gcd(a, a')`, made monic.
pub fn squarefree_part(a: &UniPoly) -> Result<UniPoly> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if a.degree() == Some(0) {
        return Ok(UniPoly::constant(Rational::one(), a.var));
    }
    let g = poly_gcd(a, &a.derivative())?;
    let (q, r) = a.div_rem(&g)?;
    debug_assert!(r.is_zero());
    Ok(q.monic())
}
