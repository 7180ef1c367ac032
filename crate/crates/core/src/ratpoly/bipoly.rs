use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::Rational;
use super::unipoly::{UniPoly, Var};

/// Sparse bivariate polynomial: `(m, n) -> a_mn` for the monomial `x^m y^n`.
/// Only nonzero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn x() -> Self {
        let mut p = Self::zero();
        p.add_term(1, 0, Rational::one());
        p
    }

    pub fn y() -> Self {
        let mut p = Self::zero();
        p.add_term(0, 1, Rational::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for ((m, n), c) in terms {
            p.add_term(m, n, c);
        }
        p
    }

    pub fn add_term(&mut self, m: u32, n: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((m, n)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(m, n));
        }
    }

    pub fn coeff(&self, m: u32, n: u32) -> Rational {
        self.terms.get(&(m, n)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(m, n)| m + n).max()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|(m, _)| *m).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|(_, n)| *n).max()
    }

    /// `p(x0, y)` as a polynomial in `y`.
    pub fn eval_x(&self, x0: &Rational) -> UniPoly {
        let deg = self.degree_y().map_or(0, |d| d as usize + 1);
        let mut coeffs = vec![Rational::zero(); deg];
        for ((m, n), c) in &self.terms {
            coeffs[*n as usize] += c * pow(x0, *m);
        }
        UniPoly::new(coeffs, Var::Y)
    }

    /// `p(x, y0)` as a polynomial in `x`.
    pub fn eval_y(&self, y0: &Rational) -> UniPoly {
        let deg = self.degree_x().map_or(0, |d| d as usize + 1);
        let mut coeffs = vec![Rational::zero(); deg];
        for ((m, n), c) in &self.terms {
            coeffs[*m as usize] += c * pow(y0, *n);
        }
        UniPoly::new(coeffs, Var::X)
    }

    pub fn eval(&self, x0: &Rational, y0: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|((m, n), c)| c * pow(x0, *m) * pow(y0, *n))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Coefficient of `y^n` as a polynomial in `x`.
    pub fn y_coefficient(&self, n: u32) -> UniPoly {
        let deg = self.degree_x().map_or(0, |d| d as usize + 1);
        let mut coeffs = vec![Rational::zero(); deg];
        for ((m, k), c) in &self.terms {
            if *k == n {
                coeffs[*m as usize] = c.clone();
            }
        }
        UniPoly::new(coeffs, Var::X)
    }

    /// The degree-`k` homogeneous component `P_k = Σ_{m+n=k} a_mn x^m y^n`.
    pub fn homogeneous_part(&self, k: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|((m, n), _)| m + n == k)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// `P_k(x, 1)` as a polynomial in `x`, for a homogeneous part of degree `k`.
    pub fn dehomogenize_y(&self) -> UniPoly {
        self.eval_y(&Rational::one())
    }

    pub fn partial_x(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((m, _), _)| *m > 0)
                .map(|((m, n), c)| ((m - 1, *n), c * Rational::from_integer((*m).into()))),
        )
    }

    pub fn partial_y(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((_, n), _)| *n > 0)
                .map(|((m, n), c)| ((*m, n - 1), c * Rational::from_integer((*n).into()))),
        )
    }
}

fn pow(base: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for ((m, n), c) in &rhs.terms {
            out.add_term(*m, *n, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self + &(-rhs)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((m1, n1), a) in &self.terms {
            for ((m2, n2), b) in &rhs.terms {
                out.add_term(m1 + m2, n1 + n2, a * b);
            }
        }
        out
    }
}
