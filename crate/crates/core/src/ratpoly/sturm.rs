//! Sturm chains, exact real-root counting and isolation by bisection.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{rational_to_f64, Rational};
use super::unipoly::{squarefree_part, UniPoly};
use crate::error::{Error, Result};

/// Default isolation target: intervals narrower than `2^-32`.
pub const DEFAULT_ISOLATION_WIDTH_LOG2: u32 = 32;

/// Integer-coefficient polynomial used for fast exact sign evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Positive multiple of `p` with integer coefficients.
    pub fn from_poly(p: &UniPoly) -> Self {
        IntPoly { coeffs: p.to_integer_coeffs().0 }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Sign of `p(n / d)` for `d > 0`, via homogenised Horner evaluation.
    pub fn sign_at_parts(&self, n: &BigInt, d: &BigInt) -> i8 {
        let Some(deg) = self.degree() else { return 0 };
        let mut acc = self.coeffs[deg].clone();
        let mut dpow = BigInt::one();
        for c in self.coeffs[..deg].iter().rev() {
            dpow *= d;
            acc = acc * n + c * &dpow;
        }
        sign_int(&acc)
    }

    pub fn sign_at(&self, t: &Rational) -> i8 {
        self.sign_at_parts(t.numer(), t.denom())
    }

    fn leading_sign(&self) -> i8 {
        self.coeffs.last().map_or(0, sign_int)
    }
}

fn sign_int(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// A point of the extended real line.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

/// Signed remainder sequence `p0 = a, p1 = a', p_{i+1} = -rem(p_{i-1}, p_i)`,
/// each entry rescaled by a positive constant to a primitive integer
/// polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    polys: Vec<UniPoly>,
    ints: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(a: &UniPoly) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let d = a.derivative();
        let mut polys = vec![a.primitive()];
        if !d.is_zero() {
            polys.push(d.primitive());
        }
        while polys.len() >= 2 {
            let n = polys.len();
            let r = polys[n - 2].rem(&polys[n - 1])?;
            if r.is_zero() {
                break;
            }
            polys.push((-&r).primitive());
        }
        // The last entry is gcd(a, a') up to a constant.
        if polys.last().and_then(UniPoly::degree).unwrap_or(0) > 0 {
            return Err(Error::NotSquareFree);
        }
        let ints = polys.iter().map(IntPoly::from_poly).collect();
        Ok(SturmChain { polys, ints })
    }

    pub fn polys(&self) -> &[UniPoly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    fn signs_at(&self, b: &Bound) -> Vec<i8> {
        match b {
            Bound::Finite(t) => self.ints.iter().map(|p| p.sign_at(t)).collect(),
            Bound::PosInf => self.ints.iter().map(IntPoly::leading_sign).collect(),
            Bound::NegInf => self
                .ints
                .iter()
                .map(|p| {
                    let s = p.leading_sign();
                    if p.degree().unwrap_or(0) % 2 == 1 {
                        -s
                    } else {
                        s
                    }
                })
                .collect(),
        }
    }

    /// Sign variations along the chain at `b`, zeros skipped.
    pub fn variations(&self, b: &Bound) -> usize {
        let nonzero: Vec<i8> = self.signs_at(b).into_iter().filter(|&s| s != 0).collect();
        nonzero.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Bound, hi: &Bound) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    pub(crate) fn base(&self) -> &IntPoly {
        &self.ints[0]
    }
}

/// Number of distinct real roots of `a` in `(lo, hi]`.
pub fn count_real_roots(a: &UniPoly, lo: &Bound, hi: &Bound) -> Result<usize> {
    if let (Bound::Finite(l), Bound::Finite(h)) = (lo, hi) {
        if l >= h {
            return Err(Error::EmptyInterval);
        }
    }
    if matches!(lo, Bound::PosInf) || matches!(hi, Bound::NegInf) {
        return Err(Error::EmptyInterval);
    }
    let s = squarefree_part(a)?;
    Ok(SturmChain::new(&s)?.count(lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

/// Closed rational interval containing exactly one real root. When
/// `lower == upper` the root is that rational number; otherwise it lies in the
/// open interval.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInterval {
    pub lower: Rational,
    pub upper: Rational,
    pub multiplicity_in_squarefree_part: u32,
    pub sign_class: SignClass,
}

impl RootInterval {
    fn new(lower: Rational, upper: Rational) -> Self {
        let sign_class = if lower.is_zero() && upper.is_zero() {
            SignClass::Zero
        } else if !lower.is_negative() {
            SignClass::Positive
        } else {
            SignClass::Negative
        };
        RootInterval { lower, upper, multiplicity_in_squarefree_part: 1, sign_class }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lower)
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lower + &self.upper) / Rational::from_integer(2.into())
    }

    pub fn midpoint_f64(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }

    /// Distance from `v` to the interval.
    pub fn distance_to(&self, v: f64) -> f64 {
        let lo = rational_to_f64(&self.lower);
        let hi = rational_to_f64(&self.upper);
        if v < lo {
            lo - v
        } else if v > hi {
            v - hi
        } else {
            0.0
        }
    }
}

fn power_of_two_at_least(b: &Rational) -> Rational {
    let mut p = Rational::one();
    let two = Rational::from_integer(2.into());
    while &p < b {
        p *= &two;
    }
    p
}

/// Bisects an isolating interval `(lo, hi)` of a simple root, `p(hi) != 0`.
fn refine_open(p: &IntPoly, mut lo: Rational, mut hi: Rational, width: &Rational) -> RootInterval {
    let hi_sign = p.sign_at(&hi);
    debug_assert_ne!(hi_sign, 0);
    let two = Rational::from_integer(2.into());
    while &(&hi - &lo) >= width {
        let mid = (&lo + &hi) / &two;
        match p.sign_at(&mid) {
            0 => return RootInterval::new(mid.clone(), mid),
            s if s == hi_sign => hi = mid,
            _ => lo = mid,
        }
    }
    RootInterval::new(lo, hi)
}

/// Isolates the real roots of `a` to the default width `2^-32`.
pub fn isolate_real_roots(a: &UniPoly) -> Result<Vec<RootInterval>> {
    let width = Rational::new(BigInt::one(), BigInt::one() << DEFAULT_ISOLATION_WIDTH_LOG2);
    isolate_real_roots_with(a, &width)
}

/// Pairwise-disjoint isolating intervals in increasing order, one per distinct
/// real root, each narrower than `width` unless it pins a rational root.
pub fn isolate_real_roots_with(a: &UniPoly, width: &Rational) -> Result<Vec<RootInterval>> {
    let s = squarefree_part(a)?;
    if s.degree() == Some(0) {
        return Ok(Vec::new());
    }
    SturmChain::new(&s)?.isolate(width)
}

/// Narrows an isolating interval of a root of `a` to below `width`.
pub fn refine_root(a: &UniPoly, iv: &RootInterval, width: &Rational) -> Result<RootInterval> {
    if iv.is_exact() {
        return Ok(iv.clone());
    }
    let s = IntPoly::from_poly(&squarefree_part(a)?);
    Ok(refine_isolating(&s, iv, width))
}

fn refine_isolating(s: &IntPoly, iv: &RootInterval, width: &Rational) -> RootInterval {
    if iv.is_exact() {
        return iv.clone();
    }
    if s.sign_at(&iv.upper) == 0 {
        return RootInterval::new(iv.upper.clone(), iv.upper.clone());
    }
    refine_open(s, iv.lower.clone(), iv.upper.clone(), width)
}

impl SturmChain {
    /// Isolating intervals of the roots of the (square-free) base polynomial.
    /// Bisection starts from a power of two above the Cauchy bound, so dyadic
    /// rational roots are pinned exactly.
    pub fn isolate(&self, width: &Rational) -> Result<Vec<RootInterval>> {
        let base = &self.polys[0];
        if base.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let b = power_of_two_at_least(&base.cauchy_bound()?);
        let mut out = Vec::new();
        let mut stack = vec![(Rational::zero(), b.clone()), (-b, Rational::zero())];
        let two = Rational::from_integer(2.into());
        while let Some((lo, hi)) = stack.pop() {
            let n = self.count(&Bound::Finite(lo.clone()), &Bound::Finite(hi.clone()));
            match n {
                0 => {}
                1 => {
                    if self.base().sign_at(&hi) == 0 {
                        out.push(RootInterval::new(hi.clone(), hi));
                    } else {
                        out.push(refine_open(self.base(), lo, hi, width));
                    }
                }
                _ => {
                    let mid = (&lo + &hi) / &two;
                    stack.push((mid.clone(), hi));
                    stack.push((lo, mid));
                }
            }
        }
        out.sort_by(|x, y| x.lower.cmp(&y.lower));
        Ok(out)
    }

    /// Narrows an isolating interval of a root of the base polynomial.
    pub fn refine(&self, iv: &RootInterval, width: &Rational) -> RootInterval {
        refine_isolating(self.base(), iv, width)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rational::{rat, rat_int};
    use crate::ratpoly::unipoly::Var;

    fn x(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c, Var::X)
    }

    fn fin(n: i64) -> Bound {
        Bound::Finite(rat_int(n))
    }

    #[test]
    fn chain_for_sqrt2() {
        let c = SturmChain::new(&x(&[-2, 0, 1])).unwrap();
        assert_eq!(c.variations(&fin(-2)) - c.variations(&fin(0)), 1);
        assert_eq!(c.variations(&fin(0)) - c.variations(&fin(2)), 1);
        let d = SturmChain::new(&x(&[1, 0, 1])).unwrap();
        assert_eq!(d.count(&Bound::NegInf, &Bound::PosInf), 0);
    }

    #[test]
    fn chain_degrees_decrease_and_end_constant() {
        let p = UniPoly::from_roots(&[rat_int(1), rat_int(2), rat_int(3)], Var::X);
        let c = SturmChain::new(&p).unwrap();
        let degs: Vec<usize> = c.polys().iter().map(|q| q.degree().unwrap()).collect();
        assert!(degs.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(*degs.last().unwrap(), 0);
        assert_eq!(c.count(&fin(0), &fin(10)), 3);
        // grid sign changes agree
        let changes = (0..1000)
            .map(|i| p.eval(&rat(i, 100)))
            .collect::<Vec<_>>()
            .windows(2)
            .filter(|w| (w[0].is_positive() && w[1].is_negative()) || (w[0].is_negative() && w[1].is_positive()))
            .count();
        // roots land on grid points, so count zeros too
        let zeros = (0..1000).filter(|&i| p.eval(&rat(i, 100)).is_zero()).count();
        assert_eq!(changes + zeros, 3);
    }

    #[test]
    fn chain_rejects_repeated_roots() {
        let p = UniPoly::from_roots(&[rat_int(1), rat_int(1)], Var::X);
        assert_eq!(SturmChain::new(&p).unwrap_err(), Error::NotSquareFree);
    }

    #[test]
    fn counting_examples() {
        let p = x(&[-1, 0, 1]);
        assert_eq!(count_real_roots(&p, &fin(0), &Bound::PosInf).unwrap(), 1);
        assert_eq!(count_real_roots(&p, &Bound::NegInf, &fin(0)).unwrap(), 1);
        let six = UniPoly::from_roots(&(1..=6).map(rat_int).collect::<Vec<_>>(), Var::X);
        assert_eq!(count_real_roots(&six, &fin(0), &Bound::PosInf).unwrap(), 6);
        assert_eq!(count_real_roots(&six, &Bound::NegInf, &fin(0)).unwrap(), 0);
        // half-open: root at hi counted, root at lo not
        assert_eq!(count_real_roots(&six, &fin(1), &fin(2)).unwrap(), 1);
        assert_eq!(count_real_roots(&six, &fin(2), &fin(1)), Err(Error::EmptyInterval));
        // repeated roots counted once
        let rep = UniPoly::from_roots(&[rat_int(2), rat_int(2), rat_int(-1)], Var::X);
        assert_eq!(count_real_roots(&rep, &Bound::NegInf, &Bound::PosInf).unwrap(), 2);
    }

    #[test]
    fn isolation_examples() {
        let r = isolate_real_roots(&x(&[-2, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].sign_class, SignClass::Negative);
        assert_eq!(r[1].sign_class, SignClass::Positive);
        assert!(r[0].lower >= rat_int(-2) && r[0].upper <= rat_int(-1));
        assert!(r[1].lower >= rat_int(1) && r[1].upper <= rat_int(2));
        let w = Rational::new(BigInt::one(), BigInt::one() << 32u32);
        assert!(r.iter().all(|iv| iv.width() < w));
        assert!((r[1].midpoint_f64() - 2f64.sqrt()).abs() < 1e-9);

        let z = isolate_real_roots(&x(&[0, -1, 1])).unwrap();
        assert_eq!(z.len(), 2);
        assert_eq!(z[0].sign_class, SignClass::Zero);
        assert_eq!(z[0].exact_value(), Some(&rat_int(0)));
        assert_eq!(z[1].exact_value(), Some(&rat_int(1)));

        let six = UniPoly::from_roots(&(1..=6).map(rat_int).collect::<Vec<_>>(), Var::X);
        let r6 = isolate_real_roots(&six).unwrap();
        let pinned: Vec<Rational> = r6.iter().map(|iv| iv.exact_value().unwrap().clone()).collect();
        assert_eq!(pinned, (1..=6).map(rat_int).collect::<Vec<_>>());
        assert!(r6.iter().all(|iv| iv.sign_class == SignClass::Positive));
        assert!(isolate_real_roots(&x(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn refinement_narrows() {
        let p = x(&[-2, 0, 1]);
        let r = isolate_real_roots(&p).unwrap();
        let w = Rational::new(BigInt::one(), BigInt::one() << 80u32);
        let fine = refine_root(&p, &r[1], &w).unwrap();
        assert!(fine.width() < w);
        assert!(fine.lower >= r[1].lower && fine.upper <= r[1].upper);
    }
}
