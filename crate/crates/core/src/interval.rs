//! Minimal outward-rounded interval arithmetic for certifying signs of
//! polynomial values at algebraic points.
//!
//! Every operation widens its floating-point result by one ulp in each
//! direction, which dominates the round-to-nearest error of a single IEEE
//! operation.

use std::ops::{Add, Mul, Neg, Sub};

use crate::ratpoly::{rational_to_f64, BiPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi || lo.is_nan() || hi.is_nan());
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    fn widened(lo: f64, hi: f64) -> Self {
        Interval { lo: lo.next_down(), hi: hi.next_up() }
    }

    /// Encloses a rational: conversion error is at most a couple of ulps.
    pub fn from_rational(r: &Rational) -> Self {
        let v = rational_to_f64(r);
        Interval { lo: v.next_down().next_down(), hi: v.next_up().next_up() }
    }

    pub fn hull(a: &Rational, b: &Rational) -> Self {
        let ia = Self::from_rational(a);
        let ib = Self::from_rational(b);
        Interval { lo: ia.lo.min(ib.lo), hi: ia.hi.max(ib.hi) }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    /// Largest absolute value.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value; zero when the interval straddles zero.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Interval::point(1.0);
        for _ in 0..e {
            acc = acc * *self;
        }
        acc
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::widened(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::widened(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let c = [self.lo * rhs.lo, self.lo * rhs.hi, self.hi * rhs.lo, self.hi * rhs.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::widened(lo, hi)
    }
}

/// Encloses `{ p(x, y) : x ∈ xs, y ∈ ys }`.
pub fn eval_bipoly(p: &BiPoly, xs: Interval, ys: Interval) -> Interval {
    let mut acc = Interval::point(0.0);
    for ((m, n), c) in p.terms() {
        acc = acc + Interval::from_rational(c) * xs.powi(*m) * ys.powi(*n);
    }
    acc
}
