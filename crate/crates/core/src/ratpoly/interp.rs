use num_traits::Zero;

use super::rational::Rational;
use super::unipoly::{UniPoly, Var};

/// The unique polynomial of degree `< xs.len()` through the points, via
/// Newton divided differences. Abscissae must be distinct.
pub fn interpolate(xs: &[Rational], ys: &[Rational], var: Var) -> UniPoly {
    assert_eq!(xs.len(), ys.len(), "interpolation needs matching abscissae and values");
    let n = xs.len();
    let mut dd: Vec<Rational> = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let den = &xs[i] - &xs[i - level];
            assert!(!den.is_zero(), "interpolation abscissae must be distinct");
            dd[i] = (&dd[i] - &dd[i - 1]) / den;
        }
    }
    // Horner on the Newton form
    let mut acc = UniPoly::zero(var);
    for i in (0..n).rev() {
        let shift = UniPoly::new(vec![-xs[i].clone(), Rational::from_integer(1.into())], var);
        acc = &(&acc * &shift) + &UniPoly::constant(dd[i].clone(), var);
    }
    acc
}
