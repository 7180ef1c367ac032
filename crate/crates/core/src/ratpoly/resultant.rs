//! Sylvester matrices, resultants, discriminants and principal subresultant
//! coefficients.
//!
//! Conventions:
//!
//! * `res(a, b) = det Syl(a, b)`, with the `deg b` rows of `a` on top. This
//!   equals `lc(a)^{deg b} lc(b)^{deg a} ∏ (α_i - β_j)`.
//! * `disc(a) = (-1)^{d(d-1)/2} res(a, a') / lc(a)`, so `disc(t^2 + bt + c)`
//!   is `b^2 - 4c` and `disc(t^3 + pt + q)` is `-(4p^3 + 27q^2)`.
//! * `psc_j(a, b)` is the determinant of the leading `m+n-2j` columns of the
//!   `j`-th subresultant matrix (`n-j` shifted rows of `a`, `m-j` of `b`).
//!   `psc_0` is the resultant, and `deg gcd(a, b)` is the least `j` with
//!   `psc_j != 0`.
//! * The first subdiscriminant is `(-1)^{(d-1)(d-2)/2} psc_1(a, a') / lc(a)`.
//!   Only its zero set is used; when `disc(a) = 0` it vanishes exactly when
//!   `gcd(a, a')` has degree at least two.

use num_traits::Zero;

use super::matrix::{determinant, Matrix};
use super::rational::Rational;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

fn require_degree(a: &UniPoly, required: usize) -> Result<usize> {
    let d = a.degree().ok_or(Error::ZeroPolynomial)?;
    if d < required {
        return Err(Error::DegreeTooLow { required, found: d });
    }
    Ok(d)
}

/// Rows of `x^{rows-1-i} * p` laid out over `width` columns, highest power first.
fn shifted_rows(p: &UniPoly, rows: usize, width: usize) -> Matrix {
    let d = p.degree().unwrap_or(0);
    (0..rows)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            for k in 0..=d {
                // column index of x^{k + rows-1-i}
                let power = k + rows - 1 - i;
                row[width - 1 - power] = p.coeff(k);
            }
            row
        })
        .collect()
}

/// The `j`-th subresultant matrix truncated to its square leading block.
fn subresultant_block(a: &UniPoly, b: &UniPoly, j: usize) -> Matrix {
    let m = a.degree().unwrap_or(0);
    let n = b.degree().unwrap_or(0);
    let width = m + n - j;
    let mut rows = shifted_rows(a, n - j, width);
    rows.extend(shifted_rows(b, m - j, width));
    let size = m + n - 2 * j;
    rows.into_iter().map(|r| r[..size].to_vec()).collect()
}

/// The `(deg a + deg b)`-square Sylvester matrix.
pub fn sylvester_matrix(a: &UniPoly, b: &UniPoly) -> Result<Matrix> {
    require_degree(a, 1)?;
    require_degree(b, 1)?;
    Ok(subresultant_block(a, b, 0))
}

pub fn resultant(a: &UniPoly, b: &UniPoly) -> Result<Rational> {
    Ok(determinant(&sylvester_matrix(a, b)?))
}

/// Principal subresultant coefficient `psc_j(a, b)`, `j < min(deg a, deg b)`.
pub fn subresultant_coefficient(a: &UniPoly, b: &UniPoly, j: usize) -> Result<Rational> {
    let m = require_degree(a, 1)?;
    let n = require_degree(b, 1)?;
    if j >= m.min(n) {
        return Err(Error::DegreeTooLow { required: j + 1, found: m.min(n) });
    }
    Ok(determinant(&subresultant_block(a, b, j)))
}

fn parity_sign(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        Rational::from_integer(1.into())
    } else {
        Rational::from_integer((-1).into())
    }
}

pub fn discriminant(a: &UniPoly) -> Result<Rational> {
    let d = require_degree(a, 2)?;
    let res = resultant(a, &a.derivative())?;
    Ok(parity_sign(d * (d - 1) / 2) * res / a.leading())
}

pub fn subdiscriminant_first(a: &UniPoly) -> Result<Rational> {
    let d = require_degree(a, 3)?;
    let psc = subresultant_coefficient(a, &a.derivative(), 1)?;
    Ok(parity_sign((d - 1) * (d - 2) / 2) * psc / a.leading())
}
