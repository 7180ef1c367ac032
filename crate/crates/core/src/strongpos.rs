//! Strong-positivity witness: the maximizer `y1` of
//! `α1(y) = λ_min(R - yK)`, and the zero-curvature planes at that maximizer.
//!
//! `α1` is concave (a minimum of affine functions of `y`), so golden-section
//! search finds its maximum without derivatives. The maximum equals the
//! minimum sectional curvature in dimension four.

use nalgebra::{DMatrix, Matrix6, SymmetricEigen};
use serde::Serialize;

use crate::curvature::{plane_of, volume_form_f64, wedge_self_f64, CurvatureOperator};
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
const BRACKET_WIDTH: f64 = 1e-12;
/// Flat-maximum width above which `y1` is not unique.
pub const FLAT_WIDTH_LIMIT: f64 = 1e-8;
const FLAT_LEVELS: (f64, f64) = (1e-9, 1e-11);

pub fn alpha1(r: &Matrix6<f64>, y: f64) -> f64 {
    (r - volume_form_f64() * y).symmetric_eigenvalues().min()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessResult {
    pub y1: f64,
    pub alpha1: f64,
    pub strongly_positive: bool,
    /// Extrapolated width of the set where `α1` attains its maximum.
    pub flat_width: f64,
    /// Set when the maximum is flat and `Z(R)` is nonempty.
    pub uniqueness_violation: bool,
    /// Orthonormal basis of `ker(R - y1 K)` when `α1 ≈ 0`.
    pub zero_set_basis: Vec<[f64; 6]>,
    /// Decomposable unit vectors of that kernel, up to a finite choice.
    pub decomposable_zero_forms: Vec<[f64; 6]>,
    pub decomposable_zero_planes: Vec<([f64; 4], [f64; 4])>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ZeroSet {
    pub basis: Vec<[f64; 6]>,
    pub decomposable: Vec<[f64; 6]>,
    pub planes: Vec<([f64; 4], [f64; 4])>,
}

/// Golden-section maximization of `α1` over `[-B, B]`,
/// `B = λ_max(R) - λ_min(R) + 1`.
fn maximize(r: &Matrix6<f64>) -> (f64, f64) {
    let eig = r.symmetric_eigenvalues();
    let b = eig.max() - eig.min() + 1.0;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (-b, b);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (alpha1(r, c), alpha1(r, d));
    while hi - lo > BRACKET_WIDTH {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = alpha1(r, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = alpha1(r, d);
        }
    }
    let y = 0.5 * (lo + hi);
    (y, alpha1(r, y))
}

/// Width of `{y : α1(y) ≥ α* - η}` by bisection on each side of `y1`.
fn level_width(r: &Matrix6<f64>, y1: f64, a_star: f64, eta: f64, b: f64) -> f64 {
    let level = a_star - eta;
    let edge = |mut inside: f64, mut outside: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if mid == inside || mid == outside {
                break;
            }
            if alpha1(r, mid) >= level {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    };
    edge(y1, y1 + b) - edge(y1, y1 - b)
}

fn flat_width(r: &Matrix6<f64>, y1: f64, a_star: f64) -> f64 {
    let eig = r.symmetric_eigenvalues();
    let b = eig.max() - eig.min() + 1.0 + y1.abs();
    let w1 = level_width(r, y1, a_star, FLAT_LEVELS.0, b);
    let w2 = level_width(r, y1, a_star, FLAT_LEVELS.1, b);
    // Widths shrinking linearly or like sqrt(η) extrapolate to <= 0.
    ((10.0 * w2 - w1) / 9.0).max(0.0)
}

pub fn witness(r: &CurvatureOperator) -> WitnessResult {
    witness_with_tolerance(r, DEFAULT_TOLERANCE)
}

pub fn witness_with_tolerance(r: &CurvatureOperator, tolerance: f64) -> WitnessResult {
    let m = r.to_f64();
    let (y1, a1) = maximize(&m);
    let flat = flat_width(&m, y1, a1);
    let zs = if a1.abs() <= tolerance { zero_set_at(&m, y1, tolerance) } else { ZeroSet::default() };
    WitnessResult {
        y1,
        alpha1: a1,
        strongly_positive: a1 > tolerance,
        flat_width: flat,
        uniqueness_violation: flat > FLAT_WIDTH_LIMIT && !zs.planes.is_empty(),
        zero_set_basis: zs.basis,
        decomposable_zero_forms: zs.decomposable,
        decomposable_zero_planes: zs.planes,
    }
}

/// Zero-curvature decomposable directions `Z(R)`. Empty when `R` is strongly
/// positive.
pub fn zero_set(r: &CurvatureOperator) -> Result<ZeroSet> {
    let m = r.to_f64();
    let (y1, a1) = maximize(&m);
    if a1 < -DEFAULT_TOLERANCE {
        return Err(Error::NotNonnegative { alpha1: a1 });
    }
    if a1 > DEFAULT_TOLERANCE {
        return Ok(ZeroSet::default());
    }
    Ok(zero_set_at(&m, y1, DEFAULT_TOLERANCE))
}

fn zero_set_at(m: &Matrix6<f64>, y1: f64, tol: f64) -> ZeroSet {
    let k = volume_form_f64();
    let eig = SymmetricEigen::new(m - k * y1);
    let basis: Vec<[f64; 6]> = (0..6)
        .filter(|&i| eig.eigenvalues[i] < tol)
        .map(|i| std::array::from_fn(|r| eig.eigenvectors[(r, i)]))
        .collect();
    if basis.is_empty() {
        return ZeroSet::default();
    }
    // Diagonalize K on the kernel; null vectors of a quadratic form come from
    // pairing eigenvectors of opposite sign, plus its own null directions.
    let n = basis.len();
    let bm = DMatrix::from_fn(6, n, |r, c| basis[c][r]);
    let kr = bm.transpose() * DMatrix::from_fn(6, 6, |r, c| k[(r, c)]) * &bm;
    let ke = SymmetricEigen::new(kr);
    let lift = |coef: &nalgebra::DVector<f64>| -> [f64; 6] {
        let v = &bm * coef;
        let norm = v.norm();
        std::array::from_fn(|r| v[r] / norm)
    };
    let mut cands: Vec<[f64; 6]> = Vec::new();
    for i in 0..n {
        let li = ke.eigenvalues[i];
        let qi = ke.eigenvectors.column(i).into_owned();
        if li.abs() < tol {
            cands.push(lift(&qi));
            continue;
        }
        for j in (i + 1)..n {
            let lj = ke.eigenvalues[j];
            if lj.abs() < tol || (li > 0.0) == (lj > 0.0) {
                continue;
            }
            let qj = ke.eigenvectors.column(j).into_owned();
            for s in [1.0, -1.0] {
                cands.push(lift(&(&qi * lj.abs().sqrt() + &qj * (s * li.abs().sqrt()))));
            }
        }
    }
    let mut decomposable: Vec<[f64; 6]> = Vec::new();
    for v in cands {
        if wedge_self_f64(&v).abs() >= tol {
            continue;
        }
        let dup = decomposable
            .iter()
            .any(|d| d.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>().abs() > 1.0 - 1e-9);
        if !dup {
            decomposable.push(v);
        }
    }
    let planes = decomposable.iter().filter_map(plane_of).collect();
    ZeroSet { basis, decomposable, planes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{constant_curvature, diagonal_ints, product_spheres};
    use crate::ratpoly::rat_int;

    #[test]
    fn identity_witness() {
        let w = witness(&constant_curvature(rat_int(1)));
        assert!(w.y1.abs() < 1e-9);
        assert!((w.alpha1 - 1.0).abs() < 1e-9);
        assert!(w.strongly_positive);
        assert!(w.zero_set_basis.is_empty());
        assert!(zero_set(&constant_curvature(rat_int(1))).unwrap().planes.is_empty());
    }

    #[test]
    fn product_spheres_witness() {
        let r = product_spheres();
        let w = witness(&r);
        assert!(w.y1.abs() < 1e-9);
        assert!(w.alpha1.abs() < 1e-9);
        assert!(!w.strongly_positive);
        assert!(w.flat_width < FLAT_WIDTH_LIMIT);
        assert!(!w.uniqueness_violation);
        assert_eq!(w.zero_set_basis.len(), 4);
        for v in &w.zero_set_basis {
            assert!(v[0].abs() < 1e-9 && v[5].abs() < 1e-9);
        }
        for (v, (a, b)) in w.decomposable_zero_forms.iter().zip(&w.decomposable_zero_planes) {
            let p = crate::curvature::plucker_f64(a, b);
            assert!(crate::curvature::sectional_value_f64(&r.to_f64(), &p).abs() < 1e-9);
            assert!(wedge_self_f64(v).abs() < 1e-9);
        }
    }

    #[test]
    fn split_kernel_planes() {
        let zs = zero_set(&diagonal_ints([0, 1, 1, 1, 1, 0])).unwrap();
        assert_eq!(zs.basis.len(), 2);
        assert_eq!(zs.decomposable.len(), 2);
        let mut hits: Vec<usize> = zs
            .decomposable
            .iter()
            .map(|v| (0..6).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap())
            .collect();
        hits.sort();
        assert_eq!(hits, vec![0, 5]);
    }

    #[test]
    fn negative_operator_rejected() {
        let r = diagonal_ints([-1, 2, 3, 4, 5, 6]);
        assert!(matches!(zero_set(&r), Err(Error::NotNonnegative { .. })));
    }

    #[test]
    fn diagonal_positive() {
        let w = witness(&diagonal_ints([1, 2, 3, 4, 5, 6]));
        assert!(w.strongly_positive);
        assert!(w.alpha1 <= 1.0 + 1e-9);
        assert!((w.alpha1 - 1.0).abs() < 1e-6);
    }
}
