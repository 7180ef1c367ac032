//! Critical points `(x1, y1)`: pairs for which `R - x1 I - y1 K` has a unit
//! decomposable kernel vector.

use nalgebra::SymmetricEigen;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::surface::{characteristic_surface_with, CharacteristicSurface};
use crate::curvature::{plane_of, volume_form_f64, wedge_self_f64, CurvatureOperator};
use crate::error::Result;
use crate::exec::Exec;
use crate::interval::{eval_bipoly, Interval};
use crate::ratpoly::{
    isolate_real_roots_with, poly_gcd, rational_to_f64, BiPoly, Rational, RootInterval, SturmChain, UniPoly,
};

/// `|a10|` must exceed this multiple of `|a00|` and `|a01|` over the
/// certification box.
pub const CERTIFICATION_MARGIN: f64 = 1e3;
/// Refinement of `x1` before numeric work, as a power of two.
const X_REFINE_LOG2: u32 = 60;
const Y_ISOLATE_LOG2: u32 = 50;
/// Relative size of `|f(y)|` at a stationary point of `f` accepted as a
/// multiple-root candidate.
const MULTIPLE_ROOT_REL_TOL: f64 = 1e-8;

/// Exact outcome of the criticality test at a rational point.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalCheck {
    pub critical: bool,
    /// Index of the first nonzero homogeneous part of the translated
    /// polynomial, which equals `dim ker(R - x1 I - y1 K)`.
    pub kernel_dimension: u32,
    /// `det((R - x1 I - y1 K) - xI - yK)`.
    pub translated: BiPoly,
}

/// Coefficients strictly of one sign.
fn all_same_sign(c: &[Rational]) -> bool {
    c.iter().all(|v| v.is_positive()) || c.iter().all(|v| v.is_negative())
}

/// Coefficients nonzero with consecutive signs opposite.
fn strictly_alternating(c: &[Rational]) -> bool {
    c.iter().all(|v| !v.is_zero())
        && c.windows(2).all(|w| w[0].is_positive() != w[1].is_positive())
}

/// Exact criticality test at a rational point. The coefficient list
/// `a_{k,0}, a_{k-1,1}, ..., a_{0,k}` of the first nonzero homogeneous part
/// must be neither strictly of one sign nor strictly alternating; a zero
/// coefficient breaks both patterns.
pub fn is_critical_point(r: &CurvatureOperator, x1: &Rational, y1: &Rational) -> Result<CriticalCheck> {
    let translated = characteristic_surface_with(&r.shifted(x1, y1), Exec::Sequential)?.p;
    let k = (0..=6u32)
        .find(|&k| !translated.homogeneous_part(k).is_zero())
        .expect("y^6 coefficient is -1, so some homogeneous part is nonzero");
    let coeffs: Vec<Rational> = (0..=k).map(|j| translated.coeff(k - j, j)).collect();
    let critical = !(all_same_sign(&coeffs) || strictly_alternating(&coeffs));
    Ok(CriticalCheck { critical, kernel_dimension: k, translated })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Certificate {
    /// `(x1, y1)` rational and checked by [`is_critical_point`].
    Exact { x1: String, y1: String },
    /// Enclosures of `a00 = p`, `a01 = p_y`, `a10 = p_x` over a box around
    /// `(x1, y1)`, with a verified sign change of `p_y` across the `y` range.
    Interval { a00: [f64; 2], a01: [f64; 2], a10: [f64; 2], box_x: [f64; 2], box_y: [f64; 2] },
    Failed { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub x1: RootInterval,
    pub x1_approx: f64,
    pub y1: f64,
    /// Half-width of the `y` range known to contain the multiple root.
    pub y1_radius: f64,
    pub kernel_dimension: u32,
    /// Orthonormal pair spanning the extremal plane.
    pub plane: Option<([f64; 4], [f64; 4])>,
    /// `|vKv|` of the unit kernel vector, ideally zero.
    pub wedge_residual: f64,
    pub certified: bool,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Enumeration {
    pub points: Vec<CriticalPoint>,
    /// Real roots of `q` without a certified real multiple root in the generic
    /// case; each is a breach of the existence guarantee and is reported.
    pub violations: Vec<String>,
}

impl Enumeration {
    /// Distinct certified critical values, in increasing order.
    pub fn certified_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.points.iter().filter(|p| p.certified).map(|p| p.x1_approx).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

struct Partials {
    px: BiPoly,
    py: BiPoly,
}

fn dyadic(log2: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << log2)
}

/// For every isolated real root of `q`, finds the real multiple roots `y1` of
/// `f(y) = p(x1, y)` and certifies `(x1, y1)`. `chain` is the Sturm chain of
/// the square-free part of `q` that produced `roots`.
pub fn enumerate_critical_points(
    r: &CurvatureOperator,
    s: &CharacteristicSurface,
    chain: &SturmChain,
    roots: &[RootInterval],
    generic: bool,
    exec: Exec,
) -> Result<Enumeration> {
    let partials = Partials { px: s.p.partial_x(), py: s.p.partial_y() };
    let per_root = exec.map(roots, |iv| points_for_root(r, s, chain, iv, &partials));
    let mut out = Enumeration::default();
    for (iv, res) in roots.iter().zip(per_root) {
        let pts = res?;
        if generic && !pts.iter().any(|p| p.certified) {
            out.violations.push(format!(
                "no certified real multiple root of p(x1, y) for the root of q near {:.12}",
                iv.midpoint_f64()
            ));
        }
        out.points.extend(pts);
    }
    Ok(out)
}

fn points_for_root(
    r: &CurvatureOperator,
    s: &CharacteristicSurface,
    chain: &SturmChain,
    iv: &RootInterval,
    partials: &Partials,
) -> Result<Vec<CriticalPoint>> {
    let x_iv = chain.refine(iv, &dyadic(X_REFINE_LOG2));
    let x_approx = x_iv.midpoint_f64();
    let y_width = dyadic(Y_ISOLATE_LOG2);

    let mut points = Vec::new();
    if let Some(x1) = x_iv.exact_value() {
        let f = s.fiber(x1);
        let g = poly_gcd(&f, &f.derivative())?;
        for y_iv in isolate_real_roots_with(&g, &y_width)? {
            let y1 = y_iv.midpoint_f64();
            let (certified, kernel_dimension, certificate) = match y_iv.exact_value() {
                Some(y1) => {
                    let check = is_critical_point(r, x1, y1)?;
                    let cert = Certificate::Exact { x1: x1.to_string(), y1: y1.to_string() };
                    (check.critical, check.kernel_dimension, cert)
                }
                None => certify_interval(s, partials, Interval::from_rational(x1), y1),
            };
            points.push(finish(r, iv, x_approx, y1, certified, kernel_dimension, certificate));
        }
    } else {
        let xm = x_iv.midpoint();
        let f = s.fiber(&xm);
        let df = f.derivative();
        for y_iv in isolate_real_roots_with(&df, &y_width)? {
            let ym = y_iv.midpoint();
            if !near_zero_value(&f, &ym) {
                continue;
            }
            let y1 = rational_to_f64(&ym);
            let x_box = Interval::hull(&x_iv.lower, &x_iv.upper);
            let (certified, kernel_dimension, certificate) = certify_interval(s, partials, x_box, y1);
            points.push(finish(r, iv, x_approx, y1, certified, kernel_dimension, certificate));
        }
    }
    Ok(points)
}

fn near_zero_value(f: &UniPoly, y: &Rational) -> bool {
    let v = rational_to_f64(&f.eval(y)).abs();
    let ya = rational_to_f64(y).abs();
    let scale: f64 = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| rational_to_f64(c).abs() * ya.powi(k as i32))
        .sum();
    v <= MULTIPLE_ROOT_REL_TOL * scale.max(f64::MIN_POSITIVE)
}

fn certify_interval(
    s: &CharacteristicSurface,
    partials: &Partials,
    x_box: Interval,
    y1: f64,
) -> (bool, u32, Certificate) {
    let delta = 1e-10 * y1.abs().max(1.0);
    let below = eval_bipoly(&partials.py, x_box, Interval::point(y1 - delta));
    let above = eval_bipoly(&partials.py, x_box, Interval::point(y1 + delta));
    let brackets = !below.contains_zero()
        && !above.contains_zero()
        && (below.lo > 0.0) != (above.lo > 0.0);
    if !brackets {
        return (
            false,
            0,
            Certificate::Failed { reason: "no verified sign change of p_y across the y range".into() },
        );
    }
    let y_box = Interval::new(y1 - delta, y1 + delta);
    let a00 = eval_bipoly(&s.p, x_box, y_box);
    let a01 = eval_bipoly(&partials.py, x_box, y_box);
    let a10 = eval_bipoly(&partials.px, x_box, y_box);
    let ok = a00.contains_zero()
        && a01.contains_zero()
        && a10.mig() > CERTIFICATION_MARGIN * a00.mag().max(a01.mag());
    let cert = Certificate::Interval {
        a00: [a00.lo, a00.hi],
        a01: [a01.lo, a01.hi],
        a10: [a10.lo, a10.hi],
        box_x: [x_box.lo, x_box.hi],
        box_y: [y_box.lo, y_box.hi],
    };
    // a10 != 0 means R - x1 I - y1 K has corank exactly one.
    (ok, if ok { 1 } else { 0 }, cert)
}

fn finish(
    r: &CurvatureOperator,
    iv: &RootInterval,
    x1: f64,
    y1: f64,
    certified: bool,
    kernel_dimension: u32,
    certificate: Certificate,
) -> CriticalPoint {
    let shifted = r.to_f64() - nalgebra::Matrix6::identity() * x1 - volume_form_f64() * y1;
    let eig = SymmetricEigen::new(shifted);
    let idx = (0..6)
        .min_by(|&a, &b| eig.eigenvalues[a].abs().total_cmp(&eig.eigenvalues[b].abs()))
        .unwrap_or(0);
    let col = eig.eigenvectors.column(idx);
    let v: [f64; 6] = std::array::from_fn(|i| col[i]);
    let wedge_residual = wedge_self_f64(&v).abs();
    CriticalPoint {
        x1: iv.clone(),
        x1_approx: x1,
        y1,
        y1_radius: 1e-10 * y1.abs().max(1.0),
        kernel_dimension,
        plane: plane_of(&v),
        wedge_residual,
        certified,
        certificate,
    }
}
