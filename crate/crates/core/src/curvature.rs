//! Two-forms in dimension four and symmetric operators on them.
//!
//! Basis order is fixed to `e12, e13, e14, e23, e24, e34` with the six basis
//! forms orthonormal, and `e1∧e2∧e3∧e4` positively oriented. Every serialized
//! matrix is read in this basis.

use nalgebra::{Matrix4, Matrix6, Vector4, Vector6};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ratpoly::{rat_int, rational_to_f64, Matrix, Rational};

pub const BASIS_TAG: &str = "e12,e13,e14,e23,e24,e34";

/// `(i, j)` index pairs (zero-based) of the basis 2-forms.
pub const BASIS_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Nonzero upper-triangle entries of `K`: the pairing of complementary basis
/// forms with the sign of `e_a∧e_b∧e_c∧e_d` relative to the volume form.
const K_PAIRS: [(usize, usize, i64); 3] = [(0, 5, 1), (1, 4, -1), (2, 3, 1)];

/// Exact 2-form in the fixed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoForm(pub [Rational; 6]);

impl TwoForm {
    pub fn zero() -> Self {
        TwoForm(std::array::from_fn(|_| Rational::zero()))
    }

    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(c: [i64; 6]) -> Self {
        TwoForm(c.map(rat_int))
    }

    /// `vIv`.
    pub fn norm_squared(&self) -> Rational {
        self.0.iter().map(|c| c * c).fold(Rational::zero(), |a, b| a + b)
    }

    pub fn to_f64(&self) -> [f64; 6] {
        std::array::from_fn(|i| rational_to_f64(&self.0[i]))
    }
}

/// The volume form acting on 2-forms (the Hodge star in this basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeForm {
    entries: Matrix,
}

impl VolumeForm {
    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn to_f64(&self) -> Matrix6<f64> {
        volume_form_f64()
    }
}

pub fn volume_form() -> VolumeForm {
    let mut entries = vec![vec![Rational::zero(); 6]; 6];
    for (i, j, s) in K_PAIRS {
        entries[i][j] = rat_int(s);
        entries[j][i] = rat_int(s);
    }
    VolumeForm { entries }
}

pub fn volume_form_f64() -> Matrix6<f64> {
    let mut k = Matrix6::zeros();
    for (i, j, s) in K_PAIRS {
        k[(i, j)] = s as f64;
        k[(j, i)] = s as f64;
    }
    k
}

/// `vKv`; zero exactly when `v` is decomposable.
pub fn wedge_self(v: &TwoForm) -> Rational {
    K_PAIRS
        .iter()
        .map(|&(i, j, s)| rat_int(2 * s) * &v.0[i] * &v.0[j])
        .fold(Rational::zero(), |a, b| a + b)
}

pub fn wedge_self_f64(v: &[f64; 6]) -> f64 {
    K_PAIRS.iter().map(|&(i, j, s)| 2.0 * s as f64 * v[i] * v[j]).sum()
}

/// Plücker coordinates of `u ∧ w`.
pub fn plucker(u: &[Rational; 4], w: &[Rational; 4]) -> TwoForm {
    TwoForm(BASIS_PAIRS.map(|(i, j)| &u[i] * &w[j] - &u[j] * &w[i]))
}

pub fn plucker_f64(u: &[f64; 4], w: &[f64; 4]) -> [f64; 6] {
    BASIS_PAIRS.map(|(i, j)| u[i] * w[j] - u[j] * w[i])
}

/// The 4×4 skew matrix `W_ij = v_ij` of a 2-form.
pub fn skew_matrix(v: &[f64; 6]) -> Matrix4<f64> {
    let mut w = Matrix4::zeros();
    for (k, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
        w[(i, j)] = v[k];
        w[(j, i)] = -v[k];
    }
    w
}

/// Orthonormal `(a, b)` spanning the plane of a (nearly) decomposable 2-form,
/// oriented so that `a ∧ b` is a positive multiple of `v`. Uses the two
/// dominant singular directions of the skew matrix.
pub fn plane_of(v: &[f64; 6]) -> Option<([f64; 4], [f64; 4])> {
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    let svd = skew_matrix(v).svd(true, false);
    let u = svd.u?;
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let a: Vector4<f64> = u.column(order[0]).into();
    let b0: Vector4<f64> = u.column(order[1]).into();
    let b = (b0 - a * a.dot(&b0)).normalize();
    let (a, mut b): ([f64; 4], [f64; 4]) = (a.into(), b.into());
    let p = plucker_f64(&a, &b);
    if p.iter().zip(v).map(|(x, y)| x * y).sum::<f64>() < 0.0 {
        b = b.map(|c| -c);
    }
    Some((a, b))
}

/// Symmetric operator on 2-forms, exact entries in the fixed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureOperator {
    entries: Matrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub symmetric: bool,
    /// `trace(R K)`: twice the pairing with the volume form. Nonzero values
    /// violate the first Bianchi identity, which the analysis does not need.
    pub trace_rk: Rational,
    pub warnings: Vec<String>,
}

/// Checks symmetry (hard requirement) and reports `trace(RK)`.
pub fn validate_operator(m: &Matrix) -> Result<ValidationReport> {
    if m.len() != 6 || m.iter().any(|r| r.len() != 6) {
        return Err(Error::Consistency("operator matrix must be 6x6".into()));
    }
    for i in 0..6 {
        for j in i + 1..6 {
            if m[i][j] != m[j][i] {
                return Err(Error::Asymmetric { row: i, col: j });
            }
        }
    }
    let trace_rk = K_PAIRS
        .iter()
        .map(|&(i, j, s)| rat_int(2 * s) * &m[i][j])
        .fold(Rational::zero(), |a, b| a + b);
    let mut warnings = Vec::new();
    if !trace_rk.is_zero() {
        warnings.push(format!(
            "trace(RK) = {trace_rk} is nonzero; the operator violates the first Bianchi identity (sectional values are unaffected)"
        ));
    }
    Ok(ValidationReport { symmetric: true, trace_rk, warnings })
}

impl CurvatureOperator {
    pub fn from_matrix(entries: Matrix) -> Result<Self> {
        validate_operator(&entries)?;
        Ok(CurvatureOperator { entries })
    }

    pub fn from_ints(m: [[i64; 6]; 6]) -> Result<Self> {
        Self::from_matrix(m.iter().map(|r| r.iter().map(|&v| rat_int(v)).collect()).collect())
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn validate(&self) -> ValidationReport {
        validate_operator(&self.entries).expect("operator is symmetric by construction")
    }

    pub fn to_f64(&self) -> Matrix6<f64> {
        Matrix6::from_fn(|i, j| rational_to_f64(&self.entries[i][j]))
    }

    /// `R - x I - y K`, exactly.
    pub fn shifted(&self, x: &Rational, y: &Rational) -> CurvatureOperator {
        let k = volume_form();
        let entries = (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| {
                        let mut e = &self.entries[i][j] - y * &k.entries[i][j];
                        if i == j {
                            e -= x;
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        CurvatureOperator { entries }
    }

    pub fn add_scaled(&self, other: &CurvatureOperator, eps: &Rational) -> CurvatureOperator {
        let entries = (0..6)
            .map(|i| (0..6).map(|j| &self.entries[i][j] + eps * &other.entries[i][j]).collect())
            .collect();
        CurvatureOperator { entries }
    }
}

/// `vRv`. A sectional curvature when `v` is unit and decomposable.
pub fn sectional_value(r: &CurvatureOperator, v: &TwoForm) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..6 {
        if v.0[i].is_zero() {
            continue;
        }
        for j in 0..6 {
            acc += &v.0[i] * &r.entries[i][j] * &v.0[j];
        }
    }
    acc
}

pub fn sectional_value_f64(r: &Matrix6<f64>, v: &[f64; 6]) -> f64 {
    let v = Vector6::from_column_slice(v);
    v.dot(&(r * v))
}

pub fn constant_curvature(c: Rational) -> CurvatureOperator {
    diagonal(std::array::from_fn(|_| c.clone()))
}

pub fn diagonal(d: [Rational; 6]) -> CurvatureOperator {
    let mut entries = vec![vec![Rational::zero(); 6]; 6];
    for (i, v) in d.into_iter().enumerate() {
        entries[i][i] = v;
    }
    CurvatureOperator { entries }
}

pub fn diagonal_ints(d: [i64; 6]) -> CurvatureOperator {
    diagonal(d.map(rat_int))
}

/// Curvature of the product of two unit 2-spheres along `e1,e2` and `e3,e4`.
pub fn product_spheres() -> CurvatureOperator {
    diagonal_ints([1, 0, 0, 0, 0, 1])
}

/// Integer entries drawn uniformly from `[-bound, bound]` for the upper
/// triangle and mirrored. Deterministic in `seed`.
pub fn random_symmetric(seed: u64, bound: i64) -> CurvatureOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = [[0i64; 6]; 6];
    for i in 0..6 {
        for j in i..6 {
            let v = rng.random_range(-bound..=bound);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    CurvatureOperator::from_ints(m).expect("symmetric by construction")
}
