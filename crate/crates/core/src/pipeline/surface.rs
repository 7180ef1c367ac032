//! `p(x, y) = det(R - xI - yK)` and `q(x) = disc_y p(x, y)`, both by exact
//! evaluation and interpolation.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvature::CurvatureOperator;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ratpoly::{determinant, discriminant, interpolate, rat, rat_int, BiPoly, Rational, UniPoly, Var};

/// Degree of `p` in each variable, and its total degree.
pub const SURFACE_DEGREE: u32 = 6;
/// Upper bound on `deg q`: the discriminant of a degree-six polynomial is
/// weighted-homogeneous of weight `6 * 5` in the coefficients.
pub const CURVE_DEGREE_BOUND: usize = 30;
/// Number of sample abscissae used to interpolate `q`.
pub const CURVE_SAMPLES: usize = 61;

const CROSS_CHECK_SEED: u64 = 0x5ec7_0a11;

/// The bivariate polynomial `p(x, y) = det(R - xI - yK)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicSurface {
    pub p: BiPoly,
}

impl CharacteristicSurface {
    /// Coefficient of `y^6`; always `-1`.
    pub fn y_leading(&self) -> Rational {
        self.p.coeff(0, SURFACE_DEGREE)
    }

    /// `p(x, 0) = det(R - xI)`.
    pub fn x_slice(&self) -> UniPoly {
        self.p.eval_y(&Rational::zero())
    }

    /// `f(y) = p(x0, y)`.
    pub fn fiber(&self, x0: &Rational) -> UniPoly {
        self.p.eval_x(x0)
    }
}

/// Three deterministic off-grid rational points for consistency checks.
fn cross_check_points() -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(CROSS_CHECK_SEED);
    (0..3)
        .map(|_| {
            let mut draw = || rat(rng.random_range(-997..=997), rng.random_range(101..=211));
            (draw(), draw())
        })
        .collect()
}

fn det_at(r: &CurvatureOperator, x: &Rational, y: &Rational) -> Rational {
    determinant(r.shifted(x, y).entries())
}

pub fn characteristic_surface(r: &CurvatureOperator) -> Result<CharacteristicSurface> {
    characteristic_surface_with(r, Exec::default())
}

/// Evaluates the determinant on a 7×7 integer grid, interpolates in `x` then
/// in `y`, and verifies the structural invariants plus three off-grid points.
pub fn characteristic_surface_with(r: &CurvatureOperator, exec: Exec) -> Result<CharacteristicSurface> {
    let n = SURFACE_DEGREE as usize + 1;
    let nodes: Vec<Rational> = (0..n as i64).map(|i| rat_int(i - 3)).collect();
    let values = exec.map_range(n * n, |idx| det_at(r, &nodes[idx / n], &nodes[idx % n]));

    // For each y node, the polynomial in x.
    let rows: Vec<UniPoly> = (0..n)
        .map(|j| {
            let ys: Vec<Rational> = (0..n).map(|i| values[i * n + j].clone()).collect();
            interpolate(&nodes, &ys, Var::X)
        })
        .collect();
    let mut p = BiPoly::zero();
    for m in 0..n {
        let cm: Vec<Rational> = rows.iter().map(|row| row.coeff(m)).collect();
        let in_y = interpolate(&nodes, &cm, Var::Y);
        for (k, c) in in_y.coeffs().iter().enumerate() {
            p.add_term(m as u32, k as u32, c.clone());
        }
    }
    let surface = CharacteristicSurface { p };
    check_surface(&surface)?;
    for (x, y) in cross_check_points() {
        if surface.p.eval(&x, &y) != det_at(r, &x, &y) {
            return Err(Error::Consistency(format!(
                "interpolated p disagrees with the determinant at ({x}, {y})"
            )));
        }
    }
    Ok(surface)
}

/// Structural invariants of `p`.
pub fn check_surface(s: &CharacteristicSurface) -> Result<()> {
    if s.p.total_degree().unwrap_or(0) > SURFACE_DEGREE {
        return Err(Error::Consistency("p has total degree above 6".into()));
    }
    if s.y_leading() != -Rational::one() {
        return Err(Error::Consistency("coefficient of y^6 in p is not -1".into()));
    }
    if s.p.coeff(SURFACE_DEGREE, 0) != Rational::one() {
        return Err(Error::Consistency("coefficient of x^6 in p is not 1".into()));
    }
    Ok(())
}

pub fn discriminant_curve(s: &CharacteristicSurface) -> Result<UniPoly> {
    discriminant_curve_with(s, Exec::default())
}

/// `q(x) = disc_y p(x, y)`. Every fiber has degree exactly six in `y` (the
/// `y^6` coefficient is the constant `-1`), so the discriminant specialises
/// correctly at each sample. The interpolant through 61 samples must have
/// degree at most 30 and agree with three off-grid evaluations. `q ≡ 0` is a
/// valid result.
pub fn discriminant_curve_with(s: &CharacteristicSurface, exec: Exec) -> Result<UniPoly> {
    let half = (CURVE_SAMPLES / 2) as i64;
    let xs: Vec<Rational> = (-half..=half).map(rat_int).collect();
    let ys = exec.map(&xs, |x| fiber_discriminant(s, x));
    let ys = ys.into_iter().collect::<Result<Vec<_>>>()?;
    let q = interpolate(&xs, &ys, Var::X);
    if q.degree().is_some_and(|d| d > CURVE_DEGREE_BOUND) {
        return Err(Error::Consistency(format!(
            "interpolated q has degree {:?} above the bound {CURVE_DEGREE_BOUND}",
            q.degree()
        )));
    }
    for (x, _) in cross_check_points() {
        if q.eval(&x) != fiber_discriminant(s, &x)? {
            return Err(Error::Consistency(format!("q disagrees with disc_y p at x = {x}")));
        }
    }
    Ok(q)
}

fn fiber_discriminant(s: &CharacteristicSurface, x: &Rational) -> Result<Rational> {
    let f = s.fiber(x);
    if f.degree() != Some(SURFACE_DEGREE as usize) {
        return Err(Error::Consistency(format!("fiber at x = {x} dropped degree")));
    }
    discriminant(&f)
}

/// Identically-zero flag, `disc q` and the genericity verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Genericity {
    pub q_zero: bool,
    /// `None` when `q ≡ 0`. For `deg q ≤ 1` the empty product `1`.
    pub disc_q: Option<Rational>,
    pub generic: bool,
}

pub fn genericity(q: &UniPoly) -> Result<Genericity> {
    let Some(d) = q.degree() else {
        return Ok(Genericity { q_zero: true, disc_q: None, generic: false });
    };
    let disc_q = if d < 2 {
        Rational::one()
    } else {
        // disc(c·a) = c^{2d-2} disc(a); working on the primitive part keeps
        // the Sylvester determinant in small integers.
        let prim = q.primitive();
        let c = q.leading() / prim.leading();
        let mut scale = Rational::one();
        for _ in 0..2 * d - 2 {
            scale *= &c;
        }
        discriminant(&prim)? * scale
    };
    let generic = !disc_q.is_zero();
    Ok(Genericity { q_zero: false, disc_q: Some(disc_q), generic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{constant_curvature, diagonal_ints, product_spheres};

    fn lin(c: i64, a: i64) -> BiPoly {
        // c + a x
        BiPoly::from_terms([((0, 0), rat_int(c)), ((1, 0), rat_int(a))])
    }

    fn block(a: i64, b: i64) -> BiPoly {
        // (a - x)(b - x) - y^2
        let y = BiPoly::y();
        &(&lin(a, -1) * &lin(b, -1)) - &(&y * &y)
    }

    #[test]
    fn identity_surface() {
        let s = characteristic_surface(&constant_curvature(rat_int(1))).unwrap();
        let b = block(1, 1);
        assert_eq!(s.p, &(&b * &b) * &b);
    }

    #[test]
    fn diagonal_surface_factorises_over_k_pairs() {
        let s = characteristic_surface(&diagonal_ints([1, 2, 3, 4, 5, 6])).unwrap();
        assert_eq!(s.p, &(&block(1, 6) * &block(2, 5)) * &block(3, 4));
        assert_eq!(s.x_slice().leading(), rat_int(1));
        assert_eq!(s.y_leading(), rat_int(-1));
    }

    #[test]
    fn degenerate_curves_vanish() {
        for r in [constant_curvature(rat_int(1)), product_spheres()] {
            let s = characteristic_surface(&r).unwrap();
            let q = discriminant_curve(&s).unwrap();
            assert!(q.is_zero());
            let g = genericity(&q).unwrap();
            assert!(g.q_zero && !g.generic && g.disc_q.is_none());
        }
    }

    #[test]
    fn diagonal_curve_roots() {
        let s = characteristic_surface(&diagonal_ints([1, 2, 3, 4, 5, 6])).unwrap();
        let q = discriminant_curve(&s).unwrap();
        assert!(!q.is_zero());
        for k in 1..=6 {
            assert!(q.eval(&rat_int(k)).is_zero(), "q({k}) != 0");
        }
        let g = genericity(&q).unwrap();
        assert!(g.generic);
    }

    #[test]
    fn genericity_small_cases() {
        let q = UniPoly::from_ints(&[2, -3, 1], Var::X);
        let g = genericity(&q).unwrap();
        assert_eq!(g, Genericity { q_zero: false, disc_q: Some(rat_int(1)), generic: true });
        let sq = UniPoly::from_ints(&[4, -4, 1], Var::X).scale(&rat(3, 5));
        assert!(!genericity(&sq).unwrap().generic);
        // scaling law: disc(3q) = 3^2 disc(q) for a quadratic
        let g3 = genericity(&q.scale(&rat_int(3))).unwrap();
        assert_eq!(g3.disc_q, Some(rat_int(9)));
    }
}
