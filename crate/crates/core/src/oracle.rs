//! Floating-point ground truth, independent of the symbolic pipeline.
//!
//! Planes are parametrized by orthonormal pairs `(u, w)`, so `v = u ∧ w` is
//! automatically unit and decomposable. Minima and maxima of `vRv` come from
//! projected gradient descent/ascent with a Gram–Schmidt retraction. Saddle
//! values are not attractors of a gradient flow, so harvest mode also runs
//! damped Newton on the Lagrange system
//! `(R - xI - yK)v = 0, v·v = 1, vKv = 0`.

use nalgebra::{DMatrix, DVector, Matrix4, Matrix6, Vector4, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvature::{plane_of, plucker_f64, skew_matrix, volume_form_f64};
use crate::exec::Exec;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_RESTARTS: usize = 200;
pub const CLUSTER_GAP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Min,
    Max,
    Harvest,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
    pub cluster_gap: f64,
    /// Newton starts per restart in harvest mode.
    pub newton_starts: usize,
    pub exec: Exec,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            restarts: DEFAULT_RESTARTS,
            seed: DEFAULT_SEED,
            max_iterations: 10_000,
            gradient_tolerance: 1e-10,
            cluster_gap: CLUSTER_GAP,
            newton_starts: 4,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanePoint {
    pub u: [f64; 4],
    pub w: [f64; 4],
    pub v: [f64; 6],
    pub value: f64,
}

impl PlanePoint {
    /// Orthonormalizes `(u, w)` and evaluates. `None` for a degenerate pair.
    pub fn new(r: &Matrix6<f64>, u: [f64; 4], w: [f64; 4]) -> Option<Self> {
        let (u, w) = retract(Vector4::from(u), Vector4::from(w))?;
        Some(Self::from_orthonormal(r, u, w))
    }

    fn from_orthonormal(r: &Matrix6<f64>, u: Vector4<f64>, w: Vector4<f64>) -> Self {
        let (u, w): ([f64; 4], [f64; 4]) = (u.into(), w.into());
        let v = plucker_f64(&u, &w);
        let vv = Vector6::from(v);
        PlanePoint { u, w, v, value: vv.dot(&(r * vv)) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub mode: Mode,
    pub min_value: f64,
    pub max_value: f64,
    pub critical_values: Vec<Cluster>,
    pub min_plane: PlanePoint,
    pub max_plane: PlanePoint,
    pub restarts_used: usize,
    pub converged_fraction: f64,
    pub warnings: Vec<String>,
}

impl OracleResult {
    pub fn critical_value_list(&self) -> Vec<f64> {
        self.critical_values.iter().map(|c| c.value).collect()
    }
}

/// Gram–Schmidt on the pair.
fn retract(u: Vector4<f64>, w: Vector4<f64>) -> Option<(Vector4<f64>, Vector4<f64>)> {
    let nu = u.norm();
    if nu < 1e-300 {
        return None;
    }
    let u = u / nu;
    let w = w - u * u.dot(&w);
    let nw = w.norm();
    if nw < 1e-300 {
        return None;
    }
    let w = w / nw;
    // Second pass restores orthogonality to working precision.
    let w = (w - u * u.dot(&w)).normalize();
    Some((u, w))
}

/// Riemannian gradient `(g_u, g_w)` of `f(u, w) = vRv`.
fn gradient(r: &Matrix6<f64>, p: &PlanePoint) -> (Vector4<f64>, Vector4<f64>) {
    let rv: [f64; 6] = (r * Vector6::from(p.v)).into();
    let z: Matrix4<f64> = skew_matrix(&rv);
    let (u, w) = (Vector4::from(p.u), Vector4::from(p.w));
    let proj = Matrix4::identity() - u * u.transpose() - w * w.transpose();
    (proj * (z * w) * 2.0, proj * (z * u) * -2.0)
}

fn random_plane(r: &Matrix6<f64>, rng: &mut ChaCha8Rng) -> PlanePoint {
    loop {
        let u: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let w: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        if let Some(p) = PlanePoint::new(r, u, w) {
            return p;
        }
    }
}

struct Descent {
    point: PlanePoint,
    converged: bool,
}

/// Gradient norm at which descent hands over to Newton polishing. Below it,
/// function values no longer resolve progress in double precision.
const POLISH_GRADIENT: f64 = 1e-7;

fn gradient_norm(r: &Matrix6<f64>, p: &PlanePoint) -> f64 {
    let (gu, gw) = gradient(r, p);
    (gu.norm_squared() + gw.norm_squared()).sqrt()
}

/// Armijo-backtracked gradient steps, `sign = 1` descending and `-1`
/// ascending, finished by Newton polishing on the Lagrange system.
fn descend(r: &Matrix6<f64>, start: PlanePoint, sign: f64, opts: &OracleOptions) -> Descent {
    let mut p = start;
    let mut step = 0.1;
    for _ in 0..opts.max_iterations {
        let (gu, gw) = gradient(r, &p);
        let g2 = gu.norm_squared() + gw.norm_squared();
        if g2.sqrt() < POLISH_GRADIENT.max(opts.gradient_tolerance) {
            break;
        }
        let f0 = sign * p.value;
        let mut accepted = None;
        while step > 1e-16 {
            let cand = retract(Vector4::from(p.u) - gu * (sign * step), Vector4::from(p.w) - gw * (sign * step))
                .map(|(u, w)| PlanePoint::from_orthonormal(r, u, w));
            match cand {
                Some(c) if sign * c.value < f0 - 1e-4 * step * g2 => {
                    accepted = Some(c);
                    break;
                }
                _ => step *= 0.5,
            }
        }
        match accepted {
            Some(c) => {
                p = c;
                step = (step * 2.0).min(10.0);
            }
            None => break,
        }
    }
    if gradient_norm(r, &p) >= opts.gradient_tolerance {
        if let Some((q, _)) = newton(r, &p) {
            if (q.value - p.value).abs() < 1e-6 {
                p = q;
            }
        }
    }
    let converged = gradient_norm(r, &p) < opts.gradient_tolerance;
    Descent { point: p, converged }
}

fn lagrange_residual(r: &Matrix6<f64>, k: &Matrix6<f64>, v: &Vector6<f64>, x: f64, y: f64) -> DVector<f64> {
    let top = r * v - v * x - k * v * y;
    let mut f = DVector::zeros(8);
    f.rows_mut(0, 6).copy_from(&top);
    f[6] = 0.5 * (v.dot(v) - 1.0);
    f[7] = 0.5 * v.dot(&(k * v));
    f
}

/// Damped Newton on the Lagrange system from `start`; returns the converged
/// plane and `x = vRv` when the residual reaches round-off level.
fn newton(r: &Matrix6<f64>, start: &PlanePoint) -> Option<(PlanePoint, f64)> {
    let k = volume_form_f64();
    let mut v = Vector6::from(start.v);
    let (mut x, mut y, _) = fit(r, &v);
    let mut f = lagrange_residual(r, &k, &v, x, y);
    for _ in 0..100 {
        if f.norm() < 1e-14 {
            break;
        }
        let a = r - Matrix6::identity() * x - k * y;
        let kv = k * v;
        let mut j = DMatrix::zeros(8, 8);
        j.view_mut((0, 0), (6, 6)).copy_from(&a);
        for i in 0..6 {
            j[(i, 6)] = -v[i];
            j[(i, 7)] = -kv[i];
            j[(6, i)] = v[i];
            j[(7, i)] = kv[i];
        }
        let step = j.svd(true, true).solve(&(-&f), 1e-14).ok()?;
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-6 {
            let nv = v + step.rows(0, 6) * t;
            let (nx, ny) = (x + step[6] * t, y + step[7] * t);
            let nf = lagrange_residual(r, &k, &nv, nx, ny);
            if nf.norm() < (1.0 - 1e-4 * t) * f.norm() {
                (v, x, y, f) = (nv, nx, ny, nf);
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if f.norm() > 1e-11 {
        return None;
    }
    let vv: [f64; 6] = v.into();
    let (a, b) = plane_of(&vv)?;
    let p = PlanePoint::new(r, a, b)?;
    let (_, _, res) = fit(r, &Vector6::from(p.v));
    (res < 1e-9).then(|| (p.clone(), p.value))
}

/// Least-squares `(x, y)` for `Rv ≈ x v + y Kv`. For a unit decomposable `v`
/// the columns `v` and `Kv` are orthonormal.
fn fit(r: &Matrix6<f64>, v: &Vector6<f64>) -> (f64, f64, f64) {
    let k = volume_form_f64();
    let kv = k * v;
    let rv = r * v;
    let (vv, kk, vk) = (v.dot(v), kv.dot(&kv), v.dot(&kv));
    let (b1, b2) = (v.dot(&rv), kv.dot(&rv));
    let det = vv * kk - vk * vk;
    let (x, y) = if det.abs() > 1e-300 {
        ((b1 * kk - b2 * vk) / det, (b2 * vv - b1 * vk) / det)
    } else {
        (b1 / vv, 0.0)
    };
    let res = (rv - v * x - kv * y).norm();
    (x, y, res)
}

/// `(x, y, residual)`: the least-squares multipliers and the norm of
/// `(R - xI - yK)v` at the plane.
pub fn stationarity_residual(r: &Matrix6<f64>, p: &PlanePoint) -> (f64, f64, f64) {
    fit(r, &Vector6::from(p.v))
}

struct RestartOutcome {
    low: Option<Descent>,
    high: Option<Descent>,
    saddles: Vec<f64>,
}

fn restart(r: &Matrix6<f64>, mode: Mode, seed: u64, opts: &OracleOptions) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = random_plane(r, &mut rng);
    let low = matches!(mode, Mode::Min | Mode::Harvest).then(|| descend(r, start.clone(), 1.0, opts));
    let high = matches!(mode, Mode::Max | Mode::Harvest).then(|| descend(r, start.clone(), -1.0, opts));
    let mut saddles = Vec::new();
    if mode == Mode::Harvest {
        let mut starts = vec![start];
        while starts.len() < opts.newton_starts.max(1) {
            starts.push(random_plane(r, &mut rng));
        }
        saddles.extend(starts.iter().filter_map(|s| newton(r, s)).map(|(_, x)| x));
    }
    RestartOutcome { low, high, saddles }
}

/// Groups sorted values whose consecutive gaps are below `gap`; each cluster
/// reports its median.
pub fn cluster(values: &[f64], gap: f64) -> Vec<Cluster> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i + 1;
        while j < v.len() && v[j] - v[j - 1] <= gap {
            j += 1;
        }
        out.push(Cluster { value: v[(i + j - 1) / 2], multiplicity: j - i });
        i = j;
    }
    out
}

pub fn optimize(r: &Matrix6<f64>, mode: Mode, opts: &OracleOptions) -> OracleResult {
    let restarts = opts.restarts.max(1);
    let mut master = ChaCha8Rng::seed_from_u64(opts.seed);
    let seeds: Vec<u64> = (0..restarts).map(|_| master.random()).collect();
    let outcomes = opts.exec.map(&seeds, |&s| restart(r, mode, s, opts));

    let mut converged = 0usize;
    let mut runs = 0usize;
    let mut values = Vec::new();
    let mut min_plane: Option<PlanePoint> = None;
    let mut max_plane: Option<PlanePoint> = None;
    for o in &outcomes {
        for d in o.low.iter().chain(o.high.iter()) {
            runs += 1;
            if d.converged {
                converged += 1;
                values.push(d.point.value);
            }
            let p = &d.point;
            if min_plane.as_ref().is_none_or(|m| p.value < m.value) {
                min_plane = Some(p.clone());
            }
            if max_plane.as_ref().is_none_or(|m| p.value > m.value) {
                max_plane = Some(p.clone());
            }
        }
        values.extend(o.saddles.iter().copied());
    }
    let min_plane = min_plane.expect("at least one descent runs");
    let max_plane = max_plane.expect("at least one descent runs");
    let converged_fraction = converged as f64 / runs as f64;
    let mut warnings = Vec::new();
    if converged_fraction < 0.5 {
        warnings.push(format!("only {:.0}% of restarts converged", 100.0 * converged_fraction));
    }
    let critical_values = if mode == Mode::Harvest { cluster(&values, opts.cluster_gap) } else { Vec::new() };
    OracleResult {
        mode,
        min_value: min_plane.value,
        max_value: max_plane.value,
        critical_values,
        min_plane,
        max_plane,
        restarts_used: restarts,
        converged_fraction,
        warnings,
    }
}

/// `(min, max)` of `vRv` over `n` seeded random planes.
pub fn sample_planes(r: &Matrix6<f64>, n: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), _| {
        let v = random_plane(r, &mut rng).value;
        (lo.min(v), hi.max(v))
    })
}

/// Distinct real roots of a polynomial given by ascending `f64` coefficients,
/// from the eigenvalues of its companion matrix. Values closer than `tol` are
/// merged.
pub fn companion_real_roots(coeffs: &[f64], tol: f64) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|&x| x == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let comp = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut reals: Vec<f64> = comp
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= tol * z.re.abs().max(1.0))
        .map(|z| z.re)
        .collect();
    reals.sort_by(f64::total_cmp);
    reals.dedup_by(|a, b| (*a - *b).abs() <= tol * b.abs().max(1.0));
    reals
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{constant_curvature, diagonal_ints, product_spheres, wedge_self_f64};
    use crate::ratpoly::rat_int;

    fn opts(restarts: usize) -> OracleOptions {
        OracleOptions { restarts, ..OracleOptions::default() }
    }

    #[test]
    fn identity_is_constant() {
        let r = constant_curvature(rat_int(1)).to_f64();
        let o = optimize(&r, Mode::Harvest, &opts(10));
        assert!((o.min_value - 1.0).abs() < 1e-12);
        assert!((o.max_value - 1.0).abs() < 1e-12);
        assert_eq!(o.critical_values.len(), 1);
    }

    #[test]
    fn product_spheres_range() {
        let r = product_spheres().to_f64();
        let o = optimize(&r, Mode::Harvest, &opts(20));
        assert!(o.min_value.abs() < 1e-9);
        assert!((o.max_value - 1.0).abs() < 1e-9);
        let e12 = PlanePoint::new(&r, [1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]).unwrap();
        let e13 = PlanePoint::new(&r, [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(e12.value, 1.0);
        assert_eq!(e13.value, 0.0);
    }

    #[test]
    fn diagonal_clusters() {
        let r = diagonal_ints([1, 2, 3, 4, 5, 6]).to_f64();
        let o = optimize(&r, Mode::Harvest, &opts(50));
        assert!((o.min_value - 1.0).abs() < 1e-9);
        assert!((o.max_value - 6.0).abs() < 1e-9);
        let vals = o.critical_value_list();
        assert_eq!(vals.len(), 6, "{vals:?}");
        for (k, v) in vals.iter().enumerate() {
            assert!((v - (k + 1) as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn residual_examples() {
        let r = diagonal_ints([1, 2, 3, 4, 5, 6]).to_f64();
        let p = PlanePoint::new(&r, [1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]).unwrap();
        let (x, y, res) = stationarity_residual(&r, &p);
        assert!((x - 1.0).abs() < 1e-15 && y.abs() < 1e-15 && res < 1e-15);
        let q = PlanePoint::new(&r, [1.0, 1.0, 0.0, 0.0], [0.0, 0.3, 1.0, 0.2]).unwrap();
        assert!(stationarity_residual(&r, &q).2 > 1e-3);
        let id = constant_curvature(rat_int(1)).to_f64();
        let (x, _, res) = stationarity_residual(&id, &q);
        assert!((x - 1.0).abs() < 1e-12 && res < 1e-12);
    }

    #[test]
    fn retraction_keeps_constraints() {
        let r = diagonal_ints([1, 2, 3, 4, 5, 6]).to_f64();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = random_plane(&r, &mut rng);
            let n: f64 = p.v.iter().map(|c| c * c).sum();
            assert!((n - 1.0).abs() < 1e-12);
            assert!(wedge_self_f64(&p.v).abs() < 1e-12);
        }
    }

    #[test]
    fn companion_roots() {
        // (x - 1)(x - 2)(x^2 + 1)
        let r = companion_real_roots(&[2.0, -3.0, 3.0, -3.0, 1.0], 1e-8);
        assert_eq!(r.len(), 2);
        assert!((r[0] - 1.0).abs() < 1e-9 && (r[1] - 2.0).abs() < 1e-9);
        assert!(companion_real_roots(&[1.0, 0.0, 1.0], 1e-8).is_empty());
    }

    #[test]
    fn clustering() {
        let c = cluster(&[1.0, 1.0 + 1e-9, 2.0, 3.0, 3.0 + 5e-7], 1e-6);
        assert_eq!(c.len(), 3);
        assert_eq!(c[0].multiplicity, 2);
    }
}
