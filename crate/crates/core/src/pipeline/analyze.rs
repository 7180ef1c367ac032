//! End-to-end analysis and the sectional-positivity verdict.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::critical::{enumerate_critical_points, CriticalPoint};
use super::surface::{characteristic_surface_with, discriminant_curve_with, genericity};
use crate::curvature::{random_symmetric, CurvatureOperator};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::oracle::{optimize, Mode, OracleOptions, OracleResult};
use crate::ratpoly::{
    squarefree_part, BiPoly, Bound, Rational, RootInterval, SignClass, SturmChain, UniPoly, DEFAULT_ISOLATION_WIDTH_LOG2,
};
use crate::strongpos::{witness_with_tolerance, WitnessResult, DEFAULT_TOLERANCE};

/// Distance within which oracle values and roots of `q` are identified.
pub const MATCH_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Positive,
    Nonnegative,
    NotNonnegative,
    /// Every real root of a non-generic `q` is positive: positivity holds,
    /// but the converse direction is unavailable.
    PositiveSufficientOnly,
    DegenerateFallback,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Positive => "POSITIVE",
            Verdict::Nonnegative => "NONNEGATIVE",
            Verdict::NotNonnegative => "NOT_NONNEGATIVE",
            Verdict::PositiveSufficientOnly => "POSITIVE_SUFFICIENT_ONLY",
            Verdict::DegenerateFallback => "DEGENERATE_FALLBACK",
        }
    }

    /// The certified sign statement, if any.
    pub fn certified(self) -> Option<Verdict> {
        match self {
            Verdict::PositiveSufficientOnly => Some(Verdict::Positive),
            Verdict::DegenerateFallback => None,
            v => Some(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzeOptions {
    pub exec: Exec,
    /// Run the numeric oracle even when the verdict is certified.
    pub oracle: bool,
    /// Run the strong-positivity witness even when the verdict is certified.
    pub witness: bool,
    pub oracle_options: OracleOptions,
    pub tolerance: f64,
    /// Re-analyze `R + ε Δ` for a seeded random integer `Δ`.
    pub perturb: Option<Rational>,
    pub seed: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            exec: Exec::default(),
            oracle: false,
            witness: false,
            oracle_options: OracleOptions::default(),
            tolerance: DEFAULT_TOLERANCE,
            perturb: None,
            seed: crate::oracle::DEFAULT_SEED,
        }
    }
}

/// Oracle stationary values against the roots of `q`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleComparison {
    /// Clusters farther than [`MATCH_TOLERANCE`] from every root interval.
    pub outside_roots: Vec<f64>,
    /// Clusters with no certified critical value nearby.
    pub unmatched_clusters: Vec<f64>,
    /// Certified critical values with no cluster nearby.
    pub unmatched_certified: Vec<f64>,
    /// Oracle extremes agree in sign with the verdict.
    pub verdict_consistent: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub epsilon: Rational,
    pub seed: u64,
    pub report: AnalysisReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport {
    pub p: BiPoly,
    pub q: UniPoly,
    pub q_is_identically_zero: bool,
    pub disc_q: Option<Rational>,
    pub generic: bool,
    pub root_intervals: Vec<RootInterval>,
    pub negative_root_count: usize,
    pub q_at_zero_vanishes: bool,
    pub verdict: Verdict,
    /// Smallest and largest real roots of `q`; the sectional curvature range
    /// in the generic case.
    pub bounds: Option<(RootInterval, RootInterval)>,
    pub critical_points: Vec<CriticalPoint>,
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
    pub oracle: Option<OracleResult>,
    pub oracle_comparison: Option<OracleComparison>,
    pub witness: Option<WitnessResult>,
    /// Heuristic only; never affects `verdict`.
    pub perturbation: Option<Box<Perturbation>>,
    /// Wall-clock seconds per stage.
    pub timings: Vec<(&'static str, f64)>,
}

impl AnalysisReport {
    pub fn bounds_f64(&self) -> Option<(f64, f64)> {
        self.bounds.as_ref().map(|(a, b)| (a.midpoint_f64(), b.midpoint_f64()))
    }

    /// Distinct certified critical values.
    pub fn certified_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.critical_points.iter().filter(|p| p.certified).map(|p| p.x1_approx).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

pub fn analyze(r: &CurvatureOperator) -> Result<AnalysisReport> {
    analyze_with(r, &AnalyzeOptions::default())
}

pub fn analyze_with(r: &CurvatureOperator, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, timings: &mut Vec<(&'static str, f64)>| {
        timings.push((name, clock.elapsed().as_secs_f64()));
        clock = Instant::now();
    };

    let warnings = r.validate().warnings;
    let s = characteristic_surface_with(r, opts.exec)?;
    lap("surface", &mut timings);
    let q = discriminant_curve_with(&s, opts.exec)?;
    lap("discriminant", &mut timings);
    let g = genericity(&q)?;
    lap("genericity", &mut timings);

    let mut report = AnalysisReport {
        p: s.p.clone(),
        q: q.clone(),
        q_is_identically_zero: g.q_zero,
        disc_q: g.disc_q.clone(),
        generic: g.generic,
        root_intervals: Vec::new(),
        negative_root_count: 0,
        q_at_zero_vanishes: q.eval(&Rational::zero()).is_zero(),
        verdict: Verdict::DegenerateFallback,
        bounds: None,
        critical_points: Vec::new(),
        violations: Vec::new(),
        warnings,
        oracle: None,
        oracle_comparison: None,
        witness: None,
        perturbation: None,
        timings: Vec::new(),
    };

    if !g.q_zero {
        let chain = SturmChain::new(&squarefree_part(&q)?)?;
        let width = Rational::new(1.into(), BigInt::one() << DEFAULT_ISOLATION_WIDTH_LOG2);
        let roots = chain.isolate(&width)?;
        let nonpositive = chain.count(&Bound::NegInf, &Bound::Finite(Rational::zero()));
        report.negative_root_count = nonpositive - usize::from(report.q_at_zero_vanishes);
        lap("isolation", &mut timings);
        if g.generic {
            if roots.is_empty() {
                return Err(Error::ContractViolation(
                    "generic discriminant curve has no real roots, but sectional curvature attains extrema".into(),
                ));
            }
            report.verdict = if report.negative_root_count > 0 {
                Verdict::NotNonnegative
            } else if report.q_at_zero_vanishes {
                Verdict::Nonnegative
            } else {
                Verdict::Positive
            };
            report.bounds = Some((roots[0].clone(), roots[roots.len() - 1].clone()));
        }
        let e = enumerate_critical_points(r, &s, &chain, &roots, g.generic, opts.exec)?;
        lap("critical_points", &mut timings);
        if !g.generic {
            report.verdict = non_generic_verdict(&roots, &e.points);
        }
        report.critical_points = e.points;
        report.violations = e.violations;
        report.root_intervals = roots;
    }

    let fallback = report.verdict == Verdict::DegenerateFallback;
    if opts.oracle || fallback {
        let o = optimize(&r.to_f64(), Mode::Harvest, &OracleOptions { exec: opts.exec, ..opts.oracle_options.clone() });
        report.oracle_comparison = Some(compare(&report, &o, opts.tolerance));
        report.oracle = Some(o);
        lap("oracle", &mut timings);
    }
    if opts.witness || fallback {
        report.witness = Some(witness_with_tolerance(r, opts.tolerance));
        lap("witness", &mut timings);
    }
    if let Some(eps) = &opts.perturb {
        let delta = random_symmetric(opts.seed, 1);
        let inner = AnalyzeOptions { perturb: None, oracle: false, witness: false, ..opts.clone() };
        let rep = analyze_with(&r.add_scaled(&delta, eps), &inner)?;
        report.perturbation = Some(Box::new(Perturbation { epsilon: eps.clone(), seed: opts.seed, report: rep }));
        lap("perturbation", &mut timings);
    }
    report.timings = timings;
    Ok(report)
}

/// Without genericity, roots of `q` still contain every critical value, and a
/// certified critical point is a plane of curvature `x1`. That decides
/// positivity when all roots are positive, and the sign otherwise only when
/// the smallest root is witnessed by a certified plane.
fn non_generic_verdict(roots: &[RootInterval], points: &[CriticalPoint]) -> Verdict {
    let Some(first) = roots.first() else {
        return Verdict::DegenerateFallback;
    };
    let witnessed = points.iter().any(|p| p.certified && p.x1 == *first);
    match first.sign_class {
        SignClass::Positive => Verdict::PositiveSufficientOnly,
        SignClass::Zero if witnessed => Verdict::Nonnegative,
        SignClass::Negative if witnessed => Verdict::NotNonnegative,
        _ if points.iter().any(|p| p.certified && p.x1.sign_class == SignClass::Negative) => Verdict::NotNonnegative,
        _ => Verdict::DegenerateFallback,
    }
}

fn compare(report: &AnalysisReport, o: &OracleResult, tol: f64) -> OracleComparison {
    let values = o.critical_value_list();
    let outside_roots = values
        .iter()
        .copied()
        .filter(|&v| !report.root_intervals.iter().any(|iv| iv.distance_to(v) <= MATCH_TOLERANCE))
        .collect();
    let certified = report.certified_values();
    let near = |a: &[f64], v: f64| a.iter().any(|&c| (c - v).abs() <= MATCH_TOLERANCE);
    let unmatched_clusters = values.iter().copied().filter(|&v| !near(&certified, v)).collect();
    let unmatched_certified = certified.iter().copied().filter(|&v| !near(&values, v)).collect();
    let verdict_consistent = match report.verdict.certified() {
        Some(Verdict::Positive) => o.min_value > -tol,
        Some(Verdict::Nonnegative) => o.min_value > -tol && o.min_value < tol,
        Some(Verdict::NotNonnegative) => o.min_value < tol,
        _ => true,
    };
    OracleComparison { outside_roots, unmatched_clusters, unmatched_certified, verdict_consistent }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{constant_curvature, diagonal_ints, product_spheres};
    use crate::ratpoly::rat_int;

    #[test]
    fn diagonal_positive() {
        let rep = analyze(&diagonal_ints([1, 2, 3, 4, 5, 6])).unwrap();
        assert_eq!(rep.verdict, Verdict::Positive);
        assert!(rep.generic);
        assert_eq!(rep.root_intervals.len(), 6);
        assert_eq!(rep.bounds_f64(), Some((1.0, 6.0)));
        assert!(rep.violations.is_empty());
        assert_eq!(rep.certified_values(), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert!(rep.oracle.is_none());
    }

    #[test]
    fn diagonal_negative() {
        let rep = analyze(&diagonal_ints([-1, 2, 3, 4, 5, 6])).unwrap();
        assert!(!rep.generic);
        assert_eq!(rep.verdict, Verdict::NotNonnegative);
        assert_eq!(rep.root_intervals[0].exact_value(), Some(&rat_int(-1)));
    }

    #[test]
    fn diagonal_nonnegative() {
        let rep = analyze(&diagonal_ints([0, 1, 2, 5, 6, 7])).unwrap();
        assert!(rep.generic);
        assert_eq!(rep.verdict, Verdict::Nonnegative);
        assert_eq!(rep.bounds_f64(), Some((0.0, 7.0)));
    }

    #[test]
    fn non_generic_signs_from_certified_points() {
        // Pair sums differ, so q picks up repeated roots where two blocks meet.
        let rep = analyze(&diagonal_ints([0, 2, 3, 4, 5, 6])).unwrap();
        assert!(!rep.generic && !rep.q_is_identically_zero);
        assert_eq!(rep.verdict, Verdict::Nonnegative);
        // Blocks meet at x = 10/3 and 13/3 with complex y.
        let rep = analyze(&diagonal_ints([1, 2, 3, 6, 4, 5])).unwrap();
        assert!(!rep.generic);
        assert_eq!(rep.verdict, Verdict::PositiveSufficientOnly);
        assert_eq!(rep.verdict.certified(), Some(Verdict::Positive));
    }

    #[test]
    fn degenerate_fallbacks() {
        let opts = AnalyzeOptions {
            oracle_options: OracleOptions { restarts: 20, ..OracleOptions::default() },
            ..AnalyzeOptions::default()
        };
        let rep = analyze_with(&constant_curvature(rat_int(1)), &opts).unwrap();
        assert!(rep.q_is_identically_zero);
        assert_eq!(rep.verdict, Verdict::DegenerateFallback);
        let o = rep.oracle.as_ref().unwrap();
        assert!((o.min_value - 1.0).abs() < 1e-9 && (o.max_value - 1.0).abs() < 1e-9);
        assert!((rep.witness.as_ref().unwrap().alpha1 - 1.0).abs() < 1e-9);

        let rep = analyze_with(&product_spheres(), &opts).unwrap();
        assert_eq!(rep.verdict, Verdict::DegenerateFallback);
        let o = rep.oracle.as_ref().unwrap();
        assert!(o.min_value.abs() < 1e-9 && (o.max_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn perturbation_is_separate() {
        let opts = AnalyzeOptions {
            perturb: Some(crate::ratpoly::rat(1, 1000)),
            oracle_options: OracleOptions { restarts: 5, ..OracleOptions::default() },
            ..AnalyzeOptions::default()
        };
        let rep = analyze_with(&constant_curvature(rat_int(1)), &opts).unwrap();
        assert_eq!(rep.verdict, Verdict::DegenerateFallback);
        let p = rep.perturbation.as_ref().unwrap();
        assert!(!p.report.q_is_identically_zero);
        assert!(p.report.perturbation.is_none());
    }
}
