//! File formats and report assembly for the `sectpos` binary.
//!
//! Exact quantities are written as `"n/d"` strings. Floating-point data lives
//! only under keys named `numeric`, and wall-clock timings only under the
//! top-level `timings` key, so two runs with the same input and seed produce
//! byte-identical reports once `timings` is removed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use sectpos_core::curvature::{CurvatureOperator, BASIS_TAG};
use sectpos_core::oracle::OracleResult;
use sectpos_core::pipeline::{AnalysisReport, Certificate, CriticalPoint, OracleComparison, Verdict};
use sectpos_core::ratpoly::{format_rational, parse_rational, RootInterval, SignClass};
use sectpos_core::strongpos::WitnessResult;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit codes of the binary.
pub mod exit {
    pub const CERTIFIED_NONNEGATIVE: u8 = 0;
    pub const CERTIFIED_NOT_NONNEGATIVE: u8 = 1;
    pub const UNDECIDED: u8 = 2;
    pub const INPUT_ERROR: u8 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed operator file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("dim must be 4, found {0}")]
    Dim(u32),
    #[error("basis must be \"{BASIS_TAG}\", found {0:?}")]
    Basis(String),
    #[error("matrix must be 6x6")]
    Shape,
    #[error(transparent)]
    Core(#[from] sectpos_core::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub dim: u32,
    pub basis: String,
    pub matrix: Vec<Vec<String>>,
}

impl OperatorFile {
    pub fn from_operator(r: &CurvatureOperator) -> Self {
        OperatorFile {
            dim: 4,
            basis: BASIS_TAG.to_string(),
            matrix: r.entries().iter().map(|row| row.iter().map(format_rational).collect()).collect(),
        }
    }

    pub fn to_operator(&self) -> Result<CurvatureOperator, CliError> {
        if self.dim != 4 {
            return Err(CliError::Dim(self.dim));
        }
        if self.basis != BASIS_TAG {
            return Err(CliError::Basis(self.basis.clone()));
        }
        if self.matrix.len() != 6 || self.matrix.iter().any(|row| row.len() != 6) {
            return Err(CliError::Shape);
        }
        let entries = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CurvatureOperator::from_matrix(entries)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

pub fn parse_operator(text: &str) -> Result<CurvatureOperator, CliError> {
    serde_json::from_str::<OperatorFile>(text)?.to_operator()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootIntervalJson {
    pub lower: String,
    pub upper: String,
    pub sign_class: SignClass,
    pub multiplicity_in_squarefree_part: u32,
    pub numeric: MidpointNumeric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MidpointNumeric {
    pub midpoint: f64,
}

impl From<&RootInterval> for RootIntervalJson {
    fn from(iv: &RootInterval) -> Self {
        RootIntervalJson {
            lower: format_rational(&iv.lower),
            upper: format_rational(&iv.upper),
            sign_class: iv.sign_class,
            multiplicity_in_squarefree_part: iv.multiplicity_in_squarefree_part,
            numeric: MidpointNumeric { midpoint: iv.midpoint_f64() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsJson {
    pub lower: RootIntervalJson,
    pub upper: RootIntervalJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Enclosures `[lo, hi]` keyed by `a00`, `a01`, `a10`, `box_x`, `box_y`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub numeric: BTreeMap<String, [f64; 2]>,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        let mut out = CertificateJson { method: String::new(), x1: None, y1: None, reason: None, numeric: BTreeMap::new() };
        match c {
            Certificate::Exact { x1, y1 } => {
                out.method = "exact".into();
                out.x1 = Some(x1.clone());
                out.y1 = Some(y1.clone());
            }
            Certificate::Interval { a00, a01, a10, box_x, box_y } => {
                out.method = "interval".into();
                for (k, v) in [("a00", a00), ("a01", a01), ("a10", a10), ("box_x", box_x), ("box_y", box_y)] {
                    out.numeric.insert(k.into(), *v);
                }
            }
            Certificate::Failed { reason } => {
                out.method = "failed".into();
                out.reason = Some(reason.clone());
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointNumeric {
    pub x1: f64,
    pub y1: f64,
    pub y1_radius: f64,
    pub wedge_residual: f64,
    pub plane: Option<[[f64; 4]; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointJson {
    pub x1: RootIntervalJson,
    pub kernel_dimension: u32,
    pub certified: bool,
    pub certificate: CertificateJson,
    pub numeric: CriticalPointNumeric,
}

impl From<&CriticalPoint> for CriticalPointJson {
    fn from(p: &CriticalPoint) -> Self {
        CriticalPointJson {
            x1: (&p.x1).into(),
            kernel_dimension: p.kernel_dimension,
            certified: p.certified,
            certificate: (&p.certificate).into(),
            numeric: CriticalPointNumeric {
                x1: p.x1_approx,
                y1: p.y1,
                y1_radius: p.y1_radius,
                wedge_residual: p.wedge_residual,
                plane: p.plane.map(|(a, b)| [a, b]),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonJson {
    pub verdict_consistent: bool,
    pub numeric: ComparisonNumeric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonNumeric {
    pub outside_roots: Vec<f64>,
    pub unmatched_clusters: Vec<f64>,
    pub unmatched_certified: Vec<f64>,
}

impl From<&OracleComparison> for ComparisonJson {
    fn from(c: &OracleComparison) -> Self {
        ComparisonJson {
            verdict_consistent: c.verdict_consistent,
            numeric: ComparisonNumeric {
                outside_roots: c.outside_roots.clone(),
                unmatched_clusters: c.unmatched_clusters.clone(),
                unmatched_certified: c.unmatched_certified.clone(),
            },
        }
    }
}

/// Terms `[m, n, "c"]` of `p`, sorted by `(m, n)`.
pub type BiPolyJson = Vec<(u32, u32, String)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisJson {
    pub p: BiPolyJson,
    /// Ascending coefficients of `q`.
    pub q: Vec<String>,
    pub q_is_identically_zero: bool,
    pub disc_q: Option<String>,
    pub generic: bool,
    pub root_intervals: Vec<RootIntervalJson>,
    pub negative_root_count: usize,
    pub verdict: Verdict,
    /// The sign statement that is proven, if any.
    pub certified_verdict: Option<Verdict>,
    pub bounds: Option<BoundsJson>,
    pub critical_points: Vec<CriticalPointJson>,
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
    pub oracle_comparison: Option<ComparisonJson>,
    pub perturbation: Option<Box<PerturbationJson>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationJson {
    /// Always true: a perturbed verdict says nothing certified about the
    /// original operator.
    pub heuristic: bool,
    pub epsilon: String,
    pub seed: u64,
    pub analysis: AnalysisJson,
}

impl From<&AnalysisReport> for AnalysisJson {
    fn from(r: &AnalysisReport) -> Self {
        AnalysisJson {
            p: r.p.terms().map(|(&(m, n), c)| (m, n, format_rational(c))).collect(),
            q: r.q.coeffs().iter().map(format_rational).collect(),
            q_is_identically_zero: r.q_is_identically_zero,
            disc_q: r.disc_q.as_ref().map(format_rational),
            generic: r.generic,
            root_intervals: r.root_intervals.iter().map(Into::into).collect(),
            negative_root_count: r.negative_root_count,
            verdict: r.verdict,
            certified_verdict: r.verdict.certified(),
            bounds: r.bounds.as_ref().map(|(a, b)| BoundsJson { lower: a.into(), upper: b.into() }),
            critical_points: r.critical_points.iter().map(Into::into).collect(),
            violations: r.violations.clone(),
            warnings: r.warnings.clone(),
            oracle_comparison: r.oracle_comparison.as_ref().map(Into::into),
            perturbation: r.perturbation.as_ref().map(|p| {
                Box::new(PerturbationJson {
                    heuristic: true,
                    epsilon: format_rational(&p.epsilon),
                    seed: p.seed,
                    analysis: (&p.report).into(),
                })
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneJson {
    pub u: [f64; 4],
    pub w: [f64; 4],
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterJson {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleNumeric {
    pub min_value: f64,
    pub max_value: f64,
    pub critical_values: Vec<ClusterJson>,
    pub min_plane: PlaneJson,
    pub max_plane: PlaneJson,
    pub converged_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleJson {
    pub restarts_used: usize,
    pub warnings: Vec<String>,
    pub numeric: OracleNumeric,
}

impl From<&OracleResult> for OracleJson {
    fn from(o: &OracleResult) -> Self {
        let plane = |p: &sectpos_core::oracle::PlanePoint| PlaneJson { u: p.u, w: p.w, value: p.value };
        OracleJson {
            restarts_used: o.restarts_used,
            warnings: o.warnings.clone(),
            numeric: OracleNumeric {
                min_value: o.min_value,
                max_value: o.max_value,
                critical_values: o
                    .critical_values
                    .iter()
                    .map(|c| ClusterJson { value: c.value, multiplicity: c.multiplicity })
                    .collect(),
                min_plane: plane(&o.min_plane),
                max_plane: plane(&o.max_plane),
                converged_fraction: o.converged_fraction,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessNumeric {
    pub y1: f64,
    pub alpha1: f64,
    pub flat_width: f64,
    pub zero_set_basis: Vec<[f64; 6]>,
    pub decomposable_zero_planes: Vec<[[f64; 4]; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub strongly_positive: bool,
    pub uniqueness_violation: bool,
    pub numeric: WitnessNumeric,
}

impl From<&WitnessResult> for WitnessJson {
    fn from(w: &WitnessResult) -> Self {
        WitnessJson {
            strongly_positive: w.strongly_positive,
            uniqueness_violation: w.uniqueness_violation,
            numeric: WitnessNumeric {
                y1: w.y1,
                alpha1: w.alpha1,
                flat_width: w.flat_width,
                zero_set_basis: w.zero_set_basis.clone(),
                decomposable_zero_planes: w.decomposable_zero_planes.iter().map(|&(a, b)| [a, b]).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub input_sha256: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    /// Seconds per stage; the only nondeterministic field.
    #[serde(default)]
    pub timings: BTreeMap<String, f64>,
}

impl ReportFile {
    pub fn new(command: &str, input: &[u8], seed: u64) -> Self {
        ReportFile {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            input_sha256: sha256_hex(input),
            seed,
            analysis: None,
            oracle: None,
            witness: None,
            timings: BTreeMap::new(),
        }
    }

    pub fn with_analysis(mut self, r: &AnalysisReport) -> Self {
        self.analysis = Some(r.into());
        self.oracle = r.oracle.as_ref().map(Into::into);
        self.witness = r.witness.as_ref().map(Into::into);
        for (k, v) in &r.timings {
            self.timings.insert((*k).to_string(), *v);
        }
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

pub fn exit_code(verdict: Verdict) -> u8 {
    match verdict.certified() {
        Some(Verdict::Positive | Verdict::Nonnegative) => exit::CERTIFIED_NONNEGATIVE,
        Some(Verdict::NotNonnegative) => exit::CERTIFIED_NOT_NONNEGATIVE,
        _ => exit::UNDECIDED,
    }
}
