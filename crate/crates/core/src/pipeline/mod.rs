//! The exact pipeline: characteristic surface, discriminant curve,
//! genericity, root isolation, critical points and the verdict.

mod analyze;
mod critical;
mod surface;

pub use analyze::{
    analyze, analyze_with, AnalysisReport, AnalyzeOptions, OracleComparison, Perturbation, Verdict,
    MATCH_TOLERANCE,
};
pub use critical::{
    enumerate_critical_points, is_critical_point, Certificate, CriticalCheck, CriticalPoint, Enumeration,
    CERTIFICATION_MARGIN,
};
pub use surface::{
    characteristic_surface, characteristic_surface_with, check_surface, discriminant_curve,
    discriminant_curve_with, genericity, CharacteristicSurface, Genericity, CURVE_DEGREE_BOUND, CURVE_SAMPLES,
    SURFACE_DEGREE,
};
