//! Exact algebraic decision procedure for sectional positivity of curvature
//! operators in dimension four, with a floating-point cross-validation oracle.
//!
//! The central object is `p(x, y) = det(R - xI - yK)` where `R` is a symmetric
//! operator on the six-dimensional space of 2-forms and `K` is the volume form.
//! The real roots of `q(x) = disc_y p(x, y)` contain every critical value of
//! sectional curvature, and for operators with `disc q != 0` the two sets
//! coincide. [`pipeline::analyze`] builds `p` and `q` exactly, classifies the
//! roots of `q` with Sturm sequences and certifies the corresponding critical
//! points.
//!
//! Module map:
//!
//! * [`ratpoly`]: rationals, univariate/bivariate polynomials, Sturm chains,
//!   resultants and discriminants.
//! * [`curvature`]: the fixed 2-form basis, `K`, Plücker coordinates and
//!   operator builders.
//! * [`pipeline`]: characteristic surface, discriminant curve, critical points
//!   and the verdict.
//! * [`oracle`]: brute-force optimisation over the Grassmannian of 2-planes.
//! * [`strongpos`]: the strong-positivity witness `max_y λ_min(R - yK)` and the
//!   zero set `Z(R)`.

pub mod curvature;
pub mod error;
pub mod exec;
pub mod interval;
pub mod oracle;
pub mod pipeline;
pub mod ratpoly;
pub mod strongpos;

pub use error::{Error, Result};
pub use exec::Exec;
