//! Exact rational arithmetic and polynomial algebra.
//!
//! Everything here is exact: zero tests on coefficients are meaningful, which
//! the downstream sign conditions depend on.

mod bipoly;
mod interp;
mod matrix;
mod rational;
mod resultant;
mod sturm;
mod unipoly;

pub use bipoly::BiPoly;
pub use interp::interpolate;
pub use matrix::{determinant, determinant_int, Matrix};
pub use rational::{format_rational, parse_rational, rat, rat_int, rational_to_f64, Rational};
pub use resultant::{discriminant, resultant, subdiscriminant_first, subresultant_coefficient, sylvester_matrix};
pub use sturm::{
    count_real_roots, isolate_real_roots, isolate_real_roots_with, refine_root, Bound, IntPoly,
    RootInterval, SignClass, SturmChain, DEFAULT_ISOLATION_WIDTH_LOG2,
};
pub use unipoly::{poly_gcd, squarefree_part, UniPoly, Var};
