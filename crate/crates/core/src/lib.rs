//! Explicit Gaussian quadrature for C¹ cubic splines over symmetrically
//! stretched knot sequences.
//!
//! The rule for `n` intervals has `n + 1` nodes, the minimum for a space of
//! dimension `2n + 2`, and its nodes and weights come from a closed-form
//! recursion; only the odd-`n` middle pair needs one cubic root.
//!
//! ```
//! use spline_gauss::{compute_rule, gen_chebyshev};
//!
//! let knots = gen_chebyshev(5, 0.0, 1.0).unwrap();
//! let rule = compute_rule(&knots).unwrap();
//! assert_eq!(rule.nodes().len(), 7);
//! assert!((rule.apply(|t| t * t) - 1.0 / 3.0).abs() < 1e-15);
//! ```

pub mod basis;
pub mod knots;
pub mod oracle;
pub mod peano;
pub mod rule;

pub use basis::{eval_spline, exact_integral, BasisCoefficients, BasisError, SplineFunction};
pub use knots::{
    gen_chebyshev, gen_geometric, gen_legendre, gen_uniform, parse_knot_text, KnotError, KnotFileError,
    KnotSequence,
};
pub use peano::{constant_numeric, kernel_eval, kernel_sign_scan, ErrorConstant};
pub use rule::{classical_two_point, compute_rule, Parity, QuadratureRule, RecursionState, RuleError};
