//! Exact symbolic layer: Gaussian-rational scalars in named parameters,
//! affine exponents, coordinate systems with composite coordinates, and
//! closed-form expressions built from powers, logarithms and exponential
//! kernels.
//!
//! Nothing in this module touches floating point except the explicit
//! `eval` helpers used at the numeric boundary.

pub mod coords;
pub mod exponent;
pub mod form;
pub mod parse;
pub mod rational;
pub mod reduce;
pub mod scalar;

pub use coords::{BranchContext, CoordKind, CoordSystem, Coordinate, Sign};
pub use exponent::ExponentExpr;
pub use form::{ClosedForm, Factors};
pub use parse::parse_closed_form;
pub use rational::{q, qi, Gauss, Q};
pub use reduce::{basis_decomposition, is_zero, reduce, BasisEntry};
pub use scalar::{ParamMono, ParamScalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("closure violated: derivative of `{term}` leaves the closed-form basis")]
    Closure { term: String },
    #[error("unsupported substitution for `{name}`: {reason}")]
    UnsupportedSubstitution { name: String, reason: String },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown name `{name}`")]
    UnknownName { name: String },
    #[error("`{name}` is not a base coordinate")]
    NotBaseCoordinate { name: String },
    #[error("invalid composite coordinate `{name}`: {reason}")]
    InvalidComposite { name: String, reason: String },
    #[error("exponential argument `{expr}` is not of kernel grade")]
    NotKernelGrade { expr: String },
    #[error("a sign assumption for `{coord}` is required")]
    BranchRequired { coord: String },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}
