//! Symbolic-numeric verification engine for local scale-invariance.
//!
//! * [`symcore`]: exact closed forms, coordinates, parsing.
//! * [`liealg`]: differential-operator representations and bracket checks.
//! * [`ward`]: two-body covariance of two-point function quartets.
//! * [`causality`]: contour quadrature of the dualization integrals.
//! * [`cli`]: command-line front end.

pub mod causality;
pub mod cli;
pub mod liealg;
pub mod par;
pub mod report;
pub mod suite;
pub mod symcore;
pub mod ward;

pub use par::Execution;
