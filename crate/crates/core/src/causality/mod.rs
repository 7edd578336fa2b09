//! Contour quadrature of the dualization integrals: vanishing of `I_-`,
//! causal support of the dual two-point functions and the response form.

pub mod contour;
pub mod dualize;
pub mod quad;
pub mod response;

pub use contour::{integral_i, integral_i_with, ContourSpec, ContourValue, HalfPlane, Scheme};
pub use dualize::{causality_report, default_grid, dualize_pointwise, Aggregates, CausalityReport, DualizationTask, Entry, LogMix};
pub use response::{response_scaling, ResponseForm};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CausalityError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty grid")]
    EmptyGrid,
    #[error("scaling function diverges at y = {y}")]
    Divergent { y: f64 },
}
