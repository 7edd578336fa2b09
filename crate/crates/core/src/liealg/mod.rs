//! Differential-operator representations, bracket tables and their
//! verification.

pub mod catalog;
pub mod diffop;
pub mod label;
pub mod table;
pub mod verify;
pub mod virasoro;

pub use catalog::{build_representation, Representation, CATALOG_IDS};
pub use diffop::{DiffOp, Mat2};
pub use label::{Family, GeneratorLabel, LinComb};
pub use table::{central_extension_table, expected_table, StructureTable};
pub use verify::{jacobi_check, operator_jacobi, verify_closure, verify_dynamical_symmetry, verify_structure};
pub use virasoro::verify_matrix_central_charges;

use thiserror::Error;

use crate::symcore::SymError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("cannot build representation: {0}")]
    Build(String),
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("resource bound exceeded: {0}")]
    Resource(String),
}
