//! Two-body covariance of two-point function quartets under logarithmic
//! (Jordan-cell) representations.
//!
//! A doublet `(psi, phi)` carries index 0 for `psi` and 1 for `phi`; the
//! quartet entry `E[a][b]` is the correlator of component `a` on leg 1 with
//! component `b` on leg 2, so `E[1][1] = F`, `E[1][0] = G12`,
//! `E[0][1] = G21` and `E[0][0] = H`.

pub mod cases;
pub mod constraints;
pub mod twobody;

pub use cases::{catalog_solution, mutations, verify_covariance, CaseId, CASE_IDS};
pub use constraints::{commutator_conditions, extract_constraints, ConstraintSet};
pub use twobody::{apply_two_body, LegFamily, Quartet, TwoBody, WardResidual};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::liealg::LieError;
use crate::symcore::{ParamScalar, SymError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WardError {
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("inconsistent doublet specification: {0}")]
    InconsistentSpec(String),
    #[error("generator {0} is not available for this case")]
    MissingGenerator(String),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Parameters of one leg; each is a parameter or an exact number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegSpec {
    pub x: ParamScalar,
    pub xp: ParamScalar,
    pub xi: ParamScalar,
    pub xip: ParamScalar,
    pub mass: ParamScalar,
}

impl LegSpec {
    /// Independent symbolic parameters suffixed with the leg number.
    pub fn symbolic(leg: u8) -> Self {
        let p = |n: &str| ParamScalar::param(&format!("{}{}", n, leg));
        LegSpec {
            x: p("x"),
            xp: p("xp"),
            xi: p("xi"),
            xip: p("xip"),
            mass: p("M"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubletSpec {
    pub legs: [LegSpec; 2],
    pub logarithmic: bool,
}

impl DoubletSpec {
    /// Everything free.
    pub fn generic() -> Self {
        DoubletSpec {
            legs: [LegSpec::symbolic(1), LegSpec::symbolic(2)],
            logarithmic: true,
        }
    }

    fn shared(xp1: i64, xp2: i64) -> Self {
        let mut s = DoubletSpec::generic();
        for (leg, xp) in s.legs.iter_mut().zip([xp1, xp2]) {
            leg.x = ParamScalar::param("x");
            leg.xp = ParamScalar::int(xp);
        }
        s.legs[1].mass = s.legs[0].mass.neg();
        s.logarithmic = xp1 != 0 || xp2 != 0;
        s
    }

    /// `x1 = x2 = x`, `x1' = x2' = 1`, `M2 = -M1`.
    pub fn symmetric() -> Self {
        DoubletSpec::shared(1, 1)
    }

    /// `x1 = x2 = x`, `x1' = 0`, `x2' = 1`, `M2 = -M1`.
    pub fn asymmetric() -> Self {
        DoubletSpec::shared(0, 1)
    }

    /// `x1 = x2 = x`, no Jordan mixing.
    pub fn non_logarithmic() -> Self {
        DoubletSpec::shared(0, 0)
    }

    /// Substitutions from leg-suffixed names to the spec values.
    pub fn bindings(&self) -> BTreeMap<String, ParamScalar> {
        let mut b = BTreeMap::new();
        for (i, leg) in self.legs.iter().enumerate() {
            let n = i + 1;
            b.insert(format!("x{}", n), leg.x.clone());
            b.insert(format!("xp{}", n), leg.xp.clone());
            b.insert(format!("xi{}", n), leg.xi.clone());
            b.insert(format!("xip{}", n), leg.xip.clone());
            b.insert(format!("xipp{}", n), ParamScalar::zero());
            b.insert(format!("M{}", n), leg.mass.clone());
        }
        b
    }

    pub fn xp(&self, leg: usize) -> &ParamScalar {
        &self.legs[leg].xp
    }

    /// Numeric Jordan entries must be 0 or 1.
    pub fn validate(&self) -> Result<(), WardError> {
        for (i, leg) in self.legs.iter().enumerate() {
            if let Some(c) = leg.xp.as_constant() {
                if !(c.is_zero() || c.is_one()) {
                    return Err(WardError::InconsistentSpec(format!("x'{} must be 0 or 1, got {}", i + 1, c)));
                }
            }
        }
        Ok(())
    }
}
