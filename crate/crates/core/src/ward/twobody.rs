use std::collections::BTreeMap;
use std::fmt;

use super::{DoubletSpec, WardError};
use crate::liealg::catalog::{cga_generator, dimension_matrix, dual_cga_generator, dual_generator, sch_generator};
use crate::liealg::{DiffOp, GeneratorLabel, Mat2};
use crate::symcore::parse::{parse_with, ParseOptions};
use crate::symcore::{is_zero, BranchContext, ClosedForm, CoordSystem, ParamScalar, SymError};

/// Which single-leg representation the legs carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegFamily {
    /// Schrödinger generators with fixed mass `M`.
    MassSch,
    /// Conformal Galilean generators with constant `gamma` shared by both legs.
    Cga,
    /// Mass-dualized Schrödinger generators plus `N`.
    DualSch,
    /// Dual conformal Galilean generators (non-logarithmic).
    DualCga,
}

const LEG_PARAMS: &[&str] = &["x", "xp", "xi", "xip", "xipp", "M", "lambda"];

impl LegFamily {
    pub fn leg_coords(self) -> &'static [&'static str] {
        match self {
            LegFamily::MassSch | LegFamily::Cga => &["t", "r"],
            LegFamily::DualSch | LegFamily::DualCga => &["zeta", "t", "r"],
        }
    }

    /// Single-leg generator with Jordan matrices `[[x, x'], [0, x]]` and `[[xi, xi'], [0, xi]]`.
    pub fn leg_generator(self, l: &GeneratorLabel) -> Option<DiffOp> {
        let dimm = dimension_matrix("x", Some("xp"));
        match self {
            LegFamily::MassSch => sch_generator(l, 1, &dimm),
            LegFamily::Cga => cga_generator(l, 1, &dimm).map(|g| freeze(&g, "gamma", "gamma")),
            LegFamily::DualSch => {
                let xi = Mat2::jordan(ParamScalar::param("xi"), ParamScalar::param("xip"));
                dual_generator(l, &dimm, Some(&xi))
            }
            LegFamily::DualCga => dual_cga_generator(l),
        }
    }
}

/// Turn a coordinate that is never differentiated into a parameter.
pub fn freeze(op: &DiffOp, coord: &str, param: &str) -> DiffOp {
    let mut out = DiffOp::zero();
    for ((mo, d), m) in op.terms() {
        let mut mo = mo.clone();
        let mut m = m.clone();
        if let Some(e) = mo.remove(coord) {
            let k = crate::symcore::rational::q_as_i64(&e).expect("integer power of a frozen coordinate");
            let f = ParamScalar::param(param).pow(k as i32).expect("monomial power");
            m = m.scale(&f);
        }
        out = out.add(&DiffOp::term(m, mo, d.clone()));
    }
    out
}

/// Two copies of a representation acting on a quartet.
#[derive(Clone, Debug)]
pub struct TwoBody {
    pub family: LegFamily,
    pub sys: CoordSystem,
    pub spec: DoubletSpec,
}

impl TwoBody {
    pub fn new(family: LegFamily, spec: DoubletSpec) -> Result<TwoBody, WardError> {
        spec.validate()?;
        let mut sys = CoordSystem::new();
        for leg in ["1", "2"] {
            for c in family.leg_coords() {
                sys.add_base(&format!("{}{}", c, leg));
            }
        }
        sys.add_composite_text("t", "t1 - t2")?;
        sys.add_composite_text("tn", "t2 - t1")?;
        sys.add_composite_text("r", "r1 - r2")?;
        if matches!(family, LegFamily::DualSch | LegFamily::DualCga) {
            sys.add_composite_text("zeta", "zeta1 - zeta2")?;
            sys.add_composite_text("u", "2*zeta*t + i*r^2")?;
        }
        Ok(TwoBody { family, sys, spec })
    }

    /// Leg-`n` copy of a single-leg operator, with the spec substituted.
    pub fn on_leg(&self, op: &DiffOp, leg: u8) -> Result<DiffOp, WardError> {
        let coords: BTreeMap<String, String> = self
            .family
            .leg_coords()
            .iter()
            .map(|c| (c.to_string(), format!("{}{}", c, leg)))
            .collect();
        let params: BTreeMap<String, String> = LEG_PARAMS.iter().map(|p| (p.to_string(), format!("{}{}", p, leg))).collect();
        Ok(op.rename(&coords, &params).substitute_params(&self.spec.bindings())?)
    }

    pub fn generator(&self, l: &GeneratorLabel) -> Result<(DiffOp, DiffOp), WardError> {
        let g = self
            .family
            .leg_generator(l)
            .ok_or_else(|| WardError::MissingGenerator(l.to_string()))?;
        Ok((self.on_leg(&g, 1)?, self.on_leg(&g, 2)?))
    }

    /// Parse a closed form in the two-body chart on a branch.
    pub fn parse(&self, text: &str, branch: &BranchContext) -> Result<ClosedForm, WardError> {
        let opts = ParseOptions {
            known_params: None,
            branch: Some(branch),
        };
        let f = parse_with(text, &self.sys, &opts)?;
        Ok(f.substitute_params(&self.spec.bindings())?)
    }
}

pub const ENTRY_NAMES: [[&str; 2]; 2] = [["H", "G21"], ["G12", "F"]];

/// `E[a][b]`: component `a` on leg 1, component `b` on leg 2 (0 = psi, 1 = phi).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quartet {
    pub entries: [[ClosedForm; 2]; 2],
    pub branch: BranchContext,
}

impl Quartet {
    pub fn zero(branch: BranchContext) -> Quartet {
        Quartet {
            entries: Default::default(),
            branch,
        }
    }

    /// Build from texts for `F`, `G12`, `G21`, `H`.
    pub fn from_texts(tb: &TwoBody, branch: &BranchContext, f: &str, g12: &str, g21: &str, h: &str) -> Result<Quartet, WardError> {
        let mut q = Quartet::zero(branch.clone());
        q.entries[1][1] = tb.parse(f, branch)?;
        q.entries[1][0] = tb.parse(g12, branch)?;
        q.entries[0][1] = tb.parse(g21, branch)?;
        q.entries[0][0] = tb.parse(h, branch)?;
        Ok(q)
    }

    pub fn f(&self) -> &ClosedForm {
        &self.entries[1][1]
    }

    pub fn g12(&self) -> &ClosedForm {
        &self.entries[1][0]
    }

    pub fn g21(&self) -> &ClosedForm {
        &self.entries[0][1]
    }

    pub fn h(&self) -> &ClosedForm {
        &self.entries[0][0]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_zero())
    }

    pub fn substitute(&self, b: &BTreeMap<String, ParamScalar>) -> Result<Quartet, SymError> {
        let mut out = self.clone();
        for e in out.entries.iter_mut().flatten() {
            *e = e.substitute_params(b)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Quartet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "branch {}", self.branch.describe())?;
        for (a, b) in [(1, 1), (1, 0), (0, 1), (0, 0)] {
            writeln!(f, "{} = {}", ENTRY_NAMES[a][b], self.entries[a][b])?;
        }
        Ok(())
    }
}

/// Per-entry residual of the covariance condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WardResidual {
    pub entries: [[ClosedForm; 2]; 2],
}

impl WardResidual {
    /// Names of entries whose residual is not identically zero.
    pub fn nonzero(&self, sys: &CoordSystem) -> Result<Vec<(&'static str, ClosedForm)>, SymError> {
        let mut out = Vec::new();
        for (a, b) in [(1, 1), (1, 0), (0, 1), (0, 0)] {
            if !is_zero(&self.entries[a][b], sys)? {
                out.push((ENTRY_NAMES[a][b], crate::symcore::reduce(&self.entries[a][b], sys)?));
            }
        }
        Ok(out)
    }
}

/// `(X^(1) + X^(2)) E` with Jordan mixing on each leg.
pub fn apply_ops(g1: &DiffOp, g2: &DiffOp, q: &Quartet, sys: &CoordSystem) -> Result<WardResidual, SymError> {
    let mut entries: [[ClosedForm; 2]; 2] = Default::default();
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = ClosedForm::zero();
            for k in 0..2 {
                acc.add_assign(&g1.apply_entry(a, k, &q.entries[k][b], sys)?);
                acc.add_assign(&g2.apply_entry(b, k, &q.entries[a][k], sys)?);
            }
            entries[a][b] = acc;
        }
    }
    Ok(WardResidual { entries })
}

pub fn apply_two_body(tb: &TwoBody, gen: &GeneratorLabel, q: &Quartet) -> Result<WardResidual, WardError> {
    let (g1, g2) = tb.generator(gen)?;
    Ok(apply_ops(&g1, &g2, q, &tb.sys)?)
}

/// Which quartet entries feed residual entry `(a, b)`, with their multiplication coefficients.
pub fn source_structure(g1: &DiffOp, g2: &DiffOp, a: usize, b: usize) -> BTreeMap<(usize, usize), DiffOp> {
    let mut out: BTreeMap<(usize, usize), DiffOp> = BTreeMap::new();
    let entry = |g: &DiffOp, i: usize, j: usize| {
        let mut e = DiffOp::zero();
        for ((mo, d), m) in g.terms() {
            e = e.add(&DiffOp::term(Mat2::scalar(m.m[i][j].clone()), mo.clone(), d.clone()));
        }
        e
    };
    for k in 0..2 {
        if k != a {
            let e = entry(g1, a, k);
            if !e.is_zero() {
                let slot = out.entry((k, b)).or_default();
                *slot = slot.add(&e);
            }
        }
        if k != b {
            let e = entry(g2, b, k);
            if !e.is_zero() {
                let slot = out.entry((a, k)).or_default();
                *slot = slot.add(&e);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{q, Sign};

    fn dual() -> TwoBody {
        TwoBody::new(LegFamily::DualSch, DoubletSpec::generic()).unwrap()
    }

    #[test]
    fn translations_kill_difference_functions() {
        let tb = dual();
        let b = BranchContext::with("t", Sign::Positive);
        let e = Quartet::from_texts(&tb, &b, "t^a*u^c", "t^2*zeta", "r^3", "t*u").unwrap();
        for l in [GeneratorLabel::x(q(-1, 1)), GeneratorLabel::y(q(-1, 2), None), GeneratorLabel::m(q(0, 1))] {
            let r = apply_two_body(&tb, &l, &e).unwrap();
            assert!(r.nonzero(&tb.sys).unwrap().is_empty(), "{}", l);
        }
    }

    #[test]
    fn galilei_keeps_functions_of_u() {
        let tb = dual();
        let b = BranchContext::with("t", Sign::Positive);
        let e = Quartet::from_texts(&tb, &b, "t^a*u^c*ln(u)", "0", "0", "0").unwrap();
        let r = apply_two_body(&tb, &GeneratorLabel::y(q(1, 2), None), &e).unwrap();
        assert!(r.nonzero(&tb.sys).unwrap().is_empty());
    }

    #[test]
    fn f_is_never_sourced() {
        let tb = dual();
        let (g1, g2) = tb.generator(&GeneratorLabel::x(q(0, 1))).unwrap();
        assert!(source_structure(&g1, &g2, 1, 1).is_empty());
        let h = source_structure(&g1, &g2, 0, 0);
        assert_eq!(h.keys().cloned().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert_eq!(h[&(1, 0)], DiffOp::scalar(ParamScalar::param("xp1").scale_q(&q(-1, 2))));
        assert_eq!(h[&(0, 1)], DiffOp::scalar(ParamScalar::param("xp2").scale_q(&q(-1, 2))));
    }

    #[test]
    fn gamma_is_frozen() {
        let g = LegFamily::Cga.leg_generator(&GeneratorLabel::y(q(0, 1), None)).unwrap();
        assert!(!g.coords().contains("gamma"));
    }
}
