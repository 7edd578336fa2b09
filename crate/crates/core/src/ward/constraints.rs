use std::collections::BTreeMap;
use std::fmt;

use super::twobody::{apply_ops, Quartet, TwoBody, ENTRY_NAMES};
use super::WardError;
use super::twobody::LegFamily;
use super::DoubletSpec;
use crate::liealg::catalog::{log_dual_x0, parabolic_n_full};
use crate::liealg::{DiffOp, Family, GeneratorLabel};
use crate::report::Report;
use crate::symcore::{basis_decomposition, q, qi, BranchContext, Gauss, ParamMono, ParamScalar, Sign};

type Vector = BTreeMap<ParamMono, Gauss>;

/// Polynomial conditions `c = 0` in the parameters, normalized to a unit leading coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    conditions: Vec<ParamScalar>,
}

fn vector(p: &ParamScalar) -> Vector {
    p.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

fn normalize(p: &ParamScalar) -> Option<ParamScalar> {
    let (_, lead) = p.terms().last()?;
    Some(p.scale(&lead.inv()?))
}

impl ConstraintSet {
    pub fn new() -> Self {
        ConstraintSet::default()
    }

    pub fn push(&mut self, c: &ParamScalar) {
        if let Some(n) = normalize(c) {
            if !self.conditions.contains(&n) {
                self.conditions.push(n);
            }
        }
    }

    pub fn extend(&mut self, o: &ConstraintSet) {
        for c in &o.conditions {
            self.push(c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &ParamScalar> {
        self.conditions.iter()
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn contains(&self, c: &ParamScalar) -> bool {
        normalize(c).is_some_and(|n| self.conditions.contains(&n))
    }

    /// Divide out amplitudes that are common factors of a condition.
    pub fn strip(&self, amplitudes: &[&str]) -> ConstraintSet {
        let mut out = ConstraintSet::new();
        for c in &self.conditions {
            let mut c = c.clone();
            for a in amplitudes {
                let a_inv = ParamScalar::param(a).inv().expect("monomial");
                while c.terms().all(|(m, _)| m.0.get(*a).is_some_and(|k| *k > 0)) && !c.is_zero() {
                    c = c.mul(&a_inv);
                }
            }
            out.push(&c);
        }
        out
    }

    /// Exact constant coefficients `l_i` with `sum l_i c_i = target`, if any.
    pub fn combination_for(&self, target: &ParamScalar) -> Option<Vec<Gauss>> {
        let n = self.conditions.len();
        let mut rows: Vec<(Vector, Vec<Gauss>)> = self
            .conditions
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut e = vec![Gauss::zero(); n];
                e[i] = Gauss::one();
                (vector(c), e)
            })
            .collect();
        let mut pivots: Vec<(ParamMono, Vector, Vec<Gauss>)> = Vec::new();
        for (mut v, mut e) in rows.drain(..) {
            for (m, pv, pe) in &pivots {
                if let Some(k) = v.get(m).cloned() {
                    sub_scaled(&mut v, &mut e, pv, pe, &k);
                }
            }
            if let Some((m, lead)) = v.iter().next().map(|(m, c)| (m.clone(), c.clone())) {
                let inv = lead.inv().expect("nonzero entry");
                let v: Vector = v.into_iter().map(|(k, c)| (k, &c * &inv)).collect();
                let e: Vec<Gauss> = e.iter().map(|c| c * &inv).collect();
                for (_, qv, qe) in pivots.iter_mut() {
                    if let Some(k) = qv.get(&m).cloned() {
                        sub_scaled(qv, qe, &v, &e, &k);
                    }
                }
                pivots.push((m, v, e));
            }
        }
        let mut t = vector(target);
        let mut coeffs = vec![Gauss::zero(); n];
        for (m, pv, pe) in &pivots {
            if let Some(k) = t.get(m).cloned() {
                let mut dummy = vec![Gauss::zero(); n];
                sub_scaled(&mut t, &mut dummy, pv, pe, &k);
                for (c, p) in coeffs.iter_mut().zip(pe) {
                    *c = &*c + &(&k * p);
                }
            }
        }
        t.is_empty().then_some(coeffs)
    }

    pub fn implies(&self, target: &ParamScalar) -> bool {
        self.combination_for(target).is_some()
    }

    /// Value of `var` forced by a condition affine in it with constant slope.
    pub fn solve_linear(&self, var: &str) -> Option<ParamScalar> {
        self.conditions.iter().find_map(|c| {
            let mut slope = Gauss::zero();
            let mut rest = ParamScalar::zero();
            for (m, k) in c.terms() {
                match m.0.get(var) {
                    None => rest.add_assign(&ParamScalar::monomial(k.clone(), m.clone())),
                    Some(1) if m.0.len() == 1 => slope = &slope + k,
                    Some(_) => return None,
                }
            }
            let inv = slope.inv()?;
            Some(rest.scale(&(-&inv)))
        })
    }
}

fn sub_scaled(v: &mut Vector, e: &mut [Gauss], pv: &Vector, pe: &[Gauss], k: &Gauss) {
    for (m, c) in pv {
        let slot = v.entry(m.clone()).or_insert_with(Gauss::zero);
        *slot = &*slot - &(k * c);
        if slot.is_zero() {
            v.remove(m);
        }
    }
    for (a, b) in e.iter_mut().zip(pe) {
        *a = &*a - &(k * b);
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.conditions.iter().map(|c| format!("{} = 0", c)).collect();
        write!(f, "{{{}}}", v.join(", "))
    }
}

/// Basis coefficients of the residuals of `ansatz`, read off the named entries (all when `entries` is empty).
pub fn extract_constraints(tb: &TwoBody, ansatz: &Quartet, gens: &[GeneratorLabel], entries: &[&str]) -> Result<ConstraintSet, WardError> {
    let mut ops = Vec::new();
    for g in gens {
        ops.push(tb.generator(g)?);
    }
    extract_with_ops(tb, ansatz, &ops, entries)
}

pub fn extract_with_ops(tb: &TwoBody, ansatz: &Quartet, ops: &[(DiffOp, DiffOp)], entries: &[&str]) -> Result<ConstraintSet, WardError> {
    let mut out = ConstraintSet::new();
    for (g1, g2) in ops {
        let r = apply_ops(g1, g2, ansatz, &tb.sys)?;
        for a in 0..2 {
            for b in 0..2 {
                if !entries.is_empty() && !entries.contains(&ENTRY_NAMES[a][b]) {
                    continue;
                }
                for e in basis_decomposition(&r.entries[a][b], &tb.sys)? {
                    out.push(&e.coeff);
                }
            }
        }
    }
    Ok(out)
}

/// Conditions for `[a, b]` to vanish: every matrix entry of every term.
pub fn commutator_conditions(a: &DiffOp, b: &DiffOp) -> ConstraintSet {
    let mut out = ConstraintSet::new();
    for (_, m) in a.commutator(b).terms() {
        for e in m.m.iter().flatten() {
            out.push(e);
        }
    }
    out
}

fn ansatz(tb: &TwoBody, texts: [&str; 4]) -> Result<Quartet, WardError> {
    let b = BranchContext::with("t", Sign::Positive);
    Quartet::from_texts(tb, &b, texts[0], texts[1], texts[2], texts[3])
}

fn p(n: &str) -> ParamScalar {
    ParamScalar::param(n)
}

/// Mechanical re-derivation of the constraint relations from power-law ansatze.
pub fn constraint_report() -> Result<Report, WardError> {
    let mut r = Report::new("constraints");
    let x = |n: i64| GeneratorLabel::x(qi(n));
    let n_gen = [GeneratorLabel::plain(Family::N)];
    let pw = "t^alpha*u^beta";

    let tb = TwoBody::new(LegFamily::DualSch, DoubletSpec::generic())?;
    let a = ansatz(&tb, [&format!("f0*{}", pw), "0", "0", "0"])?;
    let c = extract_constraints(&tb, &a, &[x(0), x(1)], &["F"])?;
    let t = p("x1").sub(&p("x2")).mul(&p("f0"));
    r.push("(x1 - x2) F = 0", c.implies(&t) && !c.implies(&p("f0")), c.to_string());

    let a = ansatz(&tb, [&format!("f0*{}", pw), &format!("g0*{}", pw), "0", "0"])?;
    let c = extract_constraints(&tb, &a, &[x(1)], &["G12"])?;
    let t = p("x1").sub(&p("x2")).mul(&p("g0")).sub(&p("xp2").mul(&p("f0")));
    r.push("(x1 - x2) G12 = x2' F", c.implies(&t), c.to_string());

    let a = ansatz(&tb, [&format!("f0*{}", pw), "0", &format!("g0*{}", pw), "0"])?;
    let c = extract_constraints(&tb, &a, &[x(1)], &["G21"])?;
    let t = p("x2").sub(&p("x1")).mul(&p("g0")).sub(&p("xp1").mul(&p("f0")));
    r.push("(x2 - x1) G21 = x1' F", c.implies(&t), c.to_string());

    let mut spec = DoubletSpec::generic();
    spec.legs[1].x = p("x1");
    let tbe = TwoBody::new(LegFamily::DualSch, spec)?;
    let a = ansatz(&tbe, ["0", &format!("g12*{}", pw), &format!("g21*{}", pw), &format!("h0*{}", pw)])?;
    let c = extract_constraints(&tbe, &a, &[x(1)], &["H"])?;
    let t = p("xp1").mul(&p("g12")).sub(&p("xp2").mul(&p("g21")));
    r.push("x1' G12 = x2' G21", c.implies(&t), c.to_string());

    let tbs = TwoBody::new(LegFamily::DualSch, DoubletSpec::symmetric())?;
    let a = ansatz(&tbs, ["0", &format!("g0*{}", pw), "0", "0"])?;
    let c = extract_constraints(&tbs, &a, &[x(0), x(1)], &["G12"])?.strip(&["g0"]);
    let ok = c.len() == 1 && c.solve_linear("alpha") == Some(p("beta").add(&p("x")).neg());
    r.push("G12 scaling alpha + beta = -x", ok, c.to_string());
    let c = extract_constraints(&tbs, &a, &n_gen, &["G12"])?.strip(&["g0"]);
    let ok = c.len() == 1 && c.solve_linear("alpha") == Some(p("xi1").add(&p("xi2")));
    r.push("N on G12: single exponent condition", ok, c.to_string());

    let c = commutator_conditions(&log_dual_x0(), &parabolic_n_full());
    let ok = c.len() == 1 && c.contains(&p("xp").mul(&p("xipp")));
    r.push("x' xi'' = 0", ok, c.to_string());

    let tbc = TwoBody::new(LegFamily::DualCga, DoubletSpec::generic())?;
    let f = "f0*t^(-(x1+xi1+x2+xi2)/2)*t1^((x2+xi2-x1-xi1)/2)*t2^((x1+xi1-x2-xi2)/2)*u^beta*t^(-beta)";
    let a = ansatz(&tbc, [f, "0", "0", "0"])?;
    let c = extract_constraints(&tbc, &a, &n_gen, &["F"])?.strip(&["f0"]);
    let want = p("x1")
        .add(&p("x2"))
        .add(&p("xi1").scale_q(&qi(3)))
        .add(&p("xi2").scale_q(&qi(3)))
        .scale_q(&q(-1, 2));
    let got = c.solve_linear("beta");
    let detail = got.as_ref().map_or("no linear condition".to_string(), |b| format!("beta = {}", b));
    r.push("dual-cga exponent under N", got == Some(want), detail);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: &str) -> ParamScalar {
        ParamScalar::param(n)
    }

    #[test]
    fn span_membership() {
        let mut s = ConstraintSet::new();
        s.push(&p("f").mul(&p("a").add(&p("x1"))));
        s.push(&p("f").mul(&p("a").add(&p("x2"))).scale_q(&crate::symcore::qi(3)));
        assert_eq!(s.len(), 2);
        assert!(s.implies(&p("f").mul(&p("x1").sub(&p("x2")))));
        assert!(!s.implies(&p("x1").sub(&p("x2"))));
    }

    #[test]
    fn strip_and_solve() {
        let mut s = ConstraintSet::new();
        s.push(&p("g").mul(&p("a").add(&p("b")).add(&p("x"))).scale_q(&crate::symcore::q(1, 2)));
        let t = s.strip(&["g"]);
        assert_eq!(t.solve_linear("a"), Some(p("b").add(&p("x")).neg()));
    }
}
