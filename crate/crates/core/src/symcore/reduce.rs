//! Semantic zero test across dependent coordinates.
//!
//! Terms are grouped by their non-polynomial signature (fractional or
//! symbolic exponent parts, logarithms, kernel). Inside a group the common
//! minimal integer powers are factored out and the remaining numerator is
//! expanded in base coordinates, where polynomial identities are decidable.

use std::collections::BTreeMap;


use super::coords::CoordSystem;
use super::exponent::ExponentExpr;
use super::form::{ClosedForm, Factors};
use super::rational::q_as_i64;
use super::scalar::ParamScalar;
use super::SymError;

type BaseMono = BTreeMap<String, u32>;
type Poly = BTreeMap<BaseMono, ParamScalar>;

/// One independent basis function and its coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisEntry {
    pub prefactor: Factors,
    pub monomial: BaseMono,
    pub coeff: ParamScalar,
}

impl BasisEntry {
    pub fn describe(&self) -> String {
        let mut f = ClosedForm::term(ParamScalar::one(), self.prefactor.clone());
        for (c, k) in &self.monomial {
            f = f.mul(&ClosedForm::coord(c).pow(*k));
        }
        f.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    frac: BTreeMap<String, ExponentExpr>,
    logs: BTreeMap<String, u32>,
    kernel: Option<Box<ClosedForm>>,
}

struct Group {
    terms: Vec<(BTreeMap<String, i64>, ParamScalar)>,
}

fn poly_add_term(p: &mut Poly, m: BaseMono, c: ParamScalar) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(&m) {
        Some(slot) => {
            slot.add_assign(&c);
            if slot.is_zero() {
                p.remove(&m);
            }
        }
        None => {
            p.insert(m, c);
        }
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (m1, c1) in a {
        for (m2, c2) in b {
            let mut m = m1.clone();
            for (k, e) in m2 {
                *m.entry(k.clone()).or_insert(0) += e;
            }
            poly_add_term(&mut out, m, c1.mul(c2));
        }
    }
    out
}

fn poly_one() -> Poly {
    let mut p = Poly::new();
    p.insert(BaseMono::new(), ParamScalar::one());
    p
}

fn expansion_poly(name: &str, sys: &CoordSystem) -> Result<Poly, SymError> {
    let e = sys
        .expansion(name)
        .ok_or_else(|| SymError::UnknownName { name: name.to_string() })?;
    let mut p = Poly::new();
    for (f, c) in e.terms() {
        let mut m = BaseMono::new();
        for (k, ex) in &f.powers {
            let n = ex.as_rational().and_then(q_as_i64).filter(|n| *n >= 0).ok_or_else(|| {
                SymError::InvalidComposite {
                    name: name.to_string(),
                    reason: "expansion is not polynomial".into(),
                }
            })?;
            m.insert(k.clone(), n as u32);
        }
        poly_add_term(&mut p, m, c.clone());
    }
    Ok(p)
}

fn split(expr: &ClosedForm) -> BTreeMap<Signature, Group> {
    let mut groups: BTreeMap<Signature, Group> = BTreeMap::new();
    for (f, c) in expr.terms() {
        let mut frac = BTreeMap::new();
        let mut ints = BTreeMap::new();
        for (a, e) in &f.powers {
            let (fr, shift) = e.split_integer();
            if !fr.is_zero() {
                frac.insert(a.clone(), fr);
            }
            if shift != 0 {
                ints.insert(a.clone(), shift);
            }
        }
        let sig = Signature {
            frac,
            logs: f.logs.clone(),
            kernel: f.kernel.clone(),
        };
        groups
            .entry(sig)
            .or_insert_with(|| Group { terms: Vec::new() })
            .terms
            .push((ints, c.clone()));
    }
    groups
}

/// Per group: the factored prefactor and the numerator polynomial in base coordinates.
fn decompose(expr: &ClosedForm, sys: &CoordSystem) -> Result<Vec<(Factors, Poly)>, SymError> {
    let mut cache: BTreeMap<String, Poly> = BTreeMap::new();
    let mut out = Vec::new();
    for (sig, group) in split(expr) {
        let mut mins: BTreeMap<String, i64> = BTreeMap::new();
        for (ints, _) in &group.terms {
            for (a, n) in ints {
                let m = mins.entry(a.clone()).or_insert(0);
                *m = (*m).min(*n);
            }
        }
        let mut num = Poly::new();
        for (ints, c) in &group.terms {
            let mut p = poly_one();
            let atoms: std::collections::BTreeSet<&String> = ints.keys().chain(mins.keys()).collect();
            for a in atoms {
                let k = ints.get(a).copied().unwrap_or(0) - mins.get(a).copied().unwrap_or(0);
                if k == 0 {
                    continue;
                }
                if !cache.contains_key(a) {
                    cache.insert(a.clone(), expansion_poly(a, sys)?);
                }
                let base = &cache[a];
                for _ in 0..k {
                    p = poly_mul(&p, base);
                }
            }
            for (m, pc) in p {
                poly_add_term(&mut num, m, pc.mul(c));
            }
        }
        let mut powers = sig.frac.clone();
        for (a, m) in mins {
            if m == 0 {
                continue;
            }
            let e = powers.remove(&a).unwrap_or_default().add(&ExponentExpr::int(m));
            if !e.is_zero() {
                powers.insert(a, e);
            }
        }
        let prefactor = Factors {
            powers,
            logs: sig.logs,
            kernel: sig.kernel,
        };
        out.push((prefactor, num));
    }
    Ok(out)
}

/// True iff every signature group cancels after expansion in base coordinates.
pub fn is_zero(expr: &ClosedForm, sys: &CoordSystem) -> Result<bool, SymError> {
    if expr.is_zero() {
        return Ok(true);
    }
    Ok(decompose(expr, sys)?.iter().all(|(_, p)| p.is_empty()))
}

/// Rewrite into prefactor times base-coordinate polynomial per group.
pub fn reduce(expr: &ClosedForm, sys: &CoordSystem) -> Result<ClosedForm, SymError> {
    let mut out = ClosedForm::zero();
    for (pre, num) in decompose(expr, sys)? {
        let head = ClosedForm::term(ParamScalar::one(), pre);
        for (m, c) in num {
            let mut t = head.scale(&c);
            for (k, e) in &m {
                t = t.mul(&ClosedForm::coord(k).pow(*e));
            }
            out.add_assign(&t);
        }
    }
    Ok(out)
}

/// Coefficients of independent basis functions; empty iff the expression is zero.
pub fn basis_decomposition(expr: &ClosedForm, sys: &CoordSystem) -> Result<Vec<BasisEntry>, SymError> {
    let mut out = Vec::new();
    for (pre, num) in decompose(expr, sys)? {
        for (m, c) in num {
            out.push(BasisEntry {
                prefactor: pre.clone(),
                monomial: m,
                coeff: c,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse::parse_in;

    fn sys() -> CoordSystem {
        let mut s = CoordSystem::with_base(&["zeta1", "t1", "r1", "zeta2", "t2", "r2"]);
        s.add_composite_text("t", "t1 - t2").unwrap();
        s.add_composite_text("tn", "t2 - t1").unwrap();
        s.add_composite_text("r", "r1 - r2").unwrap();
        s.add_composite_text("zeta", "zeta1 - zeta2").unwrap();
        s.add_composite_text("u", "2*zeta*t + i*r^2").unwrap();
        s
    }

    #[test]
    fn composite_identity_cancels() {
        let s = sys();
        let e = parse_in("u^(b+1) - 2*zeta1*t*u^b + 2*zeta2*t*u^b - i*r^2*u^b", &s).unwrap();
        assert!(!e.is_zero());
        assert!(is_zero(&e, &s).unwrap());
    }

    #[test]
    fn negation_atoms_cancel() {
        let s = sys();
        let e = parse_in("t + tn", &s).unwrap();
        assert!(is_zero(&e, &s).unwrap());
    }

    #[test]
    fn different_symbolic_exponents_stay_apart() {
        let s = sys();
        let e = parse_in("t^x - t^y", &s).unwrap();
        assert!(!is_zero(&e, &s).unwrap());
        assert_eq!(basis_decomposition(&e, &s).unwrap().len(), 2);
    }

    #[test]
    fn reduce_keeps_value() {
        let s = sys();
        let e = parse_in("t^(-1)*u*ln(t)", &s).unwrap();
        let r = reduce(&e, &s).unwrap();
        assert!(is_zero(&r.sub(&e), &s).unwrap());
    }
}
