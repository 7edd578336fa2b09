use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;

use super::coords::CoordSystem;
use super::exponent::ExponentExpr;
use super::rational::Q;
use super::scalar::ParamScalar;
use super::SymError;

/// The non-scalar part of a term: coordinate powers, log powers and an
/// optional exponential kernel.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factors {
    pub powers: BTreeMap<String, ExponentExpr>,
    pub logs: BTreeMap<String, u32>,
    pub kernel: Option<Box<ClosedForm>>,
}

impl Factors {
    pub fn is_one(&self) -> bool {
        self.powers.is_empty() && self.logs.is_empty() && self.kernel.is_none()
    }

    pub fn mul(&self, o: &Factors) -> Factors {
        let mut powers = self.powers.clone();
        for (c, e) in &o.powers {
            let sum = match powers.get(c) {
                Some(prev) => prev.add(e),
                None => e.clone(),
            };
            if sum.is_zero() {
                powers.remove(c);
            } else {
                powers.insert(c.clone(), sum);
            }
        }
        let mut logs = self.logs.clone();
        for (c, k) in &o.logs {
            *logs.entry(c.clone()).or_insert(0) += k;
        }
        let kernel = match (&self.kernel, &o.kernel) {
            (None, None) => None,
            (Some(k), None) | (None, Some(k)) => Some(k.clone()),
            (Some(a), Some(b)) => {
                let s = a.add(b);
                (!s.is_zero()).then(|| Box::new(s))
            }
        };
        Factors { powers, logs, kernel }
    }

    fn shift_power(&self, coord: &str, delta: &ExponentExpr) -> Factors {
        let mut single = Factors::default();
        single.powers.insert(coord.to_string(), delta.clone());
        self.mul(&single)
    }

    fn coords(&self) -> BTreeSet<String> {
        let mut s: BTreeSet<String> = self.powers.keys().cloned().collect();
        s.extend(self.logs.keys().cloned());
        if let Some(k) = &self.kernel {
            s.extend(k.coords());
        }
        s
    }

    fn render(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (c, e) in &self.powers {
            if let Some(v) = e.as_rational() {
                if v.is_one() {
                    out.push(c.clone());
                    continue;
                }
            }
            out.push(format!("{}^({})", c, e));
        }
        for (c, k) in &self.logs {
            if *k == 1 {
                out.push(format!("ln({})", c));
            } else {
                out.push(format!("ln({})^{}", c, k));
            }
        }
        if let Some(k) = &self.kernel {
            out.push(format!("exp({})", k));
        }
        out
    }
}

/// Canonical sum of `coeff * factors` terms.
///
/// Two expressions built in the same coordinate chart compare equal term by
/// term; semantic zero-testing across dependent coordinates lives in
/// [`reduce`](super::reduce).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedForm {
    terms: BTreeMap<Factors, ParamScalar>,
}

impl ClosedForm {
    pub fn zero() -> Self {
        ClosedForm::default()
    }

    pub fn one() -> Self {
        ClosedForm::scalar(ParamScalar::one())
    }

    pub fn scalar(s: ParamScalar) -> Self {
        ClosedForm::term(s, Factors::default())
    }

    pub fn param(name: &str) -> Self {
        ClosedForm::scalar(ParamScalar::param(name))
    }

    pub fn term(coeff: ParamScalar, factors: Factors) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(factors, coeff);
        }
        ClosedForm { terms }
    }

    pub fn coord(name: &str) -> Self {
        ClosedForm::power(name, ExponentExpr::int(1))
    }

    pub fn power(name: &str, e: ExponentExpr) -> Self {
        let mut f = Factors::default();
        if !e.is_zero() {
            f.powers.insert(name.to_string(), e);
        }
        ClosedForm::term(ParamScalar::one(), f)
    }

    pub fn power_q(name: &str, e: Q) -> Self {
        ClosedForm::power(name, ExponentExpr::rational(e))
    }

    pub fn log(name: &str, k: u32) -> Self {
        let mut f = Factors::default();
        if k > 0 {
            f.logs.insert(name.to_string(), k);
        }
        ClosedForm::term(ParamScalar::one(), f)
    }

    /// `exp(arg)`; the argument must be of kernel grade.
    pub fn exp(arg: ClosedForm) -> Result<Self, SymError> {
        if !arg.is_kernel_grade() {
            return Err(SymError::NotKernelGrade { expr: arg.to_string() });
        }
        if arg.is_zero() {
            return Ok(ClosedForm::one());
        }
        let f = Factors {
            kernel: Some(Box::new(arg)),
            ..Factors::default()
        };
        Ok(ClosedForm::term(ParamScalar::one(), f))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Factors, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Syntactic zero: the canonical term set is empty.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_single(&self) -> Option<(&Factors, &ParamScalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn as_scalar(&self) -> Option<ParamScalar> {
        match self.terms.len() {
            0 => Some(ParamScalar::zero()),
            1 => {
                let (f, c) = self.terms.iter().next().unwrap();
                f.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// No logs, no kernels, numeric exponents only.
    pub fn is_kernel_grade(&self) -> bool {
        self.terms.keys().all(|f| {
            f.logs.is_empty() && f.kernel.is_none() && f.powers.values().all(|e| e.as_rational().is_some())
        })
    }

    pub(crate) fn insert_term(&mut self, f: Factors, c: ParamScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&f) {
            Some(slot) => {
                slot.add_assign(&c);
                if slot.is_zero() {
                    self.terms.remove(&f);
                }
            }
            None => {
                self.terms.insert(f, c);
            }
        }
    }

    pub fn add(&self, o: &ClosedForm) -> ClosedForm {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    pub fn add_assign(&mut self, o: &ClosedForm) {
        for (f, c) in &o.terms {
            self.insert_term(f.clone(), c.clone());
        }
    }

    pub fn sub(&self, o: &ClosedForm) -> ClosedForm {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ClosedForm {
        ClosedForm {
            terms: self.terms.iter().map(|(f, c)| (f.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &ParamScalar) -> ClosedForm {
        let mut out = ClosedForm::zero();
        for (f, c) in &self.terms {
            out.insert_term(f.clone(), c.mul(k));
        }
        out
    }

    pub fn mul(&self, o: &ClosedForm) -> ClosedForm {
        let mut out = ClosedForm::zero();
        for (f1, c1) in &self.terms {
            for (f2, c2) in &o.terms {
                out.insert_term(f1.mul(f2), c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> ClosedForm {
        let mut acc = ClosedForm::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Canonical form. Values are canonical by construction, so this is a
    /// rebuild that merges and drops zero terms of a raw term list.
    pub fn canonicalize<I>(raw: I) -> ClosedForm
    where
        I: IntoIterator<Item = (ParamScalar, Factors)>,
    {
        let mut out = ClosedForm::zero();
        for (c, f) in raw {
            let mut tidy = Factors::default();
            for (k, e) in f.powers {
                if !e.is_zero() {
                    tidy.powers.insert(k, e);
                }
            }
            for (k, n) in f.logs {
                if n > 0 {
                    tidy.logs.insert(k, n);
                }
            }
            tidy.kernel = f.kernel.filter(|k| !k.is_zero());
            out.insert_term(tidy, c);
        }
        out
    }

    pub fn coords(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|f| f.coords()).collect()
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        for (f, c) in &self.terms {
            s.extend(c.params());
            for e in f.powers.values() {
                s.extend(e.params().cloned());
            }
            if let Some(k) = &f.kernel {
                s.extend(k.params());
            }
        }
        s
    }

    /// Parameter substitution, reaching into exponents and kernels.
    pub fn substitute_params(&self, bindings: &BTreeMap<String, ParamScalar>) -> Result<ClosedForm, SymError> {
        let mut out = ClosedForm::zero();
        for (f, c) in &self.terms {
            let mut nf = Factors {
                logs: f.logs.clone(),
                ..Factors::default()
            };
            for (k, e) in &f.powers {
                let ne = e.substitute(bindings)?;
                if !ne.is_zero() {
                    nf.powers.insert(k.clone(), ne);
                }
            }
            if let Some(kern) = &f.kernel {
                let nk = kern.substitute_params(bindings)?;
                nf.kernel = (!nk.is_zero()).then(|| Box::new(nk));
            }
            out.insert_term(nf, c.substitute(bindings)?);
        }
        Ok(out)
    }

    pub fn rename(&self, coords: &BTreeMap<String, String>, params: &BTreeMap<String, String>) -> ClosedForm {
        let rn = |k: &String| coords.get(k).cloned().unwrap_or_else(|| k.clone());
        let mut out = ClosedForm::zero();
        for (f, c) in &self.terms {
            let mut nf = Factors::default();
            for (k, e) in &f.powers {
                nf = nf.mul(&Factors {
                    powers: [(rn(k), e.rename(params))].into_iter().collect(),
                    ..Factors::default()
                });
            }
            for (k, n) in &f.logs {
                *nf.logs.entry(rn(k)).or_insert(0) += n;
            }
            if let Some(kern) = &f.kernel {
                nf.kernel = Some(Box::new(kern.rename(coords, params)));
            }
            out.insert_term(nf, c.rename(params));
        }
        out
    }

    /// Exact partial derivative with respect to a base coordinate.
    pub fn differentiate(&self, base: &str, sys: &CoordSystem) -> Result<ClosedForm, SymError> {
        if !sys.is_base(base) {
            return Err(SymError::NotBaseCoordinate { name: base.to_string() });
        }
        let mut out = ClosedForm::zero();
        for (f, c) in &self.terms {
            for (a, e) in &f.powers {
                let inner = sys.partial(a, base)?;
                if inner.is_zero() {
                    continue;
                }
                let lowered = f.shift_power(a, &ExponentExpr::int(-1));
                let piece = ClosedForm::term(c.mul(&e.to_scalar()), lowered).mul(&inner);
                out.add_assign(&piece);
            }
            for (a, k) in &f.logs {
                let inner = sys.partial(a, base)?;
                if inner.is_zero() {
                    continue;
                }
                let mut lowered = f.shift_power(a, &ExponentExpr::int(-1));
                if *k == 1 {
                    lowered.logs.remove(a);
                } else {
                    lowered.logs.insert(a.clone(), k - 1);
                }
                let piece = ClosedForm::term(c.scale(&super::rational::Gauss::int(*k as i64)), lowered).mul(&inner);
                out.add_assign(&piece);
            }
            if let Some(kern) = &f.kernel {
                if !kern.is_kernel_grade() {
                    return Err(SymError::Closure {
                        term: ClosedForm::term(c.clone(), f.clone()).to_string(),
                    });
                }
                let dk = kern.differentiate(base, sys)?;
                if !dk.is_zero() {
                    out.add_assign(&ClosedForm::term(c.clone(), f.clone()).mul(&dk));
                }
            }
        }
        Ok(out)
    }

    /// Repeated differentiation along a multi-index.
    pub fn differentiate_multi(&self, derivs: &BTreeMap<String, u32>, sys: &CoordSystem) -> Result<ClosedForm, SymError> {
        let mut acc = self.clone();
        for (c, n) in derivs {
            for _ in 0..*n {
                if acc.is_zero() {
                    return Ok(acc);
                }
                acc = acc.differentiate(c, sys)?;
            }
        }
        Ok(acc)
    }

    /// Kernel-free, log-free part check used by callers that need a polynomial.
    pub fn is_plain_monomial_sum(&self) -> bool {
        self.terms
            .keys()
            .all(|f| f.logs.is_empty() && f.kernel.is_none() && f.powers.values().all(|e| e.is_integer()))
    }

    /// Numeric evaluation with real coordinates and parameters (principal branches).
    pub fn eval(&self, values: &BTreeMap<String, f64>) -> Option<num_complex::Complex64> {
        use num_complex::Complex64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (f, c) in &self.terms {
            let mut v = c.eval(values)?;
            for (k, e) in &f.powers {
                let base = Complex64::new(*values.get(k)?, 0.0);
                v *= base.powf(e.eval(values)?);
            }
            for (k, n) in &f.logs {
                let l = Complex64::new(*values.get(k)?, 0.0).ln();
                v *= l.powi(*n as i32);
            }
            if let Some(kern) = &f.kernel {
                v *= kern.eval(values)?.exp();
            }
            acc += v;
        }
        Some(acc)
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return fm.write_str("0");
        }
        let mut first = true;
        for (f, c) in &self.terms {
            if !first {
                fm.write_str(" + ")?;
            }
            first = false;
            let factors = f.render();
            if factors.is_empty() {
                write!(fm, "{}", c.render_factor())?;
            } else if c.is_one() {
                write!(fm, "{}", factors.join("*"))?;
            } else {
                write!(fm, "{}*{}", c.render_factor(), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::rational::{q, Gauss};

    fn sys() -> CoordSystem {
        let mut s = CoordSystem::with_base(&["zeta", "t", "r"]);
        s.add_composite_text("u", "2*zeta*t + i*r^2").unwrap();
        s
    }

    #[test]
    fn exponents_merge_to_zero() {
        let a = ExponentExpr::param("alpha");
        let b = ExponentExpr::param("beta");
        let lhs = ClosedForm::power("t", a.clone()).mul(&ClosedForm::power("t", b.clone()));
        let rhs = ClosedForm::power("t", a.add(&b));
        assert!(lhs.sub(&rhs).is_zero());
        let x = ClosedForm::param("x");
        let t0 = ClosedForm::power("t", ExponentExpr::zero());
        assert!(x.mul(&t0).sub(&x).is_zero());
    }

    #[test]
    fn derivative_of_gaussian_kernel() {
        let s = sys();
        let kernel = ClosedForm::param("M")
            .scale(&ParamScalar::ratio(-1, 2))
            .mul(&ClosedForm::power_q("r", q(2, 1)))
            .mul(&ClosedForm::power_q("t", q(-1, 1)));
        let g = ClosedForm::power("t", ExponentExpr::param("x").neg()).mul(&ClosedForm::exp(kernel.clone()).unwrap());
        let d = g.differentiate("t", &s).unwrap();
        let expect_pre = ClosedForm::power("t", ExponentExpr::param("x").neg().add_q(&q(-1, 1)))
            .scale(&ParamScalar::param("x").neg())
            .add(
                &ClosedForm::param("M")
                    .scale(&ParamScalar::ratio(1, 2))
                    .mul(&ClosedForm::power_q("r", q(2, 1)))
                    .mul(&ClosedForm::power("t", ExponentExpr::param("x").neg().add_q(&q(-2, 1)))),
            );
        let expect = expect_pre.mul(&ClosedForm::exp(kernel).unwrap());
        assert_eq!(d, expect);
    }

    #[test]
    fn chain_rule_through_composite() {
        let s = sys();
        let f = ClosedForm::power("u", ExponentExpr::param("beta"));
        let d = f.differentiate("zeta", &s).unwrap();
        let expect = ClosedForm::param("beta")
            .scale(&ParamScalar::int(2))
            .mul(&ClosedForm::coord("t"))
            .mul(&ClosedForm::power("u", ExponentExpr::param("beta").add_q(&q(-1, 1))));
        assert_eq!(d, expect);
    }

    #[test]
    fn log_derivative() {
        let s = sys();
        let d = ClosedForm::log("t", 1).differentiate("t", &s).unwrap();
        assert_eq!(d, ClosedForm::power_q("t", q(-1, 1)));
    }

    #[test]
    fn composite_is_not_a_differentiation_variable() {
        let s = sys();
        assert!(matches!(
            ClosedForm::coord("t").differentiate("u", &s),
            Err(SymError::NotBaseCoordinate { .. })
        ));
    }

    #[test]
    fn kernels_reject_logs() {
        assert!(ClosedForm::exp(ClosedForm::log("t", 1)).is_err());
        assert!(ClosedForm::exp(ClosedForm::power("t", ExponentExpr::param("x"))).is_err());
    }

    #[test]
    fn mass_substitution_flips_kernel_sign() {
        let k = ClosedForm::param("M2")
            .scale(&ParamScalar::ratio(-1, 2))
            .mul(&ClosedForm::power_q("r", q(2, 1)))
            .mul(&ClosedForm::power_q("t", q(-1, 1)));
        let e = ClosedForm::exp(k).unwrap();
        let mut b = BTreeMap::new();
        b.insert("M2".to_string(), ParamScalar::param("M1").neg());
        let out = e.substitute_params(&b).unwrap();
        let k1 = ClosedForm::param("M1")
            .scale(&ParamScalar::constant(Gauss::ratio(1, 2)))
            .mul(&ClosedForm::power_q("r", q(2, 1)))
            .mul(&ClosedForm::power_q("t", q(-1, 1)));
        assert_eq!(out, ClosedForm::exp(k1).unwrap());
    }
}
