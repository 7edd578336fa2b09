use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::rational::{fmt_q, Gauss, Q};
use super::SymError;

/// A Laurent monomial in named parameters, e.g. `M^2 theta^-1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamMono(pub BTreeMap<String, i32>);

impl ParamMono {
    pub fn one() -> Self {
        ParamMono::default()
    }

    pub fn var(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), 1);
        ParamMono(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &ParamMono) -> ParamMono {
        let mut out = self.0.clone();
        for (k, e) in &other.0 {
            let slot = out.entry(k.clone()).or_insert(0);
            *slot += e;
            if *slot == 0 {
                out.remove(k);
            }
        }
        ParamMono(out)
    }

    pub fn pow(&self, n: i32) -> ParamMono {
        if n == 0 {
            return ParamMono::one();
        }
        ParamMono(self.0.iter().map(|(k, e)| (k.clone(), e * n)).collect())
    }

    pub fn degree(&self) -> i32 {
        self.0.values().sum()
    }

    fn render(&self) -> String {
        self.0
            .iter()
            .map(|(k, e)| match e {
                1 => k.clone(),
                e if *e < 0 => format!("{}^({})", k, e),
                e => format!("{}^{}", k, e),
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Exact scalar: a Laurent polynomial in parameters over the Gaussian rationals.
///
/// Stored canonically: no zero coefficients, one entry per monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamScalar {
    terms: BTreeMap<ParamMono, Gauss>,
}

impl ParamScalar {
    pub fn zero() -> Self {
        ParamScalar::default()
    }

    pub fn one() -> Self {
        ParamScalar::constant(Gauss::one())
    }

    pub fn i() -> Self {
        ParamScalar::constant(Gauss::i())
    }

    pub fn int(n: i64) -> Self {
        ParamScalar::constant(Gauss::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ParamScalar::constant(Gauss::ratio(n, d))
    }

    pub fn rational(v: Q) -> Self {
        ParamScalar::constant(Gauss::real(v))
    }

    pub fn constant(c: Gauss) -> Self {
        ParamScalar::monomial(c, ParamMono::one())
    }

    pub fn param(name: &str) -> Self {
        ParamScalar::monomial(Gauss::one(), ParamMono::var(name))
    }

    pub fn monomial(c: Gauss, m: ParamMono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamScalar { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMono, &Gauss)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// The value if no parameter occurs.
    pub fn as_constant(&self) -> Option<Gauss> {
        match self.terms.len() {
            0 => Some(Gauss::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_single(&self) -> Option<(&ParamMono, &Gauss)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, m: ParamMono, c: Gauss) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = &*slot + &c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &ParamScalar) -> ParamScalar {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &ParamScalar) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &ParamScalar) -> ParamScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ParamScalar {
        ParamScalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &ParamScalar) -> ParamScalar {
        let mut out = ParamScalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &Gauss) -> ParamScalar {
        if k.is_zero() {
            return ParamScalar::zero();
        }
        ParamScalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn scale_q(&self, k: &Q) -> ParamScalar {
        self.scale(&Gauss::real(k.clone()))
    }

    /// Inverse, defined only for single-term scalars.
    pub fn inv(&self) -> Option<ParamScalar> {
        let (m, c) = self.as_single()?;
        Some(ParamScalar::monomial(c.inv()?, m.pow(-1)))
    }

    pub fn pow(&self, n: i32) -> Option<ParamScalar> {
        if n >= 0 {
            let mut acc = ParamScalar::one();
            for _ in 0..n {
                acc = acc.mul(self);
            }
            Some(acc)
        } else {
            self.inv()?.pow(-n)
        }
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.keys().cloned())
            .collect()
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> ParamScalar {
        let mut out = ParamScalar::zero();
        for (m, c) in &self.terms {
            let mut nm = ParamMono::one();
            for (k, e) in &m.0 {
                let name = map.get(k).cloned().unwrap_or_else(|| k.clone());
                nm = nm.mul(&ParamMono::var(&name).pow(*e));
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Replace parameters by scalars. Negative powers need an invertible binding.
    pub fn substitute(&self, bindings: &BTreeMap<String, ParamScalar>) -> Result<ParamScalar, SymError> {
        let mut out = ParamScalar::zero();
        for (m, c) in &self.terms {
            let mut acc = ParamScalar::constant(c.clone());
            for (k, e) in &m.0 {
                let factor = match bindings.get(k) {
                    Some(b) => b.pow(*e).ok_or_else(|| SymError::UnsupportedSubstitution {
                        name: k.clone(),
                        reason: "negative power of a non-monomial binding".into(),
                    })?,
                    None => ParamScalar::monomial(Gauss::one(), ParamMono::var(k).pow(*e)),
                };
                acc = acc.mul(&factor);
            }
            out.add_assign(&acc);
        }
        Ok(out)
    }

    /// Numeric value given real parameter values.
    pub fn eval(&self, values: &BTreeMap<String, f64>) -> Option<num_complex::Complex64> {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_c64();
            for (k, e) in &m.0 {
                v *= values.get(k)?.powi(*e);
            }
            acc += v;
        }
        Some(acc)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    c.render()
                } else if c.is_one() {
                    m.render()
                } else if *c == Gauss::int(-1) {
                    format!("-{}", m.render())
                } else {
                    format!("{}*{}", c.render(), m.render())
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Rendering safe to juxtapose with `*`.
    pub fn render_factor(&self) -> String {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() || c.is_real() && (c.is_one() || *c == Gauss::int(-1)) {
                return self.render();
            }
        }
        format!("({})", self.render())
    }

    /// Rational real coefficient if this is a constant real number.
    pub fn as_rational(&self) -> Option<Q> {
        let c = self.as_constant()?;
        c.is_real().then_some(c.re)
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<Gauss> for ParamScalar {
    fn from(c: Gauss) -> Self {
        ParamScalar::constant(c)
    }
}

/// `name` rendered with a rational coefficient, used by exponent printing.
pub(crate) fn render_weighted(name: &str, w: &Q) -> String {
    use num_traits::One;
    if w.is_one() {
        name.to_string()
    } else if *w == -Q::one() {
        format!("-{}", name)
    } else {
        format!("{}*{}", fmt_q(w), name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_arithmetic() {
        let th = ParamScalar::param("theta");
        let inv = th.inv().unwrap();
        assert!(th.mul(&inv).is_one());
        let s = th.add(&ParamScalar::int(2));
        assert!(s.inv().is_none());
        assert!(s.sub(&s).is_zero());
    }

    #[test]
    fn substitution_of_mass() {
        let m2 = ParamScalar::param("M2").scale(&Gauss::ratio(-1, 2));
        let mut b = BTreeMap::new();
        b.insert("M2".to_string(), ParamScalar::param("M1").neg());
        let out = m2.substitute(&b).unwrap();
        assert_eq!(out, ParamScalar::param("M1").scale(&Gauss::ratio(1, 2)));
    }

    #[test]
    fn negative_power_needs_monomial_binding() {
        let s = ParamScalar::param("theta").inv().unwrap();
        let mut b = BTreeMap::new();
        b.insert("theta".to_string(), ParamScalar::param("a").add(&ParamScalar::one()));
        assert!(s.substitute(&b).is_err());
    }
}
