use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::rational::{fmt_q, Gauss, Q};
use super::scalar::{render_weighted, ParamMono, ParamScalar};
use super::SymError;

/// Affine exponent `c + sum_k w_k p_k` with exact rational weights.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentExpr {
    constant: Q,
    linear: BTreeMap<String, Q>,
}

impl ExponentExpr {
    pub fn zero() -> Self {
        ExponentExpr::default()
    }

    pub fn rational(c: Q) -> Self {
        ExponentExpr {
            constant: c,
            linear: BTreeMap::new(),
        }
    }

    pub fn int(n: i64) -> Self {
        ExponentExpr::rational(Q::from_integer(n.into()))
    }

    pub fn param(name: &str) -> Self {
        let mut linear = BTreeMap::new();
        linear.insert(name.to_string(), Q::one());
        ExponentExpr {
            constant: Q::zero(),
            linear,
        }
    }

    pub fn constant(&self) -> &Q {
        &self.constant
    }

    pub fn linear(&self) -> &BTreeMap<String, Q> {
        &self.linear
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_empty()
    }

    pub fn as_rational(&self) -> Option<&Q> {
        self.linear.is_empty().then_some(&self.constant)
    }

    pub fn add(&self, o: &ExponentExpr) -> ExponentExpr {
        let mut linear = self.linear.clone();
        for (k, w) in &o.linear {
            let slot = linear.entry(k.clone()).or_insert_with(Q::zero);
            *slot += w;
            if slot.is_zero() {
                linear.remove(k);
            }
        }
        ExponentExpr {
            constant: &self.constant + &o.constant,
            linear,
        }
    }

    pub fn add_q(&self, c: &Q) -> ExponentExpr {
        ExponentExpr {
            constant: &self.constant + c,
            linear: self.linear.clone(),
        }
    }

    pub fn neg(&self) -> ExponentExpr {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, o: &ExponentExpr) -> ExponentExpr {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Q) -> ExponentExpr {
        if k.is_zero() {
            return ExponentExpr::zero();
        }
        ExponentExpr {
            constant: &self.constant * k,
            linear: self.linear.iter().map(|(n, w)| (n.clone(), w * k)).collect(),
        }
    }

    /// The exponent as a scalar coefficient (what `d/dt t^e` brings down).
    pub fn to_scalar(&self) -> ParamScalar {
        let mut s = ParamScalar::rational(self.constant.clone());
        for (k, w) in &self.linear {
            s.add_assign(&ParamScalar::monomial(Gauss::real(w.clone()), ParamMono::var(k)));
        }
        s
    }

    /// Inverse of [`to_scalar`](Self::to_scalar): accepts only affine real scalars.
    pub fn from_scalar(s: &ParamScalar) -> Option<ExponentExpr> {
        let mut out = ExponentExpr::zero();
        for (m, c) in s.terms() {
            if !c.is_real() {
                return None;
            }
            if m.is_one() {
                out.constant += &c.re;
            } else if m.0.len() == 1 && *m.0.values().next().unwrap() == 1 {
                let name = m.0.keys().next().unwrap();
                out = out.add(&ExponentExpr::param(name).scale(&c.re));
            } else {
                return None;
            }
        }
        Some(out)
    }

    /// Split into (symbolic part with constant in `[0, 1)`, integer shift).
    pub fn split_integer(&self) -> (ExponentExpr, i64) {
        let fl = self.constant.floor();
        let shift: i64 = fl
            .to_integer()
            .try_into()
            .expect("exponent integer part out of range");
        let frac = &self.constant - &fl;
        (
            ExponentExpr {
                constant: frac,
                linear: self.linear.clone(),
            },
            shift,
        )
    }

    pub fn is_integer(&self) -> bool {
        self.linear.is_empty() && self.constant.is_integer()
    }

    pub fn params(&self) -> impl Iterator<Item = &String> {
        self.linear.keys()
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> ExponentExpr {
        let mut out = ExponentExpr::rational(self.constant.clone());
        for (k, w) in &self.linear {
            let name = map.get(k).cloned().unwrap_or_else(|| k.clone());
            out = out.add(&ExponentExpr::param(&name).scale(w));
        }
        out
    }

    /// Substitute affine bindings; anything else cannot live in an exponent.
    pub fn substitute(&self, bindings: &BTreeMap<String, ParamScalar>) -> Result<ExponentExpr, SymError> {
        let mut out = ExponentExpr::rational(self.constant.clone());
        for (k, w) in &self.linear {
            let term = match bindings.get(k) {
                Some(b) => ExponentExpr::from_scalar(b).ok_or_else(|| SymError::UnsupportedSubstitution {
                    name: k.clone(),
                    reason: format!("binding `{}` is not affine with real rational weights", b),
                })?,
                None => ExponentExpr::param(k),
            };
            out = out.add(&term.scale(w));
        }
        Ok(out)
    }

    pub fn eval(&self, values: &BTreeMap<String, f64>) -> Option<f64> {
        let mut v = super::rational::q_to_f64(&self.constant);
        for (k, w) in &self.linear {
            v += super::rational::q_to_f64(w) * values.get(k)?;
        }
        Some(v)
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (k, w) in &self.linear {
            parts.push(render_weighted(k, w));
        }
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(fmt_q(&self.constant));
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    s.push_str(" - ");
                    s.push_str(rest);
                }
                None => {
                    s.push_str(" + ");
                    s.push_str(p);
                }
            }
        }
        s
    }
}

impl fmt::Display for ExponentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::rational::q;

    #[test]
    fn half_integers_are_exact() {
        let e = ExponentExpr::rational(q(1, 2)).add(&ExponentExpr::rational(q(-1, 2)));
        assert!(e.is_zero());
    }

    #[test]
    fn split_keeps_fraction_in_unit_interval() {
        let e = ExponentExpr::param("x").neg().add_q(&q(-3, 2));
        let (frac, shift) = e.split_integer();
        assert_eq!(shift, -2);
        assert_eq!(frac.constant(), &q(1, 2));
    }

    #[test]
    fn affine_substitution() {
        // -(x1 + x2)/2 with x2 -> x1 gives -x1
        let e = ExponentExpr::param("x1").add(&ExponentExpr::param("x2")).scale(&q(-1, 2));
        let mut b = BTreeMap::new();
        b.insert("x2".into(), ParamScalar::param("x1"));
        assert_eq!(e.substitute(&b).unwrap(), ExponentExpr::param("x1").neg());
        b.insert("x1".into(), ParamScalar::param("a").mul(&ParamScalar::param("b")));
        assert!(e.substitute(&b).is_err());
    }
}
