use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::symcore::rational::fmt_q;
use crate::symcore::{ParamScalar, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    X,
    Y,
    M,
    R,
    V,
    N,
    D,
    S,
    H,
    Theta,
    /// Abstract central element of a table with no operator image.
    Central(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorLabel {
    pub family: Family,
    pub index: Option<Q>,
    pub spatial: Vec<u32>,
}

impl GeneratorLabel {
    pub fn new(family: Family, index: Option<Q>, spatial: Vec<u32>) -> Self {
        GeneratorLabel { family, index, spatial }
    }

    pub fn x(n: Q) -> Self {
        GeneratorLabel::new(Family::X, Some(n), vec![])
    }

    pub fn y(m: Q, j: Option<u32>) -> Self {
        GeneratorLabel::new(Family::Y, Some(m), j.into_iter().collect())
    }

    pub fn m(n: Q) -> Self {
        GeneratorLabel::new(Family::M, Some(n), vec![])
    }

    /// Rotation label, normalised to `j < k`; the bool reports a sign flip.
    pub fn r(n: Q, j: u32, k: u32) -> (Self, bool) {
        if j < k {
            (GeneratorLabel::new(Family::R, Some(n), vec![j, k]), false)
        } else {
            (GeneratorLabel::new(Family::R, Some(n), vec![k, j]), true)
        }
    }

    pub fn plain(family: Family) -> Self {
        GeneratorLabel::new(family, None, vec![])
    }

    pub fn central(name: &str) -> Self {
        GeneratorLabel::plain(Family::Central(name.to_string()))
    }

    pub fn is_central(&self) -> bool {
        matches!(self.family, Family::Central(_) | Family::Theta)
    }

    pub fn idx(&self) -> Q {
        self.index.clone().unwrap_or_else(Q::zero)
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match &self.family {
            Family::X => "X",
            Family::Y => "Y",
            Family::M => "M",
            Family::R => "R",
            Family::V => "V",
            Family::N => "N",
            Family::D => "D",
            Family::S => "S",
            Family::H => "h",
            Family::Theta => "Theta",
            Family::Central(n) => n.as_str(),
        };
        f.write_str(head)?;
        if self.family == Family::H {
            let s: Vec<String> = self.spatial.iter().map(|j| j.to_string()).collect();
            return f.write_str(&s.join(""));
        }
        if let Some(i) = &self.index {
            f.write_str(&fmt_q(i))?;
        }
        if !self.spatial.is_empty() {
            let s: Vec<String> = self.spatial.iter().map(|j| j.to_string()).collect();
            write!(f, "^{}", s.join(""))?;
        }
        Ok(())
    }
}

impl Serialize for GeneratorLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for GeneratorLabel {
    type Err = String;

    /// `X1`, `X-1`, `Y-1/2`, `Y1/2^2`, `R0^12`, `M0`, `V`, `N`, `D`, `Theta`, `h1`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (body, spatial) = match s.split_once('^') {
            Some((b, sp)) => {
                let digits: Result<Vec<u32>, _> = sp.chars().map(|c| c.to_digit(10).ok_or(())).collect();
                (b, digits.map_err(|_| format!("bad spatial index in `{}`", s))?)
            }
            None => (s, vec![]),
        };
        if body == "Theta" {
            return Ok(GeneratorLabel::plain(Family::Theta));
        }
        let mut chars = body.chars();
        let head = chars.next().ok_or("empty label")?;
        let rest: String = chars.collect();
        let family = match head {
            'X' => Family::X,
            'Y' => Family::Y,
            'M' => Family::M,
            'R' => Family::R,
            'V' => Family::V,
            'N' => Family::N,
            'D' => Family::D,
            'S' => Family::S,
            'h' => Family::H,
            _ => return Err(format!("unknown generator family in `{}`", s)),
        };
        let index = if rest.is_empty() || rest == "+" {
            None
        } else {
            let v = match rest.split_once('/') {
                Some((n, d)) => {
                    let n: i64 = n.parse().map_err(|_| format!("bad index in `{}`", s))?;
                    let d: i64 = d.parse().map_err(|_| format!("bad index in `{}`", s))?;
                    if d == 0 {
                        return Err(format!("bad index in `{}`", s));
                    }
                    crate::symcore::q(n, d)
                }
                None => crate::symcore::qi(rest.parse().map_err(|_| format!("bad index in `{}`", s))?),
            };
            Some(v)
        };
        if family == Family::H {
            let j = index.as_ref().and_then(crate::symcore::rational::q_as_i64).ok_or("h needs 1 or 2")?;
            return Ok(GeneratorLabel::new(Family::H, None, vec![j as u32]));
        }
        Ok(GeneratorLabel { family, index, spatial })
    }
}

/// Linear combination of labels with parameter coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinComb {
    terms: BTreeMap<GeneratorLabel, ParamScalar>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn single(l: GeneratorLabel, c: ParamScalar) -> Self {
        let mut out = LinComb::zero();
        out.add_term(l, c);
        out
    }

    pub fn of(l: GeneratorLabel) -> Self {
        LinComb::single(l, ParamScalar::one())
    }

    pub fn add_term(&mut self, l: GeneratorLabel, c: ParamScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(l.clone()).or_default();
        slot.add_assign(&c);
        if slot.is_zero() {
            self.terms.remove(&l);
        }
    }

    pub fn add(&self, o: &LinComb) -> LinComb {
        let mut out = self.clone();
        for (l, c) in &o.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &ParamScalar) -> LinComb {
        let mut out = LinComb::zero();
        for (l, c) in &self.terms {
            out.add_term(l.clone(), c.mul(k));
        }
        out
    }

    pub fn neg(&self) -> LinComb {
        self.scale(&ParamScalar::int(-1))
    }

    pub fn sub(&self, o: &LinComb) -> LinComb {
        self.add(&o.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GeneratorLabel, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(l, c)| if c.is_one() { l.to_string() } else { format!("{}*{}", c.render_factor(), l) })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::q;

    #[test]
    fn labels_round_trip_through_text() {
        for s in ["X-1", "Y1/2", "Y-1/2^2", "R0^12", "M0", "V", "N", "Theta", "h2"] {
            let l: GeneratorLabel = s.parse().unwrap();
            assert_eq!(l.to_string(), s);
        }
        assert_eq!("Y-1/2".parse::<GeneratorLabel>().unwrap(), GeneratorLabel::y(q(-1, 2), None));
    }

    #[test]
    fn lincomb_cancels() {
        let a = LinComb::of(GeneratorLabel::x(q(0, 1)));
        assert!(a.sub(&a).is_zero());
    }
}
