use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::symcore::{ClosedForm, CoordSystem, Gauss, ParamScalar, SymError, Q};

pub type Mono = BTreeMap<String, Q>;
pub type Derivs = BTreeMap<String, u32>;

/// 2x2 matrix over parameter scalars. Non-logarithmic operators carry `c * I`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub m: [[ParamScalar; 2]; 2],
}

impl Mat2 {
    pub fn zero() -> Self {
        Mat2::default()
    }

    pub fn identity() -> Self {
        Mat2::scalar(ParamScalar::one())
    }

    pub fn scalar(s: ParamScalar) -> Self {
        Mat2 {
            m: [[s.clone(), ParamScalar::zero()], [ParamScalar::zero(), s]],
        }
    }

    pub fn new(a: ParamScalar, b: ParamScalar, c: ParamScalar, d: ParamScalar) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    /// Jordan-type block `[[a, b], [0, a]]`.
    pub fn jordan(a: ParamScalar, b: ParamScalar) -> Self {
        Mat2::new(a.clone(), b, ParamScalar::zero(), a)
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(|e| e.is_zero())
    }

    pub fn as_scalar(&self) -> Option<&ParamScalar> {
        (self.m[0][1].is_zero() && self.m[1][0].is_zero() && self.m[0][0] == self.m[1][1]).then_some(&self.m[0][0])
    }

    fn zip(&self, o: &Mat2, f: impl Fn(&ParamScalar, &ParamScalar) -> ParamScalar) -> Mat2 {
        let g = |i: usize, j: usize| f(&self.m[i][j], &o.m[i][j]);
        Mat2::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    fn map(&self, f: impl Fn(&ParamScalar) -> ParamScalar) -> Mat2 {
        Mat2::new(f(&self.m[0][0]), f(&self.m[0][1]), f(&self.m[1][0]), f(&self.m[1][1]))
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Mat2 {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, k: &ParamScalar) -> Mat2 {
        self.map(|a| a.mul(k))
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| self.m[i][0].mul(&o.m[0][j]).add(&self.m[i][1].mul(&o.m[1][j]));
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn substitute(&self, b: &BTreeMap<String, ParamScalar>) -> Result<Mat2, SymError> {
        let s = |a: &ParamScalar| a.substitute(b);
        Ok(Mat2::new(s(&self.m[0][0])?, s(&self.m[0][1])?, s(&self.m[1][0])?, s(&self.m[1][1])?))
    }

    pub fn rename(&self, params: &BTreeMap<String, String>) -> Mat2 {
        self.map(|a| a.rename(params))
    }

    pub fn render(&self) -> String {
        match self.as_scalar() {
            Some(s) => s.render_factor(),
            None => format!(
                "[[{}, {}], [{}, {}]]",
                self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
            ),
        }
    }
}

/// Finite sum of `matrix * monomial * derivative` terms, derivatives to the right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffOp {
    terms: BTreeMap<(Mono, Derivs), Mat2>,
}

fn falling(e: &Q, k: u32) -> Q {
    let mut acc = Q::one();
    for j in 0..k {
        acc *= e - Q::from_integer(j.into());
    }
    acc
}

fn binom(n: u32, k: u32) -> Q {
    let mut acc = Q::one();
    for j in 0..k {
        acc = acc * Q::from_integer((n - j).into()) / Q::from_integer((j + 1).into());
    }
    acc
}

/// All multi-indices `g <= a`.
fn sub_indices(a: &Derivs) -> Vec<Derivs> {
    let mut out = vec![Derivs::new()];
    for (c, n) in a {
        let mut next = Vec::new();
        for g in &out {
            for k in 0..=*n {
                let mut h = g.clone();
                if k > 0 {
                    h.insert(c.clone(), k);
                }
                next.push(h);
            }
        }
        out = next;
    }
    out
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp::default()
    }

    pub fn identity() -> Self {
        DiffOp::matrix(Mat2::identity())
    }

    pub fn scalar(s: ParamScalar) -> Self {
        DiffOp::matrix(Mat2::scalar(s))
    }

    pub fn matrix(m: Mat2) -> Self {
        DiffOp::term(m, Mono::new(), Derivs::new())
    }

    pub fn term(m: Mat2, mono: Mono, derivs: Derivs) -> Self {
        let mut op = DiffOp::zero();
        op.insert(mono, derivs, m);
        op
    }

    /// `c * prod x^e * prod d_y`, with derivative names repeated for higher order.
    pub fn mono(c: ParamScalar, mono: &[(&str, Q)], derivs: &[&str]) -> Self {
        let mut m = Mono::new();
        for (k, e) in mono {
            let slot = m.entry(k.to_string()).or_insert_with(Q::zero);
            *slot += e;
        }
        m.retain(|_, e| !e.is_zero());
        let mut d = Derivs::new();
        for k in derivs {
            *d.entry(k.to_string()).or_insert(0) += 1;
        }
        DiffOp::term(Mat2::scalar(c), m, d)
    }

    pub fn deriv(coord: &str) -> Self {
        DiffOp::mono(ParamScalar::one(), &[], &[coord])
    }

    pub fn coord(coord: &str) -> Self {
        DiffOp::mono(ParamScalar::one(), &[(coord, Q::one())], &[])
    }

    fn insert(&mut self, mono: Mono, derivs: Derivs, m: Mat2) {
        if m.is_zero() {
            return;
        }
        let key = (mono, derivs);
        match self.terms.get_mut(&key) {
            Some(slot) => {
                *slot = slot.add(&m);
                if slot.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, m);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Mono, Derivs), &Mat2)> {
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

    pub fn coefficient(&self, mono: &Mono, derivs: &Derivs) -> Option<&Mat2> {
        self.terms.get(&(mono.clone(), derivs.clone()))
    }

    /// True when every matrix is a multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.terms.values().all(|m| m.as_scalar().is_some())
    }

    pub fn add(&self, o: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for ((mo, d), m) in &o.terms {
            out.insert(mo.clone(), d.clone(), m.clone());
        }
        out
    }

    pub fn sub(&self, o: &DiffOp) -> DiffOp {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            terms: self.terms.iter().map(|(k, m)| (k.clone(), m.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &ParamScalar) -> DiffOp {
        let mut out = DiffOp::zero();
        for ((mo, d), m) in &self.terms {
            out.insert(mo.clone(), d.clone(), m.scale(k));
        }
        out
    }

    pub fn scale_int(&self, k: i64) -> DiffOp {
        self.scale(&ParamScalar::int(k))
    }

    /// Normal-ordered product `self * o`.
    pub fn compose(&self, o: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero();
        for ((ma, da), ca) in &self.terms {
            for ((mb, db), cb) in &o.terms {
                let mat = ca.mul(cb);
                if mat.is_zero() {
                    continue;
                }
                for g in sub_indices(da) {
                    let mut factor = Q::one();
                    let mut mono = ma.clone();
                    for (c, e) in mb {
                        *mono.entry(c.clone()).or_insert_with(Q::zero) += e;
                    }
                    for (c, k) in &g {
                        let e = mb.get(c).cloned().unwrap_or_else(Q::zero);
                        factor *= binom(da[c], *k) * falling(&e, *k);
                        *mono.entry(c.clone()).or_insert_with(Q::zero) -= Q::from_integer((*k).into());
                    }
                    if factor.is_zero() {
                        continue;
                    }
                    mono.retain(|_, e| !e.is_zero());
                    let mut derivs = db.clone();
                    for (c, n) in da {
                        let k = g.get(c).copied().unwrap_or(0);
                        if n > &k {
                            *derivs.entry(c.clone()).or_insert(0) += n - k;
                        }
                    }
                    out.insert(mono, derivs, mat.scale(&ParamScalar::rational(factor)));
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &DiffOp) -> DiffOp {
        self.compose(o).sub(&o.compose(self))
    }

    pub fn substitute_params(&self, b: &BTreeMap<String, ParamScalar>) -> Result<DiffOp, SymError> {
        let mut out = DiffOp::zero();
        for ((mo, d), m) in &self.terms {
            out.insert(mo.clone(), d.clone(), m.substitute(b)?);
        }
        Ok(out)
    }

    pub fn rename(&self, coords: &BTreeMap<String, String>, params: &BTreeMap<String, String>) -> DiffOp {
        let rn = |k: &String| coords.get(k).cloned().unwrap_or_else(|| k.clone());
        let mut out = DiffOp::zero();
        for ((mo, d), m) in &self.terms {
            let mo: Mono = mo.iter().map(|(k, e)| (rn(k), e.clone())).collect();
            let d: Derivs = d.iter().map(|(k, n)| (rn(k), *n)).collect();
            out.insert(mo, d, m.rename(params));
        }
        out
    }

    pub fn coords(&self) -> std::collections::BTreeSet<String> {
        let mut s = std::collections::BTreeSet::new();
        for (mo, d) in self.terms.keys() {
            s.extend(mo.keys().cloned());
            s.extend(d.keys().cloned());
        }
        s
    }

    /// Keep only terms for which `keep` holds; used to build corrupted generators.
    pub fn filter(&self, keep: impl Fn(&Mono, &Derivs, &Mat2) -> bool) -> DiffOp {
        DiffOp {
            terms: self
                .terms
                .iter()
                .filter(|((mo, d), m)| keep(mo, d, m))
                .map(|(k, m)| (k.clone(), m.clone()))
                .collect(),
        }
    }

    /// Terms with the given derivative multi-index, as a multiplication operator.
    pub fn at_derivs(&self, d: &Derivs) -> DiffOp {
        let mut out = DiffOp::zero();
        for ((mo, dd), m) in &self.terms {
            if dd == d {
                out.insert(mo.clone(), Derivs::new(), m.clone());
            }
        }
        out
    }

    /// Action of matrix entry `(a, b)` on a scalar closed form.
    pub fn apply_entry(&self, a: usize, b: usize, f: &ClosedForm, sys: &CoordSystem) -> Result<ClosedForm, SymError> {
        let mut out = ClosedForm::zero();
        if f.is_zero() {
            return Ok(out);
        }
        let mut cache: BTreeMap<&Derivs, ClosedForm> = BTreeMap::new();
        for ((mo, d), m) in &self.terms {
            let c = &m.m[a][b];
            if c.is_zero() {
                continue;
            }
            if !cache.contains_key(d) {
                cache.insert(d, f.differentiate_multi(d, sys)?);
            }
            let mut piece = cache[d].scale(c);
            for (k, e) in mo {
                piece = piece.mul(&ClosedForm::power_q(k, e.clone()));
            }
            out.add_assign(&piece);
        }
        Ok(out)
    }

    /// Action of a scalar operator on a closed form.
    pub fn apply(&self, f: &ClosedForm, sys: &CoordSystem) -> Result<ClosedForm, SymError> {
        if !self.is_scalar() {
            return Err(SymError::Unsupported("matrix-valued operator applied to a scalar form".into()));
        }
        self.apply_entry(0, 0, f, sys)
    }
}

fn render_mono(mo: &Mono, d: &Derivs) -> Vec<String> {
    let mut parts = Vec::new();
    for (k, e) in mo {
        if e.is_one() {
            parts.push(k.clone());
        } else {
            parts.push(format!("{}^({})", k, crate::symcore::rational::fmt_q(e)));
        }
    }
    for (k, n) in d {
        if *n == 1 {
            parts.push(format!("d_{}", k));
        } else {
            parts.push(format!("d_{}^{}", k, n));
        }
    }
    parts
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((mo, d), m) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let parts = render_mono(mo, d);
            let coeff = m.render();
            if parts.is_empty() {
                f.write_str(&coeff)?;
            } else if m.as_scalar().map(|s| s.is_one()).unwrap_or(false) {
                f.write_str(&parts.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, parts.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `i` as a parameter scalar.
pub fn imag() -> ParamScalar {
    ParamScalar::constant(Gauss::i())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::q;

    #[test]
    fn leibniz_on_coordinate() {
        let lhs = DiffOp::deriv("t").compose(&DiffOp::coord("t"));
        let rhs = DiffOp::mono(ParamScalar::one(), &[("t", q(1, 1))], &["t"]).add(&DiffOp::identity());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mass_generator_squares() {
        let m0 = DiffOp::deriv("zeta").scale(&imag());
        let sq = m0.compose(&m0);
        assert_eq!(sq, DiffOp::mono(ParamScalar::int(-1), &[], &["zeta", "zeta"]));
    }

    #[test]
    fn identity_is_neutral() {
        let a = DiffOp::mono(ParamScalar::param("x"), &[("t", q(1, 2))], &["r", "t"]);
        assert_eq!(DiffOp::identity().compose(&a), a);
        assert_eq!(a.compose(&DiffOp::identity()), a);
    }

    #[test]
    fn matrix_order_matters() {
        let a = DiffOp::matrix(Mat2::jordan(ParamScalar::zero(), ParamScalar::one()));
        let b = DiffOp::matrix(Mat2::new(
            ParamScalar::zero(),
            ParamScalar::zero(),
            ParamScalar::one(),
            ParamScalar::zero(),
        ));
        let c = a.commutator(&b);
        let diag = Mat2::new(ParamScalar::one(), ParamScalar::zero(), ParamScalar::zero(), ParamScalar::int(-1));
        assert_eq!(c, DiffOp::matrix(diag));
    }

    #[test]
    fn half_integer_powers() {
        let a = DiffOp::deriv("t");
        let b = DiffOp::mono(ParamScalar::one(), &[("t", q(1, 2))], &[]);
        let c = a.commutator(&b);
        assert_eq!(c, DiffOp::mono(ParamScalar::ratio(1, 2), &[("t", q(-1, 2))], &[]));
    }
}
