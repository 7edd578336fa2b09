use std::collections::BTreeMap;

use super::form::ClosedForm;
use super::parse::parse_in;
use super::SymError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Sign {
    Positive,
    Negative,
    #[default]
    Unrestricted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoordKind {
    Base,
    /// Polynomial in base coordinates; partials are derived from the expansion.
    Composite {
        expansion: ClosedForm,
        partials: BTreeMap<String, ClosedForm>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinate {
    pub name: String,
    pub kind: CoordKind,
    pub sign: Sign,
}

impl Coordinate {
    pub fn is_base(&self) -> bool {
        matches!(self.kind, CoordKind::Base)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoordSystem {
    coords: BTreeMap<String, Coordinate>,
}

impl CoordSystem {
    pub fn new() -> Self {
        CoordSystem::default()
    }

    pub fn with_base(names: &[&str]) -> Self {
        let mut s = CoordSystem::new();
        for n in names {
            s.add_base(n);
        }
        s
    }

    pub fn add_base(&mut self, name: &str) {
        self.coords.insert(
            name.to_string(),
            Coordinate {
                name: name.to_string(),
                kind: CoordKind::Base,
                sign: Sign::Unrestricted,
            },
        );
    }

    /// Register a composite coordinate given by a polynomial in base coordinates.
    pub fn add_composite(&mut self, name: &str, expansion: ClosedForm) -> Result<(), SymError> {
        let bad = |reason: &str| SymError::InvalidComposite {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        if self.coords.contains_key(name) {
            return Err(bad("name already declared"));
        }
        let mut flat = ClosedForm::zero();
        for (f, c) in expansion.terms() {
            if !f.logs.is_empty() || f.kernel.is_some() {
                return Err(bad("expansion must be free of logarithms and kernels"));
            }
            let mut t = ClosedForm::scalar(c.clone());
            for (a, e) in &f.powers {
                let n = match e.as_rational().and_then(super::rational::q_as_i64) {
                    Some(n) if n >= 0 => n as u32,
                    _ => return Err(bad("expansion must be a polynomial")),
                };
                let inner = self
                    .expansion(a)
                    .ok_or_else(|| bad(&format!("`{}` is not a declared coordinate", a)))?;
                t = t.mul(&inner.pow(n));
            }
            flat.add_assign(&t);
        }
        let expansion = flat;
        if expansion.coords().is_empty() {
            return Err(bad("expansion is constant"));
        }
        let mut partials = BTreeMap::new();
        for b in self.base_names() {
            let d = expansion.differentiate(&b, self)?;
            if !d.is_zero() {
                partials.insert(b, d);
            }
        }
        self.coords.insert(
            name.to_string(),
            Coordinate {
                name: name.to_string(),
                kind: CoordKind::Composite { expansion, partials },
                sign: Sign::Unrestricted,
            },
        );
        Ok(())
    }

    pub fn add_composite_text(&mut self, name: &str, text: &str) -> Result<(), SymError> {
        let e = parse_in(text, self)?;
        self.add_composite(name, e)
    }

    pub fn set_sign(&mut self, name: &str, sign: Sign) -> Result<(), SymError> {
        let c = self
            .coords
            .get_mut(name)
            .ok_or_else(|| SymError::UnknownName { name: name.to_string() })?;
        c.sign = sign;
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Coordinate> {
        self.coords.get(name)
    }

    pub fn is_coord(&self, name: &str) -> bool {
        self.coords.contains_key(name)
    }

    pub fn is_base(&self, name: &str) -> bool {
        self.coords.get(name).map(|c| c.is_base()).unwrap_or(false)
    }

    pub fn base_names(&self) -> Vec<String> {
        self.coords.values().filter(|c| c.is_base()).map(|c| c.name.clone()).collect()
    }

    pub fn composite_names(&self) -> Vec<String> {
        self.coords.values().filter(|c| !c.is_base()).map(|c| c.name.clone()).collect()
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.coords.keys()
    }

    /// The base-coordinate polynomial a coordinate stands for.
    pub fn expansion(&self, name: &str) -> Option<ClosedForm> {
        match &self.coords.get(name)?.kind {
            CoordKind::Base => Some(ClosedForm::coord(name)),
            CoordKind::Composite { expansion, .. } => Some(expansion.clone()),
        }
    }

    /// `d coord / d base`.
    pub fn partial(&self, coord: &str, base: &str) -> Result<ClosedForm, SymError> {
        let c = self
            .coords
            .get(coord)
            .ok_or_else(|| SymError::UnknownName { name: coord.to_string() })?;
        Ok(match &c.kind {
            CoordKind::Base if coord == base => ClosedForm::one(),
            CoordKind::Base => ClosedForm::zero(),
            CoordKind::Composite { partials, .. } => partials.get(base).cloned().unwrap_or_default(),
        })
    }

    /// A declared coordinate equal to `-name`, if any.
    pub fn negation_of(&self, name: &str) -> Option<String> {
        let target = self.expansion(name)?.neg();
        self.coords
            .keys()
            .find(|k| k.as_str() != name && self.expansion(k).as_ref() == Some(&target))
            .cloned()
    }
}

/// Sign assumptions used to rewrite `|c|` and `sign(c)` before verification.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BranchContext {
    signs: BTreeMap<String, Sign>,
}

impl BranchContext {
    pub fn new() -> Self {
        BranchContext::default()
    }

    pub fn with(coord: &str, sign: Sign) -> Self {
        let mut b = BranchContext::new();
        b.set(coord, sign);
        b
    }

    pub fn set(&mut self, coord: &str, sign: Sign) {
        if sign == Sign::Unrestricted {
            self.signs.remove(coord);
        } else {
            self.signs.insert(coord.to_string(), sign);
        }
    }

    pub fn sign(&self, coord: &str) -> Sign {
        self.signs.get(coord).copied().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &Sign)> {
        self.signs.iter()
    }

    /// `sign(coord)` as +1 or -1.
    pub fn signum(&self, coord: &str) -> Result<i64, SymError> {
        match self.sign(coord) {
            Sign::Positive => Ok(1),
            Sign::Negative => Ok(-1),
            Sign::Unrestricted => Err(SymError::BranchRequired { coord: coord.to_string() }),
        }
    }

    /// The coordinate that equals `|coord|` on this branch.
    pub fn abs_atom(&self, coord: &str, sys: &CoordSystem) -> Result<String, SymError> {
        match self.sign(coord) {
            Sign::Positive => Ok(coord.to_string()),
            Sign::Negative => sys.negation_of(coord).ok_or_else(|| SymError::InvalidComposite {
                name: coord.to_string(),
                reason: "no negated coordinate declared for the negative branch".into(),
            }),
            Sign::Unrestricted => Err(SymError::BranchRequired { coord: coord.to_string() }),
        }
    }

    /// `|coord|` as a closed form.
    pub fn abs(&self, coord: &str, sys: &CoordSystem) -> Result<ClosedForm, SymError> {
        Ok(ClosedForm::coord(&self.abs_atom(coord, sys)?))
    }

    pub fn describe(&self) -> String {
        if self.signs.is_empty() {
            return "unrestricted".into();
        }
        self.signs
            .iter()
            .map(|(c, s)| match s {
                Sign::Positive => format!("{}>0", c),
                Sign::Negative => format!("{}<0", c),
                Sign::Unrestricted => String::new(),
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_body() -> CoordSystem {
        let mut s = CoordSystem::with_base(&["zeta1", "t1", "r1", "zeta2", "t2", "r2"]);
        s.add_composite_text("t", "t1 - t2").unwrap();
        s.add_composite_text("tn", "t2 - t1").unwrap();
        s
    }

    #[test]
    fn partials_come_from_expansion() {
        let s = two_body();
        assert_eq!(s.partial("t", "t1").unwrap(), ClosedForm::one());
        assert_eq!(s.partial("t", "t2").unwrap(), ClosedForm::one().neg());
        assert!(s.partial("t", "r1").unwrap().is_zero());
    }

    #[test]
    fn negative_branch_uses_negation() {
        let s = two_body();
        let b = BranchContext::with("t", Sign::Negative);
        assert_eq!(b.abs_atom("t", &s).unwrap(), "tn");
        assert_eq!(b.signum("t").unwrap(), -1);
        assert!(matches!(
            BranchContext::new().abs_atom("t", &s),
            Err(SymError::BranchRequired { .. })
        ));
    }

    #[test]
    fn composite_rejects_non_polynomial() {
        let mut s = two_body();
        assert!(s.add_composite_text("w", "t1^(-1)").is_err());
        assert!(s.add_composite_text("w", "t1 + ln(t2)").is_err());
        s.add_composite_text("w", "t^2 + r1").unwrap();
        assert_eq!(s.partial("w", "t2").unwrap().to_string(), "-2*t1 + 2*t2");
    }
}
