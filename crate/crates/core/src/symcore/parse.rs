//! Recursive-descent parser for the closed-form grammar.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | name | name '(' expr ')' | '(' expr ')'
//! ```
//!
//! Names declared in the coordinate system are coordinates, `i` is the
//! imaginary unit, everything else is a parameter. `abs(c)` and `sgn(c)`
//! resolve through a [`BranchContext`].

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use super::coords::{BranchContext, CoordSystem};
use super::exponent::ExponentExpr;
use super::form::{ClosedForm, Factors};
use super::rational::{q_as_i64, Q};
use super::scalar::ParamScalar;
use super::SymError;

#[derive(Clone, Debug, Default)]
pub struct ParseOptions<'a> {
    /// When set, any other parameter name is rejected.
    pub known_params: Option<&'a BTreeSet<String>>,
    pub branch: Option<&'a BranchContext>,
}

pub fn parse_closed_form(text: &str, sys: &CoordSystem) -> Result<ClosedForm, SymError> {
    parse_with(text, sys, &ParseOptions::default())
}

pub(crate) fn parse_in(text: &str, sys: &CoordSystem) -> Result<ClosedForm, SymError> {
    parse_closed_form(text, sys)
}

pub fn parse_with(text: &str, sys: &CoordSystem, opts: &ParseOptions<'_>) -> Result<ClosedForm, SymError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        sys,
        opts,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos < p.tokens.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parse an affine exponent such as `-x-xi1-xi2` or `1/2`.
pub fn parse_exponent(text: &str) -> Result<ExponentExpr, SymError> {
    let e = parse_closed_form(text, &CoordSystem::new())?;
    let s = e.as_scalar().ok_or_else(|| SymError::Syntax {
        pos: 0,
        msg: "exponent must not contain coordinates".into(),
    })?;
    ExponentExpr::from_scalar(&s).ok_or_else(|| SymError::Syntax {
        pos: 0,
        msg: "exponent must be affine with real rational weights".into(),
    })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Name(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, SymError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && i + 1 < b.len() && (b[i + 1] as char).is_ascii_digit()) {
            let start = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            let mut num: BigInt = s[start..i].parse().unwrap_or_default();
            let mut den = BigInt::one();
            if i < b.len() && b[i] == b'.' {
                i += 1;
                let fs = i;
                while i < b.len() && (b[i] as char).is_ascii_digit() {
                    i += 1;
                }
                for ch in s[fs..i].chars() {
                    num = num * 10 + BigInt::from(ch.to_digit(10).unwrap());
                    den *= 10;
                }
            }
            out.push((start, Tok::Num(Q::new(num, den))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(SymError::Syntax {
                pos: i,
                msg: format!("unexpected character `{}`", c),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    sys: &'a CoordSystem,
    opts: &'a ParseOptions<'a>,
    end: usize,
}

impl<'a> Parser<'a> {
    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err(&self, msg: &str) -> SymError {
        SymError::Syntax {
            pos: self.here(),
            msg: msg.to_string(),
        }
    }

    fn peek_sym(&self, c: char) -> bool {
        matches!(self.tokens.get(self.pos), Some((_, Tok::Sym(x))) if *x == c)
    }

    fn expect(&mut self, c: char) -> Result<(), SymError> {
        if self.peek_sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c)))
        }
    }

    fn expr(&mut self) -> Result<ClosedForm, SymError> {
        let mut acc = self.term()?;
        loop {
            if self.peek_sym('+') {
                self.pos += 1;
                acc = acc.add(&self.term()?);
            } else if self.peek_sym('-') {
                self.pos += 1;
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ClosedForm, SymError> {
        let mut acc = self.unary()?;
        loop {
            if self.peek_sym('*') {
                self.pos += 1;
                acc = acc.mul(&self.unary()?);
            } else if self.peek_sym('/') {
                self.pos += 1;
                let at = self.here();
                let d = self.unary()?;
                let inv = invert(&d).ok_or(SymError::Syntax {
                    pos: at,
                    msg: "division only by a single nonzero log-free term".into(),
                })?;
                acc = acc.mul(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ClosedForm, SymError> {
        if self.peek_sym('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<ClosedForm, SymError> {
        let base = self.atom()?;
        if !self.peek_sym('^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.here();
        let ex = self.unary()?;
        raise(&base, &ex).map_err(|msg| SymError::Syntax { pos: at, msg })
    }

    fn atom(&mut self) -> Result<ClosedForm, SymError> {
        let Some((at, tok)) = self.tokens.get(self.pos).cloned() else {
            return Err(self.err("unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(ClosedForm::scalar(ParamScalar::rational(v))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym(c) => Err(SymError::Syntax {
                pos: at,
                msg: format!("unexpected `{}`", c),
            }),
            Tok::Name(name) => {
                if self.peek_sym('(') {
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return self.call(&name, arg, at);
                }
                if name == "i" {
                    return Ok(ClosedForm::scalar(ParamScalar::i()));
                }
                if self.sys.is_coord(&name) {
                    return Ok(ClosedForm::coord(&name));
                }
                if let Some(known) = self.opts.known_params {
                    if !known.contains(&name) {
                        return Err(SymError::UnknownName { name });
                    }
                }
                Ok(ClosedForm::param(&name))
            }
        }
    }

    fn call(&self, name: &str, arg: ClosedForm, at: usize) -> Result<ClosedForm, SymError> {
        match name {
            "exp" => ClosedForm::exp(arg),
            "ln" | "abs" | "sgn" => {
                let coord = single_coord(&arg).ok_or(SymError::Syntax {
                    pos: at,
                    msg: format!("{}() takes a single coordinate", name),
                })?;
                match name {
                    "ln" => Ok(ClosedForm::log(&coord, 1)),
                    _ => {
                        let branch = self
                            .opts
                            .branch
                            .ok_or_else(|| SymError::BranchRequired { coord: coord.clone() })?;
                        if name == "abs" {
                            branch.abs(&coord, self.sys)
                        } else {
                            Ok(ClosedForm::scalar(ParamScalar::int(branch.signum(&coord)?)))
                        }
                    }
                }
            }
            _ => Err(SymError::UnknownName { name: name.to_string() }),
        }
    }
}

fn single_coord(e: &ClosedForm) -> Option<String> {
    let (f, c) = e.as_single()?;
    if !c.is_one() || !f.logs.is_empty() || f.kernel.is_some() || f.powers.len() != 1 {
        return None;
    }
    let (name, ex) = f.powers.iter().next()?;
    (ex.as_rational()? == &Q::one()).then(|| name.clone())
}

/// Reciprocal of a single log-free term.
pub(crate) fn invert(e: &ClosedForm) -> Option<ClosedForm> {
    let (f, c) = e.as_single()?;
    if !f.logs.is_empty() {
        return None;
    }
    let inv = c.inv()?;
    let nf = Factors {
        powers: f.powers.iter().map(|(k, v)| (k.clone(), v.neg())).collect(),
        logs: Default::default(),
        kernel: f.kernel.as_ref().map(|k| Box::new(k.neg())),
    };
    Some(ClosedForm::term(inv, nf))
}

fn raise(base: &ClosedForm, ex: &ClosedForm) -> Result<ClosedForm, String> {
    let s = ex.as_scalar().ok_or("exponent must not contain coordinates")?;
    let e = ExponentExpr::from_scalar(&s).ok_or("exponent must be affine with real rational weights")?;
    if let Some(v) = e.as_rational() {
        if let Some(n) = q_as_i64(v) {
            if n >= 0 {
                return Ok(base.pow(n as u32));
            }
            let inv = invert(base).ok_or("negative power of a sum or of a logarithm")?;
            return Ok(inv.pow((-n) as u32));
        }
    }
    if base.is_zero() {
        return Err("symbolic power of zero".into());
    }
    let (f, c) = base.as_single().ok_or("non-integer power of a sum")?;
    if !c.is_one() {
        return Err("non-integer power needs a unit coefficient".into());
    }
    if !f.logs.is_empty() {
        return Err("non-integer power of a logarithm".into());
    }
    let mut nf = Factors::default();
    for (k, p) in &f.powers {
        let np = match (p.as_rational(), e.as_rational()) {
            (Some(pv), _) => e.scale(pv),
            (None, Some(ev)) => p.scale(ev),
            (None, None) => return Err("product of symbolic exponents".into()),
        };
        if !np.is_zero() {
            nf.powers.insert(k.clone(), np);
        }
    }
    if let Some(k) = &f.kernel {
        let ev = e.as_rational().ok_or("symbolic power of an exponential")?;
        let nk = k.scale(&ParamScalar::rational(ev.clone()));
        nf.kernel = (!nk.is_zero()).then(|| Box::new(nk));
    }
    Ok(ClosedForm::term(ParamScalar::one(), nf))
}

/// Deterministic rendering in the input grammar.
pub fn render(e: &ClosedForm) -> String {
    e.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::coords::Sign;
    use crate::symcore::rational::q;

    fn sys() -> CoordSystem {
        let mut s = CoordSystem::with_base(&["zeta", "t", "r"]);
        s.add_composite_text("u", "2*zeta*t + i*r^2").unwrap();
        s
    }

    #[test]
    fn gaussian_kernel_form() {
        let s = sys();
        let e = parse_closed_form("t^(-x) * exp(-(M/2)*r^2/t)", &s).unwrap();
        let k = ClosedForm::param("M")
            .scale(&ParamScalar::ratio(-1, 2))
            .mul(&ClosedForm::power_q("r", q(2, 1)))
            .mul(&ClosedForm::power_q("t", q(-1, 1)));
        let expect = ClosedForm::power("t", ExponentExpr::param("x").neg()).mul(&ClosedForm::exp(k).unwrap());
        assert_eq!(e, expect);
    }

    #[test]
    fn zero_and_symbolic_exponent() {
        let s = sys();
        assert!(parse_closed_form("0", &s).unwrap().is_zero());
        let e = parse_closed_form("u^(-x-xi1-xi2)", &s).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.to_string(), "u^(-x - xi1 - xi2)");
    }

    #[test]
    fn errors_carry_position() {
        let s = sys();
        match parse_closed_form("t + * r", &s) {
            Err(SymError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{:?}", other),
        }
        let known: BTreeSet<String> = ["x".to_string()].into_iter().collect();
        let opts = ParseOptions {
            known_params: Some(&known),
            branch: None,
        };
        assert!(matches!(parse_with("t^y", &s, &opts), Err(SymError::UnknownName { .. })));
        assert!(parse_closed_form("exp(ln(t))", &s).is_err());
        assert!(parse_closed_form("(t+r)^x", &s).is_err());
    }

    #[test]
    fn abs_needs_branch() {
        let mut s = CoordSystem::with_base(&["t1", "t2"]);
        s.add_composite_text("t", "t1 - t2").unwrap();
        s.add_composite_text("tn", "t2 - t1").unwrap();
        assert!(matches!(
            parse_closed_form("abs(t)^(-x)", &s),
            Err(SymError::BranchRequired { .. })
        ));
        let b = BranchContext::with("t", Sign::Negative);
        let opts = ParseOptions {
            known_params: None,
            branch: Some(&b),
        };
        let e = parse_with("abs(t)^(-x)*sgn(t)", &s, &opts).unwrap();
        assert_eq!(e.to_string(), "-1*tn^(-x)");
    }

    #[test]
    fn round_trip_examples() {
        let s = sys();
        for text in [
            "t^(-x) * exp(-(M/2)*r^2/t)",
            "(1/2*i)*r^2*t^(-1) - 3*zeta + ln(t)^2*u^(b - 1/2)",
            "(2 - i)*M^(-1)*theta*t + exp(-2*g*r/t)*(h0 - 2*g0*ln(t))",
        ] {
            let e = parse_closed_form(text, &s).unwrap();
            let back = parse_closed_form(&render(&e), &s).unwrap();
            assert_eq!(e, back, "{}", render(&e));
        }
    }
}
