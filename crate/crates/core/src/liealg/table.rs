use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::catalog::Representation;
use super::label::{Family, GeneratorLabel, LinComb};
use crate::symcore::rational::q_as_i64;
use crate::symcore::{q, qi, ParamScalar, Q};

/// Expected brackets of a finite label set, stored in both orientations.
#[derive(Clone, Debug, Default)]
pub struct StructureTable {
    pub id: String,
    pub labels: Vec<GeneratorLabel>,
    brackets: BTreeMap<(GeneratorLabel, GeneratorLabel), LinComb>,
}

#[derive(Serialize)]
struct JsonCoeff {
    label: String,
    coeff: String,
}

#[derive(Serialize)]
struct JsonEntry {
    left: String,
    right: String,
    result: Vec<JsonCoeff>,
}

#[derive(Serialize)]
struct JsonTable {
    id: String,
    labels: Vec<String>,
    entries: Vec<JsonEntry>,
}

type Rule<'a> = dyn Fn(&GeneratorLabel, &GeneratorLabel) -> Option<LinComb> + 'a;

impl StructureTable {
    pub fn from_rule(id: &str, labels: Vec<GeneratorLabel>, rule: &Rule<'_>) -> StructureTable {
        let mut t = StructureTable {
            id: id.to_string(),
            labels: labels.clone(),
            brackets: BTreeMap::new(),
        };
        for (i, a) in labels.iter().enumerate() {
            for b in &labels[i + 1..] {
                let c = rule(a, b).or_else(|| rule(b, a).map(|c| c.neg())).unwrap_or_default();
                t.set(a, b, c);
            }
        }
        t
    }

    /// Store `[a, b] = c` together with `[b, a] = -c`.
    pub fn set(&mut self, a: &GeneratorLabel, b: &GeneratorLabel, c: LinComb) {
        self.brackets.insert((b.clone(), a.clone()), c.neg());
        self.brackets.insert((a.clone(), b.clone()), c);
    }

    /// Overwrite one orientation only; breaks antisymmetry on purpose.
    pub fn set_one_sided(&mut self, a: &GeneratorLabel, b: &GeneratorLabel, c: LinComb) {
        self.brackets.insert((a.clone(), b.clone()), c);
    }

    pub fn contains(&self, l: &GeneratorLabel) -> bool {
        self.labels.contains(l)
    }

    /// `None` when a label lies outside the table.
    pub fn get(&self, a: &GeneratorLabel, b: &GeneratorLabel) -> Option<LinComb> {
        if a.is_central() || b.is_central() || a == b {
            return Some(LinComb::zero());
        }
        self.brackets.get(&(a.clone(), b.clone())).cloned()
    }

    pub fn pairs(&self) -> Vec<(GeneratorLabel, GeneratorLabel)> {
        let mut out = Vec::new();
        for (i, a) in self.labels.iter().enumerate() {
            for b in &self.labels[i + 1..] {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }

    pub fn antisymmetry_violations(&self) -> Vec<(GeneratorLabel, GeneratorLabel)> {
        self.pairs()
            .into_iter()
            .filter(|(a, b)| {
                let ab = self.get(a, b).unwrap_or_default();
                let ba = self.get(b, a).unwrap_or_default();
                !ab.add(&ba).is_zero()
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for (a, b) in self.pairs() {
            let c = self.get(&a, &b).unwrap_or_default();
            if c.is_zero() {
                continue;
            }
            entries.push(JsonEntry {
                left: a.to_string(),
                right: b.to_string(),
                result: c
                    .terms()
                    .map(|(l, k)| JsonCoeff {
                        label: l.to_string(),
                        coeff: k.to_string(),
                    })
                    .collect(),
            });
        }
        serde_json::to_value(JsonTable {
            id: self.id.clone(),
            labels: self.labels.iter().map(|l| l.to_string()).collect(),
            entries,
        })
        .expect("table serialises")
    }
}

fn r(v: Q) -> ParamScalar {
    ParamScalar::rational(v)
}

fn single(l: GeneratorLabel, c: Q) -> Option<LinComb> {
    Some(LinComb::single(l, r(c)))
}

fn spatial(l: &GeneratorLabel) -> u32 {
    *l.spatial.first().unwrap_or(&1)
}

fn y_like(m: Q, j: u32, d: u32) -> GeneratorLabel {
    GeneratorLabel::y(m, (d > 1).then_some(j))
}

fn delta(a: u32, b: u32) -> Q {
    if a == b {
        Q::one()
    } else {
        Q::zero()
    }
}

/// so(d) loop brackets `[R^{ab}_n, R^{cd}_m]`, plus the rotation action on Y.
fn rotation_rule(a: &GeneratorLabel, b: &GeneratorLabel, d: u32) -> Option<LinComb> {
    match (&a.family, &b.family) {
        (Family::R, Family::R) => {
            let (i, j) = (a.spatial[0], a.spatial[1]);
            let (k, l) = (b.spatial[0], b.spatial[1]);
            let s = a.idx() + b.idx();
            let mut out = LinComb::zero();
            let mut add = |c: Q, x: u32, y: u32| {
                if c.is_zero() || x == y {
                    return;
                }
                let (lab, flip) = GeneratorLabel::r(s.clone(), x, y);
                out.add_term(lab, r(if flip { -c } else { c }));
            };
            add(-delta(j, k), i, l);
            add(-delta(i, l), j, k);
            add(delta(j, l), i, k);
            add(delta(i, k), j, l);
            Some(out)
        }
        (Family::R, Family::Y) => {
            let (j, k) = (a.spatial[0], a.spatial[1]);
            let l = spatial(b);
            let s = a.idx() + b.idx();
            let mut out = LinComb::zero();
            out.add_term(y_like(s.clone(), k, d), r(delta(j, l)));
            out.add_term(y_like(s, j, d), r(-delta(k, l)));
            Some(out)
        }
        (Family::X, Family::R) => single(GeneratorLabel::new(Family::R, Some(a.idx() + b.idx()), b.spatial.clone()), -b.idx()),
        _ => None,
    }
}

/// Schrödinger-Virasoro brackets (mass representation and its dual).
pub fn sv_rule(a: &GeneratorLabel, b: &GeneratorLabel, d: u32) -> Option<LinComb> {
    let (n, m) = (a.idx(), b.idx());
    match (&a.family, &b.family) {
        (Family::X, Family::X) => single(GeneratorLabel::x(&n + &m), &n - &m),
        (Family::X, Family::Y) => single(y_like(&n + &m, spatial(b), d), &n * q(1, 2) - &m),
        (Family::X, Family::M) => single(GeneratorLabel::m(&n + &m), -m),
        (Family::Y, Family::Y) => {
            if spatial(a) != spatial(b) {
                return Some(LinComb::zero());
            }
            single(GeneratorLabel::m(&n + &m), &n - &m)
        }
        _ => rotation_rule(a, b, d),
    }
}

/// Conformal Galilean / altern-Virasoro brackets.
pub fn cga_rule(a: &GeneratorLabel, b: &GeneratorLabel, d: u32) -> Option<LinComb> {
    let (n, m) = (a.idx(), b.idx());
    match (&a.family, &b.family) {
        (Family::X, Family::X) => single(GeneratorLabel::x(&n + &m), &n - &m),
        (Family::X, Family::Y) => single(y_like(&n + &m, spatial(b), d), &n - &m),
        _ => rotation_rule(a, b, d),
    }
}

/// `cga(2)` plus the exotic central bracket of the two Y families.
pub fn ecga_rule(a: &GeneratorLabel, b: &GeneratorLabel) -> Option<LinComb> {
    if a.family == Family::Y && b.family == Family::Y && spatial(a) == 1 && spatial(b) == 2 {
        let (n, m) = (a.idx(), b.idx());
        if !(&n + &m).is_zero() {
            return Some(LinComb::zero());
        }
        let c = if n.is_zero() { qi(1) } else { qi(-2) };
        return single(GeneratorLabel::plain(Family::Theta), c);
    }
    cga_rule(a, b, 2)
}

/// Dual Schrödinger brackets extended by the parabolic generator N.
pub fn parabolic_rule(a: &GeneratorLabel, b: &GeneratorLabel) -> Option<LinComb> {
    if b.family == Family::N {
        let n = a.idx();
        return match a.family {
            Family::X => single(a.clone(), n),
            Family::Y => single(a.clone(), n + q(1, 2)),
            Family::M => single(a.clone(), n + Q::one()),
            _ => None,
        };
    }
    sv_rule(a, b, 1)
}

/// Dual conformal Galilean table, with X0 = (D + N)/2.
pub fn dual_cga_rule(a: &GeneratorLabel, b: &GeneratorLabel) -> Option<LinComb> {
    let x0 = GeneratorLabel::x(Q::zero());
    if *a == x0 && *b != x0 {
        let d = dual_cga_rule(&GeneratorLabel::plain(Family::D), b)
            .or_else(|| dual_cga_rule(b, &GeneratorLabel::plain(Family::D)).map(|c| c.neg()))
            .unwrap_or_default();
        let n = dual_cga_rule(&GeneratorLabel::plain(Family::N), b)
            .or_else(|| dual_cga_rule(b, &GeneratorLabel::plain(Family::N)).map(|c| c.neg()))
            .unwrap_or_default();
        return Some(d.add(&n).scale(&ParamScalar::ratio(1, 2)));
    }
    let key = |l: &GeneratorLabel| -> Option<&'static str> {
        Some(match (&l.family, l.index.as_ref().and_then(|v| q_as_i64(&(v * qi(2))))) {
            (Family::X, Some(2)) => "X1",
            (Family::Y, Some(1)) => "Y+",
            (Family::Y, Some(-1)) => "Y-",
            (Family::M, Some(0)) => "M0",
            (Family::V, None) => "V",
            (Family::N, None) => "N",
            (Family::D, None) => "D",
            _ => return None,
        })
    };
    let lab = |s: &str| -> GeneratorLabel {
        match s {
            "X1" => GeneratorLabel::x(Q::one()),
            "Y+" => GeneratorLabel::y(q(1, 2), None),
            "Y-" => GeneratorLabel::y(q(-1, 2), None),
            "M0" => GeneratorLabel::m(Q::zero()),
            "V" => GeneratorLabel::plain(Family::V),
            "N" => GeneratorLabel::plain(Family::N),
            _ => GeneratorLabel::plain(Family::D),
        }
    };
    let table: &[(&str, &str, &str, i64)] = &[
        ("X1", "Y-", "Y+", 1),
        ("X1", "N", "X1", 1),
        ("X1", "D", "X1", 1),
        ("Y+", "Y-", "M0", 1),
        ("Y+", "V", "X1", -1),
        ("Y+", "N", "Y+", 1),
        ("Y-", "V", "D", -1),
        ("Y-", "D", "Y-", -1),
        ("M0", "V", "Y+", -1),
        ("M0", "N", "M0", 1),
        ("M0", "D", "M0", -1),
        ("V", "D", "V", 1),
    ];
    let (ka, kb) = (key(a)?, key(b)?);
    for (l, rt, res, c) in table {
        if *l == ka && *rt == kb {
            return single(lab(res), qi(*c));
        }
    }
    None
}

/// The expected table for a catalog representation over its label set.
pub fn expected_table(rep: &Representation) -> StructureTable {
    let labels = rep.labels();
    let d = rep.dim;
    match rep.id.as_str() {
        "sch" | "sv" | "dual-sch" | "log-dual-sch" | "age" => {
            StructureTable::from_rule(&rep.id, labels, &|a, b| sv_rule(a, b, d))
        }
        "cga" | "av" => StructureTable::from_rule(&rep.id, labels, &|a, b| cga_rule(a, b, d)),
        "ecga" => StructureTable::from_rule(&rep.id, labels, &ecga_rule),
        "parabolic-N" => StructureTable::from_rule(&rep.id, labels, &parabolic_rule),
        "dual-cga" => StructureTable::from_rule(&rep.id, labels, &dual_cga_rule),
        other => StructureTable::from_rule(other, labels, &|_, _| None),
    }
}

/// Altern-Virasoro table with two central charges on `a..=b`.
pub fn central_extension_table(window: (i64, i64)) -> StructureTable {
    let mut labels = Vec::new();
    for n in window.0..=window.1 {
        labels.push(GeneratorLabel::x(qi(n)));
    }
    for n in window.0..=window.1 {
        labels.push(GeneratorLabel::y(qi(n), None));
    }
    labels.push(GeneratorLabel::central("K_X"));
    labels.push(GeneratorLabel::central("K_Y"));
    let rule = |a: &GeneratorLabel, b: &GeneratorLabel| -> Option<LinComb> {
        let (n, m) = (a.idx(), b.idx());
        let (target, charge, kl) = match (&a.family, &b.family) {
            (Family::X, Family::X) => (GeneratorLabel::x(&n + &m), "cX", "K_X"),
            (Family::X, Family::Y) => (GeneratorLabel::y(&n + &m, None), "cY", "K_Y"),
            (Family::Y, Family::Y) => return Some(LinComb::zero()),
            _ => return None,
        };
        let mut out = LinComb::single(target, r(&n - &m));
        if (&n + &m).is_zero() {
            let c = (&n * &n * &n - &n) / qi(12);
            out.add_term(GeneratorLabel::central(kl), ParamScalar::param(charge).scale_q(&c));
        }
        Some(out)
    };
    StructureTable::from_rule("central-extension", labels, &rule)
}
