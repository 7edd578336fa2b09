use std::collections::BTreeMap;

use super::catalog::Representation;
use super::diffop::{DiffOp, Derivs, Mono};
use super::label::{GeneratorLabel, LinComb};
use super::table::StructureTable;
use crate::par::{self, Execution};
use crate::report::Report;
use crate::symcore::ParamScalar;

/// Operator image of a linear combination of labels.
pub fn realize(rep: &Representation, c: &LinComb) -> Option<DiffOp> {
    let mut out = DiffOp::zero();
    for (l, k) in c.terms() {
        out = out.add(&rep.operator(l)?.scale(k));
    }
    Some(out)
}

/// Compare every commutator of the representation with the table.
pub fn verify_structure(rep: &Representation, table: &StructureTable, exec: Execution) -> Report {
    let mut report = Report::new(format!("structure {} (d={})", rep.id, rep.dim));
    let pairs: Vec<(GeneratorLabel, GeneratorLabel)> = rep
        .labels()
        .iter()
        .enumerate()
        .flat_map(|(i, a)| rep.labels()[i + 1..].iter().map(|b| (a.clone(), b.clone())).collect::<Vec<_>>())
        .collect();
    let outcomes = par::map(exec, &pairs, |(a, b)| {
        let name = format!("[{}, {}]", a, b);
        let expected = match table.get(a, b) {
            Some(e) => e,
            None => return (name, false, "pair missing from table".to_string()),
        };
        let (ga, gb) = match (rep.operator(a), rep.operator(b)) {
            (Some(x), Some(y)) => (x, y),
            _ => return (name, false, "generator missing".to_string()),
        };
        let predicted = match realize(rep, &expected) {
            Some(p) => p,
            None => return (name, false, format!("no operator for {}", expected)),
        };
        let residual = ga.commutator(&gb).sub(&predicted);
        if residual.is_zero() {
            (name, true, expected.to_string())
        } else {
            (name, false, format!("expected {}, residual {}", expected, residual))
        }
    });
    for (n, ok, d) in outcomes {
        report.push(n, ok, d);
    }
    let outside: Vec<String> = rep
        .labels()
        .iter()
        .flat_map(|a| rep.labels().into_iter().map(move |b| (a.clone(), b)))
        .filter_map(|(a, b)| table.get(&a, &b))
        .flat_map(|c| c.terms().map(|(l, _)| l.clone()).collect::<Vec<_>>())
        .filter(|l| !l.is_central() && !rep.generators.contains_key(l))
        .map(|l| l.to_string())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    if !outside.is_empty() {
        report.note(format!("brackets leaving the window, built on demand: {}", outside.join(", ")));
    }
    report
}

/// `[[a,b],c] + [[b,c],a] + [[c,a],b]` at operator level.
pub fn operator_jacobi(a: &DiffOp, b: &DiffOp, c: &DiffOp) -> DiffOp {
    a.commutator(b)
        .commutator(c)
        .add(&b.commutator(c).commutator(a))
        .add(&c.commutator(a).commutator(b))
}

fn nested(table: &StructureTable, a: &GeneratorLabel, b: &GeneratorLabel, c: &GeneratorLabel) -> Result<LinComb, GeneratorLabel> {
    let inner = table.get(a, b).ok_or_else(|| a.clone())?;
    let mut out = LinComb::zero();
    for (l, k) in inner.terms() {
        if l.is_central() {
            continue;
        }
        if !table.contains(l) {
            return Err(l.clone());
        }
        let outer = table.get(l, c).ok_or_else(|| l.clone())?;
        out = out.add(&outer.scale(k));
    }
    Ok(out)
}

/// Jacobi identity in the free span of the table labels.
pub fn jacobi_check(table: &StructureTable, exec: Execution) -> Report {
    let mut report = Report::new(format!("jacobi {}", table.id));
    let ls: Vec<GeneratorLabel> = table.labels.iter().filter(|l| !l.is_central()).cloned().collect();
    let mut triples = Vec::new();
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            for k in j + 1..ls.len() {
                triples.push((ls[i].clone(), ls[j].clone(), ls[k].clone()));
            }
        }
    }
    let outcomes = par::map(exec, &triples, |(a, b, c)| {
        let parts = [nested(table, a, b, c), nested(table, b, c, a), nested(table, c, a, b)];
        let mut sum = LinComb::zero();
        for p in parts {
            match p {
                Ok(v) => sum = sum.add(&v),
                Err(l) => return (a.clone(), b.clone(), c.clone(), None, Some(l)),
            }
        }
        (a.clone(), b.clone(), c.clone(), Some(sum), None)
    });
    let mut skipped = 0usize;
    let mut passed = 0usize;
    for (a, b, c, sum, out) in outcomes {
        match (sum, out) {
            (Some(s), _) if s.is_zero() => passed += 1,
            (Some(s), _) => report.push(format!("({}, {}, {})", a, b, c), false, format!("cyclic sum {}", s)),
            (None, _) => skipped += 1,
        }
    }
    report.push(
        "in-window triples",
        report.checks.is_empty(),
        format!("{} vanish, {} leave the window", passed, skipped),
    );
    if skipped > 0 {
        report.note(format!("{} triples reach labels outside the window and were not evaluated", skipped));
    }
    report
}

type Key = (Mono, Derivs, usize, usize);

fn flatten(op: &DiffOp) -> BTreeMap<Key, ParamScalar> {
    let mut out = BTreeMap::new();
    for ((mo, d), m) in op.terms() {
        for a in 0..2 {
            for b in 0..2 {
                if !m.m[a][b].is_zero() {
                    out.insert((mo.clone(), d.clone(), a, b), m.m[a][b].clone());
                }
            }
        }
    }
    out
}

fn axpy(v: &mut BTreeMap<Key, ParamScalar>, k: &ParamScalar, w: &BTreeMap<Key, ParamScalar>) {
    for (key, c) in w {
        let slot = v.entry(key.clone()).or_default();
        slot.add_assign(&c.mul(k));
        if slot.is_zero() {
            v.remove(key);
        }
    }
}

struct Pivot {
    key: Key,
    vec: BTreeMap<Key, ParamScalar>,
    comb: LinComb,
}

/// Exact span solver over operator term coordinates; pivots on invertible monomial entries.
struct Span {
    pivots: Vec<Pivot>,
    stuck: usize,
}

impl Span {
    fn reduce(&self, mut v: BTreeMap<Key, ParamScalar>, mut comb: LinComb) -> (BTreeMap<Key, ParamScalar>, LinComb) {
        for p in &self.pivots {
            if let Some(c) = v.get(&p.key).cloned() {
                let k = c.neg();
                axpy(&mut v, &k, &p.vec);
                comb = comb.add(&p.comb.scale(&k));
            }
        }
        (v, comb)
    }

    fn insert(&mut self, op: &DiffOp, label: &GeneratorLabel) {
        let (v, comb) = self.reduce(flatten(op), LinComb::of(label.clone()));
        if v.is_empty() {
            return;
        }
        let pick = v.iter().find_map(|(k, c)| c.inv().map(|i| (k.clone(), i)));
        let (key, inv) = match pick {
            Some(p) => p,
            None => {
                self.stuck += 1;
                return;
            }
        };
        let mut vec = BTreeMap::new();
        axpy(&mut vec, &inv, &v);
        let comb = comb.scale(&inv);
        for p in &mut self.pivots {
            if let Some(c) = p.vec.get(&key).cloned() {
                let k = c.neg();
                axpy(&mut p.vec, &k, &vec);
                p.comb = p.comb.add(&comb.scale(&k));
            }
        }
        self.pivots.push(Pivot { key, vec, comb });
    }

    /// Coefficients `c` with `target = sum c_l op(l)`, when they exist.
    fn solve(&self, target: &DiffOp) -> Option<LinComb> {
        let (v, comb) = self.reduce(flatten(target), LinComb::zero());
        v.is_empty().then(|| comb.neg())
    }
}

/// Every commutator of the representation lies in the span of its generators and central images.
pub fn verify_closure(rep: &Representation, exec: Execution) -> Report {
    let mut report = Report::new(format!("closure {} (d={})", rep.id, rep.dim));
    let mut span = Span { pivots: Vec::new(), stuck: 0 };
    for (l, g) in rep.generators.iter().chain(rep.centrals.iter()) {
        span.insert(g, l);
    }
    span.insert(&DiffOp::identity(), &GeneratorLabel::central("1"));
    if span.stuck > 0 {
        report.note(format!("{} generators had no invertible pivot", span.stuck));
    }
    let labels = rep.labels();
    let mut pairs = Vec::new();
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            pairs.push((labels[i].clone(), labels[j].clone()));
        }
    }
    let outcomes = par::map(exec, &pairs, |(a, b)| {
        let c = rep.generators[a].commutator(&rep.generators[b]);
        (format!("[{}, {}]", a, b), span.solve(&c))
    });
    for (name, sol) in outcomes {
        match sol {
            Some(s) => report.push(name, true, s.to_string()),
            None => report.push(name, false, "not in the span of the generators"),
        }
    }
    report
}

/// Result of the multiplier search for one generator.
#[derive(Clone, Debug)]
pub struct Multiplier {
    pub label: GeneratorLabel,
    pub lambda: Option<DiffOp>,
}

/// Find `lambda` with `[S, X] = lambda S` by matching the top second-order term of `S`.
pub fn verify_dynamical_symmetry(rep: &Representation, s: &DiffOp, exec: Execution) -> (Report, Vec<Multiplier>) {
    let mut report = Report::new(format!("dynamical symmetry {}", rep.id));
    let pivot = s
        .terms()
        .filter(|((mo, d), m)| mo.is_empty() && d.values().sum::<u32>() == 2 && d.len() == 1 && m.as_scalar().and_then(|c| c.inv()).is_some())
        .map(|((_, d), m)| (d.clone(), m.as_scalar().and_then(|c| c.inv()).expect("invertible")))
        .next();
    let (pd, pinv) = match pivot {
        Some(p) => p,
        None => {
            report.push("pivot", false, "S has no constant pure second-order term");
            return (report, Vec::new());
        }
    };
    let labels = rep.labels();
    let found = par::map(exec, &labels, |l| {
        let x = &rep.generators[l];
        let c = s.commutator(x);
        let lambda = c.at_derivs(&pd).scale(&pinv);
        let ok = c.sub(&lambda.compose(s)).is_zero();
        Multiplier {
            label: l.clone(),
            lambda: ok.then_some(lambda),
        }
    });
    for m in &found {
        match &m.lambda {
            Some(lam) => report.push(m.label.to_string(), true, format!("lambda = {}", lam)),
            None => report.push(m.label.to_string(), false, "[S, X] is not a multiple of S"),
        }
    }
    (report, found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog::{build_representation, schroedinger_operator};
    use crate::liealg::table::expected_table;
    use crate::symcore::qi;

    #[test]
    fn sch1_brackets_match() {
        let rep = build_representation("sch", 1, (-1, 1)).unwrap();
        let r = verify_structure(&rep, &expected_table(&rep), Execution::Sequential);
        assert!(r.passed(), "{}", r);
        assert_eq!(r.checks.len(), 15);
    }

    #[test]
    fn x1_xm1_gives_two_x0() {
        let rep = build_representation("sch", 1, (-1, 1)).unwrap();
        let c = rep.operator(&GeneratorLabel::x(qi(1))).unwrap().commutator(&rep.operator(&GeneratorLabel::x(qi(-1))).unwrap());
        assert_eq!(c, rep.operator(&GeneratorLabel::x(qi(0))).unwrap().scale_int(2));
    }

    #[test]
    fn closure_of_sch1() {
        let rep = build_representation("sch", 1, (-1, 1)).unwrap();
        assert!(verify_closure(&rep, Execution::Sequential).passed());
    }

    #[test]
    fn dual_cga_multipliers() {
        let rep = build_representation("dual-cga", 1, (-1, 1)).unwrap();
        let (r, found) = verify_dynamical_symmetry(&rep, &schroedinger_operator(), Execution::Sequential);
        let get = |l: GeneratorLabel| found.iter().find(|m| m.label == l).and_then(|m| m.lambda.clone()).unwrap();
        assert_eq!(get(GeneratorLabel::x(qi(0))), DiffOp::scalar(ParamScalar::int(-1)), "{}", r);
        assert_eq!(get(GeneratorLabel::x(qi(1))), DiffOp::coord("t").scale_int(-2));
    }
}
