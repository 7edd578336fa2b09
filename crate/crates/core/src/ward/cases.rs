use super::twobody::{apply_ops, LegFamily, Quartet, TwoBody};
use super::{DoubletSpec, WardError};
use crate::liealg::{DiffOp, Family, GeneratorLabel, Mat2};
use crate::par::{self, Execution};
use crate::report::Report;
use crate::symcore::{q, qi, BranchContext, ParamScalar, Sign};

pub const CASE_IDS: &[&str] = &[
    "log-sch-dual-symmetric",
    "log-sch-dual-H",
    "fixed-mass-symmetric",
    "nonlog-sch",
    "log-sch-fixed",
    "asymmetric",
    "log-cga",
    "dual-cga-n-exponent",
    "dual-cga-covariant",
];

/// A catalog case with its default spec, generators and branches.
#[derive(Clone, Debug)]
pub struct CaseId {
    pub id: &'static str,
    pub family: LegFamily,
    pub spec: DoubletSpec,
    pub generators: Vec<GeneratorLabel>,
    pub branches: Vec<Sign>,
    /// Required `(x1', x2')`, when the case fixes them.
    xp: Option<(i64, i64)>,
    fixed_mass: bool,
}

fn sch_gens(with_n: bool) -> Vec<GeneratorLabel> {
    let mut v = vec![
        GeneratorLabel::x(qi(-1)),
        GeneratorLabel::x(qi(0)),
        GeneratorLabel::x(qi(1)),
        GeneratorLabel::y(q(-1, 2), None),
        GeneratorLabel::y(q(1, 2), None),
        GeneratorLabel::m(qi(0)),
    ];
    if with_n {
        v.push(GeneratorLabel::plain(Family::N));
    }
    v
}

fn cga_gens() -> Vec<GeneratorLabel> {
    (-1..=1)
        .map(|n| GeneratorLabel::x(qi(n)))
        .chain((-1..=1).map(|n| GeneratorLabel::y(qi(n), None)))
        .collect()
}

fn dual_cga_gens() -> Vec<GeneratorLabel> {
    vec![
        GeneratorLabel::x(qi(1)),
        GeneratorLabel::y(q(-1, 2), None),
        GeneratorLabel::y(q(1, 2), None),
        GeneratorLabel::m(qi(0)),
        GeneratorLabel::plain(Family::V),
        GeneratorLabel::plain(Family::D),
        GeneratorLabel::plain(Family::N),
    ]
}

fn dual_cga_spec() -> DoubletSpec {
    let mut s = DoubletSpec::generic();
    for leg in s.legs.iter_mut() {
        leg.xp = ParamScalar::zero();
        leg.xip = ParamScalar::zero();
    }
    s.logarithmic = false;
    s
}

pub fn case(id: &str) -> Result<CaseId, WardError> {
    let both = vec![Sign::Positive, Sign::Negative];
    let c = |id: &'static str, family, spec, generators, branches, xp, fixed_mass| CaseId {
        id,
        family,
        spec,
        generators,
        branches,
        xp,
        fixed_mass,
    };
    Ok(match id {
        "log-sch-dual-symmetric" => c(
            "log-sch-dual-symmetric",
            LegFamily::DualSch,
            DoubletSpec::symmetric(),
            sch_gens(true),
            both,
            Some((1, 1)),
            false,
        ),
        "log-sch-dual-H" => c(
            "log-sch-dual-H",
            LegFamily::DualSch,
            DoubletSpec::symmetric(),
            sch_gens(false),
            both,
            Some((1, 1)),
            false,
        ),
        "fixed-mass-symmetric" => c(
            "fixed-mass-symmetric",
            LegFamily::MassSch,
            DoubletSpec::symmetric(),
            sch_gens(false),
            both,
            Some((1, 1)),
            true,
        ),
        "nonlog-sch" => c(
            "nonlog-sch",
            LegFamily::MassSch,
            DoubletSpec::non_logarithmic(),
            sch_gens(false),
            both,
            Some((0, 0)),
            true,
        ),
        "log-sch-fixed" => c(
            "log-sch-fixed",
            LegFamily::MassSch,
            DoubletSpec::symmetric(),
            sch_gens(false),
            both,
            Some((1, 1)),
            true,
        ),
        "asymmetric" => c(
            "asymmetric",
            LegFamily::DualSch,
            DoubletSpec::asymmetric(),
            sch_gens(true),
            both,
            Some((0, 1)),
            false,
        ),
        "log-cga" => c("log-cga", LegFamily::Cga, DoubletSpec::symmetric(), cga_gens(), both, Some((1, 1)), false),
        "dual-cga-n-exponent" => c(
            "dual-cga-n-exponent",
            LegFamily::DualCga,
            dual_cga_spec(),
            dual_cga_gens(),
            vec![Sign::Positive],
            None,
            false,
        ),
        "dual-cga-covariant" => c(
            "dual-cga-covariant",
            LegFamily::DualCga,
            dual_cga_spec(),
            dual_cga_gens(),
            vec![Sign::Positive],
            None,
            false,
        ),
        other => return Err(WardError::UnknownCase(other.to_string())),
    })
}

const DUAL_SCALING: &str = "(u*abs(t)^(-1))^(-x1-xi1-xi2)";
const MASS_KERNEL: &str = "exp(-M1*r^2/(2*t))";
const CGA_KERNEL: &str = "exp(-2*gamma*r/t)";
const N_EXPONENT: &str = "(-(x1+3*xi1+x2+3*xi2)/2)";
const COVARIANT_EXPONENT: &str = "(-(x1+2*xi1+x2+2*xi2)/2)";

/// Texts for `F`, `G12`, `G21`, `H` on a branch.
fn texts(id: &str, sign: Sign) -> [String; 4] {
    let s = DUAL_SCALING;
    let k = MASS_KERNEL;
    let z = || "0".to_string();
    match id {
        "log-sch-dual-symmetric" => {
            let g = format!("g0*abs(t)^(-x1)*{}", s);
            let h = format!(
                "abs(t)^(-x1)*{}*(h0 - g0*(1+xip1+xip2)*(ln(u) - ln(abs(t))) - g0*ln(abs(t)))",
                s
            );
            [z(), g.clone(), g, h]
        }
        "log-sch-dual-H" => {
            let v = "(u*abs(t)^(-1))";
            let g = format!("g0*abs(t)^(-x1)*{}^(alpha)", v);
            let h = format!("abs(t)^(-x1)*(h0*{v}^(beta) - ln(abs(t))*g0*{v}^(alpha))", v = v);
            [z(), g.clone(), g, h]
        }
        "fixed-mass-symmetric" if sign == Sign::Negative => [z(), z(), z(), z()],
        "fixed-mass-symmetric" => {
            let g = format!("G0*t^(-x1)*{}", k);
            let h = format!("(H0 - G0*ln(t))*t^(-x1)*{}", k);
            [z(), g.clone(), g, h]
        }
        "log-sch-fixed" => {
            let g = format!("g0*abs(t)^(-x1)*{}", k);
            let h = format!("(h0 - g0*ln(abs(t)))*abs(t)^(-x1)*{}", k);
            [z(), g.clone(), g, h]
        }
        "nonlog-sch" => {
            let b = format!("abs(t)^(-x1)*{}", k);
            [
                format!("f0*{}", b),
                format!("g12*{}", b),
                format!("g21*{}", b),
                format!("h0*{}", b),
            ]
        }
        "asymmetric" => {
            let g = format!("g0*abs(t)^(-x1)*{}", s);
            let h = format!("abs(t)^(-x1)*{}*(h0 - xip1*g0*(ln(u) - ln(abs(t))))", s);
            [z(), g, z(), h]
        }
        "log-cga" => {
            let g = format!("G0*abs(t)^(-2*x1)*{}", CGA_KERNEL);
            let h = format!("(H0 - 2*G0*ln(abs(t)))*abs(t)^(-2*x1)*{}", CGA_KERNEL);
            [z(), g.clone(), g, h]
        }
        "dual-cga-n-exponent" => {
            let b = N_EXPONENT;
            let f = format!(
                "f0*t^(-(x1+xi1+x2+xi2)/2)*t1^((x2+xi2-x1-xi1)/2)*t2^((x1+xi1-x2-xi2)/2)*u^{b}*t^(-{b})",
                b = b
            );
            [f, z(), z(), z()]
        }
        "dual-cga-covariant" => {
            let b = COVARIANT_EXPONENT;
            let f = format!("f0*t1^(-x1-xi1-{b})*t2^(-x2-xi2-{b})*u^{b}", b = b);
            [f, z(), z(), z()]
        }
        _ => [z(), z(), z(), z()],
    }
}

fn check_spec(c: &CaseId, spec: &DoubletSpec) -> Result<(), WardError> {
    spec.validate()?;
    if let Some((a, b)) = c.xp {
        for (leg, want) in [(0, a), (1, b)] {
            if spec.xp(leg) != &ParamScalar::int(want) {
                return Err(WardError::InconsistentSpec(format!(
                    "{} requires x'{} = {}, got {}",
                    c.id,
                    leg + 1,
                    want,
                    spec.xp(leg)
                )));
            }
        }
    }
    if c.fixed_mass && spec.legs[1].mass != spec.legs[0].mass.neg() {
        return Err(WardError::InconsistentSpec(format!("{} requires M2 = -M1", c.id)));
    }
    Ok(())
}

/// Closed-form quartet of a case on one branch of `t = t1 - t2`.
pub fn catalog_solution(id: &str, spec: &DoubletSpec, sign: Sign) -> Result<(TwoBody, Quartet), WardError> {
    let c = case(id)?;
    check_spec(&c, spec)?;
    let tb = TwoBody::new(c.family, spec.clone())?;
    let branch = BranchContext::with("t", sign);
    if c.xp.is_some() && spec.legs[0].x != spec.legs[1].x {
        return Ok((tb, Quartet::zero(branch)));
    }
    let [f, g12, g21, h] = texts(id, sign);
    let q = Quartet::from_texts(&tb, &branch, &f, &g12, &g21, &h)?;
    Ok((tb, q))
}

fn branch_name(s: Sign) -> &'static str {
    match s {
        Sign::Positive => "t>0",
        Sign::Negative => "t<0",
        Sign::Unrestricted => "t free",
    }
}

/// Check one quartet against explicit two-leg operators.
pub fn check_quartet(tb: &TwoBody, g1: &DiffOp, g2: &DiffOp, q: &Quartet) -> Result<Vec<(&'static str, String)>, WardError> {
    let r = apply_ops(g1, g2, q, &tb.sys)?;
    Ok(r.nonzero(&tb.sys)?.into_iter().map(|(n, e)| (n, e.to_string())).collect())
}

/// Covariance of a case under the given generators and branches.
pub fn verify_covariance(id: &str, gens: &[GeneratorLabel], spec: &DoubletSpec, branches: &[Sign], exec: Execution) -> Result<Report, WardError> {
    let mut report = Report::new(format!("covariance {}", id));
    let mut sols = Vec::new();
    for s in branches {
        sols.push((*s, catalog_solution(id, spec, *s)?));
    }
    let mut jobs = Vec::new();
    for (s, (tb, q)) in &sols {
        for g in gens {
            jobs.push((*s, tb, q, g.clone()));
        }
    }
    let results = par::map(exec, &jobs, |(s, tb, q, g)| {
        let name = format!("{} on {}", g, branch_name(*s));
        let out = tb.generator(g).and_then(|(g1, g2)| check_quartet(tb, &g1, &g2, q));
        (name, out)
    });
    for (name, out) in results {
        match out {
            Ok(bad) if bad.is_empty() => report.push(name, true, ""),
            Ok(bad) => {
                let d: Vec<String> = bad.iter().map(|(n, e)| format!("{}: {}", n, e)).collect();
                report.push(name, false, d.join("; "));
            }
            Err(e) => report.push(name, false, e.to_string()),
        }
    }
    for (s, (_, q)) in &sols {
        if q.is_zero() {
            report.note(format!("{} quartet vanishes identically", branch_name(*s)));
        }
    }
    Ok(report)
}

/// Defaults of the case.
pub fn verify_case(id: &str, exec: Execution) -> Result<Report, WardError> {
    let c = case(id)?;
    verify_covariance(id, &c.generators, &c.spec, &c.branches, exec)
}

/// Double the leading term of a leg-1 operator: highest derivative order, then canonical order.
pub fn corrupt_leading_term(op: &DiffOp) -> DiffOp {
    let lead = op
        .terms()
        .map(|((mo, d), m)| (d.values().sum::<u32>(), mo.clone(), d.clone(), m.clone()))
        .fold(None::<(u32, _, _, Mat2)>, |best, t| match &best {
            Some(b) if b.0 >= t.0 => best,
            _ => Some(t),
        });
    match lead {
        Some((_, mo, d, m)) => op.add(&DiffOp::term(m, mo, d)),
        None => op.clone(),
    }
}

/// Every generator of the case, corrupted on leg 1, must leave a nonzero residual.
pub fn mutations(id: &str, exec: Execution) -> Result<Report, WardError> {
    let c = case(id)?;
    let mut report = Report::new(format!("mutations {}", id));
    let mut sols = Vec::new();
    for s in &c.branches {
        let (tb, q) = catalog_solution(id, &c.spec, *s)?;
        if !q.is_zero() {
            sols.push((tb, q));
        }
    }
    let results = par::map(exec, &c.generators, |g| {
        let mut killed = Vec::new();
        for (tb, q) in &sols {
            let (g1, g2) = match tb.generator(g) {
                Ok(p) => p,
                Err(e) => return (g.clone(), Err(e)),
            };
            let bad = check_quartet(tb, &corrupt_leading_term(&g1), &g2, q);
            match bad {
                Ok(b) => killed.extend(b.into_iter().map(|(n, _)| format!("{} on {}", n, q.branch.describe()))),
                Err(e) => return (g.clone(), Err(e)),
            }
        }
        (g.clone(), Ok(killed))
    });
    for (g, r) in results {
        match r {
            Ok(k) if !k.is_empty() => report.push(format!("corrupted {}", g), true, format!("killed: {}", k.join(", "))),
            Ok(_) => report.push(format!("corrupted {}", g), false, "mutation survived"),
            Err(e) => report.push(format!("corrupted {}", g), false, e.to_string()),
        }
    }
    Ok(report)
}
