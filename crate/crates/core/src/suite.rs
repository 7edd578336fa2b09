//! The acceptance matrix: one report per criterion.

use crate::causality::{
    causality_report, integral_i, integral_i_with, ContourSpec, DualizationTask, HalfPlane, ResponseForm, Scheme,
};
use crate::liealg::catalog::schroedinger_operator;
use crate::liealg::{
    build_representation, central_extension_table, expected_table, jacobi_check, verify_closure, verify_dynamical_symmetry,
    verify_matrix_central_charges, verify_structure, DiffOp, Family, GeneratorLabel,
};
use crate::par::Execution;
use crate::report::Report;
use crate::symcore::{q, qi, ParamScalar};
use crate::ward::cases::verify_case;
use crate::ward::constraints::constraint_report;
use crate::ward::{mutations, CASE_IDS};

pub const CRITERIA: [&str; 8] = [
    "structure tables",
    "Jacobi identities and central charges",
    "dynamical symmetry multipliers",
    "Ward solutions and mutations",
    "constraint re-derivation",
    "vanishing of I- and cross-scheme I+",
    "causality of the dual two-point functions",
    "response scaling form",
];

/// Representations whose brackets are compared with their tables.
pub const WINDOW: (i64, i64) = (-3, 3);

pub const STRUCTURE_CASES: &[(&str, u32, (i64, i64))] = &[
    ("sch", 1, WINDOW),
    ("sch", 2, WINDOW),
    ("cga", 1, WINDOW),
    ("cga", 2, WINDOW),
    ("ecga", 2, WINDOW),
    ("dual-sch", 1, WINDOW),
    ("log-dual-sch", 1, WINDOW),
    ("parabolic-N", 1, WINDOW),
    ("dual-cga", 1, WINDOW),
    ("sv", 1, (-3, 3)),
    ("av", 1, (-3, 3)),
];

pub const CLOSED_IDS: &[&str] = &["sch", "cga", "ecga"];

fn sub_report<E: std::fmt::Display>(out: &mut Report, name: &str, r: Result<Report, E>) {
    match r {
        Ok(r) => out.extend(r),
        Err(e) => out.push(name, false, e.to_string()),
    }
}

pub fn structure(exec: Execution) -> Report {
    let mut out = Report::new(CRITERIA[0]);
    for (id, d, w) in STRUCTURE_CASES {
        let name = format!("{}({})", id, d);
        let r = build_representation(id, *d, *w).map(|rep| {
            let mut r = verify_structure(&rep, &expected_table(&rep), exec);
            r.title = name.clone();
            r
        });
        sub_report(&mut out, &name, r);
    }
    out
}

pub fn jacobi(exec: Execution) -> Report {
    let mut out = Report::new(CRITERIA[1]);
    for (id, d, w) in STRUCTURE_CASES.iter().chain(&[("age", 1, WINDOW)]) {
        let name = format!("{}({}) table", id, d);
        let r = build_representation(id, *d, *w).map(|rep| {
            let t = expected_table(&rep);
            let mut r = jacobi_check(&t, exec);
            r.push("antisymmetry", t.antisymmetry_violations().is_empty(), "");
            if CLOSED_IDS.contains(id) {
                r.extend(verify_closure(&rep, exec));
            }
            r.title = name.clone();
            r
        });
        sub_report(&mut out, &name, r);
    }
    let mut c = jacobi_check(&central_extension_table((-3, 3)), exec);
    c.title = "two-charge extension".into();
    out.extend(c);
    sub_report(&mut out, "matrix charges", verify_matrix_central_charges((-2, 2)));
    out
}

pub fn dynamical_symmetry(exec: Execution) -> Report {
    let mut out = Report::new(CRITERIA[2]);
    let rep = match build_representation("dual-cga", 1, WINDOW) {
        Ok(r) => r,
        Err(e) => {
            out.push("build", false, e.to_string());
            return out;
        }
    };
    let x0 = GeneratorLabel::x(qi(0));
    let (r, found) = verify_dynamical_symmetry(&rep, &schroedinger_operator(), exec);
    out.extend(r);
    let expected = [
        (x0, DiffOp::scalar(ParamScalar::int(-1))),
        (GeneratorLabel::x(qi(1)), DiffOp::coord("t").scale_int(-2)),
        (GeneratorLabel::plain(Family::V), DiffOp::coord("r").scale_int(-2)),
        (GeneratorLabel::plain(Family::N), DiffOp::zero()),
        (GeneratorLabel::y(q(-1, 2), None), DiffOp::zero()),
        (GeneratorLabel::m(qi(0)), DiffOp::zero()),
    ];
    for (l, want) in expected {
        let got = found.iter().find(|m| m.label == l).and_then(|m| m.lambda.clone());
        let ok = got.as_ref() == Some(&want);
        let detail = got.map_or("no multiplier".to_string(), |g| format!("lambda = {}", g));
        out.push(format!("lambda[{}]", l), ok, detail);
    }
    out
}

pub fn ward(exec: Execution) -> Report {
    let mut out = Report::new(CRITERIA[3]);
    for id in CASE_IDS {
        sub_report(&mut out, id, verify_case(id, exec));
        sub_report(&mut out, id, mutations(id, exec));
    }
    out
}

pub fn constraints() -> Report {
    let mut out = Report::new(CRITERIA[4]);
    sub_report(&mut out, "constraints", constraint_report());
    out
}

pub const I_ARGUMENTS: [f64; 5] = [0.3, 0.7, 1.0, 1.5, 2.5];

pub fn line_integrals() -> Report {
    let mut out = Report::new(CRITERIA[5]);
    let below = ContourSpec::default();
    let above = below.with_half_plane(HalfPlane::Above);
    for x in I_ARGUMENTS {
        for n in [0, 1] {
            match integral_i(n, x, &below) {
                Ok(v) => out.push(format!("|I-^({})({})|", n, x), v.abs() <= 1e-8 && v.converged, format!("{:.3e}", v.abs())),
                Err(e) => out.push(format!("|I-^({})({})|", n, x), false, e.to_string()),
            }
            let a = integral_i(n, x, &above);
            let b = integral_i_with(n, x, &above, Scheme::Staple);
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    let rel = (a.value() - b.value()).norm() / a.abs();
                    out.push(format!("I+^({})({}) schemes", n, x), rel <= 1e-8 && a.converged && b.converged, format!("rel {:.3e}", rel));
                }
                (Err(e), _) | (_, Err(e)) => out.push(format!("I+^({})({}) schemes", n, x), false, e.to_string()),
            }
        }
    }
    out
}

pub const CAUSAL_CASES: [(f64, f64); 3] = [(0.8, 0.3), (1.5, 0.0), (0.5, 1.0)];

pub fn causality(exec: Execution) -> Report {
    let mut out = Report::new(CRITERIA[6]);
    let spec = ContourSpec::default();
    for (x, xi) in CAUSAL_CASES {
        let tag = format!("x={} xi={}", x, xi);
        match causality_report(&DualizationTask::symmetric(x, xi), &spec, exec) {
            Ok(r) => {
                let a = &r.aggregates;
                out.push(format!("{} suppression", tag), a.suppression <= 1e-6, format!("{:.3e}", a.suppression));
                out.push(format!("{} gaussian spread", tag), a.gaussian_spread <= 1e-6, format!("{:.3e}", a.gaussian_spread));
                let s = a.h_slope_over_g0;
                let ok = (s[0] + 1.0).abs() <= 1e-4 && s[1].abs() <= 1e-4;
                out.push(format!("{} H slope / G0", tag), ok, format!("{:.8} {:+.2e}i", s[0], s[1]));
                out.push(format!("{} G0 identity", tag), a.g0_identity_rel <= 1e-8, format!("rel {:.3e}", a.g0_identity_rel));
                out.push(format!("{} points used", tag), a.points_dropped == 0, format!("{} of {}", a.points_used, r.grid.len()));
            }
            Err(e) => out.push(format!("{} symmetric", tag), false, e.to_string()),
        }
        match causality_report(&DualizationTask::asymmetric(x, xi), &spec, exec) {
            Ok(r) => {
                let s = r.aggregates.h_slope_over_g0;
                let ok = s[0].abs() <= 1e-4 && s[1].abs() <= 1e-4;
                out.push(format!("{} asymmetric H slope", tag), ok, format!("{:.2e} {:+.2e}i", s[0], s[1]));
            }
            Err(e) => out.push(format!("{} asymmetric", tag), false, e.to_string()),
        }
    }
    out
}

pub fn response() -> Report {
    let mut out = Report::new(CRITERIA[7]);
    let forms = [
        ResponseForm { a: 0.0, a_prime: 0.0, lambda_over_z: 1.0, f0: 1.0 },
        ResponseForm { a: 0.3, a_prime: -0.4, lambda_over_z: 1.2, f0: 2.0 },
    ];
    for (i, f) in forms.iter().enumerate() {
        let below = (0..100).all(|k| f.scaling_function(k as f64 / 100.0) == Ok(0.0));
        out.push(format!("form {}: f_R(y < 1) = 0", i), below, "");
        let samples: Vec<(f64, f64)> = [1.0, 2.0, 4.0].iter().map(|s| (3.0 * s, *s)).collect();
        match f.collapse_residual(&samples) {
            Ok(r) => out.push(format!("form {}: collapse residual", i), r == 0.0, format!("{:e}", r)),
            Err(e) => out.push(format!("form {}: collapse residual", i), false, e.to_string()),
        }
    }
    out
}

pub fn criterion(n: usize, exec: Execution) -> Option<Report> {
    Some(match n {
        1 => structure(exec),
        2 => jacobi(exec),
        3 => dynamical_symmetry(exec),
        4 => ward(exec),
        5 => constraints(),
        6 => line_integrals(),
        7 => causality(exec),
        8 => response(),
        _ => return None,
    })
}
