use lsi_core::liealg::catalog::{parabolic_n_full, schroedinger_operator};
use lsi_core::liealg::table::central_extension_table;
use lsi_core::liealg::*;
use lsi_core::symcore::{q, qi, ParamScalar};
use lsi_core::Execution;

const CASES: &[(&str, u32, (i64, i64))] = &[
    ("sch", 1, (-1, 1)),
    ("sch", 2, (-1, 1)),
    ("sch", 3, (-1, 1)),
    ("cga", 1, (-1, 1)),
    ("cga", 2, (-1, 1)),
    ("ecga", 2, (-1, 1)),
    ("dual-sch", 1, (-1, 1)),
    ("log-dual-sch", 1, (-1, 1)),
    ("parabolic-N", 1, (-1, 1)),
    ("dual-cga", 1, (-1, 1)),
    ("age", 1, (-1, 1)),
    ("sv", 1, (-3, 3)),
    ("av", 1, (-3, 3)),
];

#[test]
fn catalog_brackets_match_tables() {
    for (id, d, w) in CASES {
        let rep = build_representation(id, *d, *w).unwrap();
        let r = verify_structure(&rep, &expected_table(&rep), Execution::default());
        assert!(r.passed(), "{}", r);
    }
}

#[test]
fn catalog_tables_satisfy_jacobi() {
    for (id, d, w) in CASES {
        let rep = build_representation(id, *d, *w).unwrap();
        let t = expected_table(&rep);
        assert!(t.antisymmetry_violations().is_empty());
        let r = jacobi_check(&t, Execution::default());
        assert!(r.passed(), "{}", r);
    }
    let r = jacobi_check(&central_extension_table((-3, 3)), Execution::default());
    assert!(r.passed(), "{}", r);
}

#[test]
fn finite_algebras_close() {
    for (id, d, w) in CASES.iter().filter(|c| ["sch", "cga", "ecga"].contains(&c.0)) {
        let rep = build_representation(id, *d, *w).unwrap();
        let r = verify_closure(&rep, Execution::default());
        assert!(r.passed(), "{}", r);
    }
}

#[test]
fn spec_commutator_examples() {
    let rep = build_representation("dual-cga", 1, (-1, 1)).unwrap();
    let v = rep.operator(&GeneratorLabel::plain(Family::V)).unwrap();
    let y = rep.operator(&GeneratorLabel::y(q(1, 2), None)).unwrap();
    let x1 = rep.operator(&GeneratorLabel::x(qi(1))).unwrap();
    let n = rep.operator(&GeneratorLabel::plain(Family::N)).unwrap();
    assert_eq!(v.commutator(&y), x1);
    assert_eq!(x1.commutator(&n), x1);
    let sch = build_representation("sch", 1, (-1, 1)).unwrap();
    let yp = sch.operator(&GeneratorLabel::y(q(1, 2), None)).unwrap();
    let ym = sch.operator(&GeneratorLabel::y(q(-1, 2), None)).unwrap();
    assert_eq!(yp.commutator(&ym), sch.operator(&GeneratorLabel::m(qi(0))).unwrap());
}

#[test]
fn ecga_exotic_bracket() {
    let rep = build_representation("ecga", 2, (-1, 1)).unwrap();
    let y1 = rep.operator(&GeneratorLabel::y(qi(0), Some(1))).unwrap();
    let y2 = rep.operator(&GeneratorLabel::y(qi(0), Some(2))).unwrap();
    assert_eq!(y1.commutator(&y2), DiffOp::scalar(ParamScalar::param("theta")));
    let y1 = rep.operator(&GeneratorLabel::y(qi(1), Some(1))).unwrap();
    let y2 = rep.operator(&GeneratorLabel::y(qi(-1), Some(2))).unwrap();
    assert_eq!(y1.commutator(&y2), DiffOp::scalar(ParamScalar::param("theta").scale_q(&qi(-2))));
}

#[test]
fn parabolic_condition_from_full_xi() {
    let rep = build_representation("parabolic-N", 1, (-1, 1)).unwrap();
    let x0 = rep.operator(&GeneratorLabel::x(qi(0))).unwrap();
    let c = x0.commutator(&parabolic_n_full());
    assert!(!c.is_zero());
    let text = c.to_string();
    assert!(text.contains("xipp") && text.contains("xp"), "{}", text);
}

#[test]
fn dynamical_symmetry_multipliers() {
    let rep = build_representation("dual-cga", 1, (-1, 1)).unwrap();
    let (r, found) = verify_dynamical_symmetry(&rep, &schroedinger_operator(), Execution::default());
    assert!(r.passed(), "{}", r);
    let lam = |l: GeneratorLabel| found.iter().find(|m| m.label == l).unwrap().lambda.clone().unwrap();
    assert_eq!(lam(GeneratorLabel::plain(Family::V)), DiffOp::coord("r").scale_int(-2));
    for l in [GeneratorLabel::plain(Family::N), GeneratorLabel::y(q(-1, 2), None), GeneratorLabel::m(qi(0))] {
        assert!(lam(l).is_zero());
    }
}

#[test]
fn operator_jacobi_on_catalog_triples() {
    let rep = build_representation("dual-cga", 1, (-1, 1)).unwrap();
    let ops: Vec<DiffOp> = rep.generators.values().cloned().collect();
    for a in 0..ops.len() {
        for b in a + 1..ops.len() {
            for c in b + 1..ops.len() {
                assert!(operator_jacobi(&ops[a], &ops[b], &ops[c]).is_zero());
            }
        }
    }
}

#[test]
fn rotation_loops_do_not_close_beyond_d1() {
    for id in ["sv", "av"] {
        let rep = build_representation(id, 2, (-1, 1)).unwrap();
        let r = verify_structure(&rep, &expected_table(&rep), Execution::default());
        assert!(r.failures().all(|c| c.name.contains("R-1") || c.name.contains("R1")));
        assert!(!r.passed());
        let table_ok = jacobi_check(&expected_table(&rep), Execution::default()).passed();
        assert_eq!(table_ok, id == "av");
    }
}
