use lsi_core::liealg::catalog::{log_dual_x0, parabolic_n_full};
use lsi_core::liealg::{Family, GeneratorLabel};
use lsi_core::symcore::{q, qi, BranchContext, ParamScalar, Sign};
use lsi_core::ward::cases::{case, verify_case};
use lsi_core::ward::twobody::source_structure;
use lsi_core::ward::{
    apply_two_body, catalog_solution, commutator_conditions, extract_constraints, mutations, verify_covariance, DoubletSpec,
    LegFamily, Quartet, TwoBody, WardError, CASE_IDS,
};
use lsi_core::Execution;

fn p(n: &str) -> ParamScalar {
    ParamScalar::param(n)
}

fn x(n: i64) -> GeneratorLabel {
    GeneratorLabel::x(qi(n))
}

#[test]
fn every_case_is_covariant_except_the_n_exponent_form() {
    for id in CASE_IDS {
        let r = verify_case(id, Execution::default()).unwrap();
        if *id == "dual-cga-n-exponent" {
            assert!(!r.passed(), "{}", r);
            assert!(r.failures().all(|c| c.name.starts_with("V ") || c.name.starts_with("D ")), "{}", r);
        } else {
            assert!(r.passed(), "{}", r);
        }
    }
}

#[test]
fn every_mutation_is_killed() {
    for id in CASE_IDS {
        let r = mutations(id, Execution::default()).unwrap();
        assert!(r.passed(), "{}", r);
    }
}

#[test]
fn fixed_mass_vanishes_for_negative_times() {
    let (_, q) = catalog_solution("fixed-mass-symmetric", &DoubletSpec::symmetric(), Sign::Negative).unwrap();
    assert!(q.is_zero());
    let (_, q) = catalog_solution("fixed-mass-symmetric", &DoubletSpec::symmetric(), Sign::Positive).unwrap();
    assert!(q.h().to_string().contains("ln"));
}

#[test]
fn unequal_dimensions_force_zero() {
    let mut spec = DoubletSpec::non_logarithmic();
    spec.legs[1].x = p("y");
    let (_, q) = catalog_solution("nonlog-sch", &spec, Sign::Positive).unwrap();
    assert!(q.is_zero());
}

#[test]
fn inconsistent_specs_are_rejected() {
    let e = catalog_solution("log-sch-dual-symmetric", &DoubletSpec::asymmetric(), Sign::Positive);
    assert!(matches!(e, Err(WardError::InconsistentSpec(_))));
    let mut s = DoubletSpec::symmetric();
    s.legs[1].mass = p("M2");
    assert!(matches!(
        catalog_solution("fixed-mass-symmetric", &s, Sign::Positive),
        Err(WardError::InconsistentSpec(_))
    ));
    s.legs[0].xp = ParamScalar::int(2);
    assert!(catalog_solution("nonlog-sch", &s, Sign::Positive).is_err());
    assert!(matches!(
        catalog_solution("nope", &DoubletSpec::symmetric(), Sign::Positive),
        Err(WardError::UnknownCase(_))
    ));
}

#[test]
fn asymmetric_case_has_no_g21() {
    let (_, q) = catalog_solution("asymmetric", &DoubletSpec::asymmetric(), Sign::Positive).unwrap();
    assert!(q.g21().is_zero());
    assert!(!q.g12().is_zero());
}

#[test]
fn symmetric_g_is_even_in_t() {
    let spec = DoubletSpec::symmetric();
    let (_, a) = catalog_solution("log-sch-dual-symmetric", &spec, Sign::Positive).unwrap();
    let (_, b) = catalog_solution("log-sch-dual-symmetric", &spec, Sign::Negative).unwrap();
    assert_eq!(a.g12(), a.g21());
    assert_eq!(b.g12(), b.g21());
}

#[test]
fn literal_mass_coefficient_breaks_x1() {
    let spec = DoubletSpec::symmetric();
    let (tb, qf) = catalog_solution("fixed-mass-symmetric", &spec, Sign::Positive).unwrap();
    let (g1, g2) = tb.generator(&x(1)).unwrap();
    let bump = |g: &lsi_core::liealg::DiffOp| {
        g.filter(|mo, d, _| d.is_empty() && mo.keys().any(|k| k.starts_with('r')))
    };
    let bad1 = g1.add(&bump(&g1));
    let bad2 = g2.add(&bump(&g2));
    let r = lsi_core::ward::cases::check_quartet(&tb, &bad1, &bad2, &qf).unwrap();
    assert!(!r.is_empty());
}

#[test]
fn h_row_sources_have_jordan_coefficients() {
    let tb = TwoBody::new(LegFamily::DualSch, DoubletSpec::generic()).unwrap();
    for l in [x(0), x(1)] {
        let (g1, g2) = tb.generator(&l).unwrap();
        assert!(source_structure(&g1, &g2, 1, 1).is_empty());
        let h = source_structure(&g1, &g2, 0, 0);
        assert_eq!(h.len(), 2);
        assert!(h[&(1, 0)].to_string().contains("xp1"));
        assert!(h[&(0, 1)].to_string().contains("xp2"));
    }
}

#[test]
fn n_covariance_reaches_the_entries() {
    let spec = DoubletSpec::symmetric();
    let c = case("log-sch-dual-symmetric").unwrap();
    let r = verify_covariance(
        "log-sch-dual-symmetric",
        &[GeneratorLabel::plain(Family::N)],
        &spec,
        &c.branches,
        Execution::Sequential,
    )
    .unwrap();
    assert!(r.passed(), "{}", r);
}

fn ansatz(tb: &TwoBody, f: &str, g12: &str, g21: &str, h: &str) -> Quartet {
    let b = BranchContext::with("t", Sign::Positive);
    Quartet::from_texts(tb, &b, f, g12, g21, h).unwrap()
}

#[test]
fn unequal_dimensions_give_constraint() {
    let tb = TwoBody::new(LegFamily::DualSch, DoubletSpec::generic()).unwrap();
    let a = ansatz(&tb, "f0*t^alpha*u^beta", "0", "0", "0");
    let c = extract_constraints(&tb, &a, &[x(0), x(1)], &["F"]).unwrap();
    assert!(c.implies(&p("x1").sub(&p("x2")).mul(&p("f0"))), "{}", c);
    assert!(!c.implies(&p("f0")), "{}", c);
}

#[test]
fn g12_scaling_from_two_conditions() {
    let tb = TwoBody::new(LegFamily::DualSch, DoubletSpec::symmetric()).unwrap();
    let a = ansatz(&tb, "0", "g0*t^alpha*u^beta", "0", "0");
    let c = extract_constraints(&tb, &a, &[x(0), x(1)], &["G12"]).unwrap().strip(&["g0"]);
    assert_eq!(c.len(), 1, "{}", c);
    assert_eq!(c.solve_linear("alpha"), Some(p("beta").add(&p("x")).neg()));
}

#[test]
fn relation_between_g12_and_f() {
    let tb = TwoBody::new(LegFamily::DualSch, DoubletSpec::generic()).unwrap();
    let a = ansatz(&tb, "f0*t^alpha*u^beta", "g0*t^alpha*u^beta", "0", "0");
    let c = extract_constraints(&tb, &a, &[x(1)], &["G12"]).unwrap();
    let target = p("x1").sub(&p("x2")).mul(&p("g0")).sub(&p("xp2").mul(&p("f0")));
    assert!(c.implies(&target), "{}", c);
}

#[test]
fn relation_between_g12_and_g21() {
    let mut spec = DoubletSpec::generic();
    spec.legs[1].x = p("x1");
    let tb = TwoBody::new(LegFamily::DualSch, spec).unwrap();
    let a = ansatz(&tb, "0", "g12*t^alpha*u^beta", "g21*t^alpha*u^beta", "h0*t^alpha*u^beta");
    let c = extract_constraints(&tb, &a, &[x(1)], &["H"]).unwrap();
    let target = p("xp1").mul(&p("g12")).sub(&p("xp2").mul(&p("g21")));
    assert!(c.implies(&target), "{}", c);
}

#[test]
fn n_alone_gives_one_exponent_condition() {
    let tb = TwoBody::new(LegFamily::DualSch, DoubletSpec::symmetric()).unwrap();
    let a = ansatz(&tb, "0", "g0*t^alpha*u^beta", "0", "0");
    let c = extract_constraints(&tb, &a, &[GeneratorLabel::plain(Family::N)], &["G12"]).unwrap().strip(&["g0"]);
    assert_eq!(c.len(), 1, "{}", c);
    assert_eq!(c.solve_linear("alpha"), Some(p("xi1").add(&p("xi2"))));
}

#[test]
fn jordan_product_condition() {
    let c = commutator_conditions(&log_dual_x0(), &parabolic_n_full());
    assert_eq!(c.len(), 1, "{}", c);
    assert!(c.contains(&p("xp").mul(&p("xipp"))), "{}", c);
}

#[test]
fn n_fixes_dual_cga_exponent() {
    let tb = TwoBody::new(LegFamily::DualCga, DoubletSpec::generic()).unwrap();
    let f = "f0*t^(-(x1+xi1+x2+xi2)/2)*t1^((x2+xi2-x1-xi1)/2)*t2^((x1+xi1-x2-xi2)/2)*u^beta*t^(-beta)";
    let a = ansatz(&tb, f, "0", "0", "0");
    let c = extract_constraints(&tb, &a, &[GeneratorLabel::plain(Family::N)], &["F"]).unwrap().strip(&["f0"]);
    let want = p("x1")
        .add(&p("x2"))
        .add(&p("xi1").scale_q(&qi(3)))
        .add(&p("xi2").scale_q(&qi(3)))
        .scale_q(&q(-1, 2));
    assert_eq!(c.solve_linear("beta"), Some(want));
}

#[test]
fn projective_identity_for_u_forms() {
    let tb = TwoBody::new(LegFamily::DualSch, DoubletSpec::generic()).unwrap();
    let a = ansatz(&tb, "t^a*u^c", "0", "0", "0");
    let r = apply_two_body(&tb, &GeneratorLabel::y(q(1, 2), None), &a).unwrap();
    assert!(r.nonzero(&tb.sys).unwrap().is_empty());
}

#[test]
fn constraint_report_passes() {
    let r = lsi_core::ward::constraints::constraint_report().unwrap();
    assert_eq!(r.checks.len(), 8);
    assert!(r.passed(), "{}", r);
}
