use lsi_core::liealg::{build_representation, GeneratorLabel};
use lsi_core::symcore::{parse_closed_form, ClosedForm, CoordSystem, ExponentExpr, ParamScalar, q};
use proptest::prelude::*;

fn sys() -> CoordSystem {
    CoordSystem::with_base(&["t", "r"])
}

fn atom() -> impl Strategy<Value = ClosedForm> {
    prop_oneof![
        (-6i64..7, 1i64..5).prop_map(|(n, d)| ClosedForm::scalar(ParamScalar::ratio(n, d))),
        prop::sample::select(vec!["x", "xi", "M"]).prop_map(ClosedForm::param),
        (prop::sample::select(vec!["t", "r"]), -4i64..5, 1i64..4).prop_map(|(c, n, d)| ClosedForm::power_q(c, q(n, d))),
        (prop::sample::select(vec!["t", "r"]), 1u32..3).prop_map(|(c, k)| ClosedForm::log(c, k)),
        prop::sample::select(vec!["x", "xi"]).prop_map(|p| ClosedForm::power("t", ExponentExpr::param(p).add_q(&q(1, 2)))),
        Just(ClosedForm::scalar(ParamScalar::i())),
    ]
}

fn form() -> impl Strategy<Value = ClosedForm> {
    atom().prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            inner.prop_map(|a| a.neg()),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_forms_parse_back(f in form()) {
        let s = sys();
        let back = parse_closed_form(&f.to_string(), &s).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn product_rule(f in form(), g in form()) {
        let s = sys();
        let lhs = f.mul(&g).differentiate("t", &s).unwrap();
        let rhs = f.differentiate("t", &s).unwrap().mul(&g).add(&f.mul(&g.differentiate("t", &s).unwrap()));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn mixed_partials_commute(f in form()) {
        let s = sys();
        let a = f.differentiate("t", &s).unwrap().differentiate("r", &s).unwrap();
        let b = f.differentiate("r", &s).unwrap().differentiate("t", &s).unwrap();
        prop_assert!(a.sub(&b).is_zero());
    }
}

const IDS: [&str; 5] = ["sch", "cga", "dual-sch", "dual-cga", "sv"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn operator_commutators_are_antisymmetric(k in 0usize..5, i in 0usize..64, j in 0usize..64) {
        let rep = build_representation(IDS[k], 1, (-2, 2)).unwrap();
        let labels: Vec<GeneratorLabel> = rep.labels();
        let a = &rep.generators[&labels[i % labels.len()]];
        let b = &rep.generators[&labels[j % labels.len()]];
        prop_assert!(a.commutator(b).add(&b.commutator(a)).is_zero());
    }
}

#[test]
fn labels_round_trip() {
    for (id, d) in [("sch", 2), ("sch", 3), ("cga", 2), ("ecga", 2), ("dual-cga", 1), ("sv", 1), ("av", 1)] {
        let rep = build_representation(id, d, (-2, 2)).unwrap();
        for l in rep.labels() {
            let back: GeneratorLabel = l.to_string().parse().unwrap();
            assert_eq!(back, l);
        }
    }
}
