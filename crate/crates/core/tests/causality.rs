use lsi_core::causality::{
    causality_report, dualize_pointwise, integral_i, integral_i_with, ContourSpec, DualizationTask, Entry, HalfPlane,
    LogMix, ResponseForm, Scheme,
};
use lsi_core::Execution;

const XS: [f64; 5] = [0.3, 0.7, 1.0, 1.5, 2.5];

#[test]
fn lower_line_integrals_vanish() {
    let s = ContourSpec::default();
    for x in XS {
        for n in [0, 1] {
            let v = integral_i(n, x, &s).unwrap();
            assert!(v.abs() <= 1e-8 && v.converged, "n={} x={} {:?}", n, x, v);
        }
    }
}

#[test]
fn upper_line_integrals_agree_across_schemes() {
    let s = ContourSpec::default().with_half_plane(HalfPlane::Above);
    for x in XS {
        for n in [0, 1] {
            let a = integral_i(n, x, &s).unwrap();
            let b = integral_i_with(n, x, &s, Scheme::Staple).unwrap();
            let fine = ContourSpec { nodes_per_segment: 16, l: 40.0, ..s };
            let c = integral_i_with(n, x, &fine, Scheme::Staple).unwrap();
            assert!(a.abs() > 1e-3);
            assert!((a.value() - b.value()).norm() <= 1e-8 * a.abs(), "n={} x={}", n, x);
            assert!((b.value() - c.value()).norm() <= 1e-8 * a.abs(), "n={} x={}", n, x);
        }
    }
}

#[test]
fn contour_independence() {
    let base = ContourSpec::default().with_half_plane(HalfPlane::Above);
    let variants = [
        ContourSpec { l: 2.0 * base.l, ..base },
        ContourSpec { tail_depth: 2.0 * base.tail_depth, ..base },
        ContourSpec { epsilon: 0.5 * base.epsilon, ..base },
    ];
    for n in [0, 1] {
        let v0 = integral_i_with(n, 0.7, &base, Scheme::Staple).unwrap();
        for s in &variants {
            let v = integral_i_with(n, 0.7, s, Scheme::Staple).unwrap();
            assert!((v.value() - v0.value()).norm() <= 1e-8 * v0.abs());
        }
    }
}

#[test]
fn tail_bound_shrinks_with_depth() {
    let mut last = f64::INFINITY;
    for d in [5.0, 10.0, 20.0, 40.0] {
        let s = ContourSpec { tail_depth: d, ..ContourSpec::default() };
        let v = integral_i_with(1, 0.7, &s, Scheme::Staple).unwrap();
        assert!(v.tail < last);
        last = v.tail;
    }
}

#[test]
fn causal_support_on_default_grid() {
    let s = ContourSpec::default();
    for (x, xi) in [(0.8, 0.3), (1.5, 0.0), (0.5, 1.0)] {
        let sym = causality_report(&DualizationTask::symmetric(x, xi), &s, Execution::default()).unwrap();
        let a = &sym.aggregates;
        assert_eq!(a.points_dropped, 0);
        assert!(a.suppression <= 1e-6, "{:?}", a);
        assert!(a.gaussian_spread <= 1e-6, "{:?}", a);
        assert!(a.g0_identity_rel <= 1e-8, "{:?}", a);
        assert!((a.h_slope_over_g0[0] + 1.0).abs() <= 1e-4 && a.h_slope_over_g0[1].abs() <= 1e-4, "{:?}", a);
        assert!(a.h0_identity_rel <= 1e-6, "{:?}", a);

        let asym = causality_report(&DualizationTask::asymmetric(x, xi), &s, Execution::default()).unwrap();
        let b = &asym.aggregates;
        assert!(b.h_slope_over_g0[0].abs() <= 1e-4 && b.h_slope_over_g0[1].abs() <= 1e-4, "{:?}", b);
    }
}

#[test]
fn log_mixing_shifts_only_the_constant() {
    let mut t = DualizationTask::symmetric(0.8, 0.3);
    t.log_mix = LogMix::Symmetric { xip_sum: 0.7 };
    let r = causality_report(&t, &ContourSpec::default(), Execution::Sequential).unwrap();
    assert!((r.aggregates.h_slope_over_g0[0] + 1.0).abs() <= 1e-4);
    assert!(r.aggregates.h0_identity_rel <= 1e-6);
}

#[test]
fn g0_reference_point() {
    let t = DualizationTask::symmetric(0.8, 0.3);
    let s = ContourSpec::default();
    let g = dualize_pointwise(&t, &s, 1.0, 0.0, Entry::G).unwrap();
    let i = integral_i(0, 1.1, &s.with_half_plane(HalfPlane::Above)).unwrap();
    let want = i.value() * t.prefactor();
    assert!((g.value() - want).norm() <= 1e-8 * want.norm());
}

#[test]
fn grids_are_checked() {
    let mut t = DualizationTask::symmetric(0.8, 0.3);
    t.grid.retain(|p| p.0 > 0.0);
    assert!(causality_report(&t, &ContourSpec::default(), Execution::Sequential).is_err());
    t.grid.clear();
    assert!(causality_report(&t, &ContourSpec::default(), Execution::Sequential).is_err());
    let bad = DualizationTask::symmetric(0.2, -0.5);
    assert!(causality_report(&bad, &ContourSpec::default(), Execution::Sequential).is_err());
}

#[test]
fn response_form_is_causal_and_collapses() {
    let f = ResponseForm { a: 0.5, a_prime: -0.2, lambda_over_z: 1.25, f0: 1.3 };
    for k in 0..50 {
        assert_eq!(f.scaling_function(0.02 * k as f64).unwrap(), 0.0);
    }
    let samples: Vec<(f64, f64)> = [1.0, 2.0, 4.0].iter().map(|s| (3.0 * s, *s)).collect();
    assert!(f.collapse_residual(&samples).unwrap() <= 1e-15);
    let plain = ResponseForm { a: 0.0, a_prime: 0.0, lambda_over_z: 1.0, f0: 1.0 };
    assert_eq!(plain.collapse_residual(&samples).unwrap(), 0.0);
    assert_eq!(plain.response(8.0, 4.0).unwrap(), 0.25);
}
