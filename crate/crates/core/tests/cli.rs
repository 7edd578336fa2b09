use lsi_core::cli::run_with;
use proptest::prelude::*;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("lsi").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out, _) = run(&a);
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn algebra_passes() {
    let (code, out, _) = run(&["verify", "algebra", "--id", "sch", "--dim", "1"]);
    assert_eq!(code, 0, "{}", out);
    assert_eq!(run(&["verify", "algebra", "--id", "sv", "--window", "-2..2"]).0, 0);
    assert_eq!(run(&["verify", "algebra", "--id", "central", "--window", "-2..2"]).0, 0);
}

#[test]
fn ward_branch_passes() {
    assert_eq!(run(&["verify", "ward", "--case", "fixed-mass-symmetric", "--branch", "t>0"]).0, 0);
    assert_eq!(run(&["verify", "ward", "--case", "asymmetric", "--bind", "x=3/2", "--mutations"]).0, 0);
}

#[test]
fn n_exponent_form_breaks_v_and_d() {
    assert_eq!(run(&["verify", "ward", "--case", "dual-cga-n-exponent"]).0, 1);
    assert_eq!(run(&["verify", "ward", "--case", "dual-cga-n-exponent", "--bind", "xi2=0", "--bind", "xi1=0"]).0, 0);
}

#[test]
fn lower_integral_vanishes() {
    let (code, v) = json(&["causality", "integral", "--n", "0", "--x", "1.5", "--half-plane", "below"]);
    assert_eq!(code, 0);
    let re = v["data"]["re"].as_f64().unwrap();
    let im = v["data"]["im"].as_f64().unwrap();
    assert!(re.hypot(im) <= 1e-10);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "algebra", "--id", "nope"],
        vec!["verify", "algebra", "--id", "sch", "--window", "3..1"],
        vec!["verify", "ward", "--case", "asymmetric", "--bind", "x1=0.5"],
        vec!["verify", "ward", "--case", "asymmetric", "--branch", "sideways"],
        vec!["verify", "ward", "--case", "dual-cga-covariant", "--branch", "t<0"],
        vec!["verify", "ward", "--case", "nonlog-sch", "--bind", "xp1=2"],
        vec!["verify", "ward", "--case", "log-cga", "--bind", "xp1=2"],
        vec!["causality", "report", "--x", "0.8", "--bind", "Q=1"],
        vec!["causality", "report", "--x", "0.2", "--xi", "-0.5"],
        vec!["causality", "integral", "--x", "1", "--epsilon", "2"],
        vec!["verify", "frobnicate"],
        vec!["verify", "all", "--criterion", "9"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, 2, "{:?}: {}", args, err);
    }
}

#[test]
fn json_is_deterministic() {
    let args = ["causality", "report", "--x", "0.8", "--xi", "0.3", "--bind", "xip=0.25"];
    let (c1, mut a) = json(&args);
    let (c2, mut b) = json(&args);
    assert_eq!((c1, c2), (0, 0));
    for v in [&mut a, &mut b] {
        assert!(v["wall_time_ms"].is_number());
        v.as_object_mut().unwrap().remove("wall_time_ms");
    }
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(a["data"]["grid"].as_array().unwrap().len(), 32);
    assert!(a["data"]["grid"][0]["g"]["re"].is_number());
}

#[test]
fn asymmetric_report_and_collapse() {
    assert_eq!(run(&["causality", "report", "--x", "1.5", "--asymmetric"]).0, 0);
    assert_eq!(run(&["causality", "dualize", "--x", "0.8", "--t", "-1", "--r", "1", "--entry", "h"]).0, 0);
    assert_eq!(run(&["response", "collapse", "--a", "0.3", "--a-prime", "-0.4", "--lambda-over-z", "1.2"]).0, 0);
}

#[test]
fn report_written_to_file() {
    let dir = std::env::temp_dir().join(format!("lsi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("constraints.json");
    let (code, out, _) = run(&["verify", "constraints", "--format", "json", "--out", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["report"]["passed"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn criterion_subset_runs() {
    let (code, v) = json(&["verify", "all", "--criterion", "5", "--criterion", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"].as_array().unwrap().len(), 2);
}

const SCH1: [&str; 6] = ["X-1", "X0", "X1", "Y-1/2", "Y1/2", "M0"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mutated_generators_exit_one(i in 0usize..6, seq in any::<bool>()) {
        let mut args = vec!["verify", "algebra", "--id", "sch", "--mutate", SCH1[i]];
        if seq {
            args.push("--sequential");
        }
        prop_assert_eq!(run(&args).0, 1);
    }

    #[test]
    fn exact_bindings_keep_algebra_closed(p in -20i64..20, q in 1i64..9) {
        let b = format!("x={}/{}", p, q);
        prop_assert_eq!(run(&["verify", "algebra", "--id", "sch", "--bind", &b]).0, 0);
    }
}
