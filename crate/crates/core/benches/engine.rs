use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lsi_core::causality::{causality_report, ContourSpec, DualizationTask};
use lsi_core::liealg::{build_representation, central_extension_table, expected_table, jacobi_check, verify_structure};
use lsi_core::ward::cases::verify_case;
use lsi_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn structure(c: &mut Criterion) {
    let rep = build_representation("sv", 1, (-4, 4)).unwrap();
    let table = expected_table(&rep);
    let mut g = c.benchmark_group("verify_structure sv(1)");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| verify_structure(&rep, &table, exec)));
    }
    g.finish();
}

fn jacobi(c: &mut Criterion) {
    let table = central_extension_table((-3, 3));
    let mut g = c.benchmark_group("jacobi two-charge");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| jacobi_check(&table, exec)));
    }
    g.finish();
}

fn ward(c: &mut Criterion) {
    let mut g = c.benchmark_group("ward log-sch-dual-symmetric");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| verify_case("log-sch-dual-symmetric", exec).unwrap()));
    }
    g.finish();
}

fn causality(c: &mut Criterion) {
    let task = DualizationTask::symmetric(0.8, 0.3);
    let spec = ContourSpec::default();
    let mut g = c.benchmark_group("causality_report");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| causality_report(&task, &spec, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, structure, jacobi, ward, causality);
criterion_main!(benches);
