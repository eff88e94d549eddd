use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use satfarey::distribution::convergence_report;
use satfarey::gap::empirical::enumerate_h_all;
use satfarey::gap::theory::{c2, QuadConfig};
use satfarey::monoid::count_s_q_below;
use satfarey::verify::check_unimodular;
use satfarey::{Exec, Fraction};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn runs(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_h_all_q2000");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| enumerate_h_all(2000, 4, 10.0, exec).unwrap()));
    }
    g.finish();
}

fn unimodular(c: &mut Criterion) {
    let mut g = c.benchmark_group("unimodular_sweep_q400");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| check_unimodular(400, exec).unwrap().unwrap()));
    }
    g.finish();
}

fn counts(c: &mut Criterion) {
    let qs = [500, 1000, 2000, 4000];
    let betas = [Fraction::new(1, 2).unwrap(), Fraction::ONE];
    let mut g = c.benchmark_group("convergence_report");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| convergence_report(&qs, &betas, exec).unwrap()));
    }
    g.finish();
    let mut g = c.benchmark_group("monoid_count_q4000");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| count_s_q_below(4000, Fraction::new(1, 2).unwrap(), exec).unwrap())
        });
    }
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    let mut g = c.benchmark_group("c2_eta8");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = QuadConfig::default().with_exec(exec);
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| c2(8.0, &cfg)));
    }
    g.finish();
}

criterion_group!(benches, runs, unimodular, counts, quadrature);
criterion_main!(benches);
