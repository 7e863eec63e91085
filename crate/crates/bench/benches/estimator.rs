use criterion::{black_box, criterion_group, criterion_main, Criterion};
use mrcost_bench::job_inputs;
use mrcost_core::job_model::{analytic_job_cost, simulate_job};
use mrcost_core::map_model::map_task_cost;
use mrcost_core::merge_math::simulate_merge_plan;
use mrcost_core::optimizer::{optimize, ParameterSpace, SearchMethod};
use mrcost_core::params::normalize;

fn merge_math(c: &mut Criterion) {
    let mut group = c.benchmark_group("merge_math");
    group.bench_function("closed_form_n90_f10", |b| {
        b.iter(|| simulate_merge_plan(black_box(90), black_box(10)).unwrap())
    });
    group.bench_function("simulated_n10000_f10", |b| {
        b.iter(|| simulate_merge_plan(black_box(10_000), black_box(10)).unwrap())
    });
    group.finish();
}

fn task_models(c: &mut Criterion) {
    let inputs = job_inputs(400, 40);
    c.bench_function("map_task_cost", |b| {
        b.iter(|| map_task_cost(black_box(&inputs)).unwrap())
    });
    c.bench_function("analytic_job_cost", |b| {
        b.iter(|| analytic_job_cost(black_box(&inputs)).unwrap())
    });
}

fn simulator(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate_job");
    for mappers in [400u64, 4000] {
        let inputs = job_inputs(mappers, mappers / 10);
        group.bench_function(format!("{mappers}_maps"), |b| {
            b.iter(|| simulate_job(black_box(&inputs)).unwrap())
        });
    }
    group.finish();
}

fn grid_search(c: &mut Criterion) {
    let inputs = job_inputs(400, 40);
    let space = ParameterSpace::from_json_str(
        r#"{"pNumReducers": [10, 20, 40, 80], "pSortFactor": [5, 10, 20, 50], "pSortMB": [50, 100, 200]}"#,
    )
    .unwrap();
    // optimize re-normalizes per point, so hand it the raw triple
    let raw = normalize(&inputs.config, &inputs.profile, &inputs.costs);
    c.bench_function("optimize_48_point_grid", |b| {
        b.iter(|| {
            optimize(
                black_box(&raw.config),
                &raw.profile,
                &raw.costs,
                &space,
                SearchMethod::Grid,
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, merge_math, task_models, simulator, grid_search);
criterion_main!(benches);
