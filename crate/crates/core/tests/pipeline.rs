//! Cross-module checks over randomized inputs: estimator invariants that
//! must hold for any valid configuration, differential what-if behavior,
//! and the merge simulation beyond the closed-form regime.

mod common;

use common::{oracle_merge, random_inputs, reference_triple, rel_err};
use mrcost_core::job_model::{analytic_job_cost, simulate_job, TaskKind};
use mrcost_core::merge_math::simulate_merge_plan;
use mrcost_core::optimizer::whatif;
use mrcost_core::params::{normalize, validate, PartialHadoopConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn estimates_are_finite_nonnegative_and_additive_for_any_valid_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..300 {
        let (config, profile, costs) = random_inputs(&mut rng);
        let inputs = normalize(&config, &profile, &costs);
        let est = analytic_job_cost(&inputs).unwrap();

        for (name, cost) in est.map_task.phases.entries() {
            assert!(
                cost.io >= 0.0 && cost.cpu >= 0.0 && cost.net == 0.0,
                "map {name} cost out of range in round {round}: {cost:?}"
            );
        }
        assert_eq!(est.map_task.total, est.map_task.phases.total());
        let flow = &est.map_task.dataflow;
        assert!(
            rel_err(flow.out_pair_width * flow.out_map_pairs, flow.out_map_size) <= 1e-9,
            "pair width inconsistent in round {round}"
        );

        let reduce = est.reduce_task.as_ref().unwrap();
        for (name, cost) in reduce.phases.entries() {
            assert!(
                cost.io >= 0.0 && cost.cpu >= 0.0 && cost.net == 0.0,
                "reduce {name} cost out of range in round {round}: {cost:?}"
            );
        }
        assert_eq!(reduce.total, reduce.phases.total());
        assert!(reduce.sort.files_remain_from_step3 <= config.sort_factor);
        assert_eq!(
            reduce.sort.num_segments_evicted + reduce.sort.num_segments_remain_mem,
            reduce.shuffle.num_segments_in_mem
        );
        if config.reducer_input_buffer_percent == 0.0 {
            assert_eq!(
                reduce.sort.num_segments_evicted,
                reduce.shuffle.num_segments_in_mem
            );
        }
        if !reduce.shuffle.case_two {
            assert_eq!(
                reduce.shuffle.num_shuffle_files * reduce.shuffle.num_seg_in_shuffle_file
                    + reduce.shuffle.num_segments_in_mem,
                config.num_mappers
            );
        }

        assert!(est.cost_job.is_finite());
        assert!(rel_err(est.cost_job, est.io_job + est.cpu_job + est.net_job) <= 1e-12);
        // combine selectivities are <= 1 in the generator, so records
        // written can only shrink after the spill
        assert!(est.map_task.num_rec_spilled >= est.map_task.interm_data_pairs - 1e-6);
    }
}

#[test]
fn simulated_timelines_pack_slots_without_overlap() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let (config, profile, costs) = random_inputs(&mut rng);
        let inputs = normalize(&config, &profile, &costs);
        let (est, timeline) = simulate_job(&inputs).unwrap();

        assert_eq!(
            timeline.events.len() as u64,
            config.num_mappers + config.num_reducers
        );
        let map_slots = config.num_nodes * config.max_maps_per_node;
        let reduce_slots = config.num_nodes * config.max_reduce_per_node;
        assert_eq!(timeline.map_waves, config.num_mappers.div_ceil(map_slots));
        assert_eq!(
            timeline.reduce_waves,
            config.num_reducers.div_ceil(reduce_slots)
        );

        for (kind, slots) in [(TaskKind::Map, map_slots), (TaskKind::Reduce, reduce_slots)] {
            for slot in 0..slots {
                let mut prev_end = f64::NEG_INFINITY;
                for event in timeline
                    .events
                    .iter()
                    .filter(|e| e.kind == kind && e.index % slots == slot)
                {
                    assert!(event.start_cost >= prev_end - 1e-9);
                    prev_end = event.end_cost;
                }
            }
        }
        for event in &timeline.events {
            if event.kind == TaskKind::Reduce {
                assert!(event.start_cost >= timeline.reduce_release_cost - 1e-9);
            }
        }
        assert!(timeline.makespan_cost >= est.net_job);
    }
}

#[test]
fn toggling_intermediate_compression_only_moves_compression_terms() {
    let (config, mut profile, costs) = reference_triple();
    profile.interm_compress_ratio = 0.5; // becomes effective only when toggled on
    let rows = whatif(
        &config,
        &profile,
        &costs,
        &[
            PartialHadoopConfig::default(),
            PartialHadoopConfig {
                compress_intermediate: Some(true),
                ..PartialHadoopConfig::default()
            },
        ],
    );
    let off = rows[0].outcome.as_ref().unwrap();
    let on = rows[1].outcome.as_ref().unwrap();

    // compression-independent phases are untouched
    assert_eq!(off.map_task.phases.read, on.map_task.phases.read);
    assert_eq!(off.map_task.dataflow, on.map_task.dataflow);

    // spill files shrink by the compression ratio and everything built on
    // them follows
    let spill_off = off.map_task.spill.unwrap();
    let spill_on = on.map_task.spill.unwrap();
    assert_eq!(spill_on.spill_file_size, 0.5 * spill_off.spill_file_size);
    assert_eq!(
        on.map_task.interm_data_size,
        0.5 * off.map_task.interm_data_size
    );
    assert_eq!(on.net_job, 0.5 * off.net_job);
    assert!(on.map_task.total.io < off.map_task.total.io);
    // decompression / recompression CPU appears only in the compressed row
    assert!(on.map_task.total.cpu > off.map_task.total.cpu);
    assert_ne!(off.cost_job, on.cost_job);
}

#[test]
fn merge_simulation_agrees_with_the_oracle_beyond_the_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..500 {
        let f = rng.gen_range(2..=16u64);
        let n = rng.gen_range(f * f + 1..=f * f * 8);
        let plan = simulate_merge_plan(n, f).unwrap();
        let oracle = oracle_merge(n, f);
        assert_eq!(plan.first_pass_count, oracle.first_pass, "n={n} f={f}");
        assert_eq!(plan.interm_reads, oracle.interm_reads, "n={n} f={f}");
        assert_eq!(plan.final_merge_inputs, oracle.final_inputs, "n={n} f={f}");
        assert_eq!(plan.pass_count, oracle.passes, "n={n} f={f}");
    }
}

#[test]
fn whatif_row_errors_do_not_poison_other_rows() {
    let (config, profile, costs) = reference_triple();
    let rows = whatif(
        &config,
        &profile,
        &costs,
        &[
            PartialHadoopConfig {
                spill_percent: Some(2.0),
                ..PartialHadoopConfig::default()
            },
            PartialHadoopConfig {
                num_reducers: Some(80),
                ..PartialHadoopConfig::default()
            },
        ],
    );
    assert!(rows[0].outcome.is_err());
    let ok = rows[1].outcome.as_ref().unwrap();
    assert!(ok.reduce_task.as_ref().unwrap().shuffle.num_shuffle_files > 0);
    assert!(
        validate(&config, &profile, &costs).is_empty(),
        "base stays valid"
    );
}
