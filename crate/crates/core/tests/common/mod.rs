//! Shared test support: an independent merge-policy oracle and randomized
//! input generators.

// each integration-test binary compiles this module separately and none
// uses every helper
#![allow(dead_code)]

use mrcost_core::params::{CostFactors, DataProfile, HadoopConfig, PartialHadoopConfig};
use rand::Rng;

pub const MIB: f64 = (1u64 << 20) as f64;

/// Merge plan computed by materializing the run queue, independent of the
/// closed forms in the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OraclePlan {
    pub first_pass: u64,
    pub interm_reads: u64,
    pub final_inputs: u64,
    pub passes: u64,
}

/// Brute-force merge-policy simulation.
///
/// Maintains an explicit queue of runs. The first pass merges just enough
/// runs that every later pass can take exactly `f`; intermediate passes
/// take the `f` oldest runs and append the merged result; once at most `f`
/// runs remain they form the final pass. The first-pass fan-in is derived
/// as ((n - 2) mod (f - 1)) + 2, an algebraically different route from the
/// library's branch-based formula.
pub fn oracle_merge(n: u64, f: u64) -> OraclePlan {
    assert!(n >= 1 && f >= 2);
    if n == 1 {
        return OraclePlan {
            first_pass: 1,
            interm_reads: 0,
            final_inputs: 1,
            passes: 0,
        };
    }
    if n <= f {
        return OraclePlan {
            first_pass: n,
            interm_reads: 0,
            final_inputs: n,
            passes: 1,
        };
    }

    let first_pass = (n - 2) % (f - 1) + 2;
    let mut queue: std::collections::VecDeque<u64> = (0..n).collect();
    let mut next_run_id = n;
    let mut interm_reads = 0u64;
    let mut passes = 0u64;

    let mut merge_front = |queue: &mut std::collections::VecDeque<u64>, take: u64| {
        for _ in 0..take {
            queue.pop_front().expect("queue holds enough runs");
        }
        queue.push_back(next_run_id);
        next_run_id += 1;
    };

    merge_front(&mut queue, first_pass);
    interm_reads += first_pass;
    passes += 1;

    while queue.len() as u64 > f {
        merge_front(&mut queue, f);
        interm_reads += f;
        passes += 1;
    }

    OraclePlan {
        first_pass,
        interm_reads,
        final_inputs: queue.len() as u64,
        passes: passes + 1,
    }
}

pub fn rel_err(actual: f64, expected: f64) -> f64 {
    let scale = expected.abs().max(actual.abs()).max(1e-300);
    (actual - expected).abs() / scale
}

pub fn assert_rel_close(actual: f64, expected: f64, tol: f64, what: &str) {
    let err = rel_err(actual, expected);
    assert!(
        err <= tol,
        "{what}: expected {expected}, got {actual} (relative error {err:.3e} > {tol:.0e})"
    );
}

pub fn scale_costs(costs: &CostFactors, k: f64) -> CostFactors {
    CostFactors {
        hdfs_read: costs.hdfs_read * k,
        hdfs_write: costs.hdfs_write * k,
        local_io: costs.local_io * k,
        network: costs.network * k,
        map_cpu: costs.map_cpu * k,
        reduce_cpu: costs.reduce_cpu * k,
        combine_cpu: costs.combine_cpu * k,
        partition_cpu: costs.partition_cpu * k,
        serde_cpu: costs.serde_cpu * k,
        sort_cpu: costs.sort_cpu * k,
        merge_cpu: costs.merge_cpu * k,
        input_uncompress_cpu: costs.input_uncompress_cpu * k,
        interm_uncompress_cpu: costs.interm_uncompress_cpu * k,
        interm_compress_cpu: costs.interm_compress_cpu * k,
        output_compress_cpu: costs.output_compress_cpu * k,
    }
}

/// The end-to-end reference configuration: stock defaults on a 10-node
/// cluster, 400 mappers, 40 reducers, 64 MiB splits of 128-byte pairs, no
/// combine or compression, unit cost factors.
pub fn reference_triple() -> (HadoopConfig, DataProfile, CostFactors) {
    let config = mrcost_core::apply_defaults(&PartialHadoopConfig {
        num_nodes: Some(10),
        num_mappers: Some(400),
        num_reducers: Some(40),
        split_size_bytes: Some(64.0 * MIB),
        ..PartialHadoopConfig::default()
    })
    .expect("required fields set");
    let profile = DataProfile {
        input_pair_width: 128.0,
        map_size_selectivity: 1.0,
        map_pairs_selectivity: 1.0,
        reduce_size_selectivity: 1.0,
        reduce_pairs_selectivity: 1.0,
        combine_size_selectivity: 1.0,
        combine_pairs_selectivity: 1.0,
        input_compress_ratio: 1.0,
        interm_compress_ratio: 1.0,
        output_compress_ratio: 1.0,
    };
    (config, profile, unit_costs())
}

pub fn unit_costs() -> CostFactors {
    CostFactors {
        hdfs_read: 1.0,
        hdfs_write: 1.0,
        local_io: 1.0,
        network: 1.0,
        map_cpu: 1.0,
        reduce_cpu: 1.0,
        combine_cpu: 1.0,
        partition_cpu: 1.0,
        serde_cpu: 1.0,
        sort_cpu: 1.0,
        merge_cpu: 1.0,
        input_uncompress_cpu: 1.0,
        interm_uncompress_cpu: 1.0,
        interm_compress_cpu: 1.0,
        output_compress_cpu: 1.0,
    }
}

/// Random valid inputs spanning both shuffle cases, multi-spill maps, disk
/// merges, and all feature switches. Avoids the degenerate corners the
/// models reject (empty map output, sub-pair sort buffers).
pub fn random_inputs(rng: &mut impl Rng) -> (HadoopConfig, DataProfile, CostFactors) {
    let config = HadoopConfig {
        num_nodes: rng.gen_range(1..=64),
        task_mem_bytes: rng.gen_range(32.0..=1024.0) * MIB,
        max_maps_per_node: rng.gen_range(1..=8),
        max_reduce_per_node: rng.gen_range(1..=8),
        num_mappers: rng.gen_range(1..=2000),
        num_reducers: rng.gen_range(1..=128),
        sort_mb: rng.gen_range(8.0..=512.0),
        spill_percent: rng.gen_range(0.2..=1.0),
        sort_record_percent: rng.gen_range(0.01..=0.5),
        sort_factor: rng.gen_range(2..=50),
        min_spills_for_combine: rng.gen_range(1..=5),
        inmem_merge_threshold: rng.gen_range(1..=2000),
        shuffle_input_buffer_percent: rng.gen_range(0.0..=1.0),
        shuffle_merge_percent: rng.gen_range(0.0..=1.0),
        reducer_input_buffer_percent: rng.gen_range(0.0..=1.0),
        use_combine: rng.gen_bool(0.5),
        compress_intermediate: rng.gen_bool(0.5),
        compress_output: rng.gen_bool(0.5),
        compress_input: rng.gen_bool(0.5),
        reduce_slowstart: rng.gen_range(0.0..=1.0),
        split_size_bytes: rng.gen_range(1.0..=512.0) * MIB,
    };
    let profile = DataProfile {
        input_pair_width: rng.gen_range(8.0..=4096.0),
        map_size_selectivity: rng.gen_range(0.05..=2.0),
        map_pairs_selectivity: rng.gen_range(0.05..=2.0),
        reduce_size_selectivity: rng.gen_range(0.0..=2.0),
        reduce_pairs_selectivity: rng.gen_range(0.0..=2.0),
        combine_size_selectivity: rng.gen_range(0.1..=1.0),
        combine_pairs_selectivity: rng.gen_range(0.1..=1.0),
        input_compress_ratio: rng.gen_range(0.2..=1.0),
        interm_compress_ratio: rng.gen_range(0.2..=1.0),
        output_compress_ratio: rng.gen_range(0.2..=1.0),
    };
    let costs = CostFactors {
        hdfs_read: rng.gen_range(0.0..=4.0),
        hdfs_write: rng.gen_range(0.0..=4.0),
        local_io: rng.gen_range(0.0..=4.0),
        network: rng.gen_range(0.0..=4.0),
        map_cpu: rng.gen_range(0.0..=4.0),
        reduce_cpu: rng.gen_range(0.0..=4.0),
        combine_cpu: rng.gen_range(0.0..=4.0),
        partition_cpu: rng.gen_range(0.0..=4.0),
        serde_cpu: rng.gen_range(0.0..=4.0),
        sort_cpu: rng.gen_range(0.0..=4.0),
        merge_cpu: rng.gen_range(0.0..=4.0),
        input_uncompress_cpu: rng.gen_range(0.0..=4.0),
        interm_uncompress_cpu: rng.gen_range(0.0..=4.0),
        interm_compress_cpu: rng.gen_range(0.0..=4.0),
        output_compress_cpu: rng.gen_range(0.0..=4.0),
    };
    (config, profile, costs)
}

/// Random valid inputs whose byte/pair quantities stay exactly
/// representable: powers of two and small dyadic fractions everywhere a
/// value enters the dataflow arithmetic. Combine and compression are off.
/// Used for the conservation checks, where pair equality must be exact.
pub fn random_dyadic_inputs(rng: &mut impl Rng) -> (HadoopConfig, DataProfile, CostFactors) {
    let spill_choices = [0.25, 0.5, 0.75, 1.0];
    let rec_choices = [0.0625, 0.125, 0.25, 0.5];
    let buf_choices = [0.0, 0.25, 0.5, 1.0];
    let config = HadoopConfig {
        num_nodes: rng.gen_range(1..=64),
        // small memories push big segments into the straight-to-disk case
        task_mem_bytes: (1u64 << rng.gen_range(23..=29)) as f64,
        max_maps_per_node: rng.gen_range(1..=8),
        max_reduce_per_node: rng.gen_range(1..=8),
        num_mappers: rng.gen_range(1..=3000),
        num_reducers: 1 << rng.gen_range(0..=6),
        sort_mb: (1u64 << rng.gen_range(4..=8)) as f64,
        spill_percent: spill_choices[rng.gen_range(0..spill_choices.len())],
        sort_record_percent: rec_choices[rng.gen_range(0..rec_choices.len())],
        sort_factor: rng.gen_range(2..=20),
        min_spills_for_combine: 3,
        inmem_merge_threshold: rng.gen_range(1..=1024),
        shuffle_input_buffer_percent: rng.gen_range(0.0..=1.0),
        shuffle_merge_percent: rng.gen_range(0.0..=1.0),
        reducer_input_buffer_percent: buf_choices[rng.gen_range(0..buf_choices.len())],
        use_combine: false,
        compress_intermediate: false,
        compress_output: false,
        compress_input: false,
        reduce_slowstart: 0.05,
        split_size_bytes: rng.gen_range(1..=256u64) as f64 * MIB,
    };
    let profile = DataProfile {
        input_pair_width: (1u64 << rng.gen_range(3..=10)) as f64,
        map_size_selectivity: rng.gen_range(1..=32u32) as f64 / 16.0,
        map_pairs_selectivity: rng.gen_range(1..=32u32) as f64 / 16.0,
        reduce_size_selectivity: rng.gen_range(0.0..=2.0),
        reduce_pairs_selectivity: rng.gen_range(0.0..=2.0),
        combine_size_selectivity: 1.0,
        combine_pairs_selectivity: 1.0,
        input_compress_ratio: 1.0,
        interm_compress_ratio: 1.0,
        output_compress_ratio: 1.0,
    };
    (config, profile, unit_costs())
}
