//! Benchmark fixtures: ready-made model inputs at several job sizes.

use mrcost_core::params::{
    apply_defaults, normalize, CostFactors, DataProfile, EffectiveInputs, PartialHadoopConfig,
};

const MIB: f64 = (1u64 << 20) as f64;

/// Inputs for a `mappers`-task job on a 10-node cluster with stock
/// defaults, identity selectivities, and unit cost factors.
pub fn job_inputs(mappers: u64, reducers: u64) -> EffectiveInputs {
    let config = apply_defaults(&PartialHadoopConfig {
        num_nodes: Some(10),
        num_mappers: Some(mappers),
        num_reducers: Some(reducers),
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
    let costs = CostFactors {
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
    };
    normalize(&config, &profile, &costs)
}
