//! Shared inputs for unit tests: a 10-node cluster running 400 mappers and
//! 40 reducers over 64 MiB splits of 128-byte pairs, with stock defaults,
//! identity selectivities, no compression or combine, and unit cost factors.

use crate::params::{
    apply_defaults, normalize, CostFactors, DataProfile, EffectiveInputs, HadoopConfig,
    PartialHadoopConfig,
};

pub(crate) fn base_config() -> HadoopConfig {
    apply_defaults(&PartialHadoopConfig {
        num_nodes: Some(10),
        num_mappers: Some(400),
        num_reducers: Some(40),
        split_size_bytes: Some(64.0 * (1u64 << 20) as f64),
        ..PartialHadoopConfig::default()
    })
    .expect("required fields are set")
}

pub(crate) fn identity_profile() -> DataProfile {
    DataProfile {
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
    }
}

pub(crate) fn unit_costs() -> CostFactors {
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

pub(crate) fn zero_costs() -> CostFactors {
    CostFactors {
        hdfs_read: 0.0,
        hdfs_write: 0.0,
        local_io: 0.0,
        network: 0.0,
        map_cpu: 0.0,
        reduce_cpu: 0.0,
        combine_cpu: 0.0,
        partition_cpu: 0.0,
        serde_cpu: 0.0,
        sort_cpu: 0.0,
        merge_cpu: 0.0,
        input_uncompress_cpu: 0.0,
        interm_uncompress_cpu: 0.0,
        interm_compress_cpu: 0.0,
        output_compress_cpu: 0.0,
    }
}

pub(crate) fn scenario_inputs() -> EffectiveInputs {
    normalize(&base_config(), &identity_profile(), &unit_costs())
}

/// Relative closeness check for oracle comparisons.
pub(crate) fn assert_rel_close(actual: f64, expected: f64, tol: f64) {
    let scale = expected.abs().max(actual.abs()).max(1e-300);
    let rel = (actual - expected).abs() / scale;
    assert!(
        rel <= tol,
        "expected {expected}, got {actual} (relative error {rel:.3e} > {tol:.0e})"
    );
}
