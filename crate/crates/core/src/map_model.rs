//! Dataflow and cost models for the map task.
//!
//! A map task runs five phases: read (pull the split from HDFS and
//! decompress), map (user map function), collect (serialize and partition
//! into the sort buffer), spill (sort, combine, compress, write sorted runs
//! to local disk), and merge (fan-in-limited merging of the spill files
//! into one map output file). For a map-only job the spill/merge phases are
//! replaced by a direct HDFS write.
//!
//! Cost accounting folds the map-function CPU into the read phase and the
//! collect CPU into the spill phase, so those two entries carry the whole
//! cost of their pair of phases.

use serde::{Deserialize, Serialize};

use crate::cost::CostVector;
use crate::error::ModelError;
use crate::merge_math::{simulate_merge_plan, MergePlan};
use crate::params::EffectiveInputs;

const MIB: f64 = (1u64 << 20) as f64;
/// Bytes of accounting metadata kept per pair in the sort buffer.
const ACCOUNTING_BYTES_PER_PAIR: f64 = 16.0;

/// Byte/pair flow through the read and map phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapDataflow {
    /// Uncompressed split size fed to the mapper.
    pub input_map_size: f64,
    pub input_map_pairs: f64,
    pub out_map_size: f64,
    pub out_map_pairs: f64,
    /// Average width of a map output pair; 0 when the mapper emits nothing.
    pub out_pair_width: f64,
}

/// Sort-buffer geometry and the resulting spill files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpillSpec {
    /// Pair capacity of the serialization part of the sort buffer.
    pub max_ser_pairs: u64,
    /// Pair capacity of the accounting part of the sort buffer.
    pub max_acc_pairs: u64,
    /// Pairs buffered before each spill.
    pub spill_buffer_pairs: f64,
    /// Bytes buffered before each spill.
    pub spill_buffer_size: f64,
    pub num_spills: u64,
    /// On-disk size of one spill file (after combine and compression).
    pub spill_file_size: f64,
    pub spill_file_pairs: f64,
}

/// Result of merging the spill files into the final map output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapMergeOutcome {
    pub plan: MergePlan,
    /// Whether the combiner runs again in the final merge pass.
    pub use_combine_in_merge: bool,
    /// Size of the final map output file on local disk.
    pub interm_data_size: f64,
    pub interm_data_pairs: f64,
    /// Total records written to disk across spill and merge activity
    /// (diagnostic; consumed by no downstream formula).
    pub num_rec_spilled: f64,
}

/// Per-phase cost vectors of one map task.
///
/// The `map` and `collect` entries are always zero: their costs are carried
/// by `read` and `spill` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MapPhaseCosts {
    pub read: CostVector,
    pub map: CostVector,
    pub collect: CostVector,
    pub spill: CostVector,
    pub merge: CostVector,
    pub map_write: CostVector,
}

impl MapPhaseCosts {
    pub fn total(&self) -> CostVector {
        self.read + self.map + self.collect + self.spill + self.merge + self.map_write
    }

    /// Phase name/cost pairs in execution order, for reporting.
    pub fn entries(&self) -> [(&'static str, CostVector); 6] {
        [
            ("Read", self.read),
            ("Map", self.map),
            ("Collect", self.collect),
            ("Spill", self.spill),
            ("Merge", self.merge),
            ("MapWrite", self.map_write),
        ]
    }
}

/// Full estimate for a single map task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapTaskEstimate {
    pub dataflow: MapDataflow,
    /// Absent for map-only jobs (no spill phase runs).
    pub spill: Option<SpillSpec>,
    /// Absent for map-only jobs and single-spill tasks (no merge happens).
    pub merge_plan: Option<MergePlan>,
    pub use_combine_in_merge: bool,
    /// Size/pairs of the intermediate output offered to the shuffle;
    /// zero for map-only jobs, whose output goes straight to HDFS.
    pub interm_data_size: f64,
    pub interm_data_pairs: f64,
    pub num_rec_spilled: f64,
    pub phases: MapPhaseCosts,
    pub total: CostVector,
}

/// Read + map phases: split ingestion, decompression, pair creation, and
/// the user map function.
pub fn read_map_phase(inputs: &EffectiveInputs) -> (MapDataflow, CostVector) {
    let config = &inputs.config;
    let profile = &inputs.profile;
    let costs = &inputs.costs;

    let input_map_size = config.split_size_bytes / profile.input_compress_ratio;
    let input_map_pairs = input_map_size / profile.input_pair_width;
    let out_map_size = input_map_size * profile.map_size_selectivity;
    let out_map_pairs = input_map_pairs * profile.map_pairs_selectivity;
    let out_pair_width = if out_map_pairs > 0.0 {
        out_map_size / out_map_pairs
    } else {
        0.0
    };

    let cost = CostVector::new(
        config.split_size_bytes * costs.hdfs_read,
        config.split_size_bytes * costs.input_uncompress_cpu + input_map_pairs * costs.map_cpu,
        0.0,
    );

    (
        MapDataflow {
            input_map_size,
            input_map_pairs,
            out_map_size,
            out_map_pairs,
            out_pair_width,
        },
        cost,
    )
}

/// Direct HDFS write of the map output; only exists for map-only jobs.
pub fn map_write_phase(
    inputs: &EffectiveInputs,
    dataflow: &MapDataflow,
) -> Result<CostVector, ModelError> {
    if inputs.config.num_reducers > 0 {
        return Err(ModelError::NotMapOnly);
    }
    let profile = &inputs.profile;
    let costs = &inputs.costs;
    Ok(CostVector::new(
        dataflow.out_map_size * profile.output_compress_ratio * costs.hdfs_write,
        dataflow.out_map_size * costs.output_compress_cpu,
        0.0,
    ))
}

/// Collect + spill phases: buffer geometry, spill count, and the cost of
/// partitioning, serializing, sorting, combining, compressing, and writing
/// every spill. The final partial spill is costed as a full buffer.
pub fn collect_spill_phase(
    inputs: &EffectiveInputs,
    dataflow: &MapDataflow,
) -> Result<(SpillSpec, CostVector), ModelError> {
    let config = &inputs.config;
    let profile = &inputs.profile;
    let costs = &inputs.costs;

    if config.num_reducers == 0 {
        return Err(ModelError::MapOnlyJob {
            phase: "collect/spill",
        });
    }
    if dataflow.out_map_pairs <= 0.0 {
        return Err(ModelError::NoMapOutput);
    }

    let sort_buffer_bytes = config.sort_mb * MIB;
    let max_ser_pairs =
        (sort_buffer_bytes * (1.0 - config.sort_record_percent) * config.spill_percent
            / dataflow.out_pair_width)
            .floor();
    let max_acc_pairs = (sort_buffer_bytes * config.sort_record_percent * config.spill_percent
        / ACCOUNTING_BYTES_PER_PAIR)
        .floor();

    let spill_buffer_pairs = max_ser_pairs.min(max_acc_pairs).min(dataflow.out_map_pairs);
    if spill_buffer_pairs < 1.0 {
        return Err(ModelError::SortBufferTooSmall);
    }
    let spill_buffer_size = spill_buffer_pairs * dataflow.out_pair_width;
    let num_spills = (dataflow.out_map_pairs / spill_buffer_pairs).ceil() as u64;

    let spill_file_pairs = spill_buffer_pairs * profile.combine_pairs_selectivity;
    let spill_file_size =
        spill_buffer_size * profile.combine_size_selectivity * profile.interm_compress_ratio;

    // Partitions smaller than one buffer would make the sort term negative;
    // clamp the comparison count at one binary split.
    let sort_comparisons = (spill_buffer_pairs / config.num_reducers as f64)
        .max(2.0)
        .log2();

    let io = num_spills as f64 * spill_file_size * costs.local_io;
    let cpu = num_spills as f64
        * (spill_buffer_pairs * costs.partition_cpu
            + spill_buffer_pairs * costs.serde_cpu
            + spill_buffer_pairs * sort_comparisons * costs.sort_cpu
            + spill_buffer_pairs * costs.combine_cpu
            + spill_buffer_size * profile.combine_size_selectivity * costs.interm_compress_cpu);

    Ok((
        SpillSpec {
            max_ser_pairs: max_ser_pairs as u64,
            max_acc_pairs: max_acc_pairs as u64,
            spill_buffer_pairs,
            spill_buffer_size,
            num_spills,
            spill_file_size,
            spill_file_pairs,
        },
        CostVector::new(io, cpu, 0.0),
    ))
}

/// Merge phase: fan-in-limited merging of the spill files into the final
/// map output. With a single spill file nothing merges and the spill file
/// is the output.
pub fn map_merge_phase(
    inputs: &EffectiveInputs,
    spill: &SpillSpec,
) -> (MapMergeOutcome, CostVector) {
    let config = &inputs.config;
    let profile = &inputs.profile;
    let costs = &inputs.costs;

    let plan = simulate_merge_plan(spill.num_spills, config.sort_factor)
        .expect("validated inputs give num_spills >= 1 and sort_factor >= 2");

    let use_combine_in_merge = spill.num_spills > 1
        && config.use_combine
        && plan.final_merge_inputs >= config.min_spills_for_combine;

    let num_spills = spill.num_spills as f64;
    let num_rec_spilled = spill.spill_file_pairs
        * (num_spills + plan.interm_reads as f64 + num_spills * profile.combine_pairs_selectivity);

    if spill.num_spills == 1 {
        let outcome = MapMergeOutcome {
            plan,
            use_combine_in_merge: false,
            interm_data_size: spill.spill_file_size,
            interm_data_pairs: spill.spill_file_pairs,
            num_rec_spilled,
        };
        return (outcome, CostVector::ZERO);
    }

    let merge_size_factor = if use_combine_in_merge {
        profile.combine_size_selectivity
    } else {
        1.0
    };
    let merge_pairs_factor = if use_combine_in_merge {
        profile.combine_pairs_selectivity
    } else {
        1.0
    };
    let interm_data_size = num_spills * spill.spill_file_size * merge_size_factor;
    let interm_data_pairs = num_spills * spill.spill_file_pairs * merge_pairs_factor;

    let interm_reads = plan.interm_reads as f64;
    let io = (2.0 * interm_reads + num_spills) * spill.spill_file_size * costs.local_io
        + interm_data_size * costs.local_io;
    let cpu = interm_reads
        * (spill.spill_file_size * costs.interm_uncompress_cpu
            + spill.spill_file_pairs * costs.merge_cpu
            + spill.spill_file_size / profile.interm_compress_ratio * costs.interm_compress_cpu)
        + num_spills
            * (spill.spill_file_size * costs.interm_uncompress_cpu
                + spill.spill_file_pairs * costs.merge_cpu
                + spill.spill_file_pairs * costs.combine_cpu)
        + interm_data_size / profile.interm_compress_ratio * costs.interm_compress_cpu;

    (
        MapMergeOutcome {
            plan,
            use_combine_in_merge,
            interm_data_size,
            interm_data_pairs,
            num_rec_spilled,
        },
        CostVector::new(io, cpu, 0.0),
    )
}

/// Compose the phases into the estimate for one map task.
pub fn map_task_cost(inputs: &EffectiveInputs) -> Result<MapTaskEstimate, ModelError> {
    let (dataflow, read_cost) = read_map_phase(inputs);

    if inputs.config.num_reducers == 0 {
        let write_cost = map_write_phase(inputs, &dataflow)?;
        let phases = MapPhaseCosts {
            read: read_cost,
            map_write: write_cost,
            ..MapPhaseCosts::default()
        };
        return Ok(MapTaskEstimate {
            dataflow,
            spill: None,
            merge_plan: None,
            use_combine_in_merge: false,
            interm_data_size: 0.0,
            interm_data_pairs: 0.0,
            num_rec_spilled: 0.0,
            phases,
            total: phases.total(),
        });
    }

    let (spill, spill_cost) = collect_spill_phase(inputs, &dataflow)?;
    let (merge, merge_cost) = map_merge_phase(inputs, &spill);
    let phases = MapPhaseCosts {
        read: read_cost,
        spill: spill_cost,
        merge: merge_cost,
        ..MapPhaseCosts::default()
    };
    Ok(MapTaskEstimate {
        dataflow,
        merge_plan: (spill.num_spills > 1).then_some(merge.plan),
        spill: Some(spill),
        use_combine_in_merge: merge.use_combine_in_merge,
        interm_data_size: merge.interm_data_size,
        interm_data_pairs: merge.interm_data_pairs,
        num_rec_spilled: merge.num_rec_spilled,
        phases,
        total: phases.total(),
    })
}
