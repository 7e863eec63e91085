//! Dataflow and cost models for the reduce task.
//!
//! A reduce task runs four phases: shuffle (fetch one segment of each map
//! output, buffering small segments in memory and merging them into
//! on-disk shuffle files, or streaming large segments straight to disk),
//! sort/merge (a three-step fan-in-limited merge of the shuffle files and
//! any segments still in memory), reduce (user reduce function), and write
//! (reduce output to HDFS). Reduce and write costs are carried together by
//! the write phase; network transfer is accounted separately at job level.

use serde::{Deserialize, Serialize};

use crate::cost::CostVector;
use crate::error::ModelError;
use crate::merge_math::simulate_merge_plan;
use crate::params::EffectiveInputs;

/// One mapper's output partition destined for this reduce task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub compr_size: f64,
    pub uncompr_size: f64,
    pub pairs: f64,
}

/// Outcome of the shuffle phase for a single reduce task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShuffleOutcome {
    /// Compressed bytes fetched from all mappers.
    pub total_shuffle_size: f64,
    pub total_shuffle_pairs: f64,
    pub shuffle_buffer_size: f64,
    /// Buffered bytes that trigger an in-memory merge to disk.
    pub merge_size_threshold: f64,
    /// True when segments bypass the buffer and go straight to disk.
    pub case_two: bool,
    /// Segments merged into each shuffle file (1 in the straight-to-disk case).
    pub num_seg_in_shuffle_file: u64,
    pub shuffle_file_size: f64,
    pub shuffle_file_pairs: f64,
    pub num_shuffle_files: u64,
    /// Segments still buffered in memory when shuffling ends.
    pub num_segments_in_mem: u64,
    /// Background disk merges triggered while shuffle files pile up.
    pub num_shuffle_merges: u64,
    pub num_merged_shuffle_files: u64,
    pub num_unmerged_shuffle_files: u64,
    pub merged_shuffle_file_size: f64,
    pub merged_shuffle_file_pairs: f64,
    pub unmerged_shuffle_file_size: f64,
    pub unmerged_shuffle_file_pairs: f64,
    pub cost: CostVector,
}

/// Outcome of the three-step sort/merge phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SortOutcome {
    /// Memory the reducer leaves to buffered segments.
    pub max_segment_buffer: f64,
    pub curr_segment_buffer: f64,
    pub num_segments_evicted: u64,
    pub num_segments_remain_mem: u64,
    pub num_files_on_disk: u64,
    /// Disk files contributed by evicted segments: one merged file when
    /// few files are on disk, otherwise one file per evicted segment.
    pub num_files_from_mem: u64,
    pub files_from_mem_size: f64,
    pub files_from_mem_pairs: f64,
    pub files_to_merge_step2: u64,
    pub files_remain_from_step2: u64,
    pub files_to_merge_step3: u64,
    pub files_remain_from_step3: u64,
    pub step1_merging_size: f64,
    pub step1_merging_pairs: f64,
    pub step2_merging_size: f64,
    pub step2_merging_pairs: f64,
    pub step3_merging_size: f64,
    pub step3_merging_pairs: f64,
    pub total_merging_size: f64,
    pub cost: CostVector,
}

/// Dataflow through the reduce function and the HDFS write.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReduceWriteOutcome {
    pub in_reduce_size: f64,
    pub in_reduce_pairs: f64,
    pub out_reduce_size: f64,
    pub out_reduce_pairs: f64,
    /// Reduce input resident on disk (read once while reducing).
    pub in_reduce_disk_size: f64,
}

/// Per-phase cost vectors of one reduce task.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReducePhaseCosts {
    pub shuffle: CostVector,
    pub sort: CostVector,
    pub write: CostVector,
}

impl ReducePhaseCosts {
    pub fn total(&self) -> CostVector {
        self.shuffle + self.sort + self.write
    }

    pub fn entries(&self) -> [(&'static str, CostVector); 3] {
        [
            ("Shuffle", self.shuffle),
            ("Sort", self.sort),
            ("Write", self.write),
        ]
    }
}

/// Full estimate for a single reduce task (network transfer excluded).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReduceTaskEstimate {
    pub segment: SegmentSpec,
    pub shuffle: ShuffleOutcome,
    pub sort: SortOutcome,
    pub write: ReduceWriteOutcome,
    pub phases: ReducePhaseCosts,
    pub total: CostVector,
}

/// Partition one mapper's intermediate output across the reducers.
pub fn segment_spec(
    inputs: &EffectiveInputs,
    interm_data_size: f64,
    interm_data_pairs: f64,
) -> Result<SegmentSpec, ModelError> {
    let config = &inputs.config;
    if config.num_reducers == 0 {
        return Err(ModelError::MapOnlyJob { phase: "shuffle" });
    }
    let reducers = config.num_reducers as f64;
    let compr_size = interm_data_size / reducers;
    Ok(SegmentSpec {
        compr_size,
        uncompr_size: compr_size / inputs.profile.interm_compress_ratio,
        pairs: interm_data_pairs / reducers,
    })
}

/// Shuffle phase: fetch, buffer, and pre-merge the segments.
pub fn shuffle_phase(
    inputs: &EffectiveInputs,
    segment: &SegmentSpec,
) -> Result<ShuffleOutcome, ModelError> {
    let config = &inputs.config;
    let profile = &inputs.profile;
    let costs = &inputs.costs;

    if config.num_reducers == 0 {
        return Err(ModelError::MapOnlyJob { phase: "shuffle" });
    }

    let mappers = config.num_mappers;
    let total_shuffle_size = mappers as f64 * segment.compr_size;
    let total_shuffle_pairs = mappers as f64 * segment.pairs;

    let shuffle_buffer_size = config.shuffle_input_buffer_percent * config.task_mem_bytes;
    let merge_size_threshold = config.shuffle_merge_percent * shuffle_buffer_size;

    let case_two = segment.uncompr_size >= 0.25 * shuffle_buffer_size;

    let (num_seg_in_shuffle_file, shuffle_file_size, shuffle_file_pairs);
    let (num_shuffle_files, num_segments_in_mem);
    if case_two {
        num_seg_in_shuffle_file = 1;
        shuffle_file_size = segment.compr_size;
        shuffle_file_pairs = segment.pairs;
        num_shuffle_files = mappers;
        num_segments_in_mem = 0;
    } else {
        if segment.uncompr_size <= 0.0 {
            return Err(ModelError::EmptySegment);
        }
        let ratio = merge_size_threshold / segment.uncompr_size;
        let rounded = if ratio.ceil() * segment.uncompr_size <= shuffle_buffer_size {
            ratio.ceil()
        } else {
            ratio.floor()
        };
        // a shuffle file holds at least one segment even when the merge
        // threshold is below the segment size
        num_seg_in_shuffle_file = (rounded.max(1.0) as u64).min(config.inmem_merge_threshold);
        // the combiner runs in these in-memory merges (and only here)
        shuffle_file_size =
            num_seg_in_shuffle_file as f64 * segment.compr_size * profile.combine_size_selectivity;
        shuffle_file_pairs =
            num_seg_in_shuffle_file as f64 * segment.pairs * profile.combine_pairs_selectivity;
        num_shuffle_files = mappers / num_seg_in_shuffle_file;
        num_segments_in_mem = mappers % num_seg_in_shuffle_file;
    }

    let merge_trigger = 2 * config.sort_factor - 1;
    let num_shuffle_merges = if num_shuffle_files < merge_trigger {
        0
    } else {
        (num_shuffle_files - merge_trigger) / config.sort_factor + 1
    };
    let num_merged_shuffle_files = num_shuffle_merges;
    let merged_shuffle_file_size = config.sort_factor as f64 * shuffle_file_size;
    let merged_shuffle_file_pairs = config.sort_factor as f64 * shuffle_file_pairs;
    let num_unmerged_shuffle_files = num_shuffle_files - config.sort_factor * num_shuffle_merges;

    let io = num_shuffle_files as f64 * shuffle_file_size * costs.local_io
        + num_merged_shuffle_files as f64 * merged_shuffle_file_size * 2.0 * costs.local_io;

    let in_memory_merge_cpu = total_shuffle_size * costs.interm_uncompress_cpu
        + num_shuffle_files as f64 * shuffle_file_pairs * costs.merge_cpu
        + num_shuffle_files as f64 * shuffle_file_pairs * costs.combine_cpu
        + num_shuffle_files as f64
            * (shuffle_file_size / profile.interm_compress_ratio)
            * costs.interm_compress_cpu;
    let disk_merge_cpu = num_merged_shuffle_files as f64
        * (merged_shuffle_file_size * costs.interm_uncompress_cpu
            + merged_shuffle_file_pairs * costs.merge_cpu
            + merged_shuffle_file_size / profile.interm_compress_ratio * costs.interm_compress_cpu);
    let cpu = if case_two { 0.0 } else { in_memory_merge_cpu } + disk_merge_cpu;

    Ok(ShuffleOutcome {
        total_shuffle_size,
        total_shuffle_pairs,
        shuffle_buffer_size,
        merge_size_threshold,
        case_two,
        num_seg_in_shuffle_file,
        shuffle_file_size,
        shuffle_file_pairs,
        num_shuffle_files,
        num_segments_in_mem,
        num_shuffle_merges,
        num_merged_shuffle_files,
        num_unmerged_shuffle_files,
        merged_shuffle_file_size,
        merged_shuffle_file_pairs,
        unmerged_shuffle_file_size: shuffle_file_size,
        unmerged_shuffle_file_pairs: shuffle_file_pairs,
        cost: CostVector::new(io, cpu, 0.0),
    })
}

/// Sort/merge phase: evict buffered segments to honor the reducer input
/// buffer, merge the disk files in rounds, then merge everything (disk and
/// memory) into the stream fed to the reducer.
pub fn reduce_merge_phase(
    inputs: &EffectiveInputs,
    segment: &SegmentSpec,
    shuffle: &ShuffleOutcome,
) -> SortOutcome {
    let config = &inputs.config;
    let profile = &inputs.profile;
    let costs = &inputs.costs;

    // Step 1: evict segments that exceed the reducer input buffer.
    let max_segment_buffer = config.reducer_input_buffer_percent * config.task_mem_bytes;
    let curr_segment_buffer = shuffle.num_segments_in_mem as f64 * segment.uncompr_size;
    let num_segments_evicted = if curr_segment_buffer > max_segment_buffer {
        let evicted = ((curr_segment_buffer - max_segment_buffer) / segment.uncompr_size).ceil();
        // never more than are actually buffered (guards fp noise at exact fits)
        (evicted as u64).min(shuffle.num_segments_in_mem)
    } else {
        0
    };
    let num_segments_remain_mem = shuffle.num_segments_in_mem - num_segments_evicted;

    let num_files_on_disk = shuffle.num_merged_shuffle_files + shuffle.num_unmerged_shuffle_files;
    let (num_files_from_mem, files_from_mem_size, files_from_mem_pairs);
    let (step1_merging_size, step1_merging_pairs);
    if num_files_on_disk < config.sort_factor {
        // evicted segments merge into a single new shuffle file
        num_files_from_mem = 1;
        files_from_mem_size = num_segments_evicted as f64 * segment.compr_size;
        files_from_mem_pairs = num_segments_evicted as f64 * segment.pairs;
        step1_merging_size = files_from_mem_size;
        step1_merging_pairs = files_from_mem_pairs;
    } else {
        // evicted segments join the disk merge individually
        num_files_from_mem = num_segments_evicted;
        files_from_mem_size = segment.compr_size;
        files_from_mem_pairs = segment.pairs;
        step1_merging_size = 0.0;
        step1_merging_pairs = 0.0;
    }

    // Step 2: multi-round merge of the disk files. With nothing on disk,
    // files_to_merge_step2 is 1 and the formulas yield zero reads.
    let files_to_merge_step2 = num_files_on_disk + num_files_from_mem;
    let step2_plan = simulate_merge_plan(files_to_merge_step2, config.sort_factor)
        .expect("files_to_merge_step2 >= 1 and sort_factor >= 2");
    let disk_pool_size = shuffle.num_merged_shuffle_files as f64 * shuffle.merged_shuffle_file_size
        + shuffle.num_unmerged_shuffle_files as f64 * shuffle.unmerged_shuffle_file_size
        + num_files_from_mem as f64 * files_from_mem_size;
    let disk_pool_pairs = shuffle.num_merged_shuffle_files as f64
        * shuffle.merged_shuffle_file_pairs
        + shuffle.num_unmerged_shuffle_files as f64 * shuffle.unmerged_shuffle_file_pairs
        + num_files_from_mem as f64 * files_from_mem_pairs;
    // files differ in size, so merging cost is attributed proportionally
    let step2_fraction = step2_plan.interm_reads as f64 / files_to_merge_step2 as f64;
    let step2_merging_size = step2_fraction * disk_pool_size;
    let step2_merging_pairs = step2_fraction * disk_pool_pairs;
    let files_remain_from_step2 = step2_plan.final_merge_inputs;

    // Step 3: merge the remaining disk files with the in-memory segments.
    let files_to_merge_step3 = files_remain_from_step2 + num_segments_remain_mem;
    let step3_plan = simulate_merge_plan(files_to_merge_step3, config.sort_factor)
        .expect("files_to_merge_step3 >= 1 and sort_factor >= 2");
    let step3_fraction = step3_plan.interm_reads as f64 / files_to_merge_step3 as f64;
    let step3_merging_size = step3_fraction * shuffle.total_shuffle_size;
    let step3_merging_pairs = step3_fraction * shuffle.total_shuffle_pairs;
    let files_remain_from_step3 = step3_plan.final_merge_inputs;

    let total_merging_size = step1_merging_size + step2_merging_size + step3_merging_size;
    let total_merging_pairs = step1_merging_pairs + step2_merging_pairs + step3_merging_pairs;

    let io = total_merging_size * costs.local_io;
    let cpu = total_merging_pairs * costs.merge_cpu
        + total_merging_size / profile.interm_compress_ratio * costs.interm_compress_cpu
        + (step2_merging_size + step3_merging_size) * costs.interm_uncompress_cpu;

    SortOutcome {
        max_segment_buffer,
        curr_segment_buffer,
        num_segments_evicted,
        num_segments_remain_mem,
        num_files_on_disk,
        num_files_from_mem,
        files_from_mem_size,
        files_from_mem_pairs,
        files_to_merge_step2,
        files_remain_from_step2,
        files_to_merge_step3,
        files_remain_from_step3,
        step1_merging_size,
        step1_merging_pairs,
        step2_merging_size,
        step2_merging_pairs,
        step3_merging_size,
        step3_merging_pairs,
        total_merging_size,
        cost: CostVector::new(io, cpu, 0.0),
    }
}

/// Reduce + write phases: run the reduce function over the merged stream
/// and write its output to HDFS.
pub fn reduce_write_phase(
    inputs: &EffectiveInputs,
    segment: &SegmentSpec,
    shuffle: &ShuffleOutcome,
    sort: &SortOutcome,
) -> (ReduceWriteOutcome, CostVector) {
    let profile = &inputs.profile;
    let costs = &inputs.costs;

    let in_reduce_size = shuffle.num_shuffle_files as f64 * shuffle.shuffle_file_size
        / profile.interm_compress_ratio
        + shuffle.num_segments_in_mem as f64 * segment.compr_size / profile.interm_compress_ratio;
    let in_reduce_pairs = shuffle.num_shuffle_files as f64 * shuffle.shuffle_file_pairs
        + shuffle.num_segments_in_mem as f64 * segment.pairs;
    let out_reduce_size = in_reduce_size * profile.reduce_size_selectivity;
    let out_reduce_pairs = in_reduce_pairs * profile.reduce_pairs_selectivity;

    let in_reduce_disk_size = shuffle.num_merged_shuffle_files as f64
        * shuffle.merged_shuffle_file_size
        + shuffle.num_unmerged_shuffle_files as f64 * shuffle.unmerged_shuffle_file_size
        + sort.num_files_from_mem as f64 * sort.files_from_mem_size;

    let io = in_reduce_disk_size * costs.local_io
        + out_reduce_size * profile.output_compress_ratio * costs.hdfs_write;
    let cpu = in_reduce_pairs * costs.reduce_cpu
        + in_reduce_disk_size * costs.interm_uncompress_cpu
        + out_reduce_size * costs.output_compress_cpu;

    (
        ReduceWriteOutcome {
            in_reduce_size,
            in_reduce_pairs,
            out_reduce_size,
            out_reduce_pairs,
            in_reduce_disk_size,
        },
        CostVector::new(io, cpu, 0.0),
    )
}

/// Compose the phases into the estimate for one reduce task.
pub fn reduce_task_cost(
    inputs: &EffectiveInputs,
    interm_data_size: f64,
    interm_data_pairs: f64,
) -> Result<ReduceTaskEstimate, ModelError> {
    let segment = segment_spec(inputs, interm_data_size, interm_data_pairs)?;
    let shuffle = shuffle_phase(inputs, &segment)?;
    let sort = reduce_merge_phase(inputs, &segment, &shuffle);
    let (write, write_cost) = reduce_write_phase(inputs, &segment, &shuffle, &sort);
    let phases = ReducePhaseCosts {
        shuffle: shuffle.cost,
        sort: sort.cost,
        write: write_cost,
    };
    Ok(ReduceTaskEstimate {
        segment,
        shuffle,
        sort,
        write,
        phases,
        total: phases.total(),
    })
}
