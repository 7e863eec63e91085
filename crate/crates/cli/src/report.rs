//! Report rendering: human-readable tables and the machine-readable JSON
//! document.
//!
//! The machine document reuses the job-spec layout (`hadoop`, `profile`,
//! `costs`, optional `unit`) with the resolved configuration, extended
//! with a `results` section, so an emitted report re-parses as a valid job
//! spec. Human tables round to 6 significant digits; machine output keeps
//! full precision.

use std::fmt::Write as _;

use mrcost_core::job_model::{JobEstimate, SimTimeline};
use mrcost_core::optimizer::{SearchResult, WhatIfRow};
use mrcost_core::params::{CostFactors, DataProfile, HadoopConfig};
use mrcost_core::CostVector;
use serde::Serialize;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct ReportMeta<'a> {
    pub spec_path: &'a str,
    pub unit: &'a str,
}

/// Round to 6 significant digits for the human tables.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // round in decimal space so powers of ten stay clean
    let scientific = format!("{x:.5e}");
    if x.abs() >= 1e15 || x.abs() < 1e-4 {
        scientific
    } else {
        let rounded: f64 = scientific.parse().expect("scientific notation parses");
        format!("{rounded}")
    }
}

fn push_row(out: &mut String, label: &str, value: impl AsRef<str>, unit: &str) {
    let _ = writeln!(out, "  {:<22} {:>16} {}", label, value.as_ref(), unit);
}

fn push_cost_row(out: &mut String, label: &str, cost: CostVector) {
    let _ = writeln!(
        out,
        "  {:<10} {:>14} {:>14} {:>14} {:>14}",
        label,
        sig6(cost.io),
        sig6(cost.cpu),
        sig6(cost.net),
        sig6(cost.total())
    );
}

fn cost_header(out: &mut String) {
    let _ = writeln!(
        out,
        "  {:<10} {:>14} {:>14} {:>14} {:>14}",
        "phase", "io", "cpu", "net", "total"
    );
}

/// Render the full per-phase estimate as aligned text tables.
pub fn render_estimate(
    estimate: &JobEstimate,
    timeline: Option<&SimTimeline>,
    meta: &ReportMeta<'_>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "MapReduce job cost estimate ({})", estimate.method);
    let _ = writeln!(
        out,
        "spec: {}  tool: mrcost {}  costs in {}",
        meta.spec_path, TOOL_VERSION, meta.unit
    );

    let map = &estimate.map_task;
    let _ = writeln!(out, "\nMap task dataflow");
    push_row(
        &mut out,
        "inputMapSize",
        sig6(map.dataflow.input_map_size),
        "bytes",
    );
    push_row(
        &mut out,
        "inputMapPairs",
        sig6(map.dataflow.input_map_pairs),
        "pairs",
    );
    push_row(
        &mut out,
        "outMapSize",
        sig6(map.dataflow.out_map_size),
        "bytes",
    );
    push_row(
        &mut out,
        "outMapPairs",
        sig6(map.dataflow.out_map_pairs),
        "pairs",
    );
    push_row(
        &mut out,
        "outPairWidth",
        sig6(map.dataflow.out_pair_width),
        "bytes/pair",
    );
    if let Some(spill) = &map.spill {
        push_row(
            &mut out,
            "maxSerPairs",
            spill.max_ser_pairs.to_string(),
            "pairs",
        );
        push_row(
            &mut out,
            "maxAccPairs",
            spill.max_acc_pairs.to_string(),
            "pairs",
        );
        push_row(
            &mut out,
            "spillBufferPairs",
            sig6(spill.spill_buffer_pairs),
            "pairs",
        );
        push_row(
            &mut out,
            "spillBufferSize",
            sig6(spill.spill_buffer_size),
            "bytes",
        );
        push_row(&mut out, "numSpills", spill.num_spills.to_string(), "");
        push_row(
            &mut out,
            "spillFileSize",
            sig6(spill.spill_file_size),
            "bytes",
        );
        push_row(
            &mut out,
            "spillFilePairs",
            sig6(spill.spill_file_pairs),
            "pairs",
        );
    }
    if let Some(plan) = &map.merge_plan {
        push_row(&mut out, "numMergePasses", plan.pass_count.to_string(), "");
        push_row(
            &mut out,
            "firstPassSpills",
            plan.first_pass_count.to_string(),
            "",
        );
        push_row(
            &mut out,
            "intermMergeReads",
            plan.interm_reads.to_string(),
            "",
        );
        push_row(
            &mut out,
            "finalMergeInputs",
            plan.final_merge_inputs.to_string(),
            "",
        );
        push_row(
            &mut out,
            "useCombInMerge",
            map.use_combine_in_merge.to_string(),
            "",
        );
    }
    if map.spill.is_some() {
        push_row(
            &mut out,
            "intermDataSize",
            sig6(map.interm_data_size),
            "bytes",
        );
        push_row(
            &mut out,
            "intermDataPairs",
            sig6(map.interm_data_pairs),
            "pairs",
        );
        push_row(
            &mut out,
            "numRecSpilled",
            sig6(map.num_rec_spilled),
            "pairs",
        );
    }

    let _ = writeln!(out, "\nMap task costs");
    cost_header(&mut out);
    for (name, cost) in map.phases.entries() {
        push_cost_row(&mut out, name, cost);
    }
    push_cost_row(&mut out, "total", map.total);

    if let Some(reduce) = &estimate.reduce_task {
        let _ = writeln!(out, "\nReduce task dataflow");
        push_row(
            &mut out,
            "segmentComprSize",
            sig6(reduce.segment.compr_size),
            "bytes",
        );
        push_row(
            &mut out,
            "segmentUncomprSize",
            sig6(reduce.segment.uncompr_size),
            "bytes",
        );
        push_row(
            &mut out,
            "segmentPairs",
            sig6(reduce.segment.pairs),
            "pairs",
        );
        push_row(
            &mut out,
            "totalShuffleSize",
            sig6(reduce.shuffle.total_shuffle_size),
            "bytes",
        );
        push_row(
            &mut out,
            "totalShufflePairs",
            sig6(reduce.shuffle.total_shuffle_pairs),
            "pairs",
        );
        push_row(
            &mut out,
            "shuffleCase",
            if reduce.shuffle.case_two {
                "2 (to disk)"
            } else {
                "1 (buffered)"
            },
            "",
        );
        push_row(
            &mut out,
            "numSegInShuffleFile",
            reduce.shuffle.num_seg_in_shuffle_file.to_string(),
            "",
        );
        push_row(
            &mut out,
            "shuffleFileSize",
            sig6(reduce.shuffle.shuffle_file_size),
            "bytes",
        );
        push_row(
            &mut out,
            "numShuffleFiles",
            reduce.shuffle.num_shuffle_files.to_string(),
            "",
        );
        push_row(
            &mut out,
            "numSegmentsInMem",
            reduce.shuffle.num_segments_in_mem.to_string(),
            "",
        );
        push_row(
            &mut out,
            "numShuffleMerges",
            reduce.shuffle.num_shuffle_merges.to_string(),
            "",
        );
        push_row(
            &mut out,
            "numSegmentsEvicted",
            reduce.sort.num_segments_evicted.to_string(),
            "",
        );
        push_row(
            &mut out,
            "filesToMergeStep2",
            reduce.sort.files_to_merge_step2.to_string(),
            "",
        );
        push_row(
            &mut out,
            "filesToMergeStep3",
            reduce.sort.files_to_merge_step3.to_string(),
            "",
        );
        push_row(
            &mut out,
            "totalMergingSize",
            sig6(reduce.sort.total_merging_size),
            "bytes",
        );
        push_row(
            &mut out,
            "inReduceSize",
            sig6(reduce.write.in_reduce_size),
            "bytes",
        );
        push_row(
            &mut out,
            "inReducePairs",
            sig6(reduce.write.in_reduce_pairs),
            "pairs",
        );
        push_row(
            &mut out,
            "outReduceSize",
            sig6(reduce.write.out_reduce_size),
            "bytes",
        );
        push_row(
            &mut out,
            "outReducePairs",
            sig6(reduce.write.out_reduce_pairs),
            "pairs",
        );

        let _ = writeln!(out, "\nReduce task costs");
        cost_header(&mut out);
        for (name, cost) in reduce.phases.entries() {
            push_cost_row(&mut out, name, cost);
        }
        push_cost_row(&mut out, "total", reduce.total);

        let _ = writeln!(out, "\nNetwork");
        push_row(
            &mut out,
            "netTransferSize",
            sig6(estimate.network.transfer_size),
            "bytes",
        );
        push_row(
            &mut out,
            "netCost",
            sig6(estimate.network.cost.net),
            meta.unit,
        );
    }

    let _ = writeln!(out, "\nJob totals");
    push_row(&mut out, "ioAllMaps", sig6(estimate.io_all_maps), meta.unit);
    push_row(
        &mut out,
        "cpuAllMaps",
        sig6(estimate.cpu_all_maps),
        meta.unit,
    );
    if estimate.reduce_task.is_some() {
        push_row(
            &mut out,
            "ioAllReducers",
            sig6(estimate.io_all_reducers),
            meta.unit,
        );
        push_row(
            &mut out,
            "cpuAllReducers",
            sig6(estimate.cpu_all_reducers),
            meta.unit,
        );
    }
    push_row(&mut out, "ioJob", sig6(estimate.io_job), meta.unit);
    push_row(&mut out, "cpuJob", sig6(estimate.cpu_job), meta.unit);
    push_row(&mut out, "netJob", sig6(estimate.net_job), meta.unit);
    push_row(&mut out, "costJob", sig6(estimate.cost_job), meta.unit);
    push_row(&mut out, "mapWaves", sig6(estimate.map_waves), "");
    if estimate.reduce_task.is_some() {
        push_row(&mut out, "reduceWaves", sig6(estimate.reduce_waves), "");
    }
    if let Some(timeline) = timeline {
        push_row(
            &mut out,
            "makespanCost",
            sig6(timeline.makespan_cost),
            meta.unit,
        );
        push_row(
            &mut out,
            "reduceReleaseCost",
            sig6(timeline.reduce_release_cost),
            meta.unit,
        );
    }

    let _ = writeln!(
        out,
        "\nvalues rounded to 6 significant digits; totals are computed at full precision"
    );
    out
}

/// Timeline numbers echoed into the machine report (events go to the
/// timeline export file).
#[derive(Serialize)]
pub struct TimelineSummary {
    pub makespan_cost: f64,
    pub reduce_release_cost: f64,
    pub map_waves: u64,
    pub reduce_waves: u64,
    pub events: usize,
}

impl From<&SimTimeline> for TimelineSummary {
    fn from(timeline: &SimTimeline) -> Self {
        TimelineSummary {
            makespan_cost: timeline.makespan_cost,
            reduce_release_cost: timeline.reduce_release_cost,
            map_waves: timeline.map_waves,
            reduce_waves: timeline.reduce_waves,
            events: timeline.events.len(),
        }
    }
}

/// The machine-readable document: a job spec extended with `results`.
#[derive(Serialize)]
pub struct ReportDocument<'a> {
    pub hadoop: &'a HadoopConfig,
    pub profile: &'a DataProfile,
    pub costs: &'a CostFactors,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<&'a str>,
    pub results: serde_json::Value,
}

pub fn machine_document(
    config: &HadoopConfig,
    profile: &DataProfile,
    costs: &CostFactors,
    unit: Option<&str>,
    results: serde_json::Value,
) -> String {
    let doc = ReportDocument {
        hadoop: config,
        profile,
        costs,
        unit,
        results,
    };
    serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
}

#[derive(Serialize)]
pub struct EstimateResults<'a> {
    pub version: &'static str,
    pub spec_path: &'a str,
    pub estimate: &'a JobEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timeline: Option<TimelineSummary>,
}

#[derive(Serialize)]
pub struct WhatIfRowDoc<'a> {
    pub index: usize,
    pub overrides: &'a mrcost_core::params::PartialHadoopConfig,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost_job: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub io_job: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cpu_job: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub net_job: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl<'a> From<&'a WhatIfRow> for WhatIfRowDoc<'a> {
    fn from(row: &'a WhatIfRow) -> Self {
        match &row.outcome {
            Ok(estimate) => WhatIfRowDoc {
                index: row.index,
                overrides: &row.overrides,
                ok: true,
                cost_job: Some(estimate.cost_job),
                io_job: Some(estimate.io_job),
                cpu_job: Some(estimate.cpu_job),
                net_job: Some(estimate.net_job),
                error: None,
            },
            Err(error) => WhatIfRowDoc {
                index: row.index,
                overrides: &row.overrides,
                ok: false,
                cost_job: None,
                io_job: None,
                cpu_job: None,
                net_job: None,
                error: Some(error.to_string()),
            },
        }
    }
}

/// Human table for what-if rows.
pub fn render_whatif(rows: &[WhatIfRow], meta: &ReportMeta<'_>) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "What-if analysis  spec: {}  tool: mrcost {}  costs in {}",
        meta.spec_path, TOOL_VERSION, meta.unit
    );
    let _ = writeln!(
        out,
        "{:<5} {:>14} {:>14} {:>14} {:>14}  overrides",
        "row", "costJob", "ioJob", "cpuJob", "netJob"
    );
    for row in rows {
        let overrides = serde_json::to_string(&row.overrides).unwrap_or_else(|_| "{}".to_string());
        match &row.outcome {
            Ok(est) => {
                let _ = writeln!(
                    out,
                    "{:<5} {:>14} {:>14} {:>14} {:>14}  {}",
                    row.index,
                    sig6(est.cost_job),
                    sig6(est.io_job),
                    sig6(est.cpu_job),
                    sig6(est.net_job),
                    overrides
                );
            }
            Err(error) => {
                let _ = writeln!(out, "{:<5} error: {error}  {overrides}", row.index);
            }
        }
    }
    out
}

fn assignment_text(
    point: &[(
        mrcost_core::optimizer::JobParameter,
        mrcost_core::optimizer::ConfigValue,
    )],
) -> String {
    point
        .iter()
        .map(|(parameter, value)| format!("{}={}", parameter.name(), value))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Human rendering of a grid-search result.
pub fn render_search(result: &SearchResult, meta: &ReportMeta<'_>) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Configuration search  spec: {}  tool: mrcost {}  costs in {}",
        meta.spec_path, TOOL_VERSION, meta.unit
    );
    let _ = writeln!(out, "best: {}", assignment_text(&result.best_assignment));
    let _ = writeln!(out, "bestCost: {}", sig6(result.best_cost));
    let _ = writeln!(
        out,
        "\n{:<5} {:>14} {:>14} {:>14} {:>14}  assignment",
        "row", "costJob", "ioJob", "cpuJob", "netJob"
    );
    for (index, point) in result.table.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:<5} {:>14} {:>14} {:>14} {:>14}  {}",
            index,
            sig6(point.cost_job),
            sig6(point.io_job),
            sig6(point.cpu_job),
            sig6(point.net_job),
            assignment_text(&point.assignment)
        );
    }
    for skipped in &result.skipped {
        let _ = writeln!(
            out,
            "skipped: {}  ({})",
            assignment_text(&skipped.assignment),
            skipped.reason
        );
    }
    out
}

/// Delimited export of the search table, full precision, header row first.
pub fn search_table_csv(result: &SearchResult) -> String {
    let mut out = String::new();
    let names: Vec<&str> = result
        .best_assignment
        .iter()
        .map(|(parameter, _)| parameter.name())
        .collect();
    let _ = writeln!(out, "{},cost_job,io_job,cpu_job,net_job", names.join(","));
    for point in &result.table {
        let values = point
            .assignment
            .iter()
            .map(|(_, value)| value.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            values, point.cost_job, point.io_job, point.cpu_job, point.net_job
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_rounds_to_six_significant_digits() {
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(2.0), "2");
        assert_eq!(sig6(1_677_721.6), "1677720");
        assert_eq!(sig6(67_108_864.0), "67108900");
        assert_eq!(sig6(0.05), "0.05");
        assert_eq!(sig6(24_159_191_040.0), "24159200000");
        assert_eq!(sig6(1.23456789e20), "1.23457e20");
        assert_eq!(sig6(-1_677_721.6), "-1677720");
    }
}
