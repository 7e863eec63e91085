//! Model parameters: Hadoop configuration, dataset profile statistics, and
//! unit cost factors.
//!
//! The three categories arrive from a job-spec document (JSON with
//! `hadoop`, `profile`, and `costs` sections, field names matching the
//! Hadoop-derived variable names like `pSortFactor` or `sMapSizeSel`).
//! Hadoop fields may be omitted and fall back to stock defaults; profile
//! and cost fields are always required.
//!
//! Before any phase model runs, the triple is validated ([`validate`]) and
//! normalized ([`normalize`]): when the combiner or a compression stage is
//! disabled, the corresponding selectivities/ratios are forced to 1 and the
//! corresponding CPU factors to 0, so the formulas downstream never branch
//! on those switches.

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Cluster and job configuration (the `hadoop` section).
///
/// Serialized field names follow the Hadoop parameter naming
/// (`pNumNodes`, `pSortFactor`, ...). `pTaskMem` additionally accepts a
/// JVM-style memory string such as `"-Xmx200m"` and is always stored in
/// bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HadoopConfig {
    #[serde(rename = "pNumNodes")]
    pub num_nodes: u64,
    #[serde(rename = "pTaskMem", deserialize_with = "de_task_mem")]
    pub task_mem_bytes: f64,
    #[serde(rename = "pMaxMapsPerNode")]
    pub max_maps_per_node: u64,
    #[serde(rename = "pMaxRedPerNode")]
    pub max_reduce_per_node: u64,
    #[serde(rename = "pNumMappers")]
    pub num_mappers: u64,
    #[serde(rename = "pNumReducers")]
    pub num_reducers: u64,
    /// Sort buffer size in MB; converted with the 2^20 factor only where a
    /// formula needs bytes.
    #[serde(rename = "pSortMB")]
    pub sort_mb: f64,
    #[serde(rename = "pSpillPerc")]
    pub spill_percent: f64,
    #[serde(rename = "pSortRecPerc")]
    pub sort_record_percent: f64,
    #[serde(rename = "pSortFactor")]
    pub sort_factor: u64,
    #[serde(rename = "pNumSpillsForComb")]
    pub min_spills_for_combine: u64,
    #[serde(rename = "pInMemMergeThr")]
    pub inmem_merge_threshold: u64,
    #[serde(rename = "pShuffleInBufPerc")]
    pub shuffle_input_buffer_percent: f64,
    #[serde(rename = "pShuffleMergePerc")]
    pub shuffle_merge_percent: f64,
    #[serde(rename = "pReducerInBufPerc")]
    pub reducer_input_buffer_percent: f64,
    #[serde(rename = "pUseCombine")]
    pub use_combine: bool,
    #[serde(rename = "pIsIntermCompressed")]
    pub compress_intermediate: bool,
    #[serde(rename = "pIsOutCompressed")]
    pub compress_output: bool,
    #[serde(rename = "pIsInCompressed")]
    pub compress_input: bool,
    #[serde(rename = "pReduceSlowstart")]
    pub reduce_slowstart: f64,
    #[serde(rename = "pSplitSize")]
    pub split_size_bytes: f64,
}

/// A [`HadoopConfig`] with every field optional: the parse result of the
/// `hadoop` section before defaulting, and the payload of what-if overrides.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PartialHadoopConfig {
    #[serde(rename = "pNumNodes", skip_serializing_if = "Option::is_none")]
    pub num_nodes: Option<u64>,
    #[serde(
        rename = "pTaskMem",
        deserialize_with = "de_opt_task_mem",
        skip_serializing_if = "Option::is_none"
    )]
    pub task_mem_bytes: Option<f64>,
    #[serde(rename = "pMaxMapsPerNode", skip_serializing_if = "Option::is_none")]
    pub max_maps_per_node: Option<u64>,
    #[serde(rename = "pMaxRedPerNode", skip_serializing_if = "Option::is_none")]
    pub max_reduce_per_node: Option<u64>,
    #[serde(rename = "pNumMappers", skip_serializing_if = "Option::is_none")]
    pub num_mappers: Option<u64>,
    #[serde(rename = "pNumReducers", skip_serializing_if = "Option::is_none")]
    pub num_reducers: Option<u64>,
    #[serde(rename = "pSortMB", skip_serializing_if = "Option::is_none")]
    pub sort_mb: Option<f64>,
    #[serde(rename = "pSpillPerc", skip_serializing_if = "Option::is_none")]
    pub spill_percent: Option<f64>,
    #[serde(rename = "pSortRecPerc", skip_serializing_if = "Option::is_none")]
    pub sort_record_percent: Option<f64>,
    #[serde(rename = "pSortFactor", skip_serializing_if = "Option::is_none")]
    pub sort_factor: Option<u64>,
    #[serde(rename = "pNumSpillsForComb", skip_serializing_if = "Option::is_none")]
    pub min_spills_for_combine: Option<u64>,
    #[serde(rename = "pInMemMergeThr", skip_serializing_if = "Option::is_none")]
    pub inmem_merge_threshold: Option<u64>,
    #[serde(rename = "pShuffleInBufPerc", skip_serializing_if = "Option::is_none")]
    pub shuffle_input_buffer_percent: Option<f64>,
    #[serde(rename = "pShuffleMergePerc", skip_serializing_if = "Option::is_none")]
    pub shuffle_merge_percent: Option<f64>,
    #[serde(rename = "pReducerInBufPerc", skip_serializing_if = "Option::is_none")]
    pub reducer_input_buffer_percent: Option<f64>,
    #[serde(rename = "pUseCombine", skip_serializing_if = "Option::is_none")]
    pub use_combine: Option<bool>,
    #[serde(
        rename = "pIsIntermCompressed",
        skip_serializing_if = "Option::is_none"
    )]
    pub compress_intermediate: Option<bool>,
    #[serde(rename = "pIsOutCompressed", skip_serializing_if = "Option::is_none")]
    pub compress_output: Option<bool>,
    #[serde(rename = "pIsInCompressed", skip_serializing_if = "Option::is_none")]
    pub compress_input: Option<bool>,
    #[serde(rename = "pReduceSlowstart", skip_serializing_if = "Option::is_none")]
    pub reduce_slowstart: Option<f64>,
    #[serde(rename = "pSplitSize", skip_serializing_if = "Option::is_none")]
    pub split_size_bytes: Option<f64>,
}

/// Dataset and user-function statistics (the `profile` section).
///
/// Selectivities are output/input ratios (size or pair count) of the map,
/// reduce, and combine functions; compression ratios are compressed/raw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataProfile {
    #[serde(rename = "sInputPairWidth")]
    pub input_pair_width: f64,
    #[serde(rename = "sMapSizeSel")]
    pub map_size_selectivity: f64,
    #[serde(rename = "sMapPairsSel")]
    pub map_pairs_selectivity: f64,
    #[serde(rename = "sReduceSizeSel")]
    pub reduce_size_selectivity: f64,
    #[serde(rename = "sReducePairsSel")]
    pub reduce_pairs_selectivity: f64,
    #[serde(rename = "sCombineSizeSel")]
    pub combine_size_selectivity: f64,
    #[serde(rename = "sCombinePairsSel")]
    pub combine_pairs_selectivity: f64,
    #[serde(rename = "sInputCompressRatio")]
    pub input_compress_ratio: f64,
    #[serde(rename = "sIntermCompressRatio")]
    pub interm_compress_ratio: f64,
    #[serde(rename = "sOutCompressRatio")]
    pub output_compress_ratio: f64,
}

/// Unit cost factors (the `costs` section).
///
/// I/O, network, and compression factors are cost units per byte; the
/// remaining CPU factors are cost units per key-value pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostFactors {
    #[serde(rename = "cHdfsReadCost")]
    pub hdfs_read: f64,
    #[serde(rename = "cHdfsWriteCost")]
    pub hdfs_write: f64,
    #[serde(rename = "cLocalIOCost")]
    pub local_io: f64,
    #[serde(rename = "cNetworkCost")]
    pub network: f64,
    #[serde(rename = "cMapCPUCost")]
    pub map_cpu: f64,
    #[serde(rename = "cReduceCPUCost")]
    pub reduce_cpu: f64,
    #[serde(rename = "cCombineCPUCost")]
    pub combine_cpu: f64,
    #[serde(rename = "cPartitionCPUCost")]
    pub partition_cpu: f64,
    #[serde(rename = "cSerdeCPUCost")]
    pub serde_cpu: f64,
    #[serde(rename = "cSortCPUCost")]
    pub sort_cpu: f64,
    #[serde(rename = "cMergeCPUCost")]
    pub merge_cpu: f64,
    #[serde(rename = "cInUncomprCPUCost")]
    pub input_uncompress_cpu: f64,
    #[serde(rename = "cIntermUncomprCPUCost")]
    pub interm_uncompress_cpu: f64,
    #[serde(rename = "cIntermComprCPUCost")]
    pub interm_compress_cpu: f64,
    #[serde(rename = "cOutComprCPUCost")]
    pub output_compress_cpu: f64,
}

/// A validated, normalized parameter triple: what every phase model consumes.
///
/// Produced by [`normalize`]; the four disabled-feature rules have been
/// applied, so formulas can multiply by selectivities and ratios without
/// checking the boolean switches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveInputs {
    pub config: HadoopConfig,
    pub profile: DataProfile,
    pub costs: CostFactors,
}

/// Parsed job-spec document: partial Hadoop section plus complete profile
/// and cost sections, and an optional cost-unit label echoed in reports.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub hadoop: PartialHadoopConfig,
    pub profile: DataProfile,
    pub costs: CostFactors,
    #[serde(default)]
    pub unit: Option<String>,
    /// A `results` section is emitted by report output; accepted (and
    /// ignored) here so emitted reports re-parse as valid job specs.
    #[serde(default)]
    pub results: Option<serde_json::Value>,
}

/// One violated range constraint, produced by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Field name as it appears in the job-spec document.
    pub field: &'static str,
    pub constraint: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.constraint)
    }
}

#[derive(Debug, Error)]
pub enum JobSpecError {
    /// Malformed document, unknown field, non-numeric value, or a missing
    /// required profile/cost field.
    #[error("invalid job spec: {0}")]
    Parse(#[from] serde_json::Error),

    /// A Hadoop parameter with no stock default was left unset.
    #[error("missing required hadoop parameter {field} (no default value)")]
    MissingParameter { field: &'static str },

    /// Range validation failed.
    #[error("invalid parameters: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(Violation::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

const MIB: f64 = (1u64 << 20) as f64;

/// Parse a job-spec document.
///
/// Every field present is captured; absent Hadoop fields stay unset for
/// [`apply_defaults`]; absent profile/cost fields are an error, as is any
/// unknown field name or non-numeric value.
pub fn parse_job_spec(document: &str) -> Result<JobSpec, JobSpecError> {
    Ok(serde_json::from_str(document)?)
}

/// Fill unset Hadoop fields with their stock defaults.
///
/// `pNumNodes`, `pNumMappers`, `pNumReducers`, and `pSplitSize` have no
/// default and must be set.
pub fn apply_defaults(partial: &PartialHadoopConfig) -> Result<HadoopConfig, JobSpecError> {
    fn required<T: Copy>(value: Option<T>, field: &'static str) -> Result<T, JobSpecError> {
        value.ok_or(JobSpecError::MissingParameter { field })
    }

    Ok(HadoopConfig {
        num_nodes: required(partial.num_nodes, "pNumNodes")?,
        task_mem_bytes: partial.task_mem_bytes.unwrap_or(200.0 * MIB),
        max_maps_per_node: partial.max_maps_per_node.unwrap_or(2),
        max_reduce_per_node: partial.max_reduce_per_node.unwrap_or(2),
        num_mappers: required(partial.num_mappers, "pNumMappers")?,
        num_reducers: required(partial.num_reducers, "pNumReducers")?,
        sort_mb: partial.sort_mb.unwrap_or(100.0),
        spill_percent: partial.spill_percent.unwrap_or(0.8),
        sort_record_percent: partial.sort_record_percent.unwrap_or(0.05),
        sort_factor: partial.sort_factor.unwrap_or(10),
        min_spills_for_combine: partial.min_spills_for_combine.unwrap_or(3),
        inmem_merge_threshold: partial.inmem_merge_threshold.unwrap_or(1000),
        shuffle_input_buffer_percent: partial.shuffle_input_buffer_percent.unwrap_or(0.7),
        shuffle_merge_percent: partial.shuffle_merge_percent.unwrap_or(0.66),
        reducer_input_buffer_percent: partial.reducer_input_buffer_percent.unwrap_or(0.0),
        use_combine: partial.use_combine.unwrap_or(false),
        compress_intermediate: partial.compress_intermediate.unwrap_or(false),
        compress_output: partial.compress_output.unwrap_or(false),
        compress_input: partial.compress_input.unwrap_or(false),
        reduce_slowstart: partial.reduce_slowstart.unwrap_or(0.05),
        split_size_bytes: required(partial.split_size_bytes, "pSplitSize")?,
    })
}

impl PartialHadoopConfig {
    /// Apply the set fields of this partial on top of a full config.
    pub fn overlay(&self, base: &HadoopConfig) -> HadoopConfig {
        HadoopConfig {
            num_nodes: self.num_nodes.unwrap_or(base.num_nodes),
            task_mem_bytes: self.task_mem_bytes.unwrap_or(base.task_mem_bytes),
            max_maps_per_node: self.max_maps_per_node.unwrap_or(base.max_maps_per_node),
            max_reduce_per_node: self.max_reduce_per_node.unwrap_or(base.max_reduce_per_node),
            num_mappers: self.num_mappers.unwrap_or(base.num_mappers),
            num_reducers: self.num_reducers.unwrap_or(base.num_reducers),
            sort_mb: self.sort_mb.unwrap_or(base.sort_mb),
            spill_percent: self.spill_percent.unwrap_or(base.spill_percent),
            sort_record_percent: self.sort_record_percent.unwrap_or(base.sort_record_percent),
            sort_factor: self.sort_factor.unwrap_or(base.sort_factor),
            min_spills_for_combine: self
                .min_spills_for_combine
                .unwrap_or(base.min_spills_for_combine),
            inmem_merge_threshold: self
                .inmem_merge_threshold
                .unwrap_or(base.inmem_merge_threshold),
            shuffle_input_buffer_percent: self
                .shuffle_input_buffer_percent
                .unwrap_or(base.shuffle_input_buffer_percent),
            shuffle_merge_percent: self
                .shuffle_merge_percent
                .unwrap_or(base.shuffle_merge_percent),
            reducer_input_buffer_percent: self
                .reducer_input_buffer_percent
                .unwrap_or(base.reducer_input_buffer_percent),
            use_combine: self.use_combine.unwrap_or(base.use_combine),
            compress_intermediate: self
                .compress_intermediate
                .unwrap_or(base.compress_intermediate),
            compress_output: self.compress_output.unwrap_or(base.compress_output),
            compress_input: self.compress_input.unwrap_or(base.compress_input),
            reduce_slowstart: self.reduce_slowstart.unwrap_or(base.reduce_slowstart),
            split_size_bytes: self.split_size_bytes.unwrap_or(base.split_size_bytes),
        }
    }
}

/// Apply the disabled-feature initialization rules and return effective
/// copies; the arguments are not mutated.
///
/// With the combiner off, its selectivities become 1 and its CPU factor 0;
/// with input/intermediate/output compression off, the matching ratio
/// becomes 1 and the matching (de)compression CPU factors 0. Idempotent.
pub fn normalize(
    config: &HadoopConfig,
    profile: &DataProfile,
    costs: &CostFactors,
) -> EffectiveInputs {
    let mut profile = profile.clone();
    let mut costs = costs.clone();

    if !config.use_combine {
        profile.combine_size_selectivity = 1.0;
        profile.combine_pairs_selectivity = 1.0;
        costs.combine_cpu = 0.0;
    }
    if !config.compress_input {
        profile.input_compress_ratio = 1.0;
        costs.input_uncompress_cpu = 0.0;
    }
    if !config.compress_intermediate {
        profile.interm_compress_ratio = 1.0;
        costs.interm_uncompress_cpu = 0.0;
        costs.interm_compress_cpu = 0.0;
    }
    if !config.compress_output {
        profile.output_compress_ratio = 1.0;
        costs.output_compress_cpu = 0.0;
    }

    EffectiveInputs {
        config: config.clone(),
        profile,
        costs,
    }
}

/// Check every range constraint; the returned list is empty iff the triple
/// is valid. Violations are data, not failures.
pub fn validate(
    config: &HadoopConfig,
    profile: &DataProfile,
    costs: &CostFactors,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut check = |ok: bool, field: &'static str, constraint: String| {
        if !ok {
            out.push(Violation { field, constraint });
        }
    };

    let c = config;
    check(c.num_nodes >= 1, "pNumNodes", "must be >= 1".into());
    check(
        c.task_mem_bytes.is_finite() && c.task_mem_bytes > 0.0,
        "pTaskMem",
        format!("must be a positive byte count (got {})", c.task_mem_bytes),
    );
    check(
        c.max_maps_per_node >= 1,
        "pMaxMapsPerNode",
        "must be >= 1".into(),
    );
    check(
        c.max_reduce_per_node >= 1,
        "pMaxRedPerNode",
        "must be >= 1".into(),
    );
    check(c.num_mappers >= 1, "pNumMappers", "must be >= 1".into());
    check(
        c.sort_mb.is_finite() && c.sort_mb > 0.0,
        "pSortMB",
        format!("must be positive (got {})", c.sort_mb),
    );
    check(
        c.spill_percent.is_finite() && c.spill_percent > 0.0 && c.spill_percent <= 1.0,
        "pSpillPerc",
        format!("must be in (0, 1] (got {})", c.spill_percent),
    );
    check(
        c.sort_record_percent.is_finite()
            && c.sort_record_percent >= 0.0
            && c.sort_record_percent < 1.0,
        "pSortRecPerc",
        format!("must be in [0, 1) (got {})", c.sort_record_percent),
    );
    check(
        c.sort_factor >= 2,
        "pSortFactor",
        format!("must be >= 2 (got {})", c.sort_factor),
    );
    check(
        c.min_spills_for_combine >= 1,
        "pNumSpillsForComb",
        "must be >= 1".into(),
    );
    check(
        c.inmem_merge_threshold >= 1,
        "pInMemMergeThr",
        "must be >= 1".into(),
    );
    let unit_range = |x: f64| x.is_finite() && (0.0..=1.0).contains(&x);
    check(
        unit_range(c.shuffle_input_buffer_percent),
        "pShuffleInBufPerc",
        format!("must be in [0, 1] (got {})", c.shuffle_input_buffer_percent),
    );
    check(
        unit_range(c.shuffle_merge_percent),
        "pShuffleMergePerc",
        format!("must be in [0, 1] (got {})", c.shuffle_merge_percent),
    );
    check(
        unit_range(c.reducer_input_buffer_percent),
        "pReducerInBufPerc",
        format!("must be in [0, 1] (got {})", c.reducer_input_buffer_percent),
    );
    check(
        unit_range(c.reduce_slowstart),
        "pReduceSlowstart",
        format!("must be in [0, 1] (got {})", c.reduce_slowstart),
    );
    check(
        c.split_size_bytes.is_finite() && c.split_size_bytes > 0.0,
        "pSplitSize",
        format!("must be positive (got {})", c.split_size_bytes),
    );

    let p = profile;
    check(
        p.input_pair_width.is_finite() && p.input_pair_width > 0.0,
        "sInputPairWidth",
        format!("must be positive (got {})", p.input_pair_width),
    );
    let selectivity = |x: f64| x.is_finite() && x >= 0.0;
    let sels: [(&'static str, f64); 6] = [
        ("sMapSizeSel", p.map_size_selectivity),
        ("sMapPairsSel", p.map_pairs_selectivity),
        ("sReduceSizeSel", p.reduce_size_selectivity),
        ("sReducePairsSel", p.reduce_pairs_selectivity),
        ("sCombineSizeSel", p.combine_size_selectivity),
        ("sCombinePairsSel", p.combine_pairs_selectivity),
    ];
    for (field, value) in sels {
        check(
            selectivity(value),
            field,
            format!("must be >= 0 (got {value})"),
        );
    }
    let ratio = |x: f64| x.is_finite() && x > 0.0 && x <= 1.0;
    let ratios: [(&'static str, f64); 3] = [
        ("sInputCompressRatio", p.input_compress_ratio),
        ("sIntermCompressRatio", p.interm_compress_ratio),
        ("sOutCompressRatio", p.output_compress_ratio),
    ];
    for (field, value) in ratios {
        check(
            ratio(value),
            field,
            format!("must be in (0, 1] (got {value})"),
        );
    }

    let k = costs;
    let factors: [(&'static str, f64); 15] = [
        ("cHdfsReadCost", k.hdfs_read),
        ("cHdfsWriteCost", k.hdfs_write),
        ("cLocalIOCost", k.local_io),
        ("cNetworkCost", k.network),
        ("cMapCPUCost", k.map_cpu),
        ("cReduceCPUCost", k.reduce_cpu),
        ("cCombineCPUCost", k.combine_cpu),
        ("cPartitionCPUCost", k.partition_cpu),
        ("cSerdeCPUCost", k.serde_cpu),
        ("cSortCPUCost", k.sort_cpu),
        ("cMergeCPUCost", k.merge_cpu),
        ("cInUncomprCPUCost", k.input_uncompress_cpu),
        ("cIntermUncomprCPUCost", k.interm_uncompress_cpu),
        ("cIntermComprCPUCost", k.interm_compress_cpu),
        ("cOutComprCPUCost", k.output_compress_cpu),
    ];
    for (field, value) in factors {
        check(
            value.is_finite() && value >= 0.0,
            field,
            format!("must be >= 0 (got {value})"),
        );
    }

    out
}

impl JobSpec {
    /// Default, validate, and normalize this spec into model-ready inputs.
    pub fn effective_inputs(&self) -> Result<EffectiveInputs, JobSpecError> {
        let config = apply_defaults(&self.hadoop)?;
        let violations = validate(&config, &self.profile, &self.costs);
        if !violations.is_empty() {
            return Err(JobSpecError::Invalid(violations));
        }
        Ok(normalize(&config, &self.profile, &self.costs))
    }

    /// Like [`JobSpec::effective_inputs`] but with overrides applied to the
    /// hadoop section first.
    pub fn resolved_config(&self) -> Result<HadoopConfig, JobSpecError> {
        apply_defaults(&self.hadoop)
    }
}

/// Parse a JVM-style memory size (`"-Xmx200m"`, `"512k"`, `"2g"`, or a bare
/// byte count) into bytes. Suffixes are powers of 1024.
pub fn parse_jvm_mem(text: &str) -> Result<f64, String> {
    let stripped = text
        .trim()
        .strip_prefix("-Xmx")
        .or_else(|| text.trim().strip_prefix("-xmx"))
        .unwrap_or_else(|| text.trim());
    if stripped.is_empty() {
        return Err(format!("empty memory size in {text:?}"));
    }
    let (digits, multiplier) = match stripped.as_bytes()[stripped.len() - 1] {
        b'k' | b'K' => (&stripped[..stripped.len() - 1], 1024.0),
        b'm' | b'M' => (&stripped[..stripped.len() - 1], MIB),
        b'g' | b'G' => (&stripped[..stripped.len() - 1], 1024.0 * MIB),
        _ => (stripped, 1.0),
    };
    let count: u64 = digits.parse().map_err(|_| {
        format!("bad memory size {text:?}: expected digits with optional k/m/g suffix")
    })?;
    Ok(count as f64 * multiplier)
}

fn de_task_mem<'de, D: Deserializer<'de>>(deserializer: D) -> Result<f64, D::Error> {
    struct TaskMemVisitor;

    impl<'de> de::Visitor<'de> for TaskMemVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            f.write_str("a byte count or a JVM memory string like \"-Xmx200m\"")
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            parse_jvm_mem(v).map_err(de::Error::custom)
        }
    }

    deserializer.deserialize_any(TaskMemVisitor)
}

fn de_opt_task_mem<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Option<f64>, D::Error> {
    de_task_mem(deserializer).map(Some)
}
