//! What-if evaluation and configuration search.
//!
//! Both entry points take the raw (validated, un-normalized) parameter
//! triple and re-normalize per evaluated point, so overrides that toggle
//! the combine/compression switches see the original profile values.
//!
//! Only job-level parameters are searchable; cluster facts (node count,
//! task memory, slots) and input facts (split size, input compression) are
//! fixed. The grid is enumerated exhaustively in a deterministic order:
//! space entries in file order, candidates in listed order, rightmost
//! entry varying fastest; ties keep the earliest point.

use serde::Serialize;
use thiserror::Error;

use crate::error::ModelError;
use crate::job_model::{analytic_job_cost, JobEstimate};
use crate::params::{
    normalize, validate, CostFactors, DataProfile, HadoopConfig, PartialHadoopConfig, Violation,
};

/// A candidate value for a configuration parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ConfigValue {
    Int(u64),
    Real(f64),
    Bool(bool),
}

impl std::fmt::Display for ConfigValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigValue::Int(v) => write!(f, "{v}"),
            ConfigValue::Real(v) => write!(f, "{v}"),
            ConfigValue::Bool(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ValueKind {
    Int,
    Real,
    Bool,
}

/// The job-effect configuration parameters open to search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JobParameter {
    #[serde(rename = "pNumMappers")]
    NumMappers,
    #[serde(rename = "pSortMB")]
    SortMb,
    #[serde(rename = "pSpillPerc")]
    SpillPercent,
    #[serde(rename = "pSortRecPerc")]
    SortRecordPercent,
    #[serde(rename = "pSortFactor")]
    SortFactor,
    #[serde(rename = "pNumSpillsForComb")]
    MinSpillsForCombine,
    #[serde(rename = "pNumReducers")]
    NumReducers,
    #[serde(rename = "pInMemMergeThr")]
    InmemMergeThreshold,
    #[serde(rename = "pShuffleInBufPerc")]
    ShuffleInputBufferPercent,
    #[serde(rename = "pShuffleMergePerc")]
    ShuffleMergePercent,
    #[serde(rename = "pReducerInBufPerc")]
    ReducerInputBufferPercent,
    #[serde(rename = "pUseCombine")]
    UseCombine,
    #[serde(rename = "pIsIntermCompressed")]
    CompressIntermediate,
    #[serde(rename = "pIsOutCompressed")]
    CompressOutput,
    #[serde(rename = "pReduceSlowstart")]
    ReduceSlowstart,
}

/// Cluster- and input-bound parameter names, rejected in search spaces.
const FIXED_PARAMETERS: [&str; 6] = [
    "pNumNodes",
    "pTaskMem",
    "pMaxMapsPerNode",
    "pMaxRedPerNode",
    "pIsInCompressed",
    "pSplitSize",
];

impl JobParameter {
    pub const ALL: [JobParameter; 15] = [
        JobParameter::NumMappers,
        JobParameter::SortMb,
        JobParameter::SpillPercent,
        JobParameter::SortRecordPercent,
        JobParameter::SortFactor,
        JobParameter::MinSpillsForCombine,
        JobParameter::NumReducers,
        JobParameter::InmemMergeThreshold,
        JobParameter::ShuffleInputBufferPercent,
        JobParameter::ShuffleMergePercent,
        JobParameter::ReducerInputBufferPercent,
        JobParameter::UseCombine,
        JobParameter::CompressIntermediate,
        JobParameter::CompressOutput,
        JobParameter::ReduceSlowstart,
    ];

    /// Name as written in job-spec documents and search-space files.
    pub fn name(&self) -> &'static str {
        match self {
            JobParameter::NumMappers => "pNumMappers",
            JobParameter::SortMb => "pSortMB",
            JobParameter::SpillPercent => "pSpillPerc",
            JobParameter::SortRecordPercent => "pSortRecPerc",
            JobParameter::SortFactor => "pSortFactor",
            JobParameter::MinSpillsForCombine => "pNumSpillsForComb",
            JobParameter::NumReducers => "pNumReducers",
            JobParameter::InmemMergeThreshold => "pInMemMergeThr",
            JobParameter::ShuffleInputBufferPercent => "pShuffleInBufPerc",
            JobParameter::ShuffleMergePercent => "pShuffleMergePerc",
            JobParameter::ReducerInputBufferPercent => "pReducerInBufPerc",
            JobParameter::UseCombine => "pUseCombine",
            JobParameter::CompressIntermediate => "pIsIntermCompressed",
            JobParameter::CompressOutput => "pIsOutCompressed",
            JobParameter::ReduceSlowstart => "pReduceSlowstart",
        }
    }

    pub fn from_name(name: &str) -> Result<JobParameter, SpaceError> {
        if let Some(param) = Self::ALL.iter().find(|p| p.name() == name) {
            return Ok(*param);
        }
        if FIXED_PARAMETERS.contains(&name) {
            return Err(SpaceError::NotSearchable(name.to_string()));
        }
        Err(SpaceError::UnknownParameter(name.to_string()))
    }

    fn kind(&self) -> ValueKind {
        match self {
            JobParameter::NumMappers
            | JobParameter::SortFactor
            | JobParameter::MinSpillsForCombine
            | JobParameter::NumReducers
            | JobParameter::InmemMergeThreshold => ValueKind::Int,
            JobParameter::SortMb
            | JobParameter::SpillPercent
            | JobParameter::SortRecordPercent
            | JobParameter::ShuffleInputBufferPercent
            | JobParameter::ShuffleMergePercent
            | JobParameter::ReducerInputBufferPercent
            | JobParameter::ReduceSlowstart => ValueKind::Real,
            JobParameter::UseCombine
            | JobParameter::CompressIntermediate
            | JobParameter::CompressOutput => ValueKind::Bool,
        }
    }

    fn coerce(&self, value: &ConfigValue) -> Result<ConfigValue, SpaceError> {
        let mismatch = || SpaceError::TypeMismatch {
            parameter: self.name(),
            value: value.to_string(),
        };
        match (self.kind(), value) {
            (ValueKind::Int, ConfigValue::Int(v)) => Ok(ConfigValue::Int(*v)),
            (ValueKind::Int, ConfigValue::Real(x)) if x.fract() == 0.0 && *x >= 0.0 => {
                Ok(ConfigValue::Int(*x as u64))
            }
            (ValueKind::Real, ConfigValue::Int(v)) => Ok(ConfigValue::Real(*v as f64)),
            (ValueKind::Real, ConfigValue::Real(x)) => Ok(ConfigValue::Real(*x)),
            (ValueKind::Bool, ConfigValue::Bool(b)) => Ok(ConfigValue::Bool(*b)),
            _ => Err(mismatch()),
        }
    }

    fn apply(&self, value: &ConfigValue, config: &mut HadoopConfig) {
        match (self, value) {
            (JobParameter::NumMappers, ConfigValue::Int(v)) => config.num_mappers = *v,
            (JobParameter::SortFactor, ConfigValue::Int(v)) => config.sort_factor = *v,
            (JobParameter::MinSpillsForCombine, ConfigValue::Int(v)) => {
                config.min_spills_for_combine = *v
            }
            (JobParameter::NumReducers, ConfigValue::Int(v)) => config.num_reducers = *v,
            (JobParameter::InmemMergeThreshold, ConfigValue::Int(v)) => {
                config.inmem_merge_threshold = *v
            }
            (JobParameter::SortMb, ConfigValue::Real(x)) => config.sort_mb = *x,
            (JobParameter::SpillPercent, ConfigValue::Real(x)) => config.spill_percent = *x,
            (JobParameter::SortRecordPercent, ConfigValue::Real(x)) => {
                config.sort_record_percent = *x
            }
            (JobParameter::ShuffleInputBufferPercent, ConfigValue::Real(x)) => {
                config.shuffle_input_buffer_percent = *x
            }
            (JobParameter::ShuffleMergePercent, ConfigValue::Real(x)) => {
                config.shuffle_merge_percent = *x
            }
            (JobParameter::ReducerInputBufferPercent, ConfigValue::Real(x)) => {
                config.reducer_input_buffer_percent = *x
            }
            (JobParameter::ReduceSlowstart, ConfigValue::Real(x)) => config.reduce_slowstart = *x,
            (JobParameter::UseCombine, ConfigValue::Bool(b)) => config.use_combine = *b,
            (JobParameter::CompressIntermediate, ConfigValue::Bool(b)) => {
                config.compress_intermediate = *b
            }
            (JobParameter::CompressOutput, ConfigValue::Bool(b)) => config.compress_output = *b,
            _ => unreachable!("candidates are coerced when the space is built"),
        }
    }
}

/// One searched parameter with its candidate values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceEntry {
    pub parameter: JobParameter,
    pub candidates: Vec<ConfigValue>,
}

/// The grid to search: the cartesian product of all entries' candidates.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ParameterSpace {
    pub entries: Vec<SpaceEntry>,
}

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("invalid search space: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("search space must be an object mapping parameter names to candidate arrays")]
    NotAnObject,
    #[error("unknown parameter {0:?}")]
    UnknownParameter(String),
    #[error("{0} is a cluster/input fact, not a searchable job parameter")]
    NotSearchable(String),
    #[error("candidates for {0} must be a non-empty array")]
    EmptyCandidates(String),
    #[error("candidate {value} has the wrong type for {parameter}")]
    TypeMismatch {
        parameter: &'static str,
        value: String,
    },
    #[error("candidate for {0} must be a number or boolean")]
    BadCandidate(String),
}

impl ParameterSpace {
    pub fn new(entries: Vec<SpaceEntry>) -> Self {
        ParameterSpace { entries }
    }

    /// Parse a search-space document: a JSON object mapping parameter names
    /// to candidate arrays, e.g. `{"pSortFactor": [5, 10, 20]}`. Entries
    /// are taken in the document's (sorted-key) order.
    pub fn from_json_str(text: &str) -> Result<Self, SpaceError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let object = value.as_object().ok_or(SpaceError::NotAnObject)?;
        let mut entries = Vec::with_capacity(object.len());
        for (name, candidates) in object {
            let parameter = JobParameter::from_name(name)?;
            let array = candidates
                .as_array()
                .filter(|a| !a.is_empty())
                .ok_or_else(|| SpaceError::EmptyCandidates(name.clone()))?;
            let mut values = Vec::with_capacity(array.len());
            for raw in array {
                let value = match raw {
                    serde_json::Value::Bool(b) => ConfigValue::Bool(*b),
                    serde_json::Value::Number(n) => match n.as_u64() {
                        Some(v) => ConfigValue::Int(v),
                        None => ConfigValue::Real(
                            n.as_f64()
                                .ok_or_else(|| SpaceError::BadCandidate(name.clone()))?,
                        ),
                    },
                    _ => return Err(SpaceError::BadCandidate(name.clone())),
                };
                values.push(parameter.coerce(&value)?);
            }
            entries.push(SpaceEntry {
                parameter,
                candidates: values,
            });
        }
        Ok(ParameterSpace { entries })
    }

    fn point(&self, indices: &[usize]) -> Vec<(JobParameter, ConfigValue)> {
        self.entries
            .iter()
            .zip(indices)
            .map(|(entry, &i)| (entry.parameter, entry.candidates[i]))
            .collect()
    }
}

/// A grid point that was evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluatedPoint {
    pub assignment: Vec<(JobParameter, ConfigValue)>,
    pub config: HadoopConfig,
    pub cost_job: f64,
    pub io_job: f64,
    pub cpu_job: f64,
    pub net_job: f64,
}

/// A grid point that failed validation (or hit a degenerate model input).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedPoint {
    pub assignment: Vec<(JobParameter, ConfigValue)>,
    pub reason: String,
}

/// Outcome of a grid search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best: HadoopConfig,
    pub best_assignment: Vec<(JobParameter, ConfigValue)>,
    pub best_cost: f64,
    /// Every evaluated point, in evaluation order.
    pub table: Vec<EvaluatedPoint>,
    pub skipped: Vec<SkippedPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    Grid,
}

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("no grid point passed validation; nothing to optimize")]
    EmptyGrid,
}

/// Evaluation outcome for one what-if override.
#[derive(Debug, Clone, PartialEq)]
pub struct WhatIfRow {
    pub index: usize,
    pub overrides: PartialHadoopConfig,
    pub outcome: Result<JobEstimate, WhatIfError>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WhatIfError {
    #[error("invalid configuration: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn evaluate_config(
    config: &HadoopConfig,
    profile: &DataProfile,
    costs: &CostFactors,
) -> Result<JobEstimate, WhatIfError> {
    let violations = validate(config, profile, costs);
    if !violations.is_empty() {
        return Err(WhatIfError::Invalid(violations));
    }
    let inputs = normalize(config, profile, costs);
    Ok(analytic_job_cost(&inputs)?)
}

/// Evaluate each override applied on top of the base configuration.
///
/// Rows come back in input order; an override that fails validation
/// produces an error row, never a hard failure. The base is untouched.
pub fn whatif(
    config: &HadoopConfig,
    profile: &DataProfile,
    costs: &CostFactors,
    overrides: &[PartialHadoopConfig],
) -> Vec<WhatIfRow> {
    overrides
        .iter()
        .enumerate()
        .map(|(index, partial)| {
            let merged = partial.overlay(config);
            WhatIfRow {
                index,
                overrides: partial.clone(),
                outcome: evaluate_config(&merged, profile, costs),
            }
        })
        .collect()
}

/// Exhaustively evaluate the grid and return the cheapest configuration.
///
/// Invalid points are skipped and recorded; ties keep the first point in
/// evaluation order, so repeated runs return identical results.
pub fn optimize(
    config: &HadoopConfig,
    profile: &DataProfile,
    costs: &CostFactors,
    space: &ParameterSpace,
    method: SearchMethod,
) -> Result<SearchResult, OptimizeError> {
    let SearchMethod::Grid = method;

    let mut table = Vec::new();
    let mut skipped = Vec::new();
    let mut best: Option<usize> = None;

    let mut indices = vec![0usize; space.entries.len()];
    loop {
        let assignment = space.point(&indices);
        let mut candidate = config.clone();
        for (parameter, value) in &assignment {
            parameter.apply(value, &mut candidate);
        }
        match evaluate_config(&candidate, profile, costs) {
            Ok(estimate) => {
                table.push(EvaluatedPoint {
                    assignment,
                    config: candidate,
                    cost_job: estimate.cost_job,
                    io_job: estimate.io_job,
                    cpu_job: estimate.cpu_job,
                    net_job: estimate.net_job,
                });
                let current = table.len() - 1;
                if best.is_none_or(|b| table[current].cost_job < table[b].cost_job) {
                    best = Some(current);
                }
            }
            Err(error) => skipped.push(SkippedPoint {
                assignment,
                reason: error.to_string(),
            }),
        }

        // odometer order: rightmost entry varies fastest
        let mut position = indices.len();
        loop {
            if position == 0 {
                break;
            }
            position -= 1;
            indices[position] += 1;
            if indices[position] < space.entries[position].candidates.len() {
                break;
            }
            indices[position] = 0;
        }
        if indices.iter().all(|&i| i == 0) {
            break;
        }
    }

    let best = best.ok_or(OptimizeError::EmptyGrid)?;
    let winner = &table[best];
    Ok(SearchResult {
        best: winner.config.clone(),
        best_assignment: winner.assignment.clone(),
        best_cost: winner.cost_job,
        table,
        skipped,
    })
}
