//! Analytical cost models for Hadoop MapReduce jobs.
//!
//! Given a cluster/job configuration, dataset profile statistics, and unit
//! cost factors, this crate predicts the dataflow (bytes and key-value
//! pairs) and the I/O, CPU, and network cost of every phase of a MapReduce
//! job: the five map-task phases (read, map, collect, spill, merge), the
//! four reduce-task phases (shuffle, sort/merge, reduce, write), the
//! shuffle network transfer, and the job-level roll-up.
//!
//! The job-level total can be computed analytically (slot-normalized sums)
//! or by a deterministic wave-based task-scheduler simulation. On top of
//! the estimator sit what-if evaluation and exhaustive grid search over
//! job configuration parameters.
//!
//! Everything is a pure function over immutable inputs, so all APIs are
//! safe to call concurrently.

pub mod cost;
pub mod error;
#[cfg(test)]
pub(crate) mod fixtures;
pub mod job_model;
pub mod map_model;
pub mod merge_math;
pub mod network_model;
pub mod optimizer;
pub mod params;
pub mod reduce_model;

pub use cost::CostVector;
pub use error::ModelError;
pub use job_model::{
    analytic_job_cost, simulate_job, EstimateMethod, JobEstimate, SimEvent, SimTimeline, TaskKind,
};
pub use map_model::{MapDataflow, MapTaskEstimate, SpillSpec};
pub use merge_math::{simulate_merge_plan, MergePlan};
pub use network_model::{network_cost, NetworkEstimate};
pub use optimizer::{optimize, whatif, ParameterSpace, SearchMethod, SearchResult, WhatIfRow};
pub use params::{
    apply_defaults, normalize, parse_job_spec, validate, CostFactors, DataProfile, EffectiveInputs,
    HadoopConfig, JobSpec, PartialHadoopConfig, Violation,
};
pub use reduce_model::{ReduceTaskEstimate, SegmentSpec, ShuffleOutcome, SortOutcome};
