//! Multi-pass merge combinatorics for external sorting.
//!
//! Merging N sorted runs with fan-in F proceeds in passes: a first pass
//! whose fan-in is chosen so every later pass can merge exactly F runs, a
//! series of intermediate passes of exactly F runs each, and a final pass
//! over whatever remains (at most F runs). The closed forms below give the
//! first-pass fan-in, the number of runs consumed before the final pass,
//! the final-pass fan-in, and the total pass count; they hold for N <= F².
//! [`simulate_merge_plan`] covers any N by stepping the same policy, and
//! is the entry point the map and reduce models use.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Shape of a complete merge of `runs` sorted runs with fan-in `fan_in`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergePlan {
    pub runs: u64,
    pub fan_in: u64,
    /// Fan-in of the first pass (the whole run set when `runs <= fan_in`).
    pub first_pass_count: u64,
    /// Runs consumed by the first and intermediate passes, i.e. everything
    /// read before the final pass. Zero when `runs <= fan_in`.
    pub interm_reads: u64,
    /// Fan-in of the final pass; never exceeds `fan_in`.
    pub final_merge_inputs: u64,
    /// Total passes, counting first, intermediate, and final.
    pub pass_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MergeDomainError {
    #[error("run count must be >= 1 (got {0})")]
    NoRuns(u64),
    #[error("fan-in must be >= 2 (got {0})")]
    FanInTooSmall(u64),
    #[error("closed forms require n <= f^2 (got n = {n}, f = {f}); use simulate_merge_plan")]
    BeyondClosedForm { n: u64, f: u64 },
}

fn check_domain(n: u64, f: u64) -> Result<(), MergeDomainError> {
    if n < 1 {
        return Err(MergeDomainError::NoRuns(n));
    }
    if f < 2 {
        return Err(MergeDomainError::FanInTooSmall(f));
    }
    Ok(())
}

fn check_closed_form(n: u64, f: u64) -> Result<(), MergeDomainError> {
    check_domain(n, f)?;
    if f.checked_mul(f).is_none_or(|f_squared| n <= f_squared) {
        Ok(())
    } else {
        Err(MergeDomainError::BeyondClosedForm { n, f })
    }
}

/// Number of runs merged by the first pass.
///
/// Chosen so that after the first pass the remaining run count is congruent
/// to 1 modulo (f - 1), which lets every subsequent pass merge exactly `f`
/// runs and finish with a full final pass.
pub fn first_pass_spills(n: u64, f: u64) -> Result<u64, MergeDomainError> {
    check_domain(n, f)?;
    Ok(if n <= f {
        n
    } else if (n - 1).is_multiple_of(f - 1) {
        f
    } else {
        (n - 1) % (f - 1) + 1
    })
}

/// Runs consumed before the final pass (first pass plus intermediate
/// passes). Valid for n <= f²; beyond that use [`simulate_merge_plan`].
pub fn interm_merge_spills(n: u64, f: u64) -> Result<u64, MergeDomainError> {
    check_closed_form(n, f)?;
    if n <= f {
        return Ok(0);
    }
    let p = first_pass_spills(n, f)?;
    Ok(p + (n - p) / f * f)
}

/// Fan-in of the final pass. Valid for n <= f².
pub fn final_merge_spills(n: u64, f: u64) -> Result<u64, MergeDomainError> {
    check_closed_form(n, f)?;
    if n <= f {
        return Ok(n);
    }
    let p = first_pass_spills(n, f)?;
    let s = interm_merge_spills(n, f)?;
    Ok(1 + (n - p) / f + (n - s))
}

/// Total number of merge passes. Valid for n <= f².
pub fn merge_pass_count(n: u64, f: u64) -> Result<u64, MergeDomainError> {
    check_closed_form(n, f)?;
    Ok(if n == 1 {
        0
    } else if n <= f {
        1
    } else {
        2 + (n - first_pass_spills(n, f)?) / f
    })
}

/// Step the merge policy for any run count and return the full plan.
///
/// The first pass merges [`first_pass_spills`] runs; every subsequent pass
/// merges exactly `f` of the oldest runs (merged outputs join the back of
/// the queue); merging stops when at most `f` runs remain, and those form
/// the final pass. For n <= f² the result equals the closed forms, which
/// are used directly in that regime.
pub fn simulate_merge_plan(n: u64, f: u64) -> Result<MergePlan, MergeDomainError> {
    check_domain(n, f)?;

    if f.checked_mul(f).is_none_or(|f_squared| n <= f_squared) {
        return Ok(MergePlan {
            runs: n,
            fan_in: f,
            first_pass_count: first_pass_spills(n, f)?,
            interm_reads: interm_merge_spills(n, f)?,
            final_merge_inputs: final_merge_spills(n, f)?,
            pass_count: merge_pass_count(n, f)?,
        });
    }

    let first = first_pass_spills(n, f)?;
    let mut remaining = n - first + 1;
    let mut interm_reads = first;
    let mut passes = 1u64;
    while remaining > f {
        // one intermediate pass: the f oldest runs become one new run
        remaining -= f - 1;
        interm_reads += f;
        passes += 1;
    }
    Ok(MergePlan {
        runs: n,
        fan_in: f,
        first_pass_count: first,
        interm_reads,
        final_merge_inputs: remaining,
        pass_count: passes + 1,
    })
}
