//! Errors raised by the phase models.

use thiserror::Error;

/// A phase model was invoked outside its domain.
///
/// These are degenerate-input conditions, not validation failures: the
/// inputs passed range validation but describe a job the model formulas
/// cannot express (for example a reducer phase of a map-only job).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    /// A reduce-side phase was requested but the job has no reducers.
    #[error("job has no reducers (pNumReducers = 0); {phase} does not exist for map-only jobs")]
    MapOnlyJob { phase: &'static str },

    /// The map-only write phase was requested for a job with reducers.
    #[error(
        "map output is shuffled when pNumReducers > 0; the direct HDFS write phase does not apply"
    )]
    NotMapOnly,

    /// The map function emitted no pairs, so the spill buffer geometry is undefined.
    #[error("map output has no pairs (outMapPairs = 0); collect/spill cannot be modeled")]
    NoMapOutput,

    /// A single map-output pair does not fit in the sort buffer.
    #[error("sort buffer cannot hold a single pair (spillBufferPairs = 0); increase pSortMB or pSpillPerc")]
    SortBufferTooSmall,

    /// Map tasks produce zero-byte segments, so shuffle-file packing is undefined.
    #[error("map segment size is zero; shuffle-file packing is undefined for empty segments")]
    EmptySegment,
}
