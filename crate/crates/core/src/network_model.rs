//! Shuffle-time network transfer.
//!
//! Every map task's final output is fetched by the reducers; only the
//! fraction resident on the fetching reducer's own node stays local, so
//! with uniformly spread tasks a (nodes - 1)/nodes share of the
//! intermediate data crosses the network. Map-only jobs shuffle nothing.

use serde::{Deserialize, Serialize};

use crate::cost::CostVector;
use crate::params::EffectiveInputs;

/// Total shuffle traffic and its cost (io and cpu components are zero).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkEstimate {
    pub transfer_size: f64,
    pub cost: CostVector,
}

impl NetworkEstimate {
    pub const ZERO: NetworkEstimate = NetworkEstimate {
        transfer_size: 0.0,
        cost: CostVector::ZERO,
    };
}

/// Network volume and cost for shuffling `interm_data_size` bytes per map
/// task (the final map output size) across the cluster.
pub fn network_cost(inputs: &EffectiveInputs, interm_data_size: f64) -> NetworkEstimate {
    let config = &inputs.config;
    if config.num_reducers == 0 {
        return NetworkEstimate::ZERO;
    }
    let nodes = config.num_nodes as f64;
    let transfer_size = interm_data_size * config.num_mappers as f64 * (nodes - 1.0) / nodes;
    NetworkEstimate {
        transfer_size,
        cost: CostVector::new(0.0, 0.0, transfer_size * inputs.costs.network),
    }
}
