//! Additive cost vectors.
//!
//! Every phase model produces a `CostVector` holding its I/O, CPU, and
//! network cost in abstract cost units (the unit is fixed by the cost
//! factors, see [`crate::params::CostFactors`]). Vectors add component-wise;
//! phase/task/job roll-ups are plain sums.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

/// I/O, CPU, and network cost of one phase, task, or job, in cost units.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostVector {
    pub io: f64,
    pub cpu: f64,
    pub net: f64,
}

impl CostVector {
    pub const ZERO: CostVector = CostVector {
        io: 0.0,
        cpu: 0.0,
        net: 0.0,
    };

    pub fn new(io: f64, cpu: f64, net: f64) -> Self {
        CostVector { io, cpu, net }
    }

    /// Sum of the three components.
    pub fn total(&self) -> f64 {
        self.io + self.cpu + self.net
    }

    pub fn is_zero(&self) -> bool {
        self.io == 0.0 && self.cpu == 0.0 && self.net == 0.0
    }
}

impl Add for CostVector {
    type Output = CostVector;

    fn add(self, rhs: CostVector) -> CostVector {
        CostVector {
            io: self.io + rhs.io,
            cpu: self.cpu + rhs.cpu,
            net: self.net + rhs.net,
        }
    }
}

impl AddAssign for CostVector {
    fn add_assign(&mut self, rhs: CostVector) {
        self.io += rhs.io;
        self.cpu += rhs.cpu;
        self.net += rhs.net;
    }
}

impl Sum for CostVector {
    fn sum<I: Iterator<Item = CostVector>>(iter: I) -> CostVector {
        iter.fold(CostVector::ZERO, Add::add)
    }
}
