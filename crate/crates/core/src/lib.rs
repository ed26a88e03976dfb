//! Robot task allocation in wireless sensor and robot networks: Gabriel-graph
//! topologies, greedy-face-greedy routing with a search radius, auction-based
//! allocation and round-based lifetime simulation.
//!
//! The geometry and simulation types are generic over the scalar (`f32` or
//! `f64`); the aliases below fix it to `f64`.

pub mod allocation;
pub mod analysis;
pub mod energy;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod output;
pub mod routing;
pub mod scalar;
pub mod simulator;
pub mod topology;

pub use allocation::{Algorithm, AllocationResult, Outcome};
pub use error::{Error, Result};
pub use geometry::HandRule;
pub use scalar::Scalar;
pub use simulator::{SimReport, Stat, TopologyKind};

pub type Point = geometry::Point<f64>;
pub type Robot = topology::Robot<f64>;
pub type Hole = topology::Hole<f64>;
pub type Deployment = topology::Deployment<f64>;
pub type Topology = topology::Topology<f64>;
pub type EnergyParams = energy::EnergyParams<f64>;
pub type SimConfig = simulator::SimConfig<f64>;
pub type RunRecord = simulator::RunRecord<f64>;
pub type RoundRecord = simulator::RoundRecord<f64>;
