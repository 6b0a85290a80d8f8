//! Discrete-time simulator for a two-tier macro/pico cellular network in
//! which pico cells sleep and wake according to local user load.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod activity_control;
pub mod channel;
pub mod engine;
pub mod mobility;
pub mod power;
pub mod scenario;
pub mod seeding;
pub mod stats;
pub mod topology;

pub use activity_control::{PicoMode, ThresholdPolicy};
pub use engine::{run_scenario, run_scenario_observed, EngineError, ScenarioReport, World};
pub use scenario::{Scenario, ScenarioTopology, ValidationError};
pub use topology::{CellKind, Point2D, Topology, TopologyKind};
