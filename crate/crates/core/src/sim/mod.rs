//! Closed-loop simulation: plant, sensor network with additive attack
//! injection, state-feedback controller, norm detector, trace recording.

mod config;
mod plant;
mod runner;
mod trace;

pub use config::{detector_test, DetectorConfig, NoiseConfig, NominalModel, SimConfig};
pub use plant::{controller_output, plant_derivative, PlantModel};
pub use runner::{run_closed_loop, DIVERGENCE_SENTINEL};
pub use trace::SimTrace;
