//! GoldMiners grid world: movement, gold pickup and delivery, depot scoring
//! and a seeded noise model over perception, action choice and cargo.

mod action;
mod error;
pub mod nav;
mod scenario;
mod world;

pub use action::{Action, Cell, Direction};
pub use error::SimError;
pub use nav::{NavStep, Navigator, Region, Sweep};
pub use scenario::{load_scenario, random_scenario, reachable_from, AgentSpec, ScenarioConfig};
pub use world::{AgentState, GridWorld, NoiseModel, NoiseStats, Outcome, Percept};
