//! Energy-aware multi-robot coverage control on power diagrams.
//!
//! Robots partition a convex workspace into weighted Voronoi (power) cells,
//! move toward their cell centroids and adapt their weights so that robots
//! with less remaining endurance cover less ground.

pub mod controllers;
pub mod density;
pub mod energy;
pub mod engine;
mod error;
pub mod geometry;
pub mod graph;
pub mod metrics;
pub mod output;
pub mod scenario;
pub mod study;

pub use error::{ConfigError, Error, SimError};
