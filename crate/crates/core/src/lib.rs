//! Simulation and verification engine for biased `(1 : q)` Waiter-Client and
//! Client-Waiter Hamiltonicity games on binomial random graphs.

pub mod analytics;
pub mod boxgame;
pub mod error;
pub mod game;
pub mod graph;
pub mod harness;
pub mod hamilton;
pub mod rng;
pub mod strategy;

pub use error::{AnalysisError, GraphError};
pub use game::{GameKind, GameState, Owner, Player, Transcript};
pub use graph::{Graph, RandomGraphSpec};
