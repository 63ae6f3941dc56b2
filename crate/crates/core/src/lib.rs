//! Simulation engine for threshold public-goods contribution games.
//!
//! Agents repeatedly decide whether to contribute a costly resource toward a
//! shared service that is provided only when total contributed value meets a
//! requirement. The crate compares contribution strategies (full and random
//! baselines, a central covering-knapsack optimizer, aspiration learning and
//! contextual Q-learning) on success, efficiency, welfare, privacy and
//! fairness measures.

pub mod error;
pub mod game;
pub mod harness;
pub mod metrics;
pub mod rng;
pub mod scenarios;
pub mod solver;
pub mod strategies;

pub use error::{Error, Result};
