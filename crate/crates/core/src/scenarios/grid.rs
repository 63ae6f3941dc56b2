//! Smart-grid EV charging rounds.
//!
//! The shared good is the renewable surplus left after baseline load. An
//! agent contributes by forgoing its EV charge for the round, so its value is
//! the charge it renounces and its cost is a comfort loss proportional to
//! that charge. The requirement is the charge that must be renounced for the
//! remaining demand to fit inside the surplus.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::synthetic::{draw_cost, draw_value};
use crate::error::{contract, Result};
use crate::game::RoundInput;

/// Per-household production and baseline load at one timestep (kW).
#[derive(Clone, Debug, PartialEq)]
pub struct GridRecord {
    pub timestep: u64,
    pub household_ids: Vec<String>,
    pub production: Vec<f64>,
    pub baseline: Vec<f64>,
}

impl GridRecord {
    pub fn len(&self) -> usize {
        self.production.len()
    }

    pub fn is_empty(&self) -> bool {
        self.production.is_empty()
    }

    /// Total production minus total baseline load.
    pub fn surplus(&self) -> f64 {
        self.production.iter().sum::<f64>() - self.baseline.iter().sum::<f64>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Comfort cost per unit of renounced charge.
    pub cost_factor: f64,
    /// Normal noise on the comfort cost.
    pub cost_sigma: f64,
    /// Support of the per-round EV charge need.
    pub need_low: f64,
    pub need_high: f64,
    /// Synthetic generator only: expected surplus as a fraction of the
    /// expected total EV demand.
    pub surplus_fraction: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            cost_factor: 1.0,
            cost_sigma: 0.2,
            need_low: 0.5,
            need_high: 1.5,
            surplus_fraction: 0.2,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cost_factor >= 0.0 && self.cost_sigma >= 0.0) {
            return Err(contract("grid cost factor and sigma must be non-negative"));
        }
        if !(self.need_low >= 0.0 && self.need_low <= self.need_high) {
            return Err(contract("EV need support must be non-negative and ordered"));
        }
        if !(self.surplus_fraction >= 0.0) {
            return Err(contract("surplus fraction must be non-negative"));
        }
        Ok(())
    }

    pub fn mean_need(&self) -> f64 {
        0.5 * (self.need_low + self.need_high)
    }
}

/// Build the round for one grid record. `ev_need[i]` is the charge agent `i`
/// wants this round; `record` must describe the same agents in order.
pub fn grid_round<R: Rng + ?Sized>(
    record: &GridRecord,
    ev_need: &[f64],
    cfg: &GridConfig,
    rng: &mut R,
) -> Result<RoundInput> {
    if record.production.len() != ev_need.len() || record.baseline.len() != ev_need.len() {
        return Err(contract(format!(
            "grid record describes {} households but {} EV needs were given",
            record.production.len(),
            ev_need.len()
        )));
    }
    if ev_need.iter().any(|v| !(*v >= 0.0)) {
        return Err(contract("EV needs must be non-negative"));
    }
    let costs: Vec<f64> = ev_need
        .iter()
        .map(|v| draw_cost(rng, cfg.cost_factor * v, cfg.cost_sigma))
        .collect();
    let demand: f64 = ev_need.iter().sum();
    let threshold = (demand - record.surplus()).max(0.0);
    RoundInput::with_costs(ev_need.to_vec(), costs, threshold)
}

/// Synthetic grid record for `n` households: baseline load uniform on
/// `[0.5, 1.5]` and production exceeding it by a uniform share whose mean is
/// `surplus_fraction` of the mean EV need.
pub fn synthetic_grid_record<R: Rng + ?Sized>(
    timestep: u64,
    n: usize,
    cfg: &GridConfig,
    rng: &mut R,
) -> GridRecord {
    let spread = 2.0 * cfg.surplus_fraction * cfg.mean_need();
    let baseline: Vec<f64> = (0..n).map(|_| draw_value(rng, 0.5, 1.5)).collect();
    let production = baseline
        .iter()
        .map(|b| b + draw_value(rng, 0.0, spread))
        .collect();
    GridRecord {
        timestep,
        household_ids: (0..n).map(|i| format!("h{i}")).collect(),
        production,
        baseline,
    }
}

/// Per-agent view of a record, agent `i` mapped to household `i mod H`.
pub fn project_record(record: &GridRecord, n: usize) -> GridRecord {
    let h = record.len();
    let pick = |xs: &[f64]| (0..n).map(|i| xs[i % h]).collect::<Vec<_>>();
    GridRecord {
        timestep: record.timestep,
        household_ids: (0..n).map(|i| record.household_ids[i % h].clone()).collect(),
        production: pick(&record.production),
        baseline: pick(&record.baseline),
    }
}

/// Draw this round's EV needs.
pub fn draw_needs<R: Rng + ?Sized>(n: usize, cfg: &GridConfig, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| draw_value(rng, cfg.need_low, cfg.need_high))
        .collect()
}
