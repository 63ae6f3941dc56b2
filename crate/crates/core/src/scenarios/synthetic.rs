//! Distribution-driven rounds: uniform values, costs normally spread around
//! their value.

use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};
use crate::game::RoundInput;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    /// Set per run from the population size.
    #[serde(skip)]
    pub n: usize,
    pub value_low: f64,
    pub value_high: f64,
    /// Standard deviation of a cost around its value.
    pub cost_sigma: f64,
    /// Requirement as a fraction of the expected total value.
    pub threshold_fraction: f64,
    /// Redraw rounds whose total value falls short of the requirement, so
    /// that full contribution always succeeds.
    pub resample_infeasible: bool,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n: 10,
            value_low: 0.5,
            value_high: 1.5,
            cost_sigma: 0.2,
            threshold_fraction: 0.8,
            resample_infeasible: true,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(contract("population must have at least one agent"));
        }
        if !(self.value_low >= 0.0 && self.value_low <= self.value_high) {
            return Err(contract(format!(
                "value support [{}, {}] must be non-negative and ordered",
                self.value_low, self.value_high
            )));
        }
        if !(self.cost_sigma >= 0.0 && self.cost_sigma.is_finite()) {
            return Err(contract("cost sigma must be non-negative"));
        }
        if !(self.threshold_fraction > 0.0 && self.threshold_fraction <= 1.0) {
            return Err(contract("threshold fraction must lie in (0, 1]"));
        }
        Ok(())
    }

    pub fn mean_value(&self) -> f64 {
        0.5 * (self.value_low + self.value_high)
    }

    pub fn threshold(&self) -> f64 {
        self.threshold_fraction * self.n as f64 * self.mean_value()
    }
}

/// Draw one value from `[low, high]`; a degenerate support returns `low`.
pub(crate) fn draw_value<R: Rng + ?Sized>(rng: &mut R, low: f64, high: f64) -> f64 {
    if high > low {
        Uniform::new_inclusive(low, high)
            .expect("ordered finite support")
            .sample(rng)
    } else {
        low
    }
}

/// Normal draw around `center`, clamped at zero.
pub(crate) fn draw_cost<R: Rng + ?Sized>(rng: &mut R, center: f64, sigma: f64) -> f64 {
    if sigma > 0.0 {
        Normal::new(center, sigma)
            .expect("positive sigma")
            .sample(rng)
            .max(0.0)
    } else {
        center.max(0.0)
    }
}

const MAX_REDRAWS: usize = 1000;

fn draw_round<R: Rng + ?Sized>(cfg: &SyntheticConfig, rng: &mut R) -> Result<RoundInput> {
    let mut values = Vec::with_capacity(cfg.n);
    let mut costs = Vec::with_capacity(cfg.n);
    for _ in 0..cfg.n {
        let v = draw_value(rng, cfg.value_low, cfg.value_high);
        values.push(v);
        costs.push(draw_cost(rng, v, cfg.cost_sigma));
    }
    RoundInput::with_costs(values, costs, cfg.threshold())
}

/// One synthetic round. Privacy costs mirror transmission costs.
///
/// With `resample_infeasible` set, a round is redrawn until everyone
/// contributing would meet the requirement. After `MAX_REDRAWS` attempts the
/// last (infeasible) draw is returned.
pub fn synthetic_round<R: Rng + ?Sized>(
    cfg: &SyntheticConfig,
    _t: usize,
    rng: &mut R,
) -> Result<RoundInput> {
    cfg.validate()?;
    let mut round = draw_round(cfg, rng)?;
    if cfg.resample_infeasible {
        for _ in 0..MAX_REDRAWS {
            if round.is_feasible() {
                break;
            }
            round = draw_round(cfg, rng)?;
        }
    }
    Ok(round)
}
