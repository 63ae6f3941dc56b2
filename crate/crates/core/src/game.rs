//! Round mechanics of the threshold voluntary contribution game.
//!
//! Every round each of `n` agents holds a resource with some value and a
//! contribution cost. Agents either contribute or defect; the service is
//! provided when the summed value of contributions meets the quality
//! requirement, and then every agent (contributor or not) receives the same
//! reward. Otherwise every agent takes the same penalty. Contributors
//! additionally pay their own cost.

use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};

/// An agent's choice for one round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Contribute,
    Defect,
}

impl Action {
    pub fn is_contribute(self) -> bool {
        self == Action::Contribute
    }

    pub fn flipped(self) -> Action {
        match self {
            Action::Contribute => Action::Defect,
            Action::Defect => Action::Contribute,
        }
    }
}

/// Constant reward on success and penalty magnitude on failure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PayoffParams {
    pub reward: f64,
    /// Positive magnitude; a failed round pays `-penalty`.
    pub penalty: f64,
    /// Also charge contributors their privacy cost. Off by default, so the
    /// utility is reward/penalty minus the transmission cost only.
    pub charge_privacy: bool,
}

impl Default for PayoffParams {
    fn default() -> Self {
        Self {
            reward: 1.0,
            penalty: 5.0,
            charge_privacy: false,
        }
    }
}

impl PayoffParams {
    pub fn new(reward: f64, penalty: f64) -> Result<Self> {
        let p = Self {
            reward,
            penalty,
            charge_privacy: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.reward > 0.0 && self.reward.is_finite()) {
            return Err(contract(format!("reward must be positive, got {}", self.reward)));
        }
        if !(self.penalty > 0.0 && self.penalty.is_finite()) {
            return Err(contract(format!("penalty must be positive, got {}", self.penalty)));
        }
        Ok(())
    }
}

/// Exogenous state of one round.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundInput {
    pub values: Vec<f64>,
    pub costs: Vec<f64>,
    pub privacy_costs: Vec<f64>,
    /// Quality requirement. Zero means the round succeeds whatever agents do.
    pub threshold: f64,
}

impl RoundInput {
    pub fn new(
        values: Vec<f64>,
        costs: Vec<f64>,
        privacy_costs: Vec<f64>,
        threshold: f64,
    ) -> Result<Self> {
        let input = Self {
            values,
            costs,
            privacy_costs,
            threshold,
        };
        input.validate()?;
        Ok(input)
    }

    /// Round input whose privacy costs equal the transmission costs.
    pub fn with_costs(values: Vec<f64>, costs: Vec<f64>, threshold: f64) -> Result<Self> {
        let privacy = costs.clone();
        Self::new(values, costs, privacy, threshold)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.values.len();
        if n == 0 {
            return Err(contract("a round needs at least one agent"));
        }
        if self.costs.len() != n || self.privacy_costs.len() != n {
            return Err(contract(format!(
                "values, costs and privacy costs differ in length ({}, {}, {})",
                n,
                self.costs.len(),
                self.privacy_costs.len()
            )));
        }
        let bad = |xs: &[f64]| xs.iter().any(|x| !(*x >= 0.0) || !x.is_finite());
        if bad(&self.values) || bad(&self.costs) || bad(&self.privacy_costs) {
            return Err(contract("values and costs must be finite and non-negative"));
        }
        if !(self.threshold >= 0.0) || !self.threshold.is_finite() {
            return Err(contract(format!("threshold must be non-negative, got {}", self.threshold)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total_value(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Whether everyone contributing would meet the requirement.
    pub fn is_feasible(&self) -> bool {
        self.total_value() >= self.threshold
    }
}

/// Result of evaluating one round.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundOutcome {
    pub quality: f64,
    pub success: bool,
    pub utilities: Vec<f64>,
    pub contributor_count: usize,
    /// `values[i]` for contributors, `0.0` for defectors.
    pub contributed_values: Vec<f64>,
}

fn check_len(input: &RoundInput, decisions: &[Action]) -> Result<()> {
    if decisions.len() != input.len() {
        return Err(contract(format!(
            "{} decisions for {} agents",
            decisions.len(),
            input.len()
        )));
    }
    Ok(())
}

/// Summed value of contributed resources.
pub fn quality(input: &RoundInput, decisions: &[Action]) -> Result<f64> {
    check_len(input, decisions)?;
    Ok(input
        .values
        .iter()
        .zip(decisions)
        .filter(|(_, a)| a.is_contribute())
        .map(|(v, _)| *v)
        .sum())
}

/// The boundary `quality == threshold` is a success.
pub fn round_success(quality: f64, threshold: f64) -> bool {
    quality >= threshold
}

pub fn agent_utility(action: Action, cost: f64, success: bool, payoffs: &PayoffParams) -> f64 {
    let base = if success {
        payoffs.reward
    } else {
        -payoffs.penalty
    };
    match action {
        Action::Contribute => base - cost,
        Action::Defect => base,
    }
}

pub fn evaluate_round(
    input: &RoundInput,
    decisions: &[Action],
    payoffs: &PayoffParams,
) -> Result<RoundOutcome> {
    let quality = quality(input, decisions)?;
    let success = round_success(quality, input.threshold);
    let utilities = decisions
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let mut cost = input.costs[i];
            if payoffs.charge_privacy {
                cost += input.privacy_costs[i];
            }
            agent_utility(a, cost, success, payoffs)
        })
        .collect();
    let contributed_values = decisions
        .iter()
        .zip(&input.values)
        .map(|(a, v)| if a.is_contribute() { *v } else { 0.0 })
        .collect();
    Ok(RoundOutcome {
        quality,
        success,
        utilities,
        contributor_count: decisions.iter().filter(|a| a.is_contribute()).count(),
        contributed_values,
    })
}

/// Whether the payoffs make this a threshold public goods game for every
/// cost up to `max_cost`.
pub fn is_threshold_pgg(payoffs: &PayoffParams, max_cost: f64) -> bool {
    payoffs.reward + payoffs.penalty > max_cost
}
