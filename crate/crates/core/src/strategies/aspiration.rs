//! Satisficing aspiration learning.
//!
//! An agent keeps its last action while the payoff it earned meets its
//! aspiration level. When disappointed it switches action with probability
//! proportional to the shortfall. The aspiration tracks realised payoffs as
//! an exponential moving average. Current value and cost are not consulted.

use rand::Rng;

use super::{Feedback, Observation};
use crate::error::{contract, Result};
use crate::game::Action;

#[derive(Clone, Debug, PartialEq)]
pub struct AspirationState {
    pub aspiration: f64,
    pub last_action: Action,
    /// `None` until the first feedback arrives.
    pub last_utility: Option<f64>,
    /// Shortfall that makes switching certain.
    pub switch_scale: f64,
    /// EMA weight of the newest payoff, in `(0, 1]`.
    pub aspiration_step: f64,
}

impl AspirationState {
    pub fn new(switch_scale: f64, aspiration_step: f64) -> Result<Self> {
        if !(switch_scale > 0.0) {
            return Err(contract(format!("switch scale must be positive, got {switch_scale}")));
        }
        if !(aspiration_step > 0.0 && aspiration_step <= 1.0) {
            return Err(contract(format!(
                "aspiration step must lie in (0, 1], got {aspiration_step}"
            )));
        }
        Ok(Self {
            aspiration: 0.0,
            last_action: Action::Contribute,
            last_utility: None,
            switch_scale,
            aspiration_step,
        })
    }

    /// Probability of abandoning the last action given its payoff.
    pub fn switch_probability(&self, utility: f64) -> f64 {
        if utility >= self.aspiration {
            0.0
        } else {
            ((self.aspiration - utility) / self.switch_scale).min(1.0)
        }
    }

    pub fn decide<R: Rng + ?Sized>(&self, _obs: &Observation, rng: &mut R) -> Action {
        let Some(utility) = self.last_utility else {
            return self.last_action;
        };
        let p = self.switch_probability(utility);
        if p > 0.0 && rng.random_bool(p) {
            self.last_action.flipped()
        } else {
            self.last_action
        }
    }

    pub fn update(&mut self, fb: &Feedback) {
        self.aspiration += self.aspiration_step * (fb.own_utility - self.aspiration);
        self.last_action = fb.own_action;
        self.last_utility = Some(fb.own_utility);
    }

    /// Bias toward contribution: start from Contribute with the aspiration set
    /// to the payoff of a successful contributing round at the mean cost.
    pub fn pretrain(&mut self, reward: f64, mean_cost: f64) {
        self.last_action = Action::Contribute;
        self.last_utility = None;
        self.aspiration = reward - mean_cost;
    }
}
