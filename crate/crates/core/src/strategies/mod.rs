//! Contribution strategies.
//!
//! Localized strategies (full, random, aspiration, Q-learning) are driven
//! per agent through [`Observation`] and [`Feedback`], which carry only the
//! agent's own value, cost, action and payoff. The centralized knapsack
//! strategy is the one policy that reads the whole [`RoundInput`].

mod aspiration;
mod baseline;
mod central;
mod qlearning;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use aspiration::AspirationState;
pub use baseline::{full_decide, random_decide};
pub use central::centralized_assign;
pub use qlearning::{QParams, QState, Support};

use crate::error::{contract, Error, Result};
use crate::game::{Action, PayoffParams, RoundInput, RoundOutcome};
use crate::rng::{stream, streams, SimRng};

/// What a localized agent sees before deciding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observation {
    pub own_value: f64,
    pub own_cost: f64,
    pub round_index: usize,
}

/// What a localized agent learns after the round.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feedback {
    pub own_action: Action,
    pub own_utility: f64,
    pub success: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    Full,
    Random,
    Knapsack,
    Aspiration,
    #[serde(rename = "qlearning")]
    QLearning,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::Full,
        StrategyKind::Random,
        StrategyKind::Knapsack,
        StrategyKind::Aspiration,
        StrategyKind::QLearning,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Full => "full",
            StrategyKind::Random => "random",
            StrategyKind::Knapsack => "knapsack",
            StrategyKind::Aspiration => "aspiration",
            StrategyKind::QLearning => "qlearning",
        }
    }

    /// Whether decisions are taken by a planner that reads every agent's
    /// value and cost.
    pub fn is_centralized(self) -> bool {
        self == StrategyKind::Knapsack
    }

    pub fn is_baseline(self) -> bool {
        matches!(self, StrategyKind::Full | StrategyKind::Random)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown strategy `{s}`")))
    }
}

/// Hyperparameters of every strategy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StrategyParams {
    /// Contribution probability of the random baseline.
    pub random_probability: f64,
    /// Approximation factor of the knapsack strategy.
    pub epsilon: f64,
    pub aspiration_step: f64,
    /// Defaults to `reward + penalty` when unset.
    pub switch_scale: Option<f64>,
    pub q: QParams,
    /// Synthetic rounds per bucket used to pre-train Q-learners.
    pub pretrain_rounds: usize,
}

impl Default for StrategyParams {
    fn default() -> Self {
        Self {
            random_probability: 0.5,
            epsilon: 0.1,
            aspiration_step: 0.1,
            switch_scale: None,
            q: QParams::default(),
            pretrain_rounds: 100,
        }
    }
}

impl StrategyParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.random_probability) {
            return Err(contract("random contribution probability must lie in [0, 1]"));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(contract("epsilon must lie in (0, 1]"));
        }
        self.q.validate()
    }
}

/// Run-level facts the strategies need at construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolicyContext {
    pub payoffs: PayoffParams,
    pub value_support: Support,
    pub cost_support: Support,
    /// Expected contribution cost, used to seed aspirations.
    pub mean_cost: f64,
    pub total_steps: usize,
}

#[derive(Clone, Debug)]
enum Agent {
    Full,
    Random(f64),
    Aspiration(AspirationState),
    QLearner {
        state: Box<QState>,
        pending: Option<(Observation, Feedback)>,
    },
}

/// All agents of one run under a single strategy.
#[derive(Clone, Debug)]
pub struct Population {
    kind: StrategyKind,
    epsilon: f64,
    explore: QParams,
    total_steps: usize,
    agents: Vec<Agent>,
    rngs: Vec<SimRng>,
}

impl Population {
    /// `n` agents with pre-training applied and one random stream each,
    /// derived from `seed`.
    pub fn new(
        kind: StrategyKind,
        n: usize,
        params: &StrategyParams,
        ctx: &PolicyContext,
        seed: u64,
    ) -> Result<Self> {
        params.validate()?;
        if n == 0 {
            return Err(contract("population must have at least one agent"));
        }
        let switch_scale = params
            .switch_scale
            .unwrap_or(ctx.payoffs.reward + ctx.payoffs.penalty);
        let agents = (0..n)
            .map(|_| -> Result<Agent> {
                Ok(match kind {
                    StrategyKind::Full | StrategyKind::Knapsack => Agent::Full,
                    StrategyKind::Random => Agent::Random(params.random_probability),
                    StrategyKind::Aspiration => {
                        let mut s = AspirationState::new(switch_scale, params.aspiration_step)?;
                        s.pretrain(ctx.payoffs.reward, ctx.mean_cost);
                        Agent::Aspiration(s)
                    }
                    StrategyKind::QLearning => {
                        let mut s = QState::new(params.q, ctx.value_support, ctx.cost_support)?;
                        s.pretrain(
                            params.pretrain_rounds,
                            ctx.payoffs.reward,
                            ctx.payoffs.penalty,
                        );
                        Agent::QLearner {
                            state: Box::new(s),
                            pending: None,
                        }
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let rngs = (0..n)
            .map(|i| stream(seed, &[streams::AGENT, i as u64]))
            .collect();
        Ok(Self {
            kind,
            epsilon: params.epsilon,
            explore: params.q,
            total_steps: ctx.total_steps,
            agents,
            rngs,
        })
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    /// Decisions for round `step` (0-based).
    pub fn decide(&mut self, input: &RoundInput, step: usize) -> Result<Vec<Action>> {
        if input.len() != self.agents.len() {
            return Err(contract(format!(
                "round has {} agents, population has {}",
                input.len(),
                self.agents.len()
            )));
        }
        if self.kind == StrategyKind::Knapsack {
            return centralized_assign(input, self.epsilon);
        }
        let explore = self.explore.exploration_at(step, self.total_steps);
        let decisions = self
            .agents
            .iter_mut()
            .zip(&mut self.rngs)
            .enumerate()
            .map(|(i, (agent, rng))| {
                let obs = Observation {
                    own_value: input.values[i],
                    own_cost: input.costs[i],
                    round_index: step,
                };
                match agent {
                    Agent::Full => full_decide(&obs),
                    Agent::Random(p) => random_decide(&obs, rng, *p),
                    Agent::Aspiration(s) => s.decide(&obs, rng),
                    Agent::QLearner { state, pending } => {
                        if let Some((prev, fb)) = pending.take() {
                            state.update(&prev, &fb, &obs);
                        }
                        state.explore = explore;
                        state.decide(&obs, rng)
                    }
                }
            })
            .collect();
        Ok(decisions)
    }

    /// Hand each agent its own feedback. Q-learners hold it until the next
    /// observation arrives to bootstrap from.
    pub fn learn(
        &mut self,
        input: &RoundInput,
        decisions: &[Action],
        outcome: &RoundOutcome,
        step: usize,
    ) {
        for (i, agent) in self.agents.iter_mut().enumerate() {
            let fb = Feedback {
                own_action: decisions[i],
                own_utility: outcome.utilities[i],
                success: outcome.success,
            };
            match agent {
                Agent::Aspiration(s) => s.update(&fb),
                Agent::QLearner { pending, .. } => {
                    let obs = Observation {
                        own_value: input.values[i],
                        own_cost: input.costs[i],
                        round_index: step,
                    };
                    *pending = Some((obs, fb));
                }
                Agent::Full | Agent::Random(_) => {}
            }
        }
    }
}
