//! Central optimizer: a coordinator that sees every agent's value and cost
//! and asks the cheapest covering subset to contribute.

use crate::error::Result;
use crate::game::{Action, RoundInput};
use crate::solver::{solve_fptas, CoverInstance};

/// Contribute exactly on the approximate minimum-cost cover. When even full
/// contribution cannot meet the requirement everyone contributes, which
/// maximises quality toward the unmet threshold.
pub fn centralized_assign(input: &RoundInput, epsilon: f64) -> Result<Vec<Action>> {
    let instance = CoverInstance::new(input.values.clone(), input.costs.clone(), input.threshold)?;
    let solution = solve_fptas(&instance, epsilon)?;
    if !solution.feasible {
        return Ok(vec![Action::Contribute; input.len()]);
    }
    let mut decisions = vec![Action::Defect; input.len()];
    for i in solution.selected {
        decisions[i] = Action::Contribute;
    }
    Ok(decisions)
}
