//! Per-round evaluation measures and cross-repetition aggregation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{contract, Error, Result};
use crate::game::{Action, RoundOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Success,
    Efficiency,
    Welfare,
    Privacy,
    Fairness,
    FairnessOverTime,
}

impl Measure {
    /// Output order of the measures.
    pub const ALL: [Measure; 6] = [
        Measure::Success,
        Measure::Efficiency,
        Measure::Welfare,
        Measure::Privacy,
        Measure::Fairness,
        Measure::FairnessOverTime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Success => "success",
            Measure::Efficiency => "efficiency",
            Measure::Welfare => "welfare",
            Measure::Privacy => "privacy",
            Measure::Fairness => "fairness",
            Measure::FairnessOverTime => "fairness_over_time",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Welfare is unbounded; every other measure lies in `[0, 1]`.
    pub fn is_unit_range(self) -> bool {
        self != Measure::Welfare
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| contract(format!("unknown measure `{s}`")))
    }
}

/// Fraction of the requirement covered, capped at 1.
pub fn success_measure(quality: f64, threshold: f64) -> f64 {
    if threshold <= 0.0 {
        return 1.0;
    }
    (quality / threshold).min(1.0)
}

/// `threshold / quality` when the requirement is met, else 0. Exact coverage
/// scores 1; over-contribution scores below 1.
pub fn efficiency_measure(quality: f64, threshold: f64) -> f64 {
    if threshold > quality {
        return 0.0;
    }
    if quality <= 0.0 {
        // zero requirement met with nothing contributed
        return 1.0;
    }
    threshold / quality
}

/// Mean utility across agents.
pub fn welfare_measure(utilities: &[f64]) -> f64 {
    if utilities.is_empty() {
        return 0.0;
    }
    utilities.iter().sum::<f64>() / utilities.len() as f64
}

/// Fraction of agents that kept their data.
pub fn privacy_measure(decisions: &[Action]) -> f64 {
    if decisions.is_empty() {
        return 1.0;
    }
    let contributors = decisions.iter().filter(|a| a.is_contribute()).count();
    1.0 - contributors as f64 / decisions.len() as f64
}

/// Gini coefficient of a non-negative vector via the rank-weighted form
/// `(n + 1 - 2 * sum((n + 1 - i) * y_i) / sum(y)) / n` over `y` sorted
/// ascending with 1-based rank `i`. An all-zero vector scores 0.
pub fn gini(y: &[f64]) -> Result<f64> {
    if y.iter().any(|v| !(*v >= 0.0)) {
        return Err(contract("gini is defined for non-negative entries only"));
    }
    let n = y.len();
    let total: f64 = y.iter().sum();
    if n == 0 || total == 0.0 {
        return Ok(0.0);
    }
    let mut sorted = y.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nf = n as f64;
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(k, v)| (nf - k as f64) * v)
        .sum();
    let g = (nf + 1.0 - 2.0 * weighted / total) / nf;
    // clamp float noise around the exact bounds
    Ok(g.clamp(0.0, (nf - 1.0) / nf))
}

/// Gini of the values contributed this round, defectors counted as zeros.
pub fn fairness_round(outcome: &RoundOutcome) -> f64 {
    gini(&outcome.contributed_values).unwrap_or(0.0)
}

/// Gini of each agent's cumulative contributed value.
pub fn fairness_over_time(cumulative_contributions: &[f64]) -> Result<f64> {
    gini(cumulative_contributions)
}

/// Per-timestep mean and 95% confidence half-width of one measure.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSeries {
    pub measure: Measure,
    pub strategy: String,
    pub population: usize,
    pub per_timestep: Vec<SeriesPoint>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesPoint {
    pub mean: f64,
    pub ci_half_width: f64,
}

/// Two-sided 95% Student-t critical value with `df` degrees of freedom.
pub fn t_critical_95(df: usize) -> f64 {
    StudentsT::new(0.0, 1.0, df as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.975)
}

/// Mean and 95% half-width of one sample (at least two observations).
pub fn mean_ci(samples: &[f64]) -> Result<SeriesPoint> {
    let k = samples.len();
    if k < 2 {
        return Err(Error::CiUndefined(k));
    }
    let kf = k as f64;
    let mean = samples.iter().sum::<f64>() / kf;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (kf - 1.0);
    let half = if var > 0.0 {
        t_critical_95(k - 1) * var.sqrt() / kf.sqrt()
    } else {
        0.0
    };
    Ok(SeriesPoint {
        mean,
        ci_half_width: half,
    })
}

/// Collapse per-repetition series into per-timestep mean and 95% t-interval.
pub fn aggregate(series_per_repetition: &[Vec<f64>]) -> Result<Vec<SeriesPoint>> {
    let reps = series_per_repetition.len();
    if reps < 2 {
        return Err(Error::CiUndefined(reps));
    }
    let len = series_per_repetition[0].len();
    if series_per_repetition.iter().any(|s| s.len() != len) {
        return Err(contract("repetitions have different lengths"));
    }
    let crit = t_critical_95(reps - 1);
    let kf = reps as f64;
    let mut column = vec![0.0; reps];
    (0..len)
        .map(|t| {
            for (slot, series) in column.iter_mut().zip(series_per_repetition) {
                *slot = series[t];
            }
            let mean = column.iter().sum::<f64>() / kf;
            let var = column.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (kf - 1.0);
            Ok(SeriesPoint {
                mean,
                ci_half_width: if var > 0.0 { crit * (var / kf).sqrt() } else { 0.0 },
            })
        })
        .collect()
}

/// [`aggregate`] wrapped with its labels.
pub fn aggregate_series(
    measure: Measure,
    strategy: &str,
    population: usize,
    series_per_repetition: &[Vec<f64>],
) -> Result<MeasureSeries> {
    Ok(MeasureSeries {
        measure,
        strategy: strategy.to_owned(),
        population,
        per_timestep: aggregate(series_per_repetition)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Action::{Contribute as C, Defect as D};

    #[test]
    fn success_examples() {
        assert_eq!(success_measure(4.0, 8.0), 0.5);
        assert_eq!(success_measure(10.0, 8.0), 1.0);
        assert_eq!(success_measure(0.0, 8.0), 0.0);
    }

    #[test]
    fn efficiency_examples() {
        assert_eq!(efficiency_measure(8.0, 8.0), 1.0);
        assert_eq!(efficiency_measure(10.0, 8.0), 0.8);
        assert_eq!(efficiency_measure(6.0, 8.0), 0.0);
    }

    #[test]
    fn zero_threshold_edge() {
        assert_eq!(success_measure(0.0, 0.0), 1.0);
        assert_eq!(efficiency_measure(0.0, 0.0), 1.0);
        assert_eq!(efficiency_measure(2.0, 0.0), 0.0);
    }

    #[test]
    fn welfare_examples() {
        assert_eq!(welfare_measure(&[1.0, -1.0, 0.0]), 0.0);
        assert_eq!(welfare_measure(&[0.7, 0.7]), 0.7);
        assert_eq!(welfare_measure(&[-5.0; 4]), -5.0);
    }

    #[test]
    fn privacy_examples() {
        assert_eq!(privacy_measure(&[C; 7]), 0.0);
        assert_eq!(privacy_measure(&[D; 7]), 1.0);
        let half: Vec<_> = (0..10).map(|i| if i < 5 { C } else { D }).collect();
        assert_eq!(privacy_measure(&half), 0.5);
    }

    #[test]
    fn gini_examples() {
        assert_eq!(gini(&[1.0; 4]).unwrap(), 0.0);
        assert!((gini(&[0.0, 0.0, 0.0, 1.0]).unwrap() - 0.75).abs() < 1e-12);
        assert!((gini(&[1.0, 2.0, 3.0, 4.0]).unwrap() - 0.25).abs() < 1e-12);
        assert!((gini(&[4.0, 1.0, 3.0, 2.0]).unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(gini(&[0.0; 3]).unwrap(), 0.0);
        assert!(gini(&[1.0, -0.5]).is_err());
    }

    fn outcome(contributed: Vec<f64>) -> RoundOutcome {
        RoundOutcome {
            quality: contributed.iter().sum(),
            success: true,
            utilities: vec![0.0; contributed.len()],
            contributor_count: contributed.iter().filter(|v| **v > 0.0).count(),
            contributed_values: contributed,
        }
    }

    #[test]
    fn fairness_round_examples() {
        assert_eq!(fairness_round(&outcome(vec![1.0; 4])), 0.0);
        assert!((fairness_round(&outcome(vec![0.0, 2.0, 0.0, 0.0])) - 0.75).abs() < 1e-12);
        assert_eq!(fairness_round(&outcome(vec![0.0; 4])), 0.0);
    }

    #[test]
    fn fairness_over_time_single_contributor() {
        let n = 6;
        let t = 40.0;
        let mut cum = vec![0.0; n];
        cum[2] = t;
        let g = fairness_over_time(&cum).unwrap();
        assert!((g - (n as f64 - 1.0) / n as f64).abs() < 1e-12);
        assert_eq!(fairness_over_time(&[3.0; 5]).unwrap(), 0.0);
    }

    #[test]
    fn aggregate_examples() {
        let same = vec![vec![1.0, 2.0, 3.0]; 4];
        let agg = aggregate(&same).unwrap();
        assert!(agg.iter().all(|p| p.ci_half_width == 0.0));
        assert_eq!(agg[1].mean, 2.0);

        let agg = aggregate(&[vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        assert!((agg[0].mean - 2.0).abs() < 1e-12);
        // t(0.975, 2) = 4.302653, s = 1
        assert!((agg[0].ci_half_width - 4.302653 / 3f64.sqrt()).abs() < 1e-5);
        assert!((agg[0].ci_half_width - 2.484).abs() < 1e-3);

        let perm = aggregate(&[vec![3.0], vec![1.0], vec![2.0]]).unwrap();
        assert_eq!(perm[0].mean, agg[0].mean);
    }

    #[test]
    fn aggregate_needs_two_reps() {
        assert!(matches!(aggregate(&[vec![1.0]]), Err(Error::CiUndefined(1))));
        assert!(aggregate(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn t_critical_values() {
        assert!((t_critical_95(2) - 4.302653).abs() < 1e-5);
        assert!((t_critical_95(9) - 2.262157).abs() < 1e-5);
        assert!((t_critical_95(19) - 2.093024).abs() < 1e-5);
    }

    #[test]
    fn measure_names_roundtrip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert!("utility".parse::<Measure>().is_err());
    }
}
