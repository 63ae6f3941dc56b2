//! Cost-blind baselines: always contribute, or contribute by coin flip.

use rand::Rng;

use super::Observation;
use crate::game::Action;

pub fn full_decide(_obs: &Observation) -> Action {
    Action::Contribute
}

/// Contribute with probability `p` (0.5 for the random baseline).
pub fn random_decide<R: Rng + ?Sized>(_obs: &Observation, rng: &mut R, p: f64) -> Action {
    if rng.random_bool(p.clamp(0.0, 1.0)) {
        Action::Contribute
    } else {
        Action::Defect
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn obs(cost: f64) -> Observation {
        Observation { own_value: 1.0, own_cost: cost, round_index: 0 }
    }

    #[test]
    fn full_always_contributes() {
        assert_eq!(full_decide(&obs(1e6)), Action::Contribute);
        assert!((0..1000).all(|t| full_decide(&Observation { round_index: t, ..obs(0.5) })
            == Action::Contribute));
    }

    #[test]
    fn random_fraction_near_half() {
        let mut rng = stream(42, &[0]);
        let hits = (0..10_000)
            .filter(|_| random_decide(&obs(1.0), &mut rng, 0.5).is_contribute())
            .count();
        let frac = hits as f64 / 10_000.0;
        assert!((0.48..=0.52).contains(&frac), "fraction {frac}");
    }

    #[test]
    fn random_is_seeded() {
        let run = |seed| {
            let mut rng = stream(seed, &[3]);
            (0..200).map(|_| random_decide(&obs(1.0), &mut rng, 0.5)).collect::<Vec<_>>()
        };
        assert_eq!(run(9), run(9));
        assert_ne!(run(9), run(10));
    }

    #[test]
    fn degenerate_probability() {
        let mut rng = stream(1, &[]);
        assert!((0..500).all(|_| random_decide(&obs(1.0), &mut rng, 1.0).is_contribute()));
        assert!((0..500).all(|_| !random_decide(&obs(1.0), &mut rng, 0.0).is_contribute()));
    }
}
