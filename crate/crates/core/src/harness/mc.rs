use rand::Rng;
use serde::Serialize;

use super::{map_indexed, GameKind, GameSpec, Strategy};
use crate::cloning::{global_fidelity, single_clone_fidelity};
use crate::error::{Error, Result};
use crate::quantum::{haar_random_state, RandomStream};
use crate::swap::{pass_probability_from_overlap, sample_with_probability};

/// Outcome of repeated play with `±1` stakes.
///
/// A round passes with probability `(1 + F)/2`, so the expected stake is
/// `F`, the fidelity; `pass_rate = (1 + mean_payoff)/2` is the same number
/// on the probability scale.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McRecord {
    pub spec: GameSpec,
    pub rounds: usize,
    pub passes: usize,
    pub mean_payoff: f64,
    pub stderr: f64,
    pub pass_rate: f64,
    /// Haar-averaged fidelity of the strategy, i.e. its exact expected stake.
    pub exact_payoff: f64,
    pub exact_pass_probability: f64,
    /// `(mean_payoff - exact_payoff) / stderr`.
    pub z: f64,
}

/// Plays `spec.samples` independent rounds: draw a Haar state, run player
/// I's strategy, let the referee SWAP-test. Round `r` draws all of its
/// randomness from substream `r` of `spec.seed`.
pub fn monte_carlo_play(spec: &GameSpec, strategy: &Strategy) -> Result<McRecord> {
    if spec.samples == 0 {
        return Err(Error::InvalidArgument("need at least one round".into()));
    }
    strategy.check(spec)?;
    let exact_payoff = strategy.haar_payoff(spec.kind)?;
    let stream = RandomStream::new(spec.seed);

    let rounds = map_indexed(spec.samples, |r| play_round(spec, strategy, &stream.substream(r as u64)));
    let mut passes = 0usize;
    for outcome in rounds {
        if outcome? {
            passes += 1;
        }
    }

    let n = spec.samples as f64;
    let mean = (2.0 * passes as f64 - n) / n;
    let stderr = if spec.samples > 1 {
        ((1.0 - mean * mean).max(0.0) * n / (n - 1.0)).sqrt() / n.sqrt()
    } else {
        f64::INFINITY
    };
    let z = if stderr > 0.0 {
        (mean - exact_payoff) / stderr
    } else if mean == exact_payoff {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(McRecord {
        spec: *spec,
        rounds: spec.samples,
        passes,
        mean_payoff: mean,
        stderr,
        pass_rate: passes as f64 / n,
        exact_payoff,
        exact_pass_probability: pass_probability_from_overlap(exact_payoff),
        z,
    })
}

fn play_round(spec: &GameSpec, strategy: &Strategy, stream: &RandomStream) -> Result<bool> {
    let mut rng = stream.rng();
    let psi = haar_random_state(spec.d, &mut rng)?;
    let overlap = match (strategy, spec.kind) {
        (Strategy::Estimator(povm), GameKind::Estimation) => {
            let r = povm.sample_outcome(&psi, &mut rng)?;
            povm.guesses()[r].inner(&psi)?.norm_sqr()
        }
        (Strategy::Cloner(ch), GameKind::Cloning) => global_fidelity(ch, &psi)?,
        (Strategy::Cloner(ch), GameKind::OneParticle) => {
            let k = rng.random_range(0..ch.n_out());
            single_clone_fidelity(ch, &psi, k)?
        }
        _ => unreachable!("checked against the spec"),
    };
    Ok(sample_with_probability(pass_probability_from_overlap(overlap), &mut rng).payoff() > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloning::optimal_cloner;
    use crate::estimation::optimal_povm;

    #[test]
    fn deterministic_for_fixed_seed() {
        let spec = GameSpec::estimation(1, 2000, 9).unwrap();
        let s = Strategy::Estimator(optimal_povm(1).unwrap());
        let a = monte_carlo_play(&spec, &s).unwrap();
        let b = monte_carlo_play(&spec, &s).unwrap();
        assert_eq!(a, b);
        let other = monte_carlo_play(&GameSpec { seed: 10, ..spec }, &s).unwrap();
        assert_ne!(a.passes, other.passes);
    }

    #[test]
    fn one_particle_within_three_sigma() {
        let spec = GameSpec::one_particle(2, 1, 2, 20_000, 4).unwrap();
        let r = monte_carlo_play(&spec, &Strategy::Cloner(optimal_cloner(2, 1, 2).unwrap())).unwrap();
        assert!((r.exact_payoff - 5.0 / 6.0).abs() < 1e-10);
        assert!(r.z.abs() <= 3.0, "{r:?}");
    }

    #[test]
    fn rejects_mismatched_strategy() {
        let spec = GameSpec::cloning(2, 1, 3, 10, 0).unwrap();
        assert!(monte_carlo_play(&spec, &Strategy::Cloner(optimal_cloner(2, 1, 2).unwrap())).is_err());
        assert!(monte_carlo_play(&GameSpec { samples: 0, ..spec }, &Strategy::Cloner(optimal_cloner(2, 1, 3).unwrap())).is_err());
    }
}
