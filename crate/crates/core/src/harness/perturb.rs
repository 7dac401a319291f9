use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{map_indexed, GameKind, Strategy};
use crate::cloning::{random_channel, symmetric_depolarizing, Channel};
use crate::error::Result;
use crate::estimation::{build_povm, default_directions, Direction, Povm};
use crate::quantum::{haar_random_isometry, haar_random_state, CMat, PureState, RandomStream};

#[derive(Clone, Debug, Serialize)]
pub struct PerturbReport {
    pub base_value: f64,
    pub count: usize,
    pub max_value: f64,
    pub argmax: Option<usize>,
    /// Indices whose Haar payoff exceeds `base_value + tol`.
    pub violations: Vec<usize>,
    pub tol: f64,
    pub pass: bool,
}

/// Compares the Haar-averaged payoff of every perturbation to the base
/// strategy's.
pub fn perturb_best_response_check(kind: GameKind, base: &Strategy, perturbations: &[Strategy], tol: f64) -> Result<PerturbReport> {
    let base_value = base.haar_payoff(kind)?;
    let values = map_indexed(perturbations.len(), |i| perturbations[i].haar_payoff(kind))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let mut max_value = f64::NEG_INFINITY;
    let mut argmax = None;
    for (i, &v) in values.iter().enumerate() {
        if v > max_value {
            max_value = v;
            argmax = Some(i);
        }
    }
    let violations: Vec<usize> = (0..values.len()).filter(|&i| values[i] > base_value + tol).collect();
    Ok(PerturbReport {
        base_value,
        count: values.len(),
        max_value,
        argmax,
        pass: violations.is_empty(),
        violations,
        tol,
    })
}

/// Cayley transform `(1 - iεH)(1 + iεH)⁻¹` of a random Hermitian `H`.
fn near_identity_unitary<R: Rng + ?Sized>(dim: usize, eps: f64, rng: &mut R) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let h = (&g + g.adjoint()).scale(0.5);
    let ih = h * Complex64::new(0.0, eps);
    let id = CMat::identity(dim, dim);
    let inv = (&id + &ih).try_inverse().expect("1 + iH is invertible for Hermitian H");
    (id - ih) * inv
}

/// `count` perturbations of a cloner, cycling through four families:
/// small output rotations, Haar-random output unitaries, mixing with the
/// symmetric depolarizing output, and mixing with a random channel.
pub fn cloner_perturbations(base: &Channel, count: usize, stream: &RandomStream) -> Result<Vec<Channel>> {
    let (d, n, m) = (base.local_dim(), base.n_in(), base.n_out());
    let dim_out = base.dim_out();
    let noise = symmetric_depolarizing(d, n, m)?;
    map_indexed(count, |i| {
        let mut rng = stream.substream(i as u64).rng();
        match i % 4 {
            0 => {
                let eps = rng.random_range(1e-3..0.3);
                base.conjugate_output(&near_identity_unitary(dim_out, eps, &mut rng))
            }
            1 => base.conjugate_output(&haar_random_isometry(dim_out, dim_out, &mut rng)?),
            2 => base.mix(&noise, rng.random_range(1e-3..1.0)),
            _ => {
                let other = random_channel(d, n, m, dim_out, &mut rng)?;
                base.mix(&other, rng.random_range(1e-3..0.5))
            }
        }
    })
    .into_iter()
    .collect()
}

fn rotate_guess(u: &CMat, g: &PureState) -> Result<PureState> {
    PureState::normalized(u * g.amplitudes())
}

/// `count` perturbations of an estimator, cycling through four families:
/// independently misaligned guesses, a common rotation of all guesses,
/// mixing with a fixed random guess, and mixing with a randomly oriented
/// covariant measurement.
pub fn estimator_perturbations(base: &Povm, count: usize, stream: &RandomStream) -> Result<Vec<Povm>> {
    let n = base.copies();
    let dim = n + 1;
    map_indexed(count, |i| {
        let mut rng = stream.substream(i as u64).rng();
        match i % 4 {
            0 => {
                let eps = rng.random_range(1e-3..0.5);
                let guesses = base
                    .guesses()
                    .iter()
                    .map(|g| rotate_guess(&near_identity_unitary(2, eps, &mut rng), g))
                    .collect::<Result<Vec<_>>>()?;
                base.with_guesses(guesses)
            }
            1 => {
                let u = haar_random_isometry(2, 2, &mut rng)?;
                let guesses = base
                    .guesses()
                    .iter()
                    .map(|g| rotate_guess(&u, g))
                    .collect::<Result<Vec<_>>>()?;
                base.with_guesses(guesses)
            }
            2 => {
                let p = rng.random_range(1e-3..1.0);
                let mut effects: Vec<CMat> = base.effects().iter().map(|e| e.scale(1.0 - p)).collect();
                let mut guesses = base.guesses().to_vec();
                effects.push(CMat::identity(dim, dim).scale(p));
                guesses.push(haar_random_state(2, &mut rng)?);
                Povm::new(n, effects, guesses)
            }
            _ => {
                let p = rng.random_range(1e-3..1.0);
                let u = haar_random_isometry(2, 2, &mut rng)?;
                let dirs = default_directions(n)
                    .iter()
                    .map(|dir| Direction::from_bloch(rotate_guess(&u, &dir.qubit())?.bloch_vector()?))
                    .collect::<Result<Vec<_>>>()?;
                let other = build_povm(n, &dirs, 1e-10)?;
                let effects = base
                    .effects()
                    .iter()
                    .map(|e| e.scale(1.0 - p))
                    .chain(other.effects().iter().map(|e| e.scale(p)))
                    .collect();
                let guesses = base.guesses().iter().chain(other.guesses()).cloned().collect();
                Povm::new(n, effects, guesses)
            }
        }
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloning::{fully_depolarizing, optimal_cloner};
    use crate::estimation::optimal_povm;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cayley_is_unitary() {
        let mut rng = RandomStream::new(1).rng();
        let u = near_identity_unitary(4, 0.2, &mut rng);
        assert!((&u * u.adjoint() - CMat::identity(4, 4)).norm() < 1e-12);
        assert!((&u - CMat::identity(4, 4)).norm() < 1.5);
    }

    #[test]
    fn optimal_cloner_beats_perturbations() {
        let base = optimal_cloner(2, 1, 2).unwrap();
        let perturbed = cloner_perturbations(&base, 200, &RandomStream::new(6)).unwrap();
        let perturbed: Vec<Strategy> = perturbed.into_iter().map(Strategy::Cloner).collect();
        let r = perturb_best_response_check(GameKind::Cloning, &Strategy::Cloner(base), &perturbed, 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
        assert_abs_diff_eq!(r.base_value, 2.0 / 3.0, epsilon = 1e-10);
        assert!(r.max_value <= 2.0 / 3.0 + 1e-9);
    }

    #[test]
    fn base_against_itself() {
        let base = Strategy::Cloner(optimal_cloner(2, 1, 2).unwrap());
        let r = perturb_best_response_check(GameKind::Cloning, &base, std::slice::from_ref(&base), 1e-12).unwrap();
        assert!(r.pass);
        assert_abs_diff_eq!(r.max_value, r.base_value, epsilon = 1e-15);
    }

    #[test]
    fn depolarized_outputs() {
        let noise = Strategy::Cloner(symmetric_depolarizing(2, 1, 2).unwrap());
        assert_abs_diff_eq!(noise.haar_payoff(GameKind::Cloning).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        let flat = Strategy::Cloner(fully_depolarizing(2, 1, 2).unwrap());
        assert_abs_diff_eq!(flat.haar_payoff(GameKind::Cloning).unwrap(), 1.0 / 4.0, epsilon = 1e-12);
        let base = Strategy::Cloner(optimal_cloner(2, 1, 2).unwrap());
        let r = perturb_best_response_check(GameKind::Cloning, &base, &[noise, flat], 1e-9).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn optimal_estimator_beats_perturbations() {
        for n in 1..=3 {
            let base = optimal_povm(n).unwrap();
            let perturbed = estimator_perturbations(&base, 200, &RandomStream::new(n as u64)).unwrap();
            let perturbed: Vec<Strategy> = perturbed.into_iter().map(Strategy::Estimator).collect();
            let r = perturb_best_response_check(GameKind::Estimation, &Strategy::Estimator(base), &perturbed, 1e-9).unwrap();
            assert!(r.pass, "N={n}: {r:?}");
            assert!(r.max_value <= (n + 1) as f64 / (n + 2) as f64 + 1e-9);
        }
    }
}
