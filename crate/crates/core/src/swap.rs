//! The referee's SWAP test.
//!
//! The test prepares an ancilla in `|+>`, applies a controlled swap of the two
//! registers and measures the ancilla in the `|±>` basis. It passes with
//! probability `p = (1 + tr(ρσ)) / 2`. With stakes of `+1` on a pass and `-1`
//! on a fail, player I's expected payoff is
//!
//! ```text
//! E = p - (1 - p) = 2p - 1 = tr(ρσ)
//! ```
//!
//! so the game value of every game here is an overlap, i.e. a fidelity
//! `<ψ|σ|ψ>` when the referee's register holds a pure state.

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::quantum::{overlap, DensityOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SwapOutcome {
    Pass,
    Fail,
}

impl SwapOutcome {
    /// Player I's payoff; player II receives the negation.
    pub fn payoff(self) -> i32 {
        match self {
            SwapOutcome::Pass => 1,
            SwapOutcome::Fail => -1,
        }
    }
}

/// Probability that the test declares the states equal.
pub fn pass_probability(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(pass_probability_from_overlap(overlap(rho, sigma)?))
}

pub fn pass_probability_from_overlap(overlap: f64) -> f64 {
    ((1.0 + overlap) / 2.0).clamp(0.0, 1.0)
}

/// Player I's expected payoff, `2p - 1`.
pub fn expected_payoff(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(2.0 * pass_probability(rho, sigma)? - 1.0)
}

pub fn sample_outcome<R: Rng + ?Sized>(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    rng: &mut R,
) -> Result<SwapOutcome> {
    Ok(sample_with_probability(pass_probability(rho, sigma)?, rng))
}

pub(crate) fn sample_with_probability<R: Rng + ?Sized>(p: f64, rng: &mut R) -> SwapOutcome {
    let u: f64 = rng.random();
    if u < p {
        SwapOutcome::Pass
    } else {
        SwapOutcome::Fail
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{haar_random_state, CMat, PureState, RandomStream};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    /// Gate-level oracle: ancilla ⊗ ρ ⊗ σ, H on the ancilla, controlled-SWAP,
    /// H again, then the probability of reading 0 on the ancilla.
    fn circuit_pass_probability(rho: &CMat, sigma: &CMat) -> f64 {
        let d = rho.nrows();
        let reg = d * d;
        let dim = 2 * reg;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = CMat::from_row_slice(2, 2, &[h, h, h, -h].map(|x| Complex64::new(x, 0.0)));
        let h_full = hadamard.kronecker(&CMat::identity(reg, reg));

        let mut cswap = CMat::zeros(dim, dim);
        for i in 0..reg {
            cswap[(i, i)] = Complex64::new(1.0, 0.0);
            let (a, b) = (i / d, i % d);
            cswap[(reg + b * d + a, reg + i)] = Complex64::new(1.0, 0.0);
        }

        let mut anc = CMat::zeros(2, 2);
        anc[(0, 0)] = Complex64::new(1.0, 0.0);
        let state = anc.kronecker(&rho.kronecker(sigma));
        let u = &h_full * &cswap * &h_full;
        let out = &u * state * u.adjoint();
        (0..reg).map(|i| out[(i, i)].re).sum()
    }

    fn pure(theta: f64, phi: f64) -> DensityOperator {
        PureState::qubit_from_angles(theta, phi).density()
    }

    #[test]
    fn pass_probability_examples() {
        let zero = pure(0.0, 0.0);
        let one = pure(std::f64::consts::PI, 0.0);
        assert_abs_diff_eq!(pass_probability(&zero, &zero).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pass_probability(&zero, &one).unwrap(), 0.5, epsilon = 1e-15);
        let mixed = DensityOperator::maximally_mixed(2);
        assert_abs_diff_eq!(pass_probability(&mixed, &pure(0.4, 2.0)).unwrap(), 0.75, epsilon = 1e-15);
        assert!(pass_probability(&mixed, &DensityOperator::maximally_mixed(4)).is_err());
    }

    #[test]
    fn expected_payoff_examples() {
        let zero = pure(0.0, 0.0);
        let one = pure(std::f64::consts::PI, 0.0);
        assert_abs_diff_eq!(expected_payoff(&zero, &zero).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(expected_payoff(&zero, &one).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn matches_circuit_oracle() {
        let stream = RandomStream::new(5);
        for i in 0..20 {
            let mut rng = stream.substream(i).rng();
            let a = haar_random_state(2, &mut rng).unwrap().density();
            let b = haar_random_state(2, &mut rng).unwrap().density();
            let oracle = circuit_pass_probability(a.matrix(), b.matrix());
            assert_abs_diff_eq!(pass_probability(&a, &b).unwrap(), oracle, epsilon = 1e-10);
            assert_abs_diff_eq!(expected_payoff(&a, &b).unwrap(), 2.0 * oracle - 1.0, epsilon = 1e-10);
        }
        // Mixed inputs too.
        let m = DensityOperator::maximally_mixed(2);
        let p = pure(1.0, 0.3);
        assert_abs_diff_eq!(
            pass_probability(&m, &p).unwrap(),
            circuit_pass_probability(m.matrix(), p.matrix()),
            epsilon = 1e-12
        );
    }

    #[test]
    fn identical_states_always_pass() {
        let z = pure(0.8, 0.1);
        let mut rng = RandomStream::new(3).rng();
        for _ in 0..1000 {
            assert_eq!(sample_outcome(&z, &z, &mut rng).unwrap(), SwapOutcome::Pass);
        }
    }

    #[test]
    fn orthogonal_states_fair_coin() {
        let zero = pure(0.0, 0.0);
        let one = pure(std::f64::consts::PI, 0.0);
        let n = 100_000;
        let mut rng = RandomStream::new(99).rng();
        let total: i64 = (0..n)
            .map(|_| sample_outcome(&zero, &one, &mut rng).unwrap().payoff() as i64)
            .sum();
        let mean = total as f64 / n as f64;
        assert!(mean.abs() <= 3.0 / (n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = pure(0.3, 0.0);
        let b = pure(1.9, 2.0);
        let draw = || {
            let mut rng = RandomStream::new(8).substream(2).rng();
            (0..64).map(|_| sample_outcome(&a, &b, &mut rng).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(), draw());
    }
}
