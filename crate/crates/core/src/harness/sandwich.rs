use serde::Serialize;

use super::{discretize, GameSpec, Strategy};
use crate::error::Result;
use crate::quantum::PureState;
use crate::zerosum::{solve, MixedStrategy};

#[derive(Clone, Debug, Serialize)]
pub struct SandwichLevel {
    pub states: usize,
    pub value: f64,
    pub x: MixedStrategy,
    pub y: MixedStrategy,
    pub exploitability: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub theoretical: f64,
    pub tol: f64,
    pub levels: Vec<SandwichLevel>,
    /// Every level value is at least `theoretical - tol`.
    pub above_theory: bool,
    /// Values never increase by more than `tol` from one level to the next.
    pub monotone: bool,
    /// The finest level is within `tol` of the theoretical value.
    pub converged: bool,
    pub pass: bool,
}

/// Solves the discretized game for each player II state set in `levels`.
///
/// The sets are expected to be nested (each a superset of the previous);
/// restricting only the minimizer can never push the value below the
/// theoretical one, and adding columns can never raise it.
pub fn sandwich_report(spec: &GameSpec, player_one: &[Strategy], levels: &[Vec<PureState>], tol: f64) -> Result<SandwichReport> {
    let theoretical = spec.theoretical_value()?;
    let mut out = Vec::with_capacity(levels.len());
    for states in levels {
        let game = discretize(spec, player_one, states)?;
        let eq = solve(&game, tol)?;
        out.push(SandwichLevel {
            states: states.len(),
            value: eq.value,
            x: eq.x,
            y: eq.y,
            exploitability: eq.exploitability,
        });
    }
    let above_theory = out.iter().all(|l| l.value >= theoretical - tol);
    let monotone = out.windows(2).all(|w| w[1].value <= w[0].value + tol);
    let converged = out.last().is_some_and(|l| (l.value - theoretical).abs() <= tol);
    Ok(SandwichReport {
        theoretical,
        tol,
        levels: out,
        above_theory,
        monotone,
        converged,
        pass: above_theory && monotone && converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloning::{identity_embedding, optimal_cloner};
    use crate::harness::{haar_states, icosahedral_states};
    use crate::estimation::optimal_povm;
    use crate::quantum::RandomStream;
    use approx::assert_abs_diff_eq;

    #[test]
    fn estimation_icosahedron() {
        let spec = GameSpec::estimation(1, 1, 0).unwrap();
        let r = sandwich_report(&spec, &[Strategy::Estimator(optimal_povm(1).unwrap())], &[icosahedral_states()], 1e-9).unwrap();
        assert!(r.pass);
        assert_abs_diff_eq!(r.levels[0].value, 2.0 / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn cloning_haar_levels() {
        let spec = GameSpec::cloning(2, 1, 2, 1, 0).unwrap();
        let one = [
            Strategy::Cloner(optimal_cloner(2, 1, 2).unwrap()),
            Strategy::Cloner(identity_embedding(2, 1, 2).unwrap()),
        ];
        let stream = RandomStream::new(20);
        let r = sandwich_report(&spec, &one, &[haar_states(2, 20, &stream)], 1e-9).unwrap();
        assert_abs_diff_eq!(r.levels[0].value, 2.0 / 3.0, epsilon = 1e-9);
        let nested: Vec<_> = [4, 8, 16].iter().map(|&k| haar_states(2, k, &stream)).collect();
        let r = sandwich_report(&spec, &one, &nested, 1e-9).unwrap();
        assert!(r.monotone && r.pass);
    }
}
