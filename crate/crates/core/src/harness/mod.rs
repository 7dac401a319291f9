//! Experiments tying the quantum strategies to the finite game machinery:
//! discretized matrix games, minmax sandwich reports, perturbation checks,
//! Monte Carlo play and the asymmetric cloning scan.

mod mc;
mod perturb;
mod sandwich;
mod scan;
mod states;

use serde::Serialize;

use crate::cloning::{global_fidelity, haar_avg_global_fidelity, single_clone_fidelity, single_clone_haar_fidelity, value_formulas, Channel};
use crate::error::{shape, Error, Result};
use crate::estimation::{mean_fidelity, state_fidelity, Povm};
use crate::quantum::PureState;
use crate::zerosum::MatrixGame;

pub use mc::{monte_carlo_play, McRecord};
pub use perturb::{cloner_perturbations, estimator_perturbations, perturb_best_response_check, PerturbReport};
pub use sandwich::{sandwich_report, SandwichLevel, SandwichReport};
pub use scan::{asym_bound_scan, uniform_grid, ScanRecord, ScanReport};
pub use states::{cube_states, fibonacci_states, haar_states, icosahedral_states, nested_bloch_states, octahedral_states};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    /// Player I measures `N` copies and resends one qubit.
    Estimation,
    /// Player I produces `M` copies, tested together.
    Cloning,
    /// Player I produces `M` copies; one clone, chosen uniformly, is tested.
    OneParticle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GameSpec {
    pub kind: GameKind,
    pub d: usize,
    pub n: usize,
    /// Number of output copies; `1` for estimation.
    pub m: usize,
    pub samples: usize,
    pub seed: u64,
}

impl GameSpec {
    pub fn new(kind: GameKind, d: usize, n: usize, m: usize, samples: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArity("N must be at least 1".into()));
        }
        match kind {
            GameKind::Estimation if d != 2 || m != 1 => {
                return Err(Error::InvalidArity(format!("estimation is a qubit N -> 1 game, got d={d}, M={m}")));
            }
            GameKind::Cloning | GameKind::OneParticle if d < 2 || m < n => {
                return Err(Error::InvalidArity(format!("cloning needs d >= 2 and M >= N, got ({d}, {n}, {m})")));
            }
            _ => {}
        }
        Ok(Self {
            kind,
            d,
            n,
            m,
            samples,
            seed,
        })
    }

    pub fn estimation(n: usize, samples: usize, seed: u64) -> Result<Self> {
        Self::new(GameKind::Estimation, 2, n, 1, samples, seed)
    }

    pub fn cloning(d: usize, n: usize, m: usize, samples: usize, seed: u64) -> Result<Self> {
        Self::new(GameKind::Cloning, d, n, m, samples, seed)
    }

    pub fn one_particle(d: usize, n: usize, m: usize, samples: usize, seed: u64) -> Result<Self> {
        Self::new(GameKind::OneParticle, d, n, m, samples, seed)
    }

    /// Closed-form value of the game.
    pub fn theoretical_value(&self) -> Result<f64> {
        match self.kind {
            GameKind::Estimation => Ok((self.n + 1) as f64 / (self.n + 2) as f64),
            GameKind::Cloning => Ok(value_formulas(self.d, self.n, self.m)?.global_value),
            GameKind::OneParticle => Ok(value_formulas(self.d, self.n, self.m)?.single_value),
        }
    }
}

/// A pure strategy of player I.
#[derive(Clone, Debug)]
pub enum Strategy {
    Estimator(Povm),
    Cloner(Channel),
}

impl Strategy {
    fn check(&self, spec: &GameSpec) -> Result<()> {
        match (self, spec.kind) {
            (Strategy::Estimator(p), GameKind::Estimation) if p.copies() == spec.n => Ok(()),
            (Strategy::Cloner(c), GameKind::Cloning | GameKind::OneParticle)
                if (c.local_dim(), c.n_in(), c.n_out()) == (spec.d, spec.n, spec.m) =>
            {
                Ok(())
            }
            _ => Err(shape(format!("strategy does not fit the {:?} game ({}, {}, {})", spec.kind, spec.d, spec.n, spec.m))),
        }
    }

    /// Expected payoff against the pure state `psi`.
    pub fn payoff(&self, kind: GameKind, psi: &PureState) -> Result<f64> {
        match (self, kind) {
            (Strategy::Estimator(p), GameKind::Estimation) => state_fidelity(p, psi),
            (Strategy::Cloner(c), GameKind::Cloning) => global_fidelity(c, psi),
            (Strategy::Cloner(c), GameKind::OneParticle) => {
                let m = c.n_out();
                let mut total = 0.0;
                for k in 0..m {
                    total += single_clone_fidelity(c, psi, k)?;
                }
                Ok(total / m as f64)
            }
            _ => Err(shape(format!("strategy does not play the {kind:?} game"))),
        }
    }

    /// Exact Haar average of [`Strategy::payoff`].
    pub fn haar_payoff(&self, kind: GameKind) -> Result<f64> {
        match (self, kind) {
            (Strategy::Estimator(p), GameKind::Estimation) => Ok(mean_fidelity(p)),
            (Strategy::Cloner(c), GameKind::Cloning) => haar_avg_global_fidelity(c),
            (Strategy::Cloner(c), GameKind::OneParticle) => {
                let m = c.n_out();
                let mut total = 0.0;
                for k in 0..m {
                    total += single_clone_haar_fidelity(c, k)?;
                }
                Ok(total / m as f64)
            }
            _ => Err(shape(format!("strategy does not play the {kind:?} game"))),
        }
    }
}

/// Evaluates `f(i)` for `i in 0..count`, in parallel when enabled; the
/// output is always in index order.
pub(crate) fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

fn game_from_entries(rows: usize, cols: usize, entry: impl Fn(usize, usize) -> Result<f64> + Sync + Send) -> Result<MatrixGame> {
    if rows == 0 || cols == 0 {
        return Err(shape("both strategy lists must be nonempty"));
    }
    let flat = map_indexed(rows * cols, |k| entry(k / cols, k % cols))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    MatrixGame::new(nalgebra::DMatrix::from_row_slice(rows, cols, &flat))
}

/// `A[i][j]` is the expected payoff of `povms[i]` against `states[j]`.
pub fn discretize_estimation_game(n: usize, povms: &[Povm], states: &[PureState]) -> Result<MatrixGame> {
    if let Some(p) = povms.iter().find(|p| p.copies() != n) {
        return Err(shape(format!("POVM for {} copies in an N={n} game", p.copies())));
    }
    if let Some(s) = states.iter().find(|s| s.dim() != 2) {
        return Err(shape(format!("state of dim {} in a qubit game", s.dim())));
    }
    game_from_entries(povms.len(), states.len(), |i, j| state_fidelity(&povms[i], &states[j]))
}

/// `A[i][j]` is the global fidelity of `channels[i]` on `states[j]`.
pub fn discretize_cloning_game(d: usize, n: usize, m: usize, channels: &[Channel], states: &[PureState]) -> Result<MatrixGame> {
    check_cloning_lists(d, n, m, channels, states)?;
    game_from_entries(channels.len(), states.len(), |i, j| global_fidelity(&channels[i], &states[j]))
}

/// `A[i][j]` is the single-clone fidelity of `channels[i]` on `states[j]`,
/// averaged over the tested clone.
pub fn discretize_one_particle_game(d: usize, n: usize, m: usize, channels: &[Channel], states: &[PureState]) -> Result<MatrixGame> {
    check_cloning_lists(d, n, m, channels, states)?;
    game_from_entries(channels.len(), states.len(), |i, j| {
        Strategy::Cloner(channels[i].clone()).payoff(GameKind::OneParticle, &states[j])
    })
}

fn check_cloning_lists(d: usize, n: usize, m: usize, channels: &[Channel], states: &[PureState]) -> Result<()> {
    if let Some(c) = channels.iter().find(|c| (c.local_dim(), c.n_in(), c.n_out()) != (d, n, m)) {
        return Err(shape(format!(
            "channel ({}, {}, {}) in a ({d}, {n}, {m}) game",
            c.local_dim(),
            c.n_in(),
            c.n_out()
        )));
    }
    if let Some(s) = states.iter().find(|s| s.dim() != d) {
        return Err(shape(format!("state of dim {} in a d={d} game", s.dim())));
    }
    Ok(())
}

/// Builds the game matrix for `spec.kind` from player I's strategies.
pub fn discretize(spec: &GameSpec, strategies: &[Strategy], states: &[PureState]) -> Result<MatrixGame> {
    for s in strategies {
        s.check(spec)?;
    }
    if let Some(s) = states.iter().find(|s| s.dim() != spec.d) {
        return Err(shape(format!("state of dim {} in a d={} game", s.dim(), spec.d)));
    }
    game_from_entries(strategies.len(), states.len(), |i, j| strategies[i].payoff(spec.kind, &states[j]))
}
