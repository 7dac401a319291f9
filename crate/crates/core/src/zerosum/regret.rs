//! Regret matching+ self-play with alternating updates and linearly weighted
//! averages. Slow (roughly `O(1/T)` in practice, `O(1/√T)` guaranteed) but
//! entirely independent of the simplex route, which makes it a useful
//! cross-check and a nice thing to plot.

use serde::Serialize;

use super::{exploitability, MatrixGame, MixedStrategy};
use crate::error::Result;

#[derive(Clone, Debug, Serialize)]
pub struct RegretTrace {
    pub x: MixedStrategy,
    pub y: MixedStrategy,
    pub value: f64,
    /// Iteration counts at which the averaged profile was scored.
    pub checkpoints: Vec<usize>,
    pub exploitability: Vec<f64>,
}

fn positive_part(regrets: &[f64]) -> Vec<f64> {
    let total: f64 = regrets.iter().map(|r| r.max(0.0)).sum();
    if total > 0.0 {
        regrets.iter().map(|r| r.max(0.0) / total).collect()
    } else {
        vec![1.0 / regrets.len() as f64; regrets.len()]
    }
}

/// Runs `iterations` rounds, scoring the averaged profile every `every`
/// rounds (and at the end).
pub fn regret_matching(game: &MatrixGame, iterations: usize, every: usize) -> Result<RegretTrace> {
    let (m, n) = (game.rows(), game.cols());
    let a = game.payoff();
    let mut rx = vec![0.0; m];
    let mut ry = vec![0.0; n];
    let mut sx = vec![0.0; m];
    let mut sy = vec![0.0; n];
    let mut checkpoints = Vec::new();
    let mut scores = Vec::new();
    let every = every.max(1);

    let averaged = |s: &[f64]| -> MixedStrategy {
        let total: f64 = s.iter().sum();
        if total > 0.0 {
            MixedStrategy::from_trusted(s.iter().map(|v| v / total).collect())
        } else {
            MixedStrategy::uniform(s.len())
        }
    };

    for t in 1..=iterations.max(1) {
        let weight = t as f64;

        let y = positive_part(&ry);
        let x = positive_part(&rx);
        let row_gain: Vec<f64> = (0..m).map(|i| (0..n).map(|j| a[(i, j)] * y[j]).sum()).collect();
        let ev: f64 = x.iter().zip(&row_gain).map(|(p, g)| p * g).sum();
        for i in 0..m {
            rx[i] = (rx[i] + row_gain[i] - ev).max(0.0);
        }
        let x = positive_part(&rx);
        for i in 0..m {
            sx[i] += weight * x[i];
        }

        let col_cost: Vec<f64> = (0..n).map(|j| (0..m).map(|i| x[i] * a[(i, j)]).sum()).collect();
        let ev_col: f64 = y.iter().zip(&col_cost).map(|(q, c)| q * c).sum();
        for j in 0..n {
            ry[j] = (ry[j] + ev_col - col_cost[j]).max(0.0);
        }
        let y = positive_part(&ry);
        for j in 0..n {
            sy[j] += weight * y[j];
        }

        if t % every == 0 || t == iterations {
            let (xa, ya) = (averaged(&sx), averaged(&sy));
            checkpoints.push(t);
            scores.push(exploitability(game, &xa, &ya)?);
        }
    }

    let (x, y) = (averaged(&sx), averaged(&sy));
    let value = game.value_of(&x, &y)?;
    Ok(RegretTrace {
        x,
        y,
        value,
        checkpoints,
        exploitability: scores,
    })
}
