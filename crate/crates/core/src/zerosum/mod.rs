//! Finite two-player zero-sum games.
//!
//! The row player (player I) receives `A[i][j]`, the column player (player
//! II) receives `-A[i][j]`. Besides solving, the module implements the
//! finite-group version of Haar symmetrization of a best reply and the check
//! that equilibrium pairs of a zero-sum game are interchangeable.

mod regret;
mod simplex;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{shape, Error, Result};
use crate::quantum::RandomStream;

pub use regret::{regret_matching, RegretTrace};

/// Multiplier applied to `tol` by [`interchange_check`].
pub const INTERCHANGE_FACTOR: f64 = 10.0;

const MAX_PIVOTS: usize = 1_000_000;
const TIE_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixGame {
    payoff: DMatrix<f64>,
}

impl MatrixGame {
    pub fn new(payoff: DMatrix<f64>) -> Result<Self> {
        if payoff.is_empty() {
            return Err(shape("game needs at least one row and one column"));
        }
        if payoff.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite payoff".into()));
        }
        Ok(Self { payoff })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(shape("ragged payoff rows"));
        }
        Self::new(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn rock_paper_scissors() -> Self {
        Self::from_rows(&[vec![0.0, -1.0, 1.0], vec![1.0, 0.0, -1.0], vec![-1.0, 1.0, 0.0]])
            .expect("static matrix")
    }

    pub fn matching_pennies() -> Self {
        Self::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).expect("static matrix")
    }

    pub fn rows(&self) -> usize {
        self.payoff.nrows()
    }

    pub fn cols(&self) -> usize {
        self.payoff.ncols()
    }

    pub fn payoff(&self) -> &DMatrix<f64> {
        &self.payoff
    }

    /// The same game seen from player II: `-Aᵀ`.
    pub fn negated_transpose(&self) -> Self {
        Self {
            payoff: -self.payoff.transpose(),
        }
    }

    /// `A y`, player I's payoff for each pure row.
    pub fn row_payoffs(&self, y: &MixedStrategy) -> Result<Vec<f64>> {
        if y.len() != self.cols() {
            return Err(shape(format!("column strategy of length {} for {} columns", y.len(), self.cols())));
        }
        Ok((0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.payoff[(i, j)] * y.0[j]).sum())
            .collect())
    }

    /// `xᵀ A`, player I's payoff against each pure column.
    pub fn column_payoffs(&self, x: &MixedStrategy) -> Result<Vec<f64>> {
        if x.len() != self.rows() {
            return Err(shape(format!("row strategy of length {} for {} rows", x.len(), self.rows())));
        }
        Ok((0..self.cols())
            .map(|j| (0..self.rows()).map(|i| x.0[i] * self.payoff[(i, j)]).sum())
            .collect())
    }

    pub fn value_of(&self, x: &MixedStrategy, y: &MixedStrategy) -> Result<f64> {
        let ay = self.row_payoffs(y)?;
        if x.len() != self.rows() {
            return Err(shape("row strategy length"));
        }
        Ok(x.0.iter().zip(&ay).map(|(p, v)| p * v).sum())
    }

    /// `max_i min_j A_ij`, what player I can guarantee with a pure row.
    pub fn pure_maxmin(&self) -> f64 {
        self.payoff
            .row_iter()
            .map(|r| r.min())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `min_j max_i A_ij`, what player II can hold player I to with a pure
    /// column.
    pub fn pure_minmax(&self) -> f64 {
        self.payoff
            .column_iter()
            .map(|c| c.max())
            .fold(f64::INFINITY, f64::min)
    }

    fn permuted(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self {
            payoff: DMatrix::from_fn(self.rows(), self.cols(), |i, j| self.payoff[(rows[i], cols[j])]),
        }
    }
}

/// Probability vector over pure strategies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedStrategy(Vec<f64>);

impl MixedStrategy {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(shape("empty strategy"));
        }
        if probs.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::InvalidArgument("negative or NaN probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}")));
        }
        Ok(Self(probs))
    }

    /// Clamps tiny negatives and renormalizes.
    pub(crate) fn from_trusted(mut probs: Vec<f64>) -> Self {
        probs.iter_mut().for_each(|p| *p = p.max(0.0));
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        Self(probs)
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn pure(n: usize, index: usize) -> Self {
        let mut p = vec![0.0; n];
        p[index] = 1.0;
        Self(p)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_variation(&self, other: &MixedStrategy) -> f64 {
        0.5 * self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquilibriumPair {
    pub x: MixedStrategy,
    pub y: MixedStrategy,
    pub value: f64,
    pub exploitability: f64,
}

impl EquilibriumPair {
    /// Scores an arbitrary profile.
    pub fn evaluate(game: &MatrixGame, x: MixedStrategy, y: MixedStrategy) -> Result<Self> {
        let value = game.value_of(&x, &y)?;
        let exploitability = exploitability(game, &x, &y)?;
        Ok(Self {
            x,
            y,
            value,
            exploitability,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// Player I, the maximizing row player.
    Row,
    /// Player II, the minimizing column player.
    Column,
}

/// `max_i (Ay)_i - min_j (xᵀA)_j`: the total gain available to the two
/// players from deviating to a best reply. Zero exactly at equilibrium.
pub fn exploitability(game: &MatrixGame, x: &MixedStrategy, y: &MixedStrategy) -> Result<f64> {
    let ay = game.row_payoffs(y)?;
    let xa = game.column_payoffs(x)?;
    let best_row = ay.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let best_col = xa.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((best_row - best_col).max(0.0))
}

/// Pure best reply of `side` to `opponent`; ties go to the lowest index.
pub fn best_response(game: &MatrixGame, opponent: &MixedStrategy, side: Side) -> Result<usize> {
    let scores: Vec<f64> = match side {
        Side::Row => game.row_payoffs(opponent)?,
        Side::Column => game.column_payoffs(opponent)?.into_iter().map(|v| -v).collect(),
    };
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] + TIE_EPS {
            best = i;
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    /// Shuffles strategy order before solving; different seeds can land on
    /// different vertices of a degenerate equilibrium set.
    pub seed: Option<u64>,
}

impl SolveOptions {
    pub fn new(tol: f64) -> Self {
        Self { tol, seed: None }
    }
}

pub fn solve(game: &MatrixGame, tol: f64) -> Result<EquilibriumPair> {
    solve_with(game, &SolveOptions::new(tol))
}

/// Computes an equilibrium and its value.
///
/// Closed forms handle `1 x n`, `n x 1` and `2 x 2`; everything else goes
/// through the simplex method. The result is verified: an exploitability
/// above `tol` is reported as [`Error::NonConvergence`].
pub fn solve_with(game: &MatrixGame, opts: &SolveOptions) -> Result<EquilibriumPair> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let (x, y) = match opts.seed {
        None => solve_raw(game)?,
        Some(seed) => {
            let mut rng = RandomStream::new(seed).rng();
            let mut rows: Vec<usize> = (0..game.rows()).collect();
            let mut cols: Vec<usize> = (0..game.cols()).collect();
            rows.shuffle(&mut rng);
            cols.shuffle(&mut rng);
            let (px, py) = solve_raw(&game.permuted(&rows, &cols))?;
            let mut x = vec![0.0; game.rows()];
            let mut y = vec![0.0; game.cols()];
            for (k, &r) in rows.iter().enumerate() {
                x[r] = px[k];
            }
            for (k, &c) in cols.iter().enumerate() {
                y[c] = py[k];
            }
            (x, y)
        }
    };
    let pair = EquilibriumPair::evaluate(game, MixedStrategy::from_trusted(x), MixedStrategy::from_trusted(y))?;
    if pair.exploitability > opts.tol {
        return Err(Error::NonConvergence {
            exploitability: pair.exploitability,
        });
    }
    Ok(pair)
}

fn solve_raw(game: &MatrixGame) -> Result<(Vec<f64>, Vec<f64>)> {
    let (m, n) = (game.rows(), game.cols());
    let a = game.payoff();
    if m == 1 {
        let j = best_response(game, &MixedStrategy::pure(1, 0), Side::Column)?;
        return Ok((vec![1.0], MixedStrategy::pure(n, j).0));
    }
    if n == 1 {
        let i = best_response(game, &MixedStrategy::pure(1, 0), Side::Row)?;
        return Ok((MixedStrategy::pure(m, i).0, vec![1.0]));
    }
    if (m, n) == (2, 2) {
        if let Some(sol) = solve_two_by_two(a) {
            return Ok(sol);
        }
    }
    let shift = 1.0 - a.min();
    let positive = a.map(|v| v + shift);
    let lp = simplex::solve_positive_game(&positive, MAX_PIVOTS)?;
    Ok((lp.x, lp.y))
}

fn solve_two_by_two(a: &DMatrix<f64>) -> Option<(Vec<f64>, Vec<f64>)> {
    // Saddle point: an entry that is its row's minimum and its column's maximum.
    for i in 0..2 {
        for j in 0..2 {
            let v = a[(i, j)];
            if v <= a[(i, 1 - j)] && v >= a[(1 - i, j)] {
                return Some((MixedStrategy::pure(2, i).0, MixedStrategy::pure(2, j).0));
            }
        }
    }
    let (p, q, r, s) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let denom = p - q - r + s;
    if denom.abs() < 1e-300 {
        return None;
    }
    let x0 = (s - r) / denom;
    let y0 = (s - q) / denom;
    Some((vec![x0, 1.0 - x0], vec![y0, 1.0 - y0]))
}

fn check_permutation(p: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if p.len() != n {
        return Err(Error::NotAGroup(format!("element of length {} acting on {n} points", p.len())));
    }
    for &v in p {
        if v >= n || seen[v] {
            return Err(Error::NotAGroup(format!("{p:?} is not a permutation")));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Averages a best reply over a finite group acting on player II's
/// strategies.
///
/// `action[g][f]` is the column `g·f`, and `row_map[g][e]` the row `e_g`
/// satisfying `A[e_g][f] = A[e][g·f]`. Player II's reference strategy is
/// the uniform group average of column 0. Player I's best reply `e*` to it
/// is spread uniformly over its images `e*_g`. When the action is transitive
/// on columns the result pays the same against every column.
pub fn symmetrize(game: &MatrixGame, action: &[Vec<usize>], row_map: &[Vec<usize>]) -> Result<MixedStrategy> {
    let (m, n) = (game.rows(), game.cols());
    if action.is_empty() {
        return Err(Error::NotAGroup("empty group".into()));
    }
    if row_map.len() != action.len() {
        return Err(shape(format!("{} row maps for {} group elements", row_map.len(), action.len())));
    }
    for g in action {
        check_permutation(g, n)?;
    }
    let identity: Vec<usize> = (0..n).collect();
    if !action.contains(&identity) {
        return Err(Error::NotAGroup("missing identity".into()));
    }
    for g in action {
        for h in action {
            let composed: Vec<usize> = (0..n).map(|f| g[h[f]]).collect();
            if !action.contains(&composed) {
                return Err(Error::NotAGroup(format!("{g:?}∘{h:?} not in the set")));
            }
        }
    }

    let a = game.payoff();
    let mut deviation: f64 = 0.0;
    for (g, map) in action.iter().zip(row_map) {
        if map.len() != m || map.iter().any(|&e| e >= m) {
            return Err(shape("row map must send every row to a row"));
        }
        for e in 0..m {
            for f in 0..n {
                deviation = deviation.max((a[(map[e], f)] - a[(e, g[f])]).abs());
            }
        }
    }
    if deviation > 1e-12 {
        return Err(Error::CovarianceViolation { deviation });
    }

    let weight = 1.0 / action.len() as f64;
    let mut reference = vec![0.0; n];
    for g in action {
        reference[g[0]] += weight;
    }
    let e_star = best_response(game, &MixedStrategy(reference), Side::Row)?;

    let mut chi = vec![0.0; m];
    for map in row_map {
        chi[map[e_star]] += weight;
    }
    Ok(MixedStrategy(chi))
}

/// `max_j (xᵀA)_j - min_j (xᵀA)_j`; zero for a universal strategy.
pub fn payoff_spread(game: &MatrixGame, x: &MixedStrategy) -> Result<f64> {
    let row = game.column_payoffs(x)?;
    let hi = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = row.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(hi - lo)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterchangeReport {
    pub pass: bool,
    /// Exploitability of `(x1, y2)` and `(x2, y1)`.
    pub cross_exploitability: [f64; 2],
    /// Values of `(x1,y1)`, `(x2,y2)`, `(x1,y2)`, `(x2,y1)`.
    pub values: [f64; 4],
    pub value_spread: f64,
    pub threshold: f64,
    /// Largest measured deviation minus the threshold; positive means fail.
    pub slack: f64,
    pub inputs_are_equilibria: bool,
}

/// Checks that two equilibria can be recombined and share one value.
pub fn interchange_check(game: &MatrixGame, p1: &EquilibriumPair, p2: &EquilibriumPair, tol: f64) -> Result<InterchangeReport> {
    let threshold = INTERCHANGE_FACTOR * tol;
    let e1 = exploitability(game, &p1.x, &p1.y)?;
    let e2 = exploitability(game, &p2.x, &p2.y)?;
    let c12 = exploitability(game, &p1.x, &p2.y)?;
    let c21 = exploitability(game, &p2.x, &p1.y)?;
    let values = [
        game.value_of(&p1.x, &p1.y)?,
        game.value_of(&p2.x, &p2.y)?,
        game.value_of(&p1.x, &p2.y)?,
        game.value_of(&p2.x, &p1.y)?,
    ];
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let value_spread = hi - lo;
    let inputs_are_equilibria = e1 <= tol && e2 <= tol;
    let worst = c12.max(c21).max(value_spread);
    let slack = worst - threshold;
    Ok(InterchangeReport {
        pass: inputs_are_equilibria && slack <= 0.0,
        cross_exploitability: [c12, c21],
        values,
        value_spread,
        threshold,
        slack,
        inputs_are_equilibria,
    })
}
