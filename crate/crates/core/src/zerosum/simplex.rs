//! Dense tableau simplex for the value of a positive matrix game.
//!
//! For `B > 0` entrywise, player II's program `max Σw s.t. Bw ≤ 1, w ≥ 0`
//! has value `1/v(B)`; the optimal slack prices are player I's `u` with
//! `x = u / Σu`. Bland's rule keeps the pivoting finite on degenerate games.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;

pub(crate) struct LpSolution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

pub(crate) fn solve_positive_game(b: &DMatrix<f64>, max_pivots: usize) -> Result<LpSolution> {
    let (m, n) = b.shape();
    let width = n + m + 1;
    let rhs = width - 1;
    let mut t = DMatrix::<f64>::zeros(m + 1, width);
    for i in 0..m {
        for j in 0..n {
            t[(i, j)] = b[(i, j)];
        }
        t[(i, n + i)] = 1.0;
        t[(i, rhs)] = 1.0;
    }
    for j in 0..n {
        t[(m, j)] = -1.0;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut pivots = 0;
    while let Some(enter) = (0..n + m).find(|&j| t[(m, j)] < -PIVOT_EPS) {
        let best = (0..m)
            .filter(|&i| t[(i, enter)] > PIVOT_EPS)
            .map(|i| t[(i, rhs)] / t[(i, enter)])
            .fold(f64::INFINITY, f64::min);
        // Bland: among tied ratios leave on the smallest basic variable.
        let leave = (0..m)
            .filter(|&i| t[(i, enter)] > PIVOT_EPS && t[(i, rhs)] / t[(i, enter)] <= best + PIVOT_EPS)
            .min_by_key(|&i| basis[i]);
        // Bounded by construction (B > 0), so a leaving row always exists.
        let row = leave.ok_or_else(|| Error::InvalidArgument("unbounded game program".into()))?;

        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::IterationLimit {
                what: "simplex",
                cap: max_pivots,
            });
        }
        let p = t[(row, enter)];
        for c in 0..width {
            t[(row, c)] /= p;
        }
        for r in 0..=m {
            if r != row {
                let f = t[(r, enter)];
                if f != 0.0 {
                    for c in 0..width {
                        let v = t[(row, c)];
                        t[(r, c)] -= f * v;
                    }
                }
            }
        }
        basis[row] = enter;
    }

    let mut w = vec![0.0; n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            w[var] = t[(i, rhs)].max(0.0);
        }
    }
    let u: Vec<f64> = (0..m).map(|i| t[(m, n + i)].max(0.0)).collect();
    Ok(LpSolution {
        x: normalize(u),
        y: normalize(w),
    })
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    } else {
        let n = v.len() as f64;
        v.iter_mut().for_each(|x| *x = 1.0 / n);
    }
    v
}
