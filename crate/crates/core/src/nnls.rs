//! Lawson-Hanson active-set nonnegative least squares.

use nalgebra::{DMatrix, DVector};

use crate::error::{shape, Error, Result};

#[derive(Clone, Debug)]
pub struct NnlsSolution {
    pub x: DVector<f64>,
    /// `‖Ax - b‖₂` at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

/// Minimizes `‖Ax - b‖₂` subject to `x ≥ 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>, max_iter: usize) -> Result<NnlsSolution> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(shape(format!("rhs has length {}, matrix has {m} rows", b.len())));
    }
    if n == 0 {
        return Err(shape("least squares with no unknowns"));
    }
    let tol = 10.0 * f64::EPSILON * a.amax().max(1.0) * (m.max(n) as f64);

    let mut x = DVector::<f64>::zeros(n);
    let mut passive = vec![false; n];
    let mut iterations = 0;

    let gradient = |x: &DVector<f64>| a.transpose() * (b - a * x);
    let mut w = gradient(&x);

    loop {
        let candidate = (0..n)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(t) = candidate.filter(|&j| w[j] > tol) else {
            break;
        };
        passive[t] = true;

        loop {
            iterations += 1;
            if iterations > max_iter {
                return Err(Error::IterationLimit {
                    what: "nonnegative least squares",
                    cap: max_iter,
                });
            }
            let cols: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let sub = solve_subset(a, b, &cols)?;
            let mut s = DVector::<f64>::zeros(n);
            for (&j, &v) in cols.iter().zip(sub.iter()) {
                s[j] = v;
            }
            if cols.iter().all(|&j| s[j] > 0.0) {
                x = s;
                break;
            }
            // Step toward s until the first passive coordinate hits zero.
            let alpha = cols
                .iter()
                .filter(|&&j| s[j] <= 0.0)
                .map(|&j| x[j] / (x[j] - s[j]))
                .fold(f64::INFINITY, f64::min);
            x += (s - &x) * alpha;
            for &j in &cols {
                if x[j] <= tol {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
        w = gradient(&x);
    }

    let residual = (a * &x - b).norm();
    Ok(NnlsSolution {
        x,
        residual,
        iterations,
    })
}

fn solve_subset(a: &DMatrix<f64>, b: &DVector<f64>, cols: &[usize]) -> Result<DVector<f64>> {
    let sub = DMatrix::from_fn(a.nrows(), cols.len(), |r, c| a[(r, cols[c])]);
    let svd = sub.svd(true, true);
    svd.solve(b, 1e-13)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unconstrained_optimum_is_feasible() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let b = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let sol = nnls(&a, &b, 100).unwrap();
        assert_abs_diff_eq!(sol.x[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.x[1], 2.0, epsilon = 1e-12);
        assert!(sol.residual < 1e-12);
    }

    #[test]
    fn clamps_negative_direction() {
        // Unconstrained solution is (-1, 1); the constrained one sets x0 = 0.
        let a = DMatrix::<f64>::identity(2, 2);
        let b = DVector::from_vec(vec![-1.0, 1.0]);
        let sol = nnls(&a, &b, 100).unwrap();
        assert_eq!(sol.x[0], 0.0);
        assert_abs_diff_eq!(sol.x[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.residual, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn kkt_conditions_on_random_problem() {
        use rand::Rng;
        let mut rng = crate::quantum::RandomStream::new(4).rng();
        let a = DMatrix::from_fn(12, 6, |_, _| rng.random::<f64>() - 0.5);
        let b = DVector::from_fn(12, |_, _| rng.random::<f64>() - 0.5);
        let sol = nnls(&a, &b, 1000).unwrap();
        let grad = a.transpose() * (&b - &a * &sol.x);
        for j in 0..6 {
            assert!(sol.x[j] >= 0.0);
            if sol.x[j] > 0.0 {
                assert!(grad[j].abs() < 1e-10);
            } else {
                assert!(grad[j] <= 1e-10);
            }
        }
    }

    #[test]
    fn shape_errors() {
        let a = DMatrix::<f64>::identity(2, 2);
        assert!(nnls(&a, &DVector::zeros(3), 10).is_err());
    }
}
