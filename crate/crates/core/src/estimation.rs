//! Qubit state estimation: covariant POVMs on the `N`-copy symmetric
//! subspace and the measure-and-resend strategy.
//!
//! A direction `(θ, φ)` on the Bloch sphere gives the qubit
//! `|φ(θ,φ)> = e^{-iφ/2} cos(θ/2)|0> + e^{iφ/2} sin(θ/2)|1>` and, in the
//! symmetric basis `|m> = |N/2, m>` (`m` descending), the measurement vector
//!
//! ```text
//! |Φ> = Σ_m e^{-iφm} d^{N/2}_{m,N/2}(θ) |m>  =  V† |φ>^{⊗N}
//! ```
//!
//! Effects are `c_r |Φ_r><Φ_r|` with weights `c_r ≥ 0` solved by nonnegative
//! least squares against `Σ_r c_r |Φ_r><Φ_r| = 1`. On outcome `r` the
//! estimator resends `|φ_r>`.
//!
//! Why the value is `(N+1)/(N+2)`: with aligned guesses the Haar-averaged
//! payoff is `Σ_r c_r ∫dψ |<φ_r|ψ>|^{2(N+1)}`. Each integral is
//! `<φ_r^{⊗N+1}| s_{N+1} |φ_r^{⊗N+1}> / d[N+1] = 1/(N+2)` because product
//! states are symmetric, and taking the trace of the completeness relation
//! gives `Σ_r c_r = N+1`. So the average is `(N+1)/(N+2)` for every
//! complete aligned POVM.
//!
//! The per-state payoff `Σ_r c_r |<φ_r|ψ>|^{2(N+1)}` is only constant in
//! `ψ` when the weighted directions are also complete at order `N+1`.
//! [`build_universal_povm`] solves at that order, then rescales by
//! `d[N]/d[N+1]` (a partial trace of `s_{N+1}` is `(d[N+1]/d[N]) s_N`).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{shape, Error, Result};
use crate::nnls::nnls;
use crate::quantum::{
    expectation, min_eigenvalue, tensor_power, trace_of_product, CMat, CVec, DensityOperator,
    PureState,
};
use crate::symmetric::{binomial, dim_sym, SymBasis};

/// Completeness tolerance for shipped POVMs.
pub const COMPLETENESS_TOL: f64 = 1e-8;
pub const EFFECT_PSD_TOL: f64 = 1e-10;

const NNLS_MAX_ITER: usize = 10_000;

/// Point on the Bloch sphere, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Direction {
    theta: f64,
    phase: f64,
}

impl Direction {
    pub fn new(theta: f64, phase: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !phase.is_finite() {
            return Err(Error::InvalidArgument(format!("direction ({theta}, {phase}) out of range")));
        }
        Ok(Self {
            theta,
            phase: phase.rem_euclid(2.0 * PI),
        })
    }

    /// Direction of a (not necessarily unit) nonzero Bloch vector.
    pub fn from_bloch(v: [f64; 3]) -> Result<Self> {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(r > 0.0) {
            return Err(Error::InvalidArgument("zero Bloch vector".into()));
        }
        let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
        Self::new(theta, v[1].atan2(v[0]))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn bloch(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phase.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn antipode(&self) -> Self {
        Self {
            theta: PI - self.theta,
            phase: (self.phase + PI).rem_euclid(2.0 * PI),
        }
    }

    pub fn qubit(&self) -> PureState {
        PureState::qubit_from_angles(self.theta, self.phase)
    }
}

/// `d^j_{m,j}(θ) = <j m| e^{-iθJ_y} |j j>` with doubled indices.
pub fn wigner_d_top(two_j: u32, two_m: i32, theta: f64) -> Result<f64> {
    let tj = two_j as i32;
    if two_m.abs() > tj || (tj - two_m) % 2 != 0 {
        return Err(Error::Index {
            index: two_m.unsigned_abs() as usize,
            limit: two_j as usize,
        });
    }
    let up = (tj + two_m) / 2; // j + m
    let down = (tj - two_m) / 2; // j - m
    let (s, c) = (theta / 2.0).sin_cos();
    let coeff = (binomial(two_j as u64, up as u64) as f64).sqrt();
    Ok(coeff * c.powi(up) * s.powi(down))
}

/// Symmetric-basis coordinates of `|φ(dir)>^{⊗N}`.
pub fn measurement_vector(n: usize, dir: &Direction) -> Result<PureState> {
    if n == 0 {
        return Err(Error::InvalidArity("measurement vector needs N >= 1".into()));
    }
    let amps = (0..=n)
        .map(|k| {
            let two_m = n as i32 - 2 * k as i32;
            let d = wigner_d_top(n as u32, two_m, dir.theta)?;
            Ok(Complex64::from_polar(d, -dir.phase * two_m as f64 / 2.0))
        })
        .collect::<Result<Vec<_>>>()?;
    PureState::normalized(CVec::from_vec(amps))
}

/// `count` quasi-uniform Fibonacci-lattice points, azimuth as phase.
pub fn fibonacci_directions(count: usize) -> Vec<Direction> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / count as f64;
            Direction {
                theta: z.clamp(-1.0, 1.0).acos(),
                phase: (i as f64 * golden_angle).rem_euclid(2.0 * PI),
            }
        })
        .collect()
}

/// Antipodal pair for `N = 1`, otherwise `(N+1)²` Fibonacci points.
pub fn default_directions(n: usize) -> Vec<Direction> {
    if n <= 1 {
        vec![Direction { theta: 0.0, phase: 0.0 }, Direction { theta: PI, phase: 0.0 }]
    } else {
        fibonacci_directions((n + 1) * (n + 1))
    }
}

/// Effects on the `(N+1)`-dimensional symmetric subspace paired with resend
/// states.
#[derive(Clone, Debug)]
pub struct Povm {
    n: usize,
    effects: Vec<CMat>,
    guesses: Vec<PureState>,
    residual: f64,
    basis: SymBasis,
}

impl Povm {
    pub fn new(n: usize, effects: Vec<CMat>, guesses: Vec<PureState>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArity("POVM needs N >= 1".into()));
        }
        if effects.is_empty() || effects.len() != guesses.len() {
            return Err(shape(format!(
                "{} effects vs {} guesses",
                effects.len(),
                guesses.len()
            )));
        }
        let dim = n + 1;
        let mut total = CMat::zeros(dim, dim);
        for e in &effects {
            if e.shape() != (dim, dim) {
                return Err(shape(format!("effect shape {:?}, expected ({dim}, {dim})", e.shape())));
            }
            let min = min_eigenvalue(e);
            if min < -EFFECT_PSD_TOL || (e - e.adjoint()).camax() > EFFECT_PSD_TOL {
                return Err(Error::InvalidArgument(format!("effect not PSD (min eigenvalue {min:e})")));
            }
            total += e;
        }
        if let Some(g) = guesses.iter().find(|g| g.dim() != 2) {
            return Err(shape(format!("guess state has dim {}, expected 2", g.dim())));
        }
        let residual = (total - CMat::identity(dim, dim)).norm();
        if !(residual <= COMPLETENESS_TOL) {
            return Err(Error::IncompletePovm {
                residual,
                tol: COMPLETENESS_TOL,
            });
        }
        Ok(Self {
            n,
            effects,
            guesses,
            residual,
            basis: SymBasis::new(2, n)?,
        })
    }

    /// The same measurement with different resend states.
    pub fn with_guesses(&self, guesses: Vec<PureState>) -> Result<Self> {
        Self::new(self.n, self.effects.clone(), guesses)
    }

    /// A trivial measurement that always resends `guess`.
    pub fn constant(n: usize, guess: PureState) -> Result<Self> {
        Self::new(n, vec![CMat::identity(n + 1, n + 1)], vec![guess])
    }

    pub fn copies(&self) -> usize {
        self.n
    }

    pub fn effects(&self) -> &[CMat] {
        &self.effects
    }

    pub fn guesses(&self) -> &[PureState] {
        &self.guesses
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Frobenius norm of `Σ E_r - 1`.
    pub fn completeness_residual(&self) -> f64 {
        self.residual
    }

    /// Outcome distribution on `ψ^{⊗N}`, renormalized to sum to one.
    pub fn outcome_probabilities(&self, psi: &PureState) -> Result<Vec<f64>> {
        if psi.dim() != 2 {
            return Err(shape(format!("estimation acts on qubits, got dim {}", psi.dim())));
        }
        let v = self.basis.compress(tensor_power(psi, self.n)?.amplitudes());
        let mut p: Vec<f64> = self
            .effects
            .iter()
            .map(|e| expectation(e, &v).re.max(0.0))
            .collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        Ok(p)
    }

    /// Draws an outcome index on input `ψ^{⊗N}`.
    pub fn sample_outcome<R: Rng + ?Sized>(&self, psi: &PureState, rng: &mut R) -> Result<usize> {
        let p = self.outcome_probabilities(psi)?;
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (r, pr) in p.iter().enumerate() {
            acc += pr;
            if u < acc {
                return Ok(r);
            }
        }
        Ok(p.len() - 1)
    }
}

fn frame_system(order: usize, directions: &[Direction]) -> Result<(DMatrix<f64>, DVector<f64>, Vec<CMat>)> {
    let dim = order + 1;
    let projectors = directions
        .iter()
        .map(|dir| Ok(measurement_vector(order, dir)?.projector()))
        .collect::<Result<Vec<_>>>()?;
    let rows = 2 * dim * dim;
    let a = DMatrix::from_fn(rows, projectors.len(), |r, c| {
        let z = projectors[c][r / 2];
        if r % 2 == 0 {
            z.re
        } else {
            z.im
        }
    });
    // Column-major linear index k = row + dim * col.
    let b = DVector::from_fn(rows, |r, _| {
        let k = r / 2;
        if r % 2 == 0 && k % dim == k / dim {
            1.0
        } else {
            0.0
        }
    });
    Ok((a, b, projectors))
}

fn solve_weights(order: usize, directions: &[Direction], tol: f64) -> Result<(Vec<f64>, f64)> {
    if directions.len() < order + 1 {
        return Err(Error::IncompletePovm {
            residual: f64::INFINITY,
            tol,
        });
    }
    let (a, b, _) = frame_system(order, directions)?;
    let sol = nnls(&a, &b, NNLS_MAX_ITER)?;
    if !(sol.residual <= tol) {
        return Err(Error::IncompletePovm {
            residual: sol.residual,
            tol,
        });
    }
    Ok((sol.x.iter().copied().collect(), sol.residual))
}

fn povm_from_weights(n: usize, directions: &[Direction], weights: &[f64]) -> Result<Povm> {
    let mut effects = Vec::new();
    let mut guesses = Vec::new();
    for (dir, &c) in directions.iter().zip(weights) {
        if c > 0.0 {
            effects.push(measurement_vector(n, dir)?.projector().scale(c));
            guesses.push(dir.qubit());
        }
    }
    Povm::new(n, effects, guesses)
}

/// Covariant POVM `{c_r |Φ_r><Φ_r|}` with aligned guesses, complete at
/// order `N`. Directions with zero weight are dropped.
pub fn build_povm(n: usize, directions: &[Direction], tol: f64) -> Result<Povm> {
    if n == 0 {
        return Err(Error::InvalidArity("POVM needs N >= 1".into()));
    }
    let (weights, _) = solve_weights(n, directions, tol)?;
    povm_from_weights(n, directions, &weights)
}

/// Covariant POVM whose weighted directions are complete at order `N+1`,
/// which makes the resend strategy universal.
pub fn build_universal_povm(n: usize, directions: &[Direction], tol: f64) -> Result<Povm> {
    if n == 0 {
        return Err(Error::InvalidArity("POVM needs N >= 1".into()));
    }
    let (weights, _) = solve_weights(n + 1, directions, tol)?;
    let shrink = dim_sym(2, n) as f64 / dim_sym(2, n + 1) as f64;
    let scaled: Vec<f64> = weights.iter().map(|c| c * shrink).collect();
    povm_from_weights(n, directions, &scaled)
}

/// The equilibrium estimator for `N` copies.
pub fn optimal_povm(n: usize) -> Result<Povm> {
    build_universal_povm(n, &default_directions(n + 1), 1e-10)
}

/// The state player I sends back, `Σ_r p_r |φ_r><φ_r|`.
pub fn respond(povm: &Povm, psi: &PureState) -> Result<DensityOperator> {
    let p = povm.outcome_probabilities(psi)?;
    let mut sigma = CMat::zeros(2, 2);
    for (pr, g) in p.iter().zip(&povm.guesses) {
        sigma += g.projector().scale(*pr);
    }
    DensityOperator::new((&sigma + sigma.adjoint()).scale(0.5))
}

/// `<ψ| respond(ψ) |ψ>`, player I's expected payoff against `ψ`.
pub fn state_fidelity(povm: &Povm, psi: &PureState) -> Result<f64> {
    let p = povm.outcome_probabilities(psi)?;
    p.iter()
        .zip(&povm.guesses)
        .map(|(pr, g)| Ok(pr * g.inner(psi)?.norm_sqr()))
        .sum()
}

/// Exact Haar average of [`state_fidelity`],
/// `Σ_r tr[(E_r ⊗ |φ_r><φ_r|) s_{N+1}] / d[N+1]`.
pub fn mean_fidelity(povm: &Povm) -> f64 {
    let big = SymBasis::new(2, povm.n + 1).expect("N+1 copies within the size cap");
    let s = big.projector();
    let total: f64 = povm
        .effects
        .iter()
        .zip(&povm.guesses)
        .map(|(e, g)| {
            let lifted = povm.basis.lift(e).kronecker(&g.projector());
            trace_of_product(&lifted, &s).re
        })
        .sum();
    total / big.dim() as f64
}
