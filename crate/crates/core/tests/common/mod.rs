//! Property checks shared by the proptest suite and the acceptance runner.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::Rng;

use qgames::cloning::{optimal_cloner, random_channel, sum_single_clone_haar_fidelity, value_formulas};
use qgames::estimation::{build_povm, default_directions, mean_fidelity, optimal_povm, respond, state_fidelity, Direction};
use qgames::quantum::{
    haar_random_isometry, haar_random_state, hermiticity_error, min_eigenvalue, overlap, partial_trace, tensor_power, trace,
};
use qgames::swap::{expected_payoff, pass_probability};
use qgames::symmetric::{dim_sym, SymBasis};
use qgames::zerosum::{payoff_spread, solve, symmetrize, MatrixGame};
use qgames::{CMat, CVec, DensityOperator, PureState, RandomStream};

pub const CASES: u32 = 128;

pub fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new(config).run(&strategy, test).map_err(|e| e.to_string())
}

fn check_density(rho: &DensityOperator) -> Result<(), TestCaseError> {
    let m = rho.matrix();
    prop_assert!(hermiticity_error(m) <= 1e-12);
    prop_assert!((trace(m) - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
    prop_assert!(min_eigenvalue(m) >= -1e-10);
    Ok(())
}

fn random_mixture(d: usize, k: usize, rng: &mut impl Rng) -> CMat {
    let weights: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut rho = CMat::zeros(d, d);
    for w in weights {
        rho += haar_random_state(d, rng).unwrap().projector().scale(w / total);
    }
    rho
}

// ---- symmetric projector ------------------------------------------------

pub fn sym_params() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4, 1usize..=6).prop_filter("within the size cap", |&(d, n)| d.pow(n as u32) <= 4096)
}

/// Row index of the basis vector with factors `a` and `b` exchanged.
fn swapped_index(index: usize, d: usize, n: usize, a: usize, b: usize) -> usize {
    let mut digits: Vec<usize> = (0..n).map(|k| (index / d.pow((n - 1 - k) as u32)) % d).collect();
    digits.swap(a, b);
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

pub fn symmetric_projector((d, n): (usize, usize)) -> Result<(), TestCaseError> {
    let basis = SymBasis::new(d, n).unwrap();
    let v = basis.isometry();
    prop_assert_eq!(basis.dim(), dim_sym(d, n));
    // s = V V†, so s² = s and s† = s follow from V†V = 1.
    let gram = v.adjoint() * v;
    prop_assert!((gram - CMat::identity(basis.dim(), basis.dim())).norm() <= 1e-12);
    if d.pow(n as u32) <= 64 {
        let s = basis.projector();
        prop_assert!((&s * &s - &s).norm() <= 1e-12);
        prop_assert!(hermiticity_error(&s) <= 1e-12);
        let tr = trace(&s).re;
        prop_assert!((tr - tr.round()).abs() <= 1e-9 && tr.round() as usize == dim_sym(d, n));
    } else {
        let tr: f64 = (0..v.ncols()).map(|c| v.column(c).norm_squared()).sum();
        prop_assert!((tr - dim_sym(d, n) as f64).abs() <= 1e-9);
    }
    // Every transposition fixes every column of V.
    for a in 0..n {
        for b in a + 1..n {
            let mut dev: f64 = 0.0;
            for r in 0..v.nrows() {
                let rs = swapped_index(r, d, n, a, b);
                for c in 0..v.ncols() {
                    dev = dev.max((v[(rs, c)] - v[(r, c)]).norm());
                }
            }
            prop_assert!(dev <= 1e-12);
        }
    }
    Ok(())
}

// ---- density operators --------------------------------------------------

pub fn density_params() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 2usize..=5, 1usize..=4)
}

pub fn density_operator_validity((seed, d, k): (u64, usize, usize)) -> Result<(), TestCaseError> {
    let mut rng = RandomStream::new(seed).rng();
    let rho = DensityOperator::new(random_mixture(d, k, &mut rng)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    check_density(&rho)?;
    let sigma = DensityOperator::new(random_mixture(d, k, &mut rng)).unwrap();
    check_density(&rho.kron(&sigma))?;
    let joint = rho.kron(&sigma);
    let left = partial_trace(&joint, &[d, d], &[0]).unwrap();
    check_density(&left)?;
    prop_assert!((left.matrix() - rho.matrix()).norm() <= 1e-12);
    check_density(&haar_random_state(d, &mut rng).unwrap().density())?;

    // Something that is not a state must be refused.
    let mut bad = rho.matrix().clone();
    bad[(0, 1)] += Complex64::new(1e-3, 0.0);
    prop_assert!(DensityOperator::new(bad).is_err());
    prop_assert!(DensityOperator::new(rho.matrix().scale(1.01)).is_err());
    Ok(())
}

pub fn overlap_and_partial_trace((seed, d, k): (u64, usize, usize)) -> Result<(), TestCaseError> {
    let mut rng = RandomStream::new(seed).rng();
    let rho = DensityOperator::new(random_mixture(d, k, &mut rng)).unwrap();
    let sigma = DensityOperator::new(random_mixture(d, k, &mut rng)).unwrap();
    prop_assert!((overlap(&rho, &sigma).unwrap() - overlap(&sigma, &rho).unwrap()).abs() <= 1e-12);

    // Tracing factors out one at a time ends at the total trace.
    let tau = DensityOperator::new(random_mixture(d, 2, &mut rng)).unwrap();
    let three = rho.kron(&sigma).kron(&tau);
    let two = partial_trace(&three, &[d, d, d], &[0, 1]).unwrap();
    let one = partial_trace(&two, &[d, d], &[0]).unwrap();
    prop_assert!((trace(one.matrix()) - trace(three.matrix())).norm() <= 1e-12);

    let p = pass_probability(&rho, &sigma).unwrap();
    let e = expected_payoff(&rho, &sigma).unwrap();
    prop_assert_eq!(e, 2.0 * p - 1.0);
    prop_assert!((e - overlap(&rho, &sigma).unwrap()).abs() <= 1e-12);
    Ok(())
}

// ---- channels -----------------------------------------------------------

pub const TUPLES: [(usize, usize, usize); 5] = [(2, 1, 2), (2, 1, 3), (2, 2, 3), (3, 1, 2), (4, 1, 2)];

pub fn channel_params() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 0..TUPLES.len(), 1usize..=3)
}

/// `E(ρ)` has unit trace and is PSD for symmetric inputs `ρ`.
pub fn channel_trace_preservation((seed, which, k): (u64, usize, usize)) -> Result<(), TestCaseError> {
    let (d, n, m) = TUPLES[which];
    let mut rng = RandomStream::new(seed).rng();
    let cloner = optimal_cloner(d, n, m).unwrap();
    let mut input = CMat::zeros(d.pow(n as u32), d.pow(n as u32));
    for _ in 0..k {
        let psi = haar_random_state(d, &mut rng).unwrap();
        input += tensor_power(&psi, n).unwrap().projector().unscale(k as f64);
    }
    let out = cloner.apply_matrix(&input).unwrap();
    prop_assert!((trace(&out) - Complex64::new(1.0, 0.0)).norm() <= 1e-10);
    prop_assert!(hermiticity_error(&out) <= 1e-10);
    prop_assert!(min_eigenvalue(&out) >= -1e-10);
    prop_assert!((cloner.apply_via_choi(&input).unwrap() - &out).norm() <= 1e-10);

    let random = random_channel(d, n, m, 2, &mut rng).unwrap();
    let out = random.apply_matrix(&input).unwrap();
    prop_assert!((trace(&out) - Complex64::new(1.0, 0.0)).norm() <= 1e-10);
    prop_assert!(min_eigenvalue(&out) >= -1e-10);
    Ok(())
}

pub fn asym_bound_holds((seed, which, _): (u64, usize, usize)) -> Result<(), TestCaseError> {
    let (d, n, m) = TUPLES[which];
    let mut rng = RandomStream::new(seed).rng();
    let ancilla = d.pow(m as u32).min(8);
    let ch = random_channel(d, n, m, ancilla, &mut rng).unwrap();
    let (sum, _) = sum_single_clone_haar_fidelity(&ch).unwrap();
    prop_assert!(sum <= value_formulas(d, n, m).unwrap().asym_bound + 1e-9);
    Ok(())
}

pub fn cloner_universality((seed, which, _): (u64, usize, usize)) -> Result<(), TestCaseError> {
    let (d, n, m) = TUPLES[which];
    let mut rng = RandomStream::new(seed).rng();
    let ch = optimal_cloner(d, n, m).unwrap();
    let psi = haar_random_state(d, &mut rng).unwrap();
    let f = qgames::cloning::global_fidelity(&ch, &psi).unwrap();
    prop_assert!((f - value_formulas(d, n, m).unwrap().global_value).abs() <= 1e-10);
    Ok(())
}

// ---- POVMs ----------------------------------------------------------------

pub fn povm_params() -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 1usize..=5)
}

fn rotated_directions(n: usize, rng: &mut impl Rng) -> Vec<Direction> {
    let u = haar_random_isometry(2, 2, rng).unwrap();
    default_directions(n)
        .iter()
        .map(|dir| {
            let q = PureState::normalized(&u * dir.qubit().amplitudes()).unwrap();
            Direction::from_bloch(q.bloch_vector().unwrap()).unwrap()
        })
        .collect()
}

/// Effects are PSD, complete, and the aligned-guess payoff averages to
/// `(N+1)/(N+2)`; the returned state is always a density operator.
pub fn povm_effect_positivity((seed, n): (u64, usize)) -> Result<(), TestCaseError> {
    let mut rng = RandomStream::new(seed).rng();
    let dirs = rotated_directions(n, &mut rng);
    let povm = build_povm(n, &dirs, 1e-10).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for e in povm.effects() {
        prop_assert!(hermiticity_error(e) <= 1e-10);
        prop_assert!(min_eigenvalue(e) >= -1e-10);
    }
    let residual = povm.completeness_residual();
    prop_assert!(residual <= 1e-8);
    let target = (n + 1) as f64 / (n + 2) as f64;
    prop_assert!((mean_fidelity(&povm) - target).abs() <= (10.0 * residual).max(1e-12));

    let psi = haar_random_state(2, &mut rng).unwrap();
    check_density(&respond(&povm, &psi).unwrap())?;
    Ok(())
}

pub fn estimator_universality((seed, n): (u64, usize)) -> Result<(), TestCaseError> {
    let mut rng = RandomStream::new(seed).rng();
    let povm = optimal_povm(n).unwrap();
    let psi = haar_random_state(2, &mut rng).unwrap();
    let target = (n + 1) as f64 / (n + 2) as f64;
    prop_assert!((state_fidelity(&povm, &psi).unwrap() - target).abs() <= 1e-9);
    Ok(())
}

// ---- matrix games ---------------------------------------------------------

pub fn game_params() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1usize..=8, 1usize..=8)
}

fn random_game(seed: u64, m: usize, n: usize) -> MatrixGame {
    let mut rng = RandomStream::new(seed).rng();
    MatrixGame::new(DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0))).unwrap()
}

pub fn solver_duality((seed, m, n): (u64, usize, usize)) -> Result<(), TestCaseError> {
    let tol = 1e-9;
    let game = random_game(seed, m, n);
    let eq = solve(&game, tol).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(game.pure_maxmin() <= eq.value + tol);
    prop_assert!(eq.value <= game.pure_minmax() + tol);
    let flipped = solve(&game.negated_transpose(), tol).unwrap();
    prop_assert!((eq.value + flipped.value).abs() <= 2.0 * tol);
    Ok(())
}

/// Circulant games are covariant under the cyclic group.
pub fn symmetrize_circulant((seed, n, _): (u64, usize, usize)) -> Result<(), TestCaseError> {
    let n = n.max(2);
    let mut rng = RandomStream::new(seed).rng();
    let generator: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let game = MatrixGame::new(DMatrix::from_fn(n, n, |e, f| generator[(f + n - e) % n])).unwrap();
    let action: Vec<Vec<usize>> = (0..n).map(|g| (0..n).map(|f| (f + g) % n).collect()).collect();
    let rows: Vec<Vec<usize>> = (0..n).map(|g| (0..n).map(|e| (e + n - g) % n).collect()).collect();
    let chi = symmetrize(&game, &action, &rows).unwrap();
    prop_assert!(payoff_spread(&game, &chi).unwrap() <= 1e-10);
    Ok(())
}

// ---- cross-module -------------------------------------------------------

pub fn haar_state_normalized((seed, d, _): (u64, usize, usize)) -> Result<(), TestCaseError> {
    let mut rng = RandomStream::new(seed).rng();
    let psi = haar_random_state(d, &mut rng).unwrap();
    let v: &CVec = psi.amplitudes();
    prop_assert!((v.norm() - 1.0).abs() <= 1e-12);
    Ok(())
}
