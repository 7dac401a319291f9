//! Dense complex linear algebra for states and operators.
//!
//! Multi-factor spaces use the Kronecker ordering: for factor dimensions
//! `[d_0, .., d_{n-1}]` the basis index of `|i_0 .. i_{n-1}>` is
//! `sum_k i_k * prod_{l > k} d_l`, so the first factor is most significant.

mod random;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{shape, Error, Result};

pub use random::RandomStream;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Largest total Hilbert-space dimension any operation will build.
pub const DEFAULT_SIZE_CAP: usize = 4096;

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `base^exp`, failing once the result passes `cap`.
pub fn checked_dim(base: usize, exp: usize, cap: usize) -> Result<usize> {
    let mut dim = 1usize;
    for _ in 0..exp {
        dim = dim
            .checked_mul(base)
            .filter(|&v| v <= cap)
            .ok_or(Error::SizeCapExceeded {
                dim: base.saturating_pow(exp as u32),
                cap,
            })?;
    }
    if dim > cap {
        return Err(Error::SizeCapExceeded { dim, cap });
    }
    Ok(dim)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: CVec,
}

impl PureState {
    /// Wraps an amplitude vector whose norm is already 1.
    pub fn new(amps: CVec) -> Result<Self> {
        if amps.is_empty() {
            return Err(shape("state vector must be non-empty"));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Normalizes `amps`; fails only for the zero vector.
    pub fn normalized(amps: CVec) -> Result<Self> {
        let norm = amps.norm();
        if amps.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps: amps.unscale(norm) })
    }

    pub fn from_slice(amps: &[Complex64]) -> Result<Self> {
        Self::new(CVec::from_column_slice(amps))
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Index { index, limit: dim });
        }
        let mut amps = CVec::zeros(dim);
        amps[index] = ONE;
        Ok(Self { amps })
    }

    /// The qubit `cos(θ/2)e^{-iφ/2}|0> + sin(θ/2)e^{iφ/2}|1>` with Bloch
    /// vector `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn qubit_from_angles(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        let amps = CVec::from_vec(vec![
            Complex64::from_polar(c, -phi / 2.0),
            Complex64::from_polar(s, phi / 2.0),
        ]);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amps
    }

    pub fn into_amplitudes(self) -> CVec {
        self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(shape(format!(
                "inner product of dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn projector(&self) -> CMat {
        &self.amps * self.amps.adjoint()
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator {
            matrix: self.projector(),
        }
    }

    /// `|self> ⊗ |other>`.
    pub fn kron(&self, other: &PureState) -> PureState {
        PureState {
            amps: self.amps.kronecker(&other.amps),
        }
    }

    /// Bloch vector of a qubit state.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(shape(format!("Bloch vector needs a qubit, got dim {}", self.dim())));
        }
        let (a, b) = (self.amps[0], self.amps[1]);
        let off = a.conj() * b;
        Ok([2.0 * off.re, 2.0 * off.im, a.norm_sqr() - b.norm_sqr()])
    }
}

/// The `k`-fold tensor power of `s`, capped at [`DEFAULT_SIZE_CAP`].
pub fn tensor_power(s: &PureState, k: usize) -> Result<PureState> {
    tensor_power_capped(s, k, DEFAULT_SIZE_CAP)
}

pub fn tensor_power_capped(s: &PureState, k: usize, cap: usize) -> Result<PureState> {
    if k == 0 {
        return Err(Error::InvalidArity("tensor power needs k >= 1".into()));
    }
    checked_dim(s.dim(), k, cap)?;
    let mut amps = s.amps.clone();
    for _ in 1..k {
        amps = amps.kronecker(&s.amps);
    }
    Ok(PureState { amps })
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: CMat,
}

impl DensityOperator {
    pub fn new(matrix: CMat) -> Result<Self> {
        validate_density(&matrix)?;
        Ok(Self { matrix })
    }

    /// Skips validation; callers guarantee the invariants up to roundoff.
    pub(crate) fn from_trusted(matrix: CMat) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMat::identity(dim, dim).unscale(dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    /// `ρ ⊗ σ`.
    pub fn kron(&self, other: &DensityOperator) -> DensityOperator {
        DensityOperator {
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.matrix)
    }
}

impl From<&PureState> for DensityOperator {
    fn from(s: &PureState) -> Self {
        s.density()
    }
}

pub fn hermiticity_error(m: &CMat) -> f64 {
    (m - m.adjoint()).camax()
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &CMat) -> f64 {
    let h = (m + m.adjoint()).scale(0.5);
    h.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().sum()
}

fn validate_density(m: &CMat) -> Result<()> {
    if !m.is_square() || m.is_empty() {
        return Err(shape(format!("density matrix must be square, got {:?}", m.shape())));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidDensity("non-finite entry".into()));
    }
    let herm = hermiticity_error(m);
    if herm > HERMITIAN_TOL {
        return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm:e})")));
    }
    let tr = trace(m);
    if (tr - ONE).norm() > TRACE_TOL {
        return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
    }
    let min = min_eigenvalue(m);
    if min < -PSD_TOL {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// Digits of `index` in the mixed radix given by `dims`.
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

fn check_factors(dim: usize, dims: &[usize]) -> Result<()> {
    if dims.contains(&0) {
        return Err(shape("factor dimensions must be positive"));
    }
    let prod: usize = dims.iter().product();
    if prod != dim {
        return Err(shape(format!(
            "factor dims {dims:?} multiply to {prod}, operator has dim {dim}"
        )));
    }
    Ok(())
}

/// Traces out every factor not listed in `keep`.
///
/// Kept factors appear in the result in their original order.
pub fn partial_trace_matrix(m: &CMat, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    if !m.is_square() {
        return Err(shape("partial trace of a non-square matrix"));
    }
    check_factors(m.nrows(), dims)?;
    if keep.is_empty() {
        return Err(shape("partial trace must keep at least one factor"));
    }
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() {
            return Err(Error::Index {
                index: k,
                limit: dims.len(),
            });
        }
        kept[k] = true;
    }
    let keep_dim: usize = (0..dims.len()).filter(|&k| kept[k]).map(|k| dims[k]).product();
    let traced_dim = m.nrows() / keep_dim;

    // Split each full index into (kept index, traced index).
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_dim];
    let mut dig = vec![0; dims.len()];
    for full in 0..m.nrows() {
        digits(full, dims, &mut dig);
        let (mut ki, mut ti) = (0, 0);
        for k in 0..dims.len() {
            if kept[k] {
                ki = ki * dims[k] + dig[k];
            } else {
                ti = ti * dims[k] + dig[k];
            }
        }
        groups[ti].push((full, ki));
    }

    let mut out = CMat::zeros(keep_dim, keep_dim);
    for group in &groups {
        for &(r, kr) in group {
            for &(c, kc) in group {
                out[(kr, kc)] += m[(r, c)];
            }
        }
    }
    Ok(out)
}

pub fn partial_trace(rho: &DensityOperator, dims: &[usize], keep: &[usize]) -> Result<DensityOperator> {
    partial_trace_matrix(&rho.matrix, dims, keep).map(DensityOperator::from_trusted)
}

/// Transposes the listed factors of a multi-factor operator.
pub fn partial_transpose(m: &CMat, dims: &[usize], which: &[usize]) -> Result<CMat> {
    if !m.is_square() {
        return Err(shape("partial transpose of a non-square matrix"));
    }
    check_factors(m.nrows(), dims)?;
    let mut flip = vec![false; dims.len()];
    for &k in which {
        if k >= dims.len() {
            return Err(Error::Index {
                index: k,
                limit: dims.len(),
            });
        }
        flip[k] = true;
    }
    let n = m.nrows();
    let all_digits: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut d = vec![0; dims.len()];
            digits(i, dims, &mut d);
            d
        })
        .collect();
    let compose = |a: &[usize], b: &[usize]| -> (usize, usize) {
        let (mut r, mut c) = (0, 0);
        for k in 0..dims.len() {
            let (x, y) = if flip[k] { (b[k], a[k]) } else { (a[k], b[k]) };
            r = r * dims[k] + x;
            c = c * dims[k] + y;
        }
        (r, c)
    };
    let mut out = CMat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let (r2, c2) = compose(&all_digits[r], &all_digits[c]);
            out[(r2, c2)] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Operator that moves factor `k` of `(C^d)^{⊗n}` to position `perm[k]`.
pub fn permutation_operator(d: usize, perm: &[usize]) -> Result<CMat> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    let dim = checked_dim(d, n, DEFAULT_SIZE_CAP)?;
    let dims = vec![d; n];
    let mut out = CMat::zeros(dim, dim);
    let mut dig = vec![0; n];
    let mut moved = vec![0; n];
    for col in 0..dim {
        digits(col, &dims, &mut dig);
        for k in 0..n {
            moved[perm[k]] = dig[k];
        }
        let row = moved.iter().fold(0, |acc, &x| acc * d + x);
        out[(row, col)] = ONE;
    }
    Ok(out)
}

/// `tr(ρσ)`, the quantity a SWAP test probes.
pub fn overlap(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    overlap_matrix(&rho.matrix, &sigma.matrix)
}

pub(crate) fn overlap_matrix(a: &CMat, b: &CMat) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(shape(format!("overlap of {:?} and {:?}", a.shape(), b.shape())));
    }
    Ok(trace_of_product(a, b).re)
}

/// `tr(AB)` without forming the product.
pub fn trace_of_product(a: &CMat, b: &CMat) -> Complex64 {
    a.iter()
        .zip(b.transpose().iter())
        .map(|(x, y)| x * y)
        .sum()
}

/// `<v|M|v>`.
pub fn expectation(m: &CMat, v: &CVec) -> Complex64 {
    v.dotc(&(m * v))
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random pure state: a normalized vector of i.i.d. complex Gaussians.
pub fn haar_random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<PureState> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    loop {
        let v = CVec::from_fn(d, |_, _| complex_gaussian(rng));
        if v.norm() > 0.0 {
            return PureState::normalized(v);
        }
    }
}

/// Haar-random isometry `C^cols -> C^rows` (orthonormalized Gaussian columns).
pub fn haar_random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<CMat> {
    if cols == 0 || cols > rows {
        return Err(shape(format!("no {rows}x{cols} isometry")));
    }
    let mut v = CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng));
    // Modified Gram-Schmidt, twice for stability.
    for _pass in 0..2 {
        for j in 0..cols {
            for i in 0..j {
                let proj = v.column(i).dotc(&v.column(j));
                let qi = v.column(i).clone_owned();
                v.column_mut(j).axpy(-proj, &qi, ONE);
            }
            let norm = v.column(j).norm();
            v.column_mut(j).unscale_mut(norm);
        }
    }
    Ok(v)
}
