//! Cloning channels and their exact Haar-averaged fidelities.
//!
//! Channels are stored as Kraus lists together with the Choi matrix
//! `J = Σ_{ij} |i><j| ⊗ E(|i><j|)` (input factors first). Haar averages of
//! linear payoffs reduce to traces against partially transposed symmetric
//! projectors:
//!
//! ```text
//! ∫dψ <ψ^{⊗M}| E(ψ^{⊗N}) |ψ^{⊗M}> = tr[J · Γ_in(s_{N+M})] / d[N+M]
//! ```
//!
//! where `Γ_in` transposes the `N` input factors. The single-clone version
//! uses the Choi matrix of the reduced channel `tr_{≠k} ∘ E` and `s_{N+1}`.

use num_complex::Complex64;
use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use crate::error::{shape, Error, Result};
use crate::quantum::{
    checked_dim, expectation, haar_random_isometry, min_eigenvalue, partial_trace_matrix,
    partial_transpose, tensor_power, trace_of_product, CMat, CVec, DensityOperator, PureState,
    DEFAULT_SIZE_CAP, ONE,
};
use crate::symmetric::{dim_sym, SymBasis};

/// Tolerance for `Σ K†K = 1` on the declared domain.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Inputs on which a channel is required to preserve trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Domain {
    /// All of `H^{⊗N}`.
    Full,
    /// Only the symmetric subspace of `H^{⊗N}`, which holds every `ψ^{⊗N}`.
    Symmetric,
}

/// Completely positive map `H^{⊗n_in} -> H^{⊗n_out}`.
#[derive(Clone, Debug)]
pub struct Channel {
    d: usize,
    n_in: usize,
    n_out: usize,
    kraus: Vec<CMat>,
    choi: CMat,
    domain: Domain,
}

impl Channel {
    pub fn new(d: usize, n_in: usize, n_out: usize, kraus: Vec<CMat>, domain: Domain) -> Result<Self> {
        if d == 0 || n_in == 0 || n_out == 0 {
            return Err(Error::InvalidArity(format!(
                "channel needs d, n_in, n_out >= 1 (got {d}, {n_in}, {n_out})"
            )));
        }
        checked_dim(d, n_in + n_out, DEFAULT_SIZE_CAP)?;
        let dim_in = d.pow(n_in as u32);
        let dim_out = d.pow(n_out as u32);
        if kraus.is_empty() {
            return Err(shape("channel needs at least one Kraus operator"));
        }
        if let Some(k) = kraus.iter().find(|k| k.shape() != (dim_out, dim_in)) {
            return Err(shape(format!(
                "Kraus operator has shape {:?}, expected ({dim_out}, {dim_in})",
                k.shape()
            )));
        }

        let mut gram = CMat::zeros(dim_in, dim_in);
        for k in &kraus {
            gram += k.adjoint() * k;
        }
        let deviation = match domain {
            Domain::Full => (gram - CMat::identity(dim_in, dim_in)).camax(),
            Domain::Symmetric => {
                let basis = SymBasis::new(d, n_in)?;
                let n = basis.dim();
                (basis.compress_operator(&gram) - CMat::identity(n, n)).camax()
            }
        };
        if !(deviation <= COMPLETENESS_TOL) {
            return Err(Error::NotTracePreserving { deviation });
        }

        let choi = choi_from_kraus(&kraus, dim_in, dim_out);
        Ok(Self {
            d,
            n_in,
            n_out,
            kraus,
            choi,
            domain,
        })
    }

    /// The identity channel on `n` copies.
    pub fn identity(d: usize, n: usize) -> Result<Self> {
        let dim = checked_dim(d, n, DEFAULT_SIZE_CAP)?;
        Self::new(d, n, n, vec![CMat::identity(dim, dim)], Domain::Full)
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn choi(&self) -> &CMat {
        &self.choi
    }

    pub fn dim_in(&self) -> usize {
        self.kraus[0].ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.kraus[0].nrows()
    }

    pub fn choi_min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.choi)
    }

    /// `Σ K ρ K†` on a raw matrix.
    pub fn apply_matrix(&self, rho: &CMat) -> Result<CMat> {
        if rho.shape() != (self.dim_in(), self.dim_in()) {
            return Err(shape(format!(
                "channel input dim {}, got {:?}",
                self.dim_in(),
                rho.shape()
            )));
        }
        let mut out = CMat::zeros(self.dim_out(), self.dim_out());
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        DensityOperator::new(self.apply_matrix(rho.matrix())?)
    }

    /// Applies the channel through its Choi matrix,
    /// `E(ρ) = Σ_{ij} ρ_ij E(|i><j|)`.
    pub fn apply_via_choi(&self, rho: &CMat) -> Result<CMat> {
        let (din, dout) = (self.dim_in(), self.dim_out());
        if rho.shape() != (din, din) {
            return Err(shape(format!("channel input dim {din}, got {:?}", rho.shape())));
        }
        let mut out = CMat::zeros(dout, dout);
        for i in 0..din {
            for j in 0..din {
                let r = rho[(i, j)];
                if r == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let block = self.choi.view((i * dout, j * dout), (dout, dout));
                out += block * r;
            }
        }
        Ok(out)
    }

    /// The channel followed by the output unitary `u`.
    pub fn conjugate_output(&self, u: &CMat) -> Result<Self> {
        if u.shape() != (self.dim_out(), self.dim_out()) {
            return Err(shape("output unitary has wrong dimension"));
        }
        let kraus = self.kraus.iter().map(|k| u * k).collect();
        Self::new(self.d, self.n_in, self.n_out, kraus, self.domain)
    }

    /// `(1 - p)·self + p·other`.
    pub fn mix(&self, other: &Channel, p: f64) -> Result<Self> {
        if (self.d, self.n_in, self.n_out) != (other.d, other.n_in, other.n_out) {
            return Err(shape("mixing channels of different arity"));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("mixing weight {p} not in [0, 1]")));
        }
        let a = (1.0 - p).sqrt();
        let b = p.sqrt();
        let kraus = self
            .kraus
            .iter()
            .map(|k| k.scale(a))
            .chain(other.kraus.iter().map(|k| k.scale(b)))
            .collect();
        let domain = if self.domain == Domain::Full && other.domain == Domain::Full {
            Domain::Full
        } else {
            Domain::Symmetric
        };
        Self::new(self.d, self.n_in, self.n_out, kraus, domain)
    }

    fn check_state(&self, psi: &PureState) -> Result<()> {
        if psi.dim() != self.d {
            return Err(shape(format!(
                "state has dim {}, channel acts on dim {}",
                psi.dim(),
                self.d
            )));
        }
        Ok(())
    }

    fn factor_dims(&self) -> Vec<usize> {
        vec![self.d; self.n_in + self.n_out]
    }
}

fn choi_from_kraus(kraus: &[CMat], dim_in: usize, dim_out: usize) -> CMat {
    let n = dim_in * dim_out;
    let mut choi = CMat::zeros(n, n);
    for k in kraus {
        let w = CVec::from_fn(n, |idx, _| k[(idx % dim_out, idx / dim_out)]);
        choi += &w * w.adjoint();
    }
    choi
}

/// The universal symmetric cloner
/// `ρ ↦ (d[N]/d[M]) s_M (ρ ⊗ 1^{⊗(M-N)}) s_M`.
///
/// One Kraus operator per computational basis vector `e_i` of the
/// `(M-N)`-copy ancilla: `K_i = sqrt(d[N]/d[M]) s_M (1^{⊗N} ⊗ |e_i>)`.
/// Trace preserving on the symmetric subspace of the input.
pub fn optimal_cloner(d: usize, n: usize, m: usize) -> Result<Channel> {
    if n == 0 || m < n {
        return Err(Error::InvalidArity(format!("cloning {n} -> {m} needs 1 <= N <= M")));
    }
    checked_dim(d, n + m, DEFAULT_SIZE_CAP)?;
    let s_m = SymBasis::new(d, m)?.projector();
    let dim_in = d.pow(n as u32);
    let dim_anc = d.pow((m - n) as u32);
    let scale = (dim_sym(d, n) as f64 / dim_sym(d, m) as f64).sqrt();
    let kraus = (0..dim_anc)
        .map(|e| {
            // 1^{⊗N} ⊗ |e>: column i maps to basis index i * dim_anc + e.
            let mut embed = CMat::zeros(dim_in * dim_anc, dim_in);
            for i in 0..dim_in {
                embed[(i * dim_anc + e, i)] = ONE;
            }
            (&s_m * embed).scale(scale)
        })
        .collect();
    Channel::new(d, n, m, kraus, Domain::Symmetric)
}

/// `ρ ↦ ρ ⊗ (1/d)^{⊗(M-N)}`: keep the originals, pad with noise.
pub fn identity_embedding(d: usize, n: usize, m: usize) -> Result<Channel> {
    if n == 0 || m < n {
        return Err(Error::InvalidArity(format!("embedding {n} -> {m} needs 1 <= N <= M")));
    }
    checked_dim(d, n + m, DEFAULT_SIZE_CAP)?;
    let dim_in = d.pow(n as u32);
    let dim_anc = d.pow((m - n) as u32);
    let scale = Complex64::new((dim_anc as f64).sqrt().recip(), 0.0);
    let kraus = (0..dim_anc)
        .map(|e| {
            let mut k = CMat::zeros(dim_in * dim_anc, dim_in);
            for i in 0..dim_in {
                k[(i * dim_anc + e, i)] = scale;
            }
            k
        })
        .collect();
    Channel::new(d, n, m, kraus, Domain::Full)
}

/// Discards the input and prepares `out_state` on the `m` output copies.
pub fn constant_channel(d: usize, n: usize, m: usize, out_state: &PureState) -> Result<Channel> {
    let dim_in = checked_dim(d, n, DEFAULT_SIZE_CAP)?;
    let dim_out = checked_dim(d, m, DEFAULT_SIZE_CAP)?;
    if out_state.dim() != dim_out {
        return Err(shape("prepared state has wrong dimension"));
    }
    let kraus = (0..dim_in)
        .map(|i| {
            let mut k = CMat::zeros(dim_out, dim_in);
            k.set_column(i, out_state.amplitudes());
            k
        })
        .collect();
    Channel::new(d, n, m, kraus, Domain::Full)
}

/// Discards the input and outputs `s_M / d[M]`.
pub fn symmetric_depolarizing(d: usize, n: usize, m: usize) -> Result<Channel> {
    let dim_in = checked_dim(d, n, DEFAULT_SIZE_CAP)?;
    checked_dim(d, n + m, DEFAULT_SIZE_CAP)?;
    let basis = SymBasis::new(d, m)?;
    let scale = (basis.dim() as f64).sqrt().recip();
    let mut kraus = Vec::with_capacity(dim_in * basis.dim());
    for c in 0..basis.dim() {
        let col = basis.isometry().column(c).scale(scale);
        for i in 0..dim_in {
            let mut k = CMat::zeros(basis.isometry().nrows(), dim_in);
            k.set_column(i, &col);
            kraus.push(k);
        }
    }
    Channel::new(d, n, m, kraus, Domain::Full)
}

/// Discards the input and outputs `1 / d^M`.
pub fn fully_depolarizing(d: usize, n: usize, m: usize) -> Result<Channel> {
    let dim_in = checked_dim(d, n, DEFAULT_SIZE_CAP)?;
    let dim_out = checked_dim(d, m, DEFAULT_SIZE_CAP)?;
    checked_dim(d, n + m, DEFAULT_SIZE_CAP)?;
    let scale = Complex64::new((dim_out as f64).sqrt().recip(), 0.0);
    let mut kraus = Vec::with_capacity(dim_in * dim_out);
    for a in 0..dim_out {
        for i in 0..dim_in {
            let mut k = CMat::zeros(dim_out, dim_in);
            k[(a, i)] = scale;
            kraus.push(k);
        }
    }
    Channel::new(d, n, m, kraus, Domain::Full)
}

/// Channel from an isometry `V: H^{⊗N} -> H^{⊗M} ⊗ C^ancilla` with the
/// ancilla (last, least significant factor) traced out.
pub fn isometry_channel(d: usize, n: usize, m: usize, v: &CMat, ancilla: usize) -> Result<Channel> {
    let dim_in = checked_dim(d, n, DEFAULT_SIZE_CAP)?;
    let dim_out = checked_dim(d, m, DEFAULT_SIZE_CAP)?;
    if v.shape() != (dim_out * ancilla, dim_in) {
        return Err(shape(format!(
            "isometry shape {:?}, expected ({}, {dim_in})",
            v.shape(),
            dim_out * ancilla
        )));
    }
    let kraus = (0..ancilla)
        .map(|a| CMat::from_fn(dim_out, dim_in, |r, c| v[(r * ancilla + a, c)]))
        .collect();
    Channel::new(d, n, m, kraus, Domain::Full)
}

/// Random channel from a Haar-random isometry into `H^{⊗M} ⊗ C^ancilla`.
pub fn random_channel<R: Rng + ?Sized>(
    d: usize,
    n: usize,
    m: usize,
    ancilla: usize,
    rng: &mut R,
) -> Result<Channel> {
    let dim_in = checked_dim(d, n, DEFAULT_SIZE_CAP)?;
    let dim_out = checked_dim(d, m, DEFAULT_SIZE_CAP)?;
    let v = haar_random_isometry(dim_out * ancilla, dim_in, rng)?;
    isometry_channel(d, n, m, &v, ancilla)
}

/// Weight `α` paired with `β` on the curve `α² + β² + 2αβ/d = 1`, `α ≥ 0`.
pub fn asymmetric_alpha(d: usize, beta: f64) -> f64 {
    let df = d as f64;
    let disc = beta * beta / (df * df) - beta * beta + 1.0;
    (-beta / df + disc.max(0.0).sqrt()).max(0.0)
}

/// Coherent asymmetric `1 -> 2` cloner
/// `|ψ> ↦ α |ψ>_A |Φ+>_BC + β |ψ>_B |Φ+>_AC` with the ancilla `C` traced out.
///
/// `β = 0` keeps the input on clone A and leaves B maximally mixed, `β = 1`
/// is the mirror image, and `α = β` is the symmetric cloner.
pub fn asymmetric_cloner(d: usize, beta: f64) -> Result<Channel> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidArgument(format!("asymmetry {beta} not in [0, 1]")));
    }
    checked_dim(d, 3, DEFAULT_SIZE_CAP)?;
    let alpha = asymmetric_alpha(d, beta);
    let norm = (d as f64).sqrt().recip();
    let idx = |a: usize, b: usize, c: usize| (a * d + b) * d + c;
    let mut v = CMat::zeros(d * d * d, d);
    for i in 0..d {
        for j in 0..d {
            v[(idx(i, j, j), i)] += Complex64::new(alpha * norm, 0.0);
            v[(idx(j, i, j), i)] += Complex64::new(beta * norm, 0.0);
        }
    }
    isometry_channel(d, 1, 2, &v, d)
}

/// `<ψ^{⊗M}| E(ψ^{⊗N}) |ψ^{⊗M}>`.
pub fn global_fidelity(ch: &Channel, psi: &PureState) -> Result<f64> {
    ch.check_state(psi)?;
    let input = tensor_power(psi, ch.n_in)?.into_amplitudes();
    let target = tensor_power(psi, ch.n_out)?.into_amplitudes();
    Ok(ch
        .kraus
        .iter()
        .map(|k| target.dotc(&(k * &input)).norm_sqr())
        .sum())
}

/// Output state of the channel on `ψ^{⊗N}`.
pub fn clone_output(ch: &Channel, psi: &PureState) -> Result<CMat> {
    ch.check_state(psi)?;
    let input = tensor_power(psi, ch.n_in)?;
    ch.apply_matrix(&input.projector())
}

/// `<ψ| tr_{≠k} E(ψ^{⊗N}) |ψ>` for the 0-based clone index `k`.
pub fn single_clone_fidelity(ch: &Channel, psi: &PureState, k: usize) -> Result<f64> {
    if k >= ch.n_out {
        return Err(Error::Index {
            index: k,
            limit: ch.n_out,
        });
    }
    let out = clone_output(ch, psi)?;
    let reduced = partial_trace_matrix(&out, &vec![ch.d; ch.n_out], &[k])?;
    Ok(expectation(&reduced, psi.amplitudes()).re)
}

/// Exact `∫dψ` of [`global_fidelity`] over the Haar measure.
pub fn haar_avg_global_fidelity(ch: &Channel) -> Result<f64> {
    let total = ch.n_in + ch.n_out;
    let basis = SymBasis::new(ch.d, total)?;
    let input_factors: Vec<usize> = (0..ch.n_in).collect();
    let gamma = partial_transpose(&basis.projector(), &ch.factor_dims(), &input_factors)?;
    Ok(trace_of_product(&ch.choi, &gamma).re / basis.dim() as f64)
}

/// Exact `∫dψ` of [`single_clone_fidelity`] for the 0-based clone index `k`.
pub fn single_clone_haar_fidelity(ch: &Channel, k: usize) -> Result<f64> {
    if k >= ch.n_out {
        return Err(Error::Index {
            index: k,
            limit: ch.n_out,
        });
    }
    let mut keep: Vec<usize> = (0..ch.n_in).collect();
    keep.push(ch.n_in + k);
    let reduced_choi = partial_trace_matrix(&ch.choi, &ch.factor_dims(), &keep)?;

    let basis = SymBasis::new(ch.d, ch.n_in + 1)?;
    let input_factors: Vec<usize> = (0..ch.n_in).collect();
    let gamma = partial_transpose(&basis.projector(), &vec![ch.d; ch.n_in + 1], &input_factors)?;
    Ok(trace_of_product(&reduced_choi, &gamma).re / basis.dim() as f64)
}

/// `Σ_k` of [`single_clone_haar_fidelity`] together with the per-clone terms.
pub fn sum_single_clone_haar_fidelity(ch: &Channel) -> Result<(f64, Vec<f64>)> {
    let per_clone = (0..ch.n_out)
        .map(|k| single_clone_haar_fidelity(ch, k))
        .collect::<Result<Vec<_>>>()?;
    Ok((per_clone.iter().sum(), per_clone))
}

/// Closed-form values of the `N -> M` cloning games.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ValueFormulas {
    /// `d[N]/d[M]`, value of the full `M`-copy test game.
    pub global_value: f64,
    /// `(N(d+M)+M-N) / ((d+N)M)`, value of the one-particle-test game.
    pub single_value: f64,
    /// `(N(d+M)+M-N) / (d+N)`, bound on the summed single-clone fidelities.
    pub asym_bound: f64,
}

pub fn value_formulas(d: usize, n: usize, m: usize) -> Result<ValueFormulas> {
    if d == 0 || n == 0 || m < n {
        return Err(Error::InvalidArity(format!("values need d >= 1 and 1 <= N <= M, got ({d}, {n}, {m})")));
    }
    let to_f64 = |r: Ratio<u128>| *r.numer() as f64 / *r.denom() as f64;
    let (d, n, m) = (d as u128, n as u128, m as u128);
    let global = Ratio::new(dim_sym(d as usize, n as usize) as u128, dim_sym(d as usize, m as usize) as u128);
    let numer = n * (d + m) + m - n;
    let single = Ratio::new(numer, (d + n) * m);
    let bound = Ratio::new(numer, d + n);
    Ok(ValueFormulas {
        global_value: to_f64(global),
        single_value: to_f64(single),
        asym_bound: to_f64(bound),
    })
}
