//! Symmetric (Bose) subspace of `(C^d)^{⊗n}`.
//!
//! The subspace is spanned by occupation-number states: for an occupation
//! vector `(n_0, .., n_{d-1})` summing to `n`, the normalized sum of all
//! computational basis strings containing `n_i` copies of `|i>`. Columns of
//! [`SymBasis::isometry`] follow descending lexicographic order of the
//! occupation vectors, so `(n, 0, .., 0)` comes first. For qubits column `k`
//! is the spin-`n/2` state with `m = n/2 - k`.
//!
//! The Haar moment identity `∫dψ (|ψ><ψ|)^{⊗n} = s_n / d[n]` is what turns
//! every Haar average in this crate into a finite trace.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::quantum::{checked_dim, CMat, CVec, DEFAULT_SIZE_CAP};

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `d[n] = C(d + n - 1, n)`, the dimension of the symmetric subspace.
pub fn dim_sym(d: usize, n: usize) -> usize {
    assert!(d >= 1, "local dimension must be positive");
    binomial((d + n - 1) as u64, n as u64) as usize
}

/// Occupation vectors of `n` bosons in `d` modes, descending lexicographic.
pub fn occupations(d: usize, n: usize) -> Vec<Vec<usize>> {
    fn fill(remaining: usize, modes: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if modes == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            fill(remaining - first, modes - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(dim_sym(d, n));
    fill(n, d, &mut Vec::with_capacity(d), &mut out);
    out
}

/// Orthonormal occupation-number basis of the symmetric subspace.
#[derive(Clone, Debug)]
pub struct SymBasis {
    d: usize,
    n: usize,
    occupations: Vec<Vec<usize>>,
    isometry: CMat,
}

impl SymBasis {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        Self::with_cap(d, n, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(d: usize, n: usize, cap: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("local dimension must be positive".into()));
        }
        let full = checked_dim(d, n, cap)?;
        let occupations = occupations(d, n);
        let column: HashMap<&[usize], usize> = occupations
            .iter()
            .enumerate()
            .map(|(i, occ)| (occ.as_slice(), i))
            .collect();

        let factorial = |k: usize| (1..=k as u64).map(|x| x as f64).product::<f64>();
        let norms: Vec<f64> = occupations
            .iter()
            .map(|occ| {
                let multinomial =
                    factorial(n) / occ.iter().map(|&k| factorial(k)).product::<f64>();
                multinomial.sqrt().recip()
            })
            .collect();

        let mut isometry = CMat::zeros(full, occupations.len());
        let mut counts = vec![0usize; d];
        for index in 0..full {
            counts.iter_mut().for_each(|c| *c = 0);
            let mut rest = index;
            for _ in 0..n {
                counts[rest % d] += 1;
                rest /= d;
            }
            let col = column[counts.as_slice()];
            isometry[(index, col)].re = norms[col];
        }
        Ok(Self {
            d,
            n,
            occupations,
            isometry,
        })
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn copies(&self) -> usize {
        self.n
    }

    /// `d[n]`.
    pub fn dim(&self) -> usize {
        self.occupations.len()
    }

    pub fn occupations(&self) -> &[Vec<usize>] {
        &self.occupations
    }

    /// `d^n x d[n]` matrix whose columns are the occupation states.
    pub fn isometry(&self) -> &CMat {
        &self.isometry
    }

    /// Symmetric-basis coordinates of a full-space vector.
    pub fn compress(&self, v: &CVec) -> CVec {
        self.isometry.adjoint() * v
    }

    /// Compresses a full-space operator to the symmetric subspace.
    pub fn compress_operator(&self, m: &CMat) -> CMat {
        self.isometry.adjoint() * m * &self.isometry
    }

    /// Embeds a symmetric-subspace operator in the full space.
    pub fn lift(&self, m: &CMat) -> CMat {
        &self.isometry * m * self.isometry.adjoint()
    }

    pub fn projector(&self) -> CMat {
        &self.isometry * self.isometry.adjoint()
    }
}

/// `s_n`, the orthogonal projector onto the symmetric subspace.
pub fn sym_projector(d: usize, n: usize) -> Result<CMat> {
    Ok(SymBasis::new(d, n)?.projector())
}

/// `∫dψ (|ψ><ψ|)^{⊗n} = s_n / d[n]`.
pub fn haar_moment(d: usize, n: usize) -> Result<CMat> {
    let basis = SymBasis::new(d, n)?;
    Ok(basis.projector().unscale(basis.dim() as f64))
}
