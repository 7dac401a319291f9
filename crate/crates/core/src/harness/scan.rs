use serde::Serialize;

use super::map_indexed;
use crate::cloning::{asymmetric_cloner, identity_embedding, optimal_cloner, random_channel, sum_single_clone_haar_fidelity, value_formulas, Channel};
use crate::error::{Error, Result};
use crate::quantum::{checked_dim, RandomStream, DEFAULT_SIZE_CAP};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub label: String,
    pub sum_fidelity: f64,
    pub per_clone: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub bound: f64,
    pub max_sum_fidelity: f64,
    pub argmax: String,
    pub optimal_sum: f64,
    pub violation: bool,
    pub records: Vec<ScanRecord>,
}

fn record(label: String, ch: &Channel) -> Result<ScanRecord> {
    let (sum_fidelity, per_clone) = sum_single_clone_haar_fidelity(ch)?;
    if !sum_fidelity.is_finite() {
        return Err(Error::InvalidArgument(format!("{label}: non-finite fidelity")));
    }
    Ok(ScanRecord {
        label,
        sum_fidelity,
        per_clone,
    })
}

/// Summed single-clone Haar fidelities over a family of channels, compared
/// with `(N(d+M)+M-N)/(d+N)`.
///
/// The family is: the symmetric optimal cloner, the product channel
/// `ρ ↦ ρ ⊗ (1/d)^{⊗(M-N)}`, `n_random` channels from Haar-random isometries
/// with an ancilla of dimension `ancilla` (default `d^M`), and for `1 -> 2`
/// the coherent asymmetric cloners at each `β` in `grid`.
pub fn asym_bound_scan(
    d: usize,
    n: usize,
    m: usize,
    n_random: usize,
    grid: &[f64],
    seed: u64,
    ancilla: Option<usize>,
) -> Result<ScanReport> {
    let bound = value_formulas(d, n, m)?.asym_bound;
    let ancilla = match ancilla {
        Some(a) if a >= 1 => a,
        Some(_) => return Err(Error::InvalidArgument("ancilla dimension must be positive".into())),
        None => checked_dim(d, m, DEFAULT_SIZE_CAP)?,
    };

    let optimal = record("optimal".into(), &optimal_cloner(d, n, m)?)?;
    let mut records = vec![optimal.clone(), record("product".into(), &identity_embedding(d, n, m)?)?];

    let stream = RandomStream::new(seed);
    let random = map_indexed(n_random, |i| {
        let ch = random_channel(d, n, m, ancilla, &mut stream.substream(i as u64).rng())?;
        record(format!("random[{i}]"), &ch)
    });
    for r in random {
        records.push(r?);
    }

    if (n, m) == (1, 2) {
        for &beta in grid {
            records.push(record(format!("asymmetric[beta={beta}]"), &asymmetric_cloner(d, beta)?)?);
        }
    } else if !grid.is_empty() {
        return Err(Error::InvalidArity(format!("asymmetry grid is defined for 1 -> 2 cloning, got {n} -> {m}")));
    }

    let best = records
        .iter()
        .max_by(|a, b| a.sum_fidelity.total_cmp(&b.sum_fidelity))
        .expect("at least the optimal cloner");
    Ok(ScanReport {
        d,
        n,
        m,
        bound,
        max_sum_fidelity: best.sum_fidelity,
        argmax: best.label.clone(),
        optimal_sum: optimal.sum_fidelity,
        violation: best.sum_fidelity > bound + 1e-9,
        records,
    })
}

/// `count` evenly spaced points of `[0, 1]`, endpoints included.
pub fn uniform_grid(count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..count).map(|i| i as f64 / (count - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloning::Domain;
    use crate::quantum::CMat;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_one_two_scan() {
        let r = asym_bound_scan(2, 1, 2, 100, &uniform_grid(11), 3, None).unwrap();
        assert_abs_diff_eq!(r.bound, 5.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.optimal_sum, 5.0 / 3.0, epsilon = 1e-10);
        assert!(!r.violation);
        assert!(r.max_sum_fidelity <= 5.0 / 3.0 + 1e-9);
        let product = r.records.iter().find(|x| x.label == "product").unwrap();
        assert_abs_diff_eq!(product.sum_fidelity, 1.5, epsilon = 1e-12);
        assert_eq!(r.records.len(), 2 + 100 + 11);
    }

    #[test]
    fn larger_arity_without_grid() {
        let r = asym_bound_scan(2, 1, 3, 20, &[], 1, None).unwrap();
        assert!(!r.violation);
        assert_abs_diff_eq!(r.optimal_sum, r.bound, epsilon = 1e-10);
        assert!(asym_bound_scan(2, 1, 3, 1, &[0.5], 1, None).is_err());
    }

    #[test]
    fn non_trace_preserving_rejected_up_front() {
        let k = CMat::identity(4, 2).scale(2.0);
        assert!(matches!(
            Channel::new(2, 1, 2, vec![k], Domain::Full),
            Err(Error::NotTracePreserving { .. })
        ));
    }

    #[test]
    fn reproducible() {
        let a = asym_bound_scan(2, 1, 2, 10, &[0.3], 42, None).unwrap();
        let b = asym_bound_scan(2, 1, 2, 10, &[0.3], 42, None).unwrap();
        assert_eq!(a, b);
    }
}
