//! Numerical laboratory for the quantum state-estimation game and the
//! quantum cloning game.
//!
//! Both games are two-player zero-sum games refereed by a SWAP test. The
//! crate builds the equilibrium strategies (a covariant POVM estimator for
//! qubits and the universal symmetric cloner), evaluates their Haar-averaged
//! values exactly through symmetric-subspace moment identities, and provides
//! finite matrix-game machinery to cross-check minmax, symmetrization and
//! equilibrium interchange numerically.

// `!(x > 0.0)` style checks are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cloning;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod nnls;
pub mod quantum;
pub mod swap;
pub mod symmetric;
pub mod zerosum;

pub use error::{Error, Result};
pub use quantum::{CMat, CVec, DensityOperator, PureState, RandomStream};
