//! Exact least common multiples of polynomial sequences `f0(n) - a` and the
//! decomposition of `log L_a(N)` into bad-prime, large-prime and density
//! terms, with ensemble statistics over the shift `a`.
//!
//! Polynomial arithmetic is generic over [`IntScalar`]; exponential sums are
//! generic over [`RealScalar`]. The aliases below fix the types used by the
//! valuation and decomposition engines.

pub mod decomp;
pub mod ensemble;
pub mod error;
pub mod gf;
pub mod modroots;
pub mod ntkernel;
pub mod polyring;
pub mod scalar;
mod serde_util;
pub mod valengine;

use num_bigint::BigInt;

pub use decomp::DecompositionReport;
pub use ensemble::{EnsembleStats, Sampling, Statistic};
pub use error::{Error, Result};
pub use modroots::{RootSetModPk, SigmaValue};
pub use ntkernel::{Factorization, PrimeTable};
pub use polyring::{C1Bound, Poly, ShiftedPoly};
pub use valengine::{LedgerKind, ValuationLedger};
pub use scalar::{IntScalar, RealScalar};

/// Integer polynomial with arbitrary-precision coefficients.
pub type IntPoly = Poly<BigInt>;
/// `f0(x) - a` with arbitrary-precision coefficients.
pub type ShiftedIntPoly = ShiftedPoly<BigInt>;
/// Polynomial with machine-word coefficients, for small exact workloads.
pub type SmallPoly = Poly<i64>;
