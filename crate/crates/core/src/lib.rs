//! Certified verification of the factorial-ratio method for primes in
//! intervals `[kx, (k+1)x]`.
//!
//! The pipeline is:
//!
//! 1. [`ratioconfig`] builds a factorial-ratio configuration, either from
//!    explicit factor lists or by compiling a prime set `P` into its Möbius
//!    product over the squarefree divisors of `Q = ∏ P`.
//! 2. [`gsweep`] evaluates the step function `G` exactly and sweeps its
//!    breakpoints for the first-crossing thresholds `d_i`.
//! 3. [`certify`] compares `Σ a ln a − Σ b ln b` against `c · ln β` with
//!    rigorous enclosures and emits a re-checkable [`certify::Certificate`].
//! 4. [`search`] augments a prime set greedily until the comparison holds.
//!
//! All numerics that can influence a verdict go through [`exactmath`]:
//! exact rationals and outward-rounded enclosures. No floating point is
//! trusted anywhere on a decision path.

pub mod certify;
pub mod error;
pub mod exactmath;
pub mod gsweep;
pub mod numtheory;
pub mod ratioconfig;
pub mod reference;
pub mod search;

pub use error::{Error, Result};
