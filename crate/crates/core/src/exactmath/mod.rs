//! Exact rational arithmetic and outward-rounded enclosures.

mod enclosure;
mod ln;
mod rational;

pub use enclosure::{enclosure_arith, sqrt_enclosure, DecimalInterval, Enclosure, EnclosureOp};
pub use ln::{ln_at_bits, ln_enclosure, ln_int_at_bits, MAX_LN_BITS};
pub use rational::{rational, Rational};

pub(crate) use ln::{bits_for_width, ln_dyadic};

/// Default relative width for logarithm enclosures.
pub fn default_relative_width() -> Rational {
    Rational::new(1, 1_000_000_000_000i64).expect("nonzero")
}
