//! Combinatorics and certified numerics for β-expansions of one.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function over immutable values:
//!
//! * [`words`] : digit words, lexicographic order, Parry admissibility,
//!   self-admissibility, counting and enumeration.
//! * [`recurrence`] : recurrence time of words and the maximal
//!   self-admissible extensions it determines.
//! * [`numeric`] : dyadic interval arithmetic with outward rounding and the
//!   certified solver for `1 = Σ εᵢ β⁻ⁱ`.
//! * [`expansion`] : greedy digits of `x` and of `1`, orbits, simple-Parry
//!   detection and zero-run statistics.
//! * [`cylinders`] : parameter-space cylinders, their endpoints, lengths and
//!   orbit images.
//! * [`targets`] : shrinking-target hits, covers, partition sums and
//!   critical-exponent estimates.
//! * [`cantor`] : finite-generation Cantor constructions with certified
//!   hitting properties and a uniform mass distribution.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod beta;
pub mod cantor;
pub mod cylinders;
pub mod error;
pub mod expansion;
pub mod numeric;
pub mod recurrence;
pub mod targets;
pub mod words;

pub use beta::Beta;
pub use error::{Error, Result};
pub use numeric::{Dyadic, Interval, UnitRoot};
pub use words::DigitWord;


/// Working precision (fractional bits) used when callers do not ask for one.
pub const DEFAULT_PRECISION: u32 = 128;

/// Upper limit for adaptive precision doubling.
pub const PRECISION_CAP: u32 = 4096;

/// Outcome of a comparison between enclosures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    /// The enclosures still overlap at the precision cap.
    Undetermined,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
            _ => Verdict::Undetermined,
        }
    }
}
