//! Sources of a base `β > 1` that can be enclosed to any precision.

use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{Dyadic, IntPoly, Interval, UnitRoot};
use crate::PRECISION_CAP;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Beta {
    /// Root of a unit equation; refinable without limit.
    Root(UnitRoot),
    /// An exact rational.
    Rational(BigRational),
    /// A fixed enclosure that cannot be refined.
    Fixed(Interval),
}

impl Beta {
    pub fn from_word(w: &[u32]) -> Result<Beta> {
        let root = crate::numeric::solve_unit_equation(w)?;
        if root.at_boundary() {
            return Err(Error::domain("unit root is 1, outside (1, ∞)"));
        }
        Ok(Beta::Root(root))
    }

    pub fn integer(b: u32) -> Result<Beta> {
        Beta::rational(BigRational::from_integer(BigInt::from(b)))
    }

    pub fn rational(r: BigRational) -> Result<Beta> {
        if r <= BigRational::one() {
            return Err(Error::domain("beta must exceed 1"));
        }
        Ok(Beta::Rational(r))
    }

    pub fn fixed(e: Interval) -> Result<Beta> {
        if e.lo() <= &Dyadic::one() {
            return Err(Error::domain("beta enclosure must lie above 1"));
        }
        Ok(Beta::Fixed(e))
    }

    /// Enclosure of width at most `2^{-prec}` (a fixed enclosure is returned
    /// as is).
    pub fn enclose(&self, prec: u32) -> Result<Interval> {
        match self {
            Beta::Root(r) => r.enclose(prec),
            Beta::Rational(q) => Ok(Interval::from_rational(q, prec + 24)),
            Beta::Fixed(e) => Ok(e.clone()),
        }
    }

    pub fn is_refinable(&self) -> bool {
        !matches!(self, Beta::Fixed(_))
    }

    /// Whether `β` is a root of `p`, decided exactly when the source allows
    /// it.
    pub fn is_root_of(&self, p: &IntPoly) -> Option<bool> {
        match self {
            Beta::Rational(q) => Some(p.eval_rational(q).is_zero()),
            Beta::Fixed(_) => None,
            Beta::Root(r) => {
                if p.is_zero() {
                    return Some(true);
                }
                let g = r.polynomial();
                let h = g.gcd(p);
                if h.degree() == Some(0) {
                    return Some(false);
                }
                let cofactor = g.div_exact(&h).expect("gcd divides");
                if cofactor.degree() == Some(0) {
                    return Some(true);
                }
                // β is a simple root of g = h·cofactor, so exactly one
                // factor vanishes there
                let mut prec = 128;
                while prec <= PRECISION_CAP {
                    let e = r.enclose(prec).ok()?;
                    if !h.eval(&e).ok()?.contains_zero() {
                        return Some(false);
                    }
                    if !cofactor.eval(&e).ok()?.contains_zero() {
                        return Some(true);
                    }
                    prec *= 2;
                }
                None
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Beta::Root(r) => r.to_f64(),
            Beta::Rational(q) => Dyadic::from_rational_down(q, 64).to_f64(),
            Beta::Fixed(e) => e.to_f64(),
        }
    }

    pub fn describe(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Root(r) => write!(f, "root({})", r.word()),
            Beta::Rational(q) => write!(f, "{q}"),
            Beta::Fixed(e) => write!(f, "{e}"),
        }
    }
}
