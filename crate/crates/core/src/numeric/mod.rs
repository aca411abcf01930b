//! Certified real arithmetic.
//!
//! Reals are carried as [`Interval`]s of [`Dyadic`] endpoints. Every
//! operation rounds outward, so an enclosure always contains the exact
//! value; precision is the number of significant bits kept per endpoint.

mod dyadic;
mod interval;
mod poly;
mod roots;

pub use dyadic::Dyadic;
pub use interval::{decimal_digits, Interval};
pub use poly::IntPoly;
pub use roots::{bracket_root, solve_unit_equation, UnitRoot};

use crate::error::{Error, Result};
use crate::{Verdict, PRECISION_CAP};

fn require_above_one(beta: &Interval) -> Result<()> {
    if beta.lo() <= &Dyadic::one() {
        return Err(Error::domain("beta enclosure must lie above 1"));
    }
    Ok(())
}

/// Decides `a ≤ b` (or `a < b` when `strict`) for enclosures produced by
/// `f(prec)`, doubling the precision from `start` until the answer is
/// certain or the cap is reached.
pub fn compare_refining<F>(start: u32, strict: bool, mut f: F) -> Result<Verdict>
where
    F: FnMut(u32) -> Result<(Interval, Interval)>,
{
    let mut prec = start.min(PRECISION_CAP);
    loop {
        let (a, b) = f(prec)?;
        let holds = if strict { a.certainly_lt(&b) } else { a.certainly_le(&b) };
        if holds {
            return Ok(Verdict::Holds);
        }
        let fails = if strict { b.certainly_le(&a) } else { b.certainly_lt(&a) };
        if fails {
            return Ok(Verdict::Fails);
        }
        if prec >= PRECISION_CAP {
            return Ok(Verdict::Undetermined);
        }
        prec = (prec * 2).min(PRECISION_CAP);
    }
}

/// `Σ εᵢ β⁻ⁱ`, evaluated by nested multiplication in `1/β`.
pub fn eval_power_sum(w: &[u32], beta: &Interval) -> Result<Interval> {
    require_above_one(beta)?;
    let prec = beta.prec();
    let r = beta.recip()?;
    let mut lo = Dyadic::zero();
    let mut hi = Dyadic::zero();
    for &d in w.iter().rev() {
        let d = Dyadic::from_int(d as i64);
        lo = (&(&lo + &d) * r.lo()).round_down(prec);
        hi = (&(&hi + &d) * r.hi()).round_up(prec);
    }
    Interval::new(lo, hi, prec)
}

/// `f(β) = βⁿ − Σ εᵢ β^{n−i}`, which equals `Tⁿ_β 1` on the cylinder of `w`.
pub fn eval_orbit_polynomial(w: &[u32], beta: &Interval) -> Result<Interval> {
    require_above_one(beta)?;
    IntPoly::from_orbit_word(w).eval(beta)
}

/// `f'(β)` for the polynomial of [`eval_orbit_polynomial`].
pub fn eval_orbit_derivative(w: &[u32], beta: &Interval) -> Result<Interval> {
    require_above_one(beta)?;
    IntPoly::from_orbit_word(w).derivative().eval(beta)
}
