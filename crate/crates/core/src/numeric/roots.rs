use num_traits::ToPrimitive;

use super::{Dyadic, IntPoly, Interval};
use crate::error::{Error, Result};
use crate::words::{render, DigitWord};
use crate::DEFAULT_PRECISION;

/// Significant bits needed to evaluate `p` on `[0, bound]` so that the
/// rounding error stays far below `2^{-target}`.
fn working_precision(p: &IntPoly, bound: &Dyadic, target: u32) -> u32 {
    let deg = p.degree().unwrap_or(0) as i64;
    let scale = bound.log2_floor().unwrap_or(0).max(0) + 1;
    let coeff_bits = p.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0) as i64;
    (target as i64 + 64 + deg * scale + coeff_bits).min(1 << 20) as u32
}

/// Encloses a root of `p` in `[lo, hi]` to width at most `2^{-target}`.
///
/// `p(lo)` must have sign `sign_lo` and `p(hi)` the opposite sign. Newton
/// iterates are only proposals: the returned bracket always has certified
/// opposite signs at its ends, or is a single point where `p` vanishes
/// exactly.
pub fn bracket_root(
    p: &IntPoly,
    lo: &Dyadic,
    hi: &Dyadic,
    sign_lo: i32,
    target: u32,
    guess: Option<Dyadic>,
) -> Result<Interval> {
    let wp = working_precision(p, hi, target);
    let out_prec = target + 16;
    if p.sign_at(lo, wp) == 0 {
        return Ok(Interval::point(lo.clone(), out_prec));
    }
    if p.sign_at(hi, wp) == 0 {
        return Ok(Interval::point(hi.clone(), out_prec));
    }
    if p.sign_at(lo, wp) != sign_lo || p.sign_at(hi, wp) != -sign_lo {
        return Err(Error::domain("root bracket without a sign change"));
    }
    let tol = Dyadic::pow2(-(target as i64));
    if (hi - lo) <= tol {
        return Ok(Interval::from_ordered(lo.clone(), hi.clone(), out_prec));
    }

    let dp = p.derivative();
    let mut x = guess.filter(|g| lo < g && g < hi).unwrap_or_else(|| (lo + hi).mul_pow2(-1));
    if p.sign_at(&x, wp) == 0 {
        return Ok(Interval::point(x, out_prec));
    }
    let tiny = Dyadic::pow2(-(target as i64) - 8);
    for _ in 0..64 {
        let v = p.eval(&Interval::point(x.clone(), wp))?.mid();
        let d = dp.eval(&Interval::point(x.clone(), wp))?.mid();
        if d.is_zero() {
            break;
        }
        let step = v.div_down(&d, wp)?;
        let next = (&x - &step).round_down(wp);
        if !(lo < &next && &next < hi) {
            break;
        }
        x = next;
        if step.abs() < tiny {
            break;
        }
    }
    // rational roots of monic integer polynomials are integers; catch them exactly
    let nearest = Dyadic::from_bigint((&x + &Dyadic::pow2(-1)).floor());
    if lo <= &nearest && &nearest <= hi && p.eval_exact(&nearest).is_zero() {
        return Ok(Interval::point(nearest, out_prec));
    }
    let delta = Dyadic::pow2(-(target as i64) - 1);
    let a = (&x - &delta).max(lo.clone());
    let b = (&x + &delta).min(hi.clone());
    let (sa, sb) = (p.sign_at(&a, wp), p.sign_at(&b, wp));
    if sa == 0 {
        return Ok(Interval::point(a, out_prec));
    }
    if sb == 0 {
        return Ok(Interval::point(b, out_prec));
    }
    if sa == sign_lo && sb == -sign_lo {
        return Ok(Interval::from_ordered(a, b, out_prec));
    }

    let (mut a, mut b) = (lo.clone(), hi.clone());
    while (&b - &a) > tol {
        let m = (&a + &b).mul_pow2(-1);
        match p.sign_at(&m, wp) {
            0 => return Ok(Interval::point(m, out_prec)),
            s if s == sign_lo => a = m,
            _ => b = m,
        }
    }
    Ok(Interval::from_ordered(a, b, out_prec))
}

/// The root `β ≥ 1` of `1 = Σ εᵢ β⁻ⁱ` for a word with `ε₁ ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitRoot {
    word: DigitWord,
    enclosure: Interval,
    at_boundary: bool,
}

/// Solves `1 = Σ εᵢ β⁻ⁱ` at the default precision.
pub fn solve_unit_equation(w: &[u32]) -> Result<UnitRoot> {
    UnitRoot::solve(w, DEFAULT_PRECISION)
}

impl UnitRoot {
    /// Solves to an enclosure of width at most `2^{-prec}`.
    pub fn solve(w: &[u32], prec: u32) -> Result<UnitRoot> {
        let word = DigitWord::new(w.to_vec())?;
        if w[0] == 0 {
            return Err(Error::domain(alloc::format!(
                "({}) has leading digit 0; the unit equation has no root in (1, ∞)",
                render(w)
            )));
        }
        let trimmed = word.trim_zeros().expect("leading digit is non-zero");
        if trimmed.digits() == [1] {
            return Ok(UnitRoot {
                word,
                enclosure: Interval::from_int(1, prec + 16),
                at_boundary: true,
            });
        }
        let p = IntPoly::from_orbit_word(&trimmed);
        let max = *trimmed.iter().max().unwrap() as i64;
        let guess = Dyadic::from_f64(float_root(&trimmed)).ok();
        let enclosure = bracket_root(
            &p,
            &Dyadic::one(),
            &Dyadic::from_int(1 + max),
            -1,
            prec,
            guess,
        )?;
        Ok(UnitRoot { word, enclosure, at_boundary: false })
    }

    pub fn word(&self) -> &DigitWord {
        &self.word
    }

    pub fn enclosure(&self) -> &Interval {
        &self.enclosure
    }

    /// The root is exactly 1, which lies outside the parameter space.
    pub fn at_boundary(&self) -> bool {
        self.at_boundary
    }

    /// `xᵐ − Σ εᵢ x^{m−i}` for the word with trailing zeros removed.
    pub fn polynomial(&self) -> IntPoly {
        IntPoly::from_orbit_word(&self.word.trim_zeros().expect("leading digit is non-zero"))
    }

    /// A root whose enclosure has width at most `2^{-prec}` and lies inside
    /// the current one.
    pub fn refine(&self, prec: u32) -> Result<UnitRoot> {
        if self.enclosure.is_point() {
            let enclosure = self.enclosure.clone().with_prec(prec + 16);
            return Ok(UnitRoot { enclosure, ..self.clone() });
        }
        if self.enclosure.width() <= Dyadic::pow2(-(prec as i64)) {
            return Ok(self.clone());
        }
        let enclosure = bracket_root(
            &self.polynomial(),
            self.enclosure.lo(),
            self.enclosure.hi(),
            -1,
            prec,
            Some(self.enclosure.mid()),
        )?;
        Ok(UnitRoot { enclosure, ..self.clone() })
    }

    /// Enclosure of width at most `2^{-prec}`.
    pub fn enclose(&self, prec: u32) -> Result<Interval> {
        Ok(self.refine(prec)?.enclosure)
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure.to_f64()
    }
}

/// Double-precision root of `Σ εᵢ x⁻ⁱ = 1` on `[1, 1 + max εᵢ]` by bisection.
fn float_root(w: &[u32]) -> f64 {
    let sum = |x: f64| {
        let r = 1.0 / x;
        w.iter().rev().fold(0.0, |acc, &d| (acc + d as f64) * r)
    };
    let mut lo = 1.0f64;
    let mut hi = 1.0 + w.iter().copied().max().unwrap_or(1).to_f64().unwrap();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sum(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_roots_are_exact() {
        let r = solve_unit_equation(&[2]).unwrap();
        assert!(r.enclosure().is_point());
        assert_eq!(r.enclosure().lo(), &Dyadic::from_int(2));
        let r = solve_unit_equation(&[3, 0, 0]).unwrap();
        assert_eq!(r.enclosure().lo(), &Dyadic::from_int(3));
    }

    #[test]
    fn boundary_roots() {
        for w in [&[1u32][..], &[1, 0], &[1, 0, 0, 0]] {
            let r = solve_unit_equation(w).unwrap();
            assert!(r.at_boundary());
            assert_eq!(r.enclosure().lo(), &Dyadic::one());
        }
        assert!(solve_unit_equation(&[0, 1]).is_err());
    }

    #[test]
    fn golden_ratio_bracket() {
        let r = solve_unit_equation(&[1, 1]).unwrap();
        let e = r.enclosure();
        assert!(e.width() <= Dyadic::pow2(-128));
        // φ² = φ + 1 changes sign across the enclosure
        let f = IntPoly::from_orbit_word(&[1, 1]);
        assert_eq!(f.sign_at(e.lo(), 400), -1);
        assert_eq!(f.sign_at(e.hi(), 400), 1);
        assert!((r.to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
    }

    #[test]
    fn refinement_nests() {
        let r = UnitRoot::solve(&[1, 0, 1, 1], 40).unwrap();
        let s = r.refine(200).unwrap();
        assert!(r.enclosure().contains_interval(s.enclosure()));
        assert!(s.enclosure().width() <= Dyadic::pow2(-200));
    }
}
