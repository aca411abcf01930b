//! Cylinders in the parameter space: the set of `β > 1` whose expansion of
//! one starts with a given self-admissible word.
//!
//! The cylinder of `w` is `[β₀, β₁)`, where `β₀` solves the unit equation of
//! `w` and `β₁` solves the one of [`right_endpoint_word`]. When `β₀ = 1` the
//! cylinder is the open interval `(1, β₁)` and is flagged as a boundary
//! cylinder.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::beta::Beta;
use crate::error::{Error, Result};
use crate::expansion::digits_of_one;
use crate::numeric::{compare_refining, Dyadic, IntPoly, Interval, UnitRoot};
use crate::recurrence::{right_endpoint_word, tau};
use crate::words::{
    enumerate_self_admissible, is_self_admissible, lex_compare, predecessor, render, successor,
    DigitWord, DEFAULT_DIGIT_CEILING,
};
use crate::{Verdict, DEFAULT_PRECISION};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamCylinder {
    word: DigitWord,
    left: UnitRoot,
    right: UnitRoot,
    tau: usize,
}

pub fn cylinder(w: &[u32]) -> Result<ParamCylinder> {
    cylinder_with_precision(w, DEFAULT_PRECISION)
}

pub fn cylinder_with_precision(w: &[u32], prec: u32) -> Result<ParamCylinder> {
    if w.is_empty() || !is_self_admissible(w) {
        return Err(Error::domain(alloc::format!("({}) is not self-admissible", render(w))));
    }
    let left = UnitRoot::solve(w, prec)?;
    let right = UnitRoot::solve(&right_endpoint_word(w)?, prec)?;
    Ok(ParamCylinder { word: DigitWord::new(w.to_vec())?, left, right, tau: tau(w) })
}

impl ParamCylinder {
    pub fn word(&self) -> &DigitWord {
        &self.word
    }

    pub fn order(&self) -> usize {
        self.word.len()
    }

    /// `β₀`.
    pub fn left(&self) -> &UnitRoot {
        &self.left
    }

    /// `β₁`.
    pub fn right(&self) -> &UnitRoot {
        &self.right
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Full recurrence time.
    pub fn is_regular(&self) -> bool {
        self.tau == self.word.len()
    }

    /// `β₀ = 1`.
    pub fn is_boundary(&self) -> bool {
        self.left.at_boundary()
    }

    pub fn refine(&self, prec: u32) -> Result<ParamCylinder> {
        Ok(ParamCylinder {
            left: self.left.refine(prec)?,
            right: self.right.refine(prec)?,
            ..self.clone()
        })
    }

    /// `β₁ − β₀`.
    pub fn length(&self, prec: u32) -> Result<Interval> {
        Ok(&self.right.enclose(prec)? - &self.left.enclose(prec)?)
    }

    /// `f(β) = βⁿ − Σ εᵢ β^{n−i}`, equal to `Tⁿ_β 1` on the cylinder.
    pub fn orbit_polynomial(&self) -> IntPoly {
        IntPoly::from_orbit_word(&self.word)
    }

    /// Enclosure of `β₀` and `β₁` as one interval.
    pub fn hull(&self, prec: u32) -> Result<Interval> {
        Ok(self.left.enclose(prec)?.hull(&self.right.enclose(prec)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthBounds {
    pub actual: Interval,
    /// `β₁^{−n+1}`.
    pub upper: Interval,
    /// `C β₁^{−n}·(ε_{t+1}/β₁ + ⋯ + (ε_k+1)/β₁^{k−t})` with `C = (β₀−1)²/β₀`,
    /// where `k = τ(w)`, `ℓk < n ≤ (ℓ+1)k` and `t = n − ℓk`. The bracket is 1
    /// when `t = k`. `None` for boundary cylinders, where `C` vanishes.
    pub lower: Option<Interval>,
}

pub fn length_bounds(c: &ParamCylinder, prec: u32) -> Result<LengthBounds> {
    let n = c.order();
    let b0 = c.left.enclose(prec)?;
    let b1 = c.right.enclose(prec)?;
    let actual = &b1 - &b0;
    let r1 = b1.recip()?;
    let upper = r1.powi(n as u32 - 1);
    let lower = if c.is_boundary() {
        None
    } else {
        let one = Interval::from_int(1, prec);
        let gap = &b0 - &one;
        let constant = (&gap * &gap).div(&b0)?;
        let k = c.tau;
        let t = n - ((n - 1) / k) * k;
        let bracket = if t == k {
            one
        } else {
            let mut digits: Vec<u32> = c.word[t..k].to_vec();
            *digits.last_mut().expect("t < k") += 1;
            crate::numeric::eval_power_sum(&digits, &b1)?
        };
        Some(&(&constant * &r1.powi(n as u32)) * &bracket)
    };
    Ok(LengthBounds { actual, upper, lower })
}

/// Certifies `lower ≤ actual ≤ upper`, refining the endpoints as needed.
/// Boundary cylinders only check the upper bound.
pub fn check_length_bounds(c: &ParamCylinder, prec: u32) -> Result<Verdict> {
    let upper = if upper_bound_is_attained(c) {
        Verdict::Holds
    } else {
        compare_refining(prec, false, |p| {
            let b = length_bounds(c, p)?;
            Ok((b.actual, b.upper))
        })?
    };
    if c.is_boundary() {
        return Ok(upper);
    }
    let lower = compare_refining(prec, false, |p| {
        let b = length_bounds(c, p)?;
        Ok((b.lower.expect("non-boundary"), b.actual))
    })?;
    Ok(upper.and(lower))
}

/// `β₁ − β₀ = β₁^{1−n}` decided exactly when `β₀ = m` is an integer: then
/// it says `β₁` is a root of `xⁿ − m·x^{n−1} − 1`, which happens for the
/// words `(m,0,…,0)`.
fn upper_bound_is_attained(c: &ParamCylinder) -> bool {
    let left = c.left.enclosure();
    if !(left.is_point() && left.lo().is_integer()) {
        return false;
    }
    let n = c.order();
    let mut coeffs = alloc::vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    coeffs[n - 1] -= left.lo().floor();
    coeffs[0] -= BigInt::one();
    Beta::Root(c.right.clone()).is_root_of(&IntPoly::new(coeffs)) == Some(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitImage {
    /// `f(β₁⁻)`; the image of the cylinder under `β ↦ Tⁿ_β 1` is `[0, sup)`.
    pub sup: Interval,
    /// `f(β₀)`, which is zero.
    pub at_left: Interval,
}

pub fn orbit_image(c: &ParamCylinder, prec: u32) -> Result<OrbitImage> {
    let f = c.orbit_polynomial();
    Ok(OrbitImage {
        sup: f.eval(&c.right.enclose(prec)?)?,
        at_left: f.eval(&c.left.enclose(prec)?)?,
    })
}

/// Certifies `f' > 0` on each of `pieces` equal sub-enclosures of the
/// cylinder hull. A sub-enclosure on which plain interval evaluation is too
/// coarse is bisected (up to 24 levels) before giving up.
pub fn derivative_positive(c: &ParamCylinder, pieces: usize, prec: u32) -> Result<Verdict> {
    if pieces == 0 {
        return Err(Error::domain("need at least one sub-enclosure"));
    }
    let d = c.orbit_polynomial().derivative();
    let hull = c.hull(prec)?;
    let width = hull.width();
    let mut verdict = Verdict::Holds;
    for i in 0..pieces {
        let a = hull.lo() + &scaled(&width, i, pieces, prec, false)?;
        let b = hull.lo() + &scaled(&width, i + 1, pieces, prec, true)?;
        let b = b.min(hull.hi().clone());
        verdict = verdict.and(positive_on(&d, a, b, prec, 24)?);
        if verdict == Verdict::Fails {
            break;
        }
    }
    Ok(verdict)
}

/// `width·i/pieces`, rounded down or up.
fn scaled(width: &Dyadic, i: usize, pieces: usize, prec: u32, up: bool) -> Result<Dyadic> {
    let num = width * &Dyadic::from_int(i as i64);
    let den = Dyadic::from_int(pieces as i64);
    if up {
        num.div_up(&den, prec)
    } else {
        num.div_down(&den, prec)
    }
}

pub(crate) fn positive_on(p: &IntPoly, a: Dyadic, b: Dyadic, prec: u32, depth: u32) -> Result<Verdict> {
    let v = p.eval(&Interval::new(a.clone(), b.clone(), prec)?)?;
    if v.is_positive() {
        return Ok(Verdict::Holds);
    }
    if p.sign_at(&a, prec) <= 0 || p.sign_at(&b, prec) <= 0 {
        return Ok(Verdict::Fails);
    }
    if depth == 0 || a == b {
        return Ok(Verdict::Undetermined);
    }
    let m = (&a + &b).mul_pow2(-1);
    let left = positive_on(p, a, m.clone(), prec, depth - 1)?;
    if left != Verdict::Holds {
        return Ok(left);
    }
    positive_on(p, m, b, prec, depth - 1)
}

/// An open parameter window `(lo, hi)` with rational ends, `1 ≤ lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    lo: BigRational,
    hi: BigRational,
}

impl Window {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Window> {
        if lo < BigRational::one() {
            return Err(Error::domain("window must lie in (1, ∞)"));
        }
        if lo >= hi {
            return Err(Error::domain("window needs lo < hi"));
        }
        Ok(Window { lo, hi })
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn enclose_lo(&self, prec: u32) -> Interval {
        Interval::from_rational(&self.lo, prec)
    }

    pub fn enclose_hi(&self, prec: u32) -> Interval {
        Interval::from_rational(&self.hi, prec)
    }
}

/// Prefix of length `n` of `ε(1, q)`, i.e. the word of the order-`n`
/// cylinder containing the rational `q > 1`.
fn word_containing(q: &BigRational, n: usize) -> Result<Vec<u32>> {
    let beta = Beta::rational(q.clone())?;
    Ok(digits_of_one(&beta, n)?.raw_digits)
}

/// Words of every order-`n` cylinder meeting the window, in increasing
/// order. Purely combinatorial; endpoints are not solved.
pub fn walk_words(n: usize, window: &Window) -> Result<Vec<DigitWord>> {
    if n == 0 {
        return Err(Error::domain("order must be at least 1"));
    }
    let from = if window.lo.is_one() {
        let mut v = alloc::vec![0; n];
        v[0] = 1;
        v
    } else {
        word_containing(&window.lo, n)?
    };
    let mut to = word_containing(&window.hi, n)?;
    // a cylinder starting exactly at hi does not meet the open window
    let last_left = IntPoly::from_orbit_word(&to).eval_rational(&window.hi);
    if last_left.is_zero() {
        to = predecessor(&to).map(DigitWord::into_vec).ok_or_else(|| {
            Error::Boundary("no cylinder below the window end".into())
        })?;
    }
    if lex_compare(&from, &to) == Ordering::Greater {
        return Ok(Vec::new());
    }
    Ok(enumerate_self_admissible(n, &from, &to)?.collect())
}

/// Cylinders of order `n` meeting the window, solved at `prec` bits.
pub fn walk_cylinders(
    n: usize,
    window: &Window,
    prec: u32,
) -> Result<impl Iterator<Item = Result<ParamCylinder>>> {
    let words = walk_words(n, window)?;
    Ok(words.into_iter().map(move |w| cylinder_with_precision(&w, prec)))
}

/// Whether `β₁` of `a` equals `β₀` of `b`, decided exactly.
pub fn shares_endpoint(a: &ParamCylinder, b: &ParamCylinder) -> Option<bool> {
    Beta::Root(a.right.clone()).is_root_of(&b.left.polynomial())
}

/// Checks that consecutive cylinders share endpoints and that together
/// they cover the window.
pub fn check_tiling(cylinders: &[ParamCylinder], window: &Window, prec: u32) -> Result<Verdict> {
    let Some(first) = cylinders.first() else {
        return Ok(Verdict::Fails);
    };
    let last = cylinders.last().expect("non-empty");
    let mut verdict = compare_refining(prec, false, |p| {
        Ok((first.left.enclose(p)?, window.enclose_lo(p)))
    })?;
    verdict = verdict.and(compare_refining(prec, false, |p| {
        Ok((window.enclose_hi(p), last.right.enclose(p)?))
    })?);
    for pair in cylinders.windows(2) {
        verdict = verdict.and(match shares_endpoint(&pair[0], &pair[1]) {
            Some(true) => Verdict::Holds,
            Some(false) => Verdict::Fails,
            None => Verdict::Undetermined,
        });
    }
    Ok(verdict)
}

/// A word of full recurrence time among the nearest `n − 1` neighbours of
/// `w` on either side (predecessors are tried first at each distance).
pub fn find_regular_neighbor(w: &[u32]) -> Result<DigitWord> {
    if w.is_empty() || !is_self_admissible(w) {
        return Err(Error::domain(alloc::format!("({}) is not self-admissible", render(w))));
    }
    let n = w.len();
    if tau(w) == n {
        return DigitWord::new(w.to_vec());
    }
    let mut below = Some(DigitWord::new(w.to_vec())?);
    let mut above = below.clone();
    for _ in 1..n {
        below = below.and_then(|v| predecessor(&v));
        if let Some(v) = below.as_ref().filter(|v| tau(v) == n) {
            return Ok(v.clone());
        }
        above = above.and_then(|v| successor(&v, DEFAULT_DIGIT_CEILING));
        if let Some(v) = above.as_ref().filter(|v| tau(v) == n) {
            return Ok(v.clone());
        }
    }
    Err(Error::Boundary(alloc::format!(
        "no word of full recurrence time within {} neighbours of ({})",
        n - 1,
        render(w)
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::self_admissible_words;
    use alloc::vec;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn words(ws: &[DigitWord]) -> Vec<Vec<u32>> {
        ws.iter().map(|w| w.to_vec()).collect()
    }

    #[test]
    fn cylinder_examples() {
        let c = cylinder(&[1, 1]).unwrap();
        assert!((c.left().to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
        assert_eq!(c.right().enclosure().lo(), &Dyadic::from_int(2));
        assert_eq!(c.tau(), 1);
        assert!(!c.is_regular());

        let c = cylinder(&[2]).unwrap();
        assert_eq!(c.right().word().digits(), [3]);
        assert!(c.is_regular());

        let c = cylinder(&[1, 0]).unwrap();
        assert!(c.is_boundary() && c.is_regular());
        assert_eq!(c.right().word().digits(), [1, 1]);

        assert!(cylinder(&[1, 2]).is_err());
    }

    #[test]
    fn length_bound_examples() {
        let b = length_bounds(&cylinder(&[2]).unwrap(), 128).unwrap();
        assert!(b.actual.is_point() && b.actual.lo() == &Dyadic::one());
        assert_eq!(b.upper.lo(), &Dyadic::one());
        let lower = b.lower.unwrap();
        assert!((lower.to_f64() - 1.0 / 6.0).abs() < 1e-15);

        let b = length_bounds(&cylinder(&[1, 1]).unwrap(), 128).unwrap();
        assert!((b.actual.to_f64() - 0.381_966_011_250_105).abs() < 1e-15);
        assert_eq!(b.upper.to_f64(), 0.5);

        let c = cylinder(&[2, 2]).unwrap();
        assert_eq!(c.right().word().digits(), [3]);
        assert_eq!(check_length_bounds(&c, 128).unwrap(), Verdict::Holds);
        assert_eq!(length_bounds(&cylinder(&[1, 0, 0]).unwrap(), 128).unwrap().lower, None);
    }

    #[test]
    fn orbit_image_examples() {
        for w in [&[1u32][..], &[1, 0], &[1, 1]] {
            let img = orbit_image(&cylinder(w).unwrap(), 128).unwrap();
            assert!(img.sup.contains(&Dyadic::one()), "{w:?}");
            assert!(img.at_left.contains_zero());
        }
        let c = cylinder(&[1, 1, 0, 1]).unwrap();
        assert_eq!(derivative_positive(&c, 16, 128).unwrap(), Verdict::Holds);
    }

    #[test]
    fn walk_examples() {
        let w = Window::new(q(1, 1), q(7, 2)).unwrap();
        assert_eq!(words(&walk_words(1, &w).unwrap()), [vec![1], vec![2], vec![3]]);
        let w = Window::new(q(1, 1), q(2, 1)).unwrap();
        assert_eq!(words(&walk_words(2, &w).unwrap()), [vec![1, 0], vec![1, 1]]);
        let w = Window::new(q(2, 1), q(3, 1)).unwrap();
        assert_eq!(words(&walk_words(2, &w).unwrap()), [vec![2, 0], vec![2, 1], vec![2, 2]]);
        assert!(Window::new(q(2, 1), q(2, 1)).is_err());
    }

    #[test]
    fn walks_tile_the_window() {
        let w = Window::new(q(6, 5), q(3, 1)).unwrap();
        for n in 1..=7 {
            let cs: Vec<_> = walk_cylinders(n, &w, 128).unwrap().map(Result::unwrap).collect();
            assert_eq!(check_tiling(&cs, &w, 128).unwrap(), Verdict::Holds, "n={n}");
        }
    }

    #[test]
    fn regular_neighbor_examples() {
        assert_eq!(find_regular_neighbor(&[1, 1]).unwrap().digits(), [1, 0]);
        assert_eq!(find_regular_neighbor(&[2, 2]).unwrap().digits(), [2, 1]);
        assert_eq!(find_regular_neighbor(&[1, 0, 0]).unwrap().digits(), [1, 0, 0]);
        for n in 1..=8 {
            for w in self_admissible_words(n, 2) {
                let v = find_regular_neighbor(&w).unwrap();
                assert_eq!(tau(&v), n);
            }
        }
    }

    #[test]
    fn extensions_nest() {
        for n in 1..=5 {
            for w in self_admissible_words(n, 2) {
                let c = cylinder(&w).unwrap();
                for d in 0..=2 {
                    let v = w.concat(&[d]);
                    if !is_self_admissible(&v) {
                        continue;
                    }
                    let e = cylinder(&v).unwrap();
                    let outer = c.hull(128).unwrap();
                    let inner = e.hull(128).unwrap();
                    assert!(outer.lo() <= inner.hi() && inner.lo() <= outer.hi());
                    assert!(!inner.certainly_lt(&Interval::point(outer.lo().clone(), 128)));
                    assert!(!Interval::point(outer.hi().clone(), 128).certainly_lt(&inner));
                }
            }
        }
    }

    #[test]
    fn bounds_hold_for_short_words() {
        for n in 1..=6 {
            for w in self_admissible_words(n, 2) {
                let c = cylinder_with_precision(&w, 256).unwrap();
                assert_eq!(check_length_bounds(&c, 256).unwrap(), Verdict::Holds, "{w}");
                if c.is_regular() && !c.is_boundary() {
                    let b = length_bounds(&c, 256).unwrap();
                    let one = Interval::from_int(1, 256);
                    let b0 = c.left().enclose(256).unwrap();
                    let gap = &b0 - &one;
                    let regular = &(&gap * &gap).div(&b0).unwrap()
                        * &c.right().enclose(256).unwrap().recip().unwrap().powi(n as u32);
                    assert!(regular.certainly_le(&b.actual));
                }
            }
        }
    }
}
