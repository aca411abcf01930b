//! Greedy β-expansions, orbits of the β-transformation and zero runs in the
//! expansion of one.
//!
//! Digits are produced by interval iteration of `T_β(x) = βx − ⌊βx⌋`. When
//! an enclosure of `β·Tᵏ⁻¹x` touches an integer `K`, the tie is tested
//! exactly: `β·Tᵏ⁻¹x − K` is an integer polynomial in `β` (for rational
//! `x`), and [`Beta::is_root_of`] decides whether it vanishes. A vanishing
//! tie makes the orbit exactly zero from then on. Anything else is resolved
//! by doubling the precision up to [`PRECISION_CAP`].

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::beta::Beta;
use crate::error::{Error, Result};
use crate::numeric::{Dyadic, IntPoly, Interval};
use crate::words::Ceiling;
use crate::{DEFAULT_PRECISION, PRECISION_CAP};

/// The starting point of an orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    /// The number 1, expanded by the same greedy rule.
    One,
    /// An exact rational in `[0, 1)`.
    Rational(BigRational),
    /// An enclosure inside `[0, 1)`; ties at integers cannot be resolved.
    Fixed(Interval),
}

impl Point {
    pub fn rational(r: BigRational) -> Result<Point> {
        if r < BigRational::zero() || r >= BigRational::one() {
            return Err(Error::domain("x must lie in [0, 1)"));
        }
        Ok(Point::Rational(r))
    }

    fn enclose(&self, prec: u32) -> Interval {
        match self {
            Point::One => Interval::from_int(1, prec),
            Point::Rational(r) => Interval::from_rational(r, prec),
            Point::Fixed(e) => e.clone(),
        }
    }

    /// `(numerator, denominator)` of an exact starting point.
    fn exact(&self) -> Option<(BigInt, BigInt)> {
        match self {
            Point::One => Some((BigInt::one(), BigInt::one())),
            Point::Rational(r) => Some((r.numer().clone(), r.denom().clone())),
            Point::Fixed(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub beta: Beta,
    pub point: Point,
    pub digits: Vec<u32>,
    /// Enclosures of `T¹x, …, Tⁿx`.
    pub orbit: Vec<Interval>,
    pub certified_depth: usize,
    /// First `k` with `Tᵏx = 0` exactly, if it occurred within the depth.
    pub zero_at: Option<usize>,
    /// Working precision that certified every digit.
    pub bits: u32,
}

/// The polynomial `a·βᵏ − b·Σ dᵢ β^{k−i} − b·K` whose value is
/// `b·(β·Tᵏ⁻¹x − K)` for `x = a/b` with digits `d₁…d_{k−1}`.
fn tie_polynomial(a: &BigInt, b: &BigInt, digits: &[u32], k_int: &BigInt) -> IntPoly {
    let k = digits.len() + 1;
    let mut c = vec![BigInt::zero(); k + 1];
    c[k] = a.clone();
    for (i, &d) in digits.iter().enumerate() {
        c[k - 1 - i] -= b * BigInt::from(d);
    }
    c[0] -= b * k_int;
    IntPoly::new(c)
}

enum Attempt {
    Done { digits: Vec<u32>, orbit: Vec<Interval>, zero_at: Option<usize> },
    Ambiguous(usize),
}

fn attempt(beta: &Beta, b: &Interval, x: &Point, n: usize, prec: u32) -> Result<Attempt> {
    let unit = Interval::from_ordered(Dyadic::zero(), Dyadic::one(), prec);
    let mut t = x.enclose(prec);
    let mut digits = Vec::with_capacity(n);
    let mut orbit = Vec::with_capacity(n);
    let mut zero_at = None;
    for k in 1..=n {
        if zero_at.is_some() {
            digits.push(0);
            orbit.push(Interval::from_int(0, prec));
            continue;
        }
        let y = b * &t;
        let lo_floor = y.lo().floor();
        let hi_floor = y.hi().floor();
        let touches = !y.is_point() && (lo_floor != hi_floor || y.lo().is_integer());
        let digit = if !touches {
            lo_floor
        } else {
            if &hi_floor - &lo_floor > BigInt::one()
                || (&hi_floor - &lo_floor == BigInt::one() && y.lo().is_integer())
            {
                return Ok(Attempt::Ambiguous(k));
            }
            let candidate = if y.lo().is_integer() { lo_floor } else { hi_floor };
            let exact = x.exact().and_then(|(num, den)| {
                beta.is_root_of(&tie_polynomial(&num, &den, &digits, &candidate))
            });
            if exact != Some(true) {
                return Ok(Attempt::Ambiguous(k));
            }
            zero_at = Some(k);
            candidate
        };
        let d = digit
            .to_u32()
            .ok_or_else(|| Error::domain("digit out of range"))?;
        if zero_at == Some(k) || (y.is_point() && y.lo().is_integer()) {
            zero_at = Some(k);
            t = Interval::from_int(0, prec);
        } else {
            let shifted = &y - &Interval::point(Dyadic::from_bigint(digit), prec);
            t = shifted.intersect(&unit).ok_or_else(|| {
                Error::domain("orbit left [0, 1]; the point is outside [0, 1)")
            })?;
        }
        digits.push(d);
        orbit.push(t.clone());
    }
    Ok(Attempt::Done { digits, orbit, zero_at })
}

/// First `n` greedy digits of `x` in base `β`, certified.
pub fn digits_of_x(beta: &Beta, x: &Point, n: usize) -> Result<OrbitRecord> {
    digits_with_precision(beta, x, n, DEFAULT_PRECISION)
}

pub fn digits_with_precision(beta: &Beta, x: &Point, n: usize, prec: u32) -> Result<OrbitRecord> {
    if let Point::Fixed(e) = x {
        if e.lo().signum() < 0 || e.hi() >= &Dyadic::one() {
            return Err(Error::domain("x must lie in [0, 1)"));
        }
    }
    let log2_beta = libm::log2(beta.to_f64()).max(1.0);
    let needed = (n as f64 * log2_beta) as u32 + 64;
    let mut bits = prec.max(needed).min(PRECISION_CAP);
    let refinable = beta.is_refinable() && !matches!(x, Point::Fixed(_));
    loop {
        let b = beta.enclose(bits)?;
        if b.lo() <= &Dyadic::one() {
            return Err(Error::domain("beta enclosure must lie above 1"));
        }
        match attempt(beta, &b, x, n, bits)? {
            Attempt::Done { digits, orbit, zero_at } => {
                return Ok(OrbitRecord {
                    beta: beta.clone(),
                    point: x.clone(),
                    certified_depth: digits.len(),
                    digits,
                    orbit,
                    zero_at,
                    bits,
                })
            }
            Attempt::Ambiguous(index) => {
                if !refinable || bits >= PRECISION_CAP {
                    return Err(Error::Undetermined { index, bits });
                }
                bits = (bits * 2).min(PRECISION_CAP);
            }
        }
    }
}

/// `ε(1, β)` and `ε*(1, β)` to a given depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionOfOne {
    pub beta: Beta,
    /// `ε(1, β)`; zeros after the last non-zero digit of a finite expansion.
    pub raw_digits: Vec<u32>,
    /// `Some(m)` when `Tᵐ_β 1 = 0`, i.e. `β` is a simple Parry number whose
    /// expansion of one has length `m`.
    pub simple_parry: Option<usize>,
    /// `ε*(1, β)`: periodic for simple Parry numbers, otherwise the raw
    /// digits (known to the computed depth).
    pub star: Ceiling,
    pub orbit: Vec<Interval>,
    pub bits: u32,
}

impl ExpansionOfOne {
    pub fn depth(&self) -> usize {
        self.raw_digits.len()
    }

    /// `ε*₁ … ε*_n`.
    pub fn star_prefix(&self, n: usize) -> Result<Vec<u32>> {
        self.star.prefix(n)
    }
}

pub fn digits_of_one(beta: &Beta, n: usize) -> Result<ExpansionOfOne> {
    one_with_precision(beta, n, DEFAULT_PRECISION)
}

pub fn one_with_precision(beta: &Beta, n: usize, prec: u32) -> Result<ExpansionOfOne> {
    let rec = digits_with_precision(beta, &Point::One, n, prec)?;
    let star = match rec.zero_at {
        Some(m) => {
            let mut period = rec.digits[..m].to_vec();
            period[m - 1] -= 1;
            Ceiling::periodic(Vec::new(), period)
        }
        None => Ceiling::Prefix(rec.digits.clone()),
    };
    Ok(ExpansionOfOne {
        beta: beta.clone(),
        raw_digits: rec.digits,
        simple_parry: rec.zero_at,
        star,
        orbit: rec.orbit,
        bits: rec.bits,
    })
}

/// Enclosures of `T¹_β 1, …, Tⁿ_β 1`.
pub fn orbit_of_one(beta: &Beta, n: usize) -> Result<Vec<Interval>> {
    Ok(digits_of_one(beta, n)?.orbit)
}

/// `Σ_{k≥1} ε*_{n+k} β⁻ᵏ` from the digits `ε*_{n+1} … ε*_{n+m}`, with the
/// unknown remainder bounded by `β⁻ᵐ` (any admissible tail is below 1).
pub fn tail_series(star: &[u32], n: usize, beta: &Interval) -> Result<Interval> {
    let tail = &star[n..];
    let head = crate::numeric::eval_power_sum(tail, beta)?;
    let rest = beta.recip()?.powi(tail.len() as u32);
    let upper = &head + &rest;
    Interval::new(head.lo().clone(), upper.hi().clone(), beta.prec())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroRuns {
    /// `ℓ₁ … ℓ_N`.
    pub runs: Vec<usize>,
    /// Running maximum of `ℓₙ / n`.
    pub running_max_ratio: Vec<f64>,
    /// Digits of `ε*(1, β)` that were needed to close every run.
    pub star_digits: Vec<u32>,
}

/// `ℓₙ = max{k ≥ 0 : ε*_{n+1} = ⋯ = ε*_{n+k} = 0}` for `n ≤ N`.
pub fn zero_runs(beta: &Beta, big_n: usize) -> Result<ZeroRuns> {
    if big_n == 0 {
        return Err(Error::domain("N must be at least 1"));
    }
    let mut depth = 2 * big_n + 16;
    let limit = 8 * big_n + 256;
    loop {
        let e = digits_of_one(beta, depth)?;
        let star_depth = match e.simple_parry {
            // a periodic ε* can be unrolled as far as needed
            Some(m) => big_n + 2 * m + depth,
            None => depth,
        };
        let star = e.star.prefix(star_depth)?;
        if let Some(runs) = runs_if_closed(&star, big_n) {
            let mut running_max_ratio = Vec::with_capacity(big_n);
            let mut best = 0.0f64;
            for (i, &l) in runs.iter().enumerate() {
                best = best.max(l as f64 / (i + 1) as f64);
                running_max_ratio.push(best);
            }
            return Ok(ZeroRuns { runs, running_max_ratio, star_digits: star });
        }
        if depth >= limit {
            return Err(Error::Undetermined { index: depth, bits: e.bits });
        }
        depth = (depth * 2).min(limit);
    }
}

/// Run lengths when every run is followed by a non-zero digit inside
/// `star`.
fn runs_if_closed(star: &[u32], big_n: usize) -> Option<Vec<usize>> {
    let mut runs = vec![0; big_n];
    // next_nonzero[i] = first index ≥ i holding a non-zero digit
    let mut next = star.len();
    let mut next_nonzero = vec![star.len(); star.len() + 1];
    for i in (0..star.len()).rev() {
        if star[i] != 0 {
            next = i;
        }
        next_nonzero[i] = next;
    }
    for n in 1..=big_n {
        if n > star.len() {
            return None;
        }
        let j = next_nonzero[n];
        if j == star.len() {
            return None;
        }
        runs[n - 1] = j - n;
    }
    Some(runs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    /// The largest run in the second half of the horizon does not exceed the
    /// largest run in the first half.
    BoundedSoFar,
    /// Runs keep getting longer across the horizon.
    UnboundedEvidence,
}

/// Finite-horizon description of the growth of `ℓₙ`. Nothing here is a
/// statement about limits.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub horizon: usize,
    pub growth: Growth,
    /// `max ℓₙ/n` over `n ≤ N` and the first `n` attaining it.
    pub sup_ratio: f64,
    pub argmax: usize,
    /// For each `α` of the grid, how many `n ≤ N` have `ℓₙ ≥ αn`.
    pub level_counts: Vec<(f64, usize)>,
    pub runs: Vec<usize>,
}

pub fn classify_zero_growth(beta: &Beta, big_n: usize, alpha_grid: &[f64]) -> Result<GrowthReport> {
    let z = zero_runs(beta, big_n)?;
    Ok(classify_runs(&z.runs, alpha_grid))
}

pub fn classify_runs(runs: &[usize], alpha_grid: &[f64]) -> GrowthReport {
    let big_n = runs.len();
    let half = big_n / 2;
    let first = runs[..half.max(1).min(big_n)].iter().copied().max().unwrap_or(0);
    let second = runs[half..].iter().copied().max().unwrap_or(0);
    let growth = if second <= first { Growth::BoundedSoFar } else { Growth::UnboundedEvidence };
    let mut sup_ratio = 0.0;
    let mut argmax = 1;
    for (i, &l) in runs.iter().enumerate() {
        let r = l as f64 / (i + 1) as f64;
        if r > sup_ratio {
            sup_ratio = r;
            argmax = i + 1;
        }
    }
    let level_counts = alpha_grid
        .iter()
        .map(|&a| {
            let c = runs
                .iter()
                .enumerate()
                .filter(|&(i, &l)| l as f64 >= a * (i + 1) as f64)
                .count();
            (a, c)
        })
        .collect();
    GrowthReport { horizon: big_n, growth, sup_ratio, argmax, level_counts, runs: runs.to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{is_admissible, is_self_admissible, self_admissible_words};

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn golden() -> Beta {
        Beta::from_word(&[1, 1]).unwrap()
    }

    #[test]
    fn digits_of_x_examples() {
        let two = Beta::integer(2).unwrap();
        let r = digits_of_x(&two, &Point::rational(q(5, 8)).unwrap(), 4).unwrap();
        assert_eq!(r.digits, [1, 0, 1, 0]);
        let r = digits_of_x(&two, &Point::rational(q(0, 1)).unwrap(), 5).unwrap();
        assert_eq!(r.digits, [0, 0, 0, 0, 0]);
        // T(1/2) = φ/2 − 0, βφ/2 = (φ+1)/2 ≈ 1.309 → 1, …
        let r = digits_of_x(&golden(), &Point::rational(q(1, 2)).unwrap(), 3).unwrap();
        assert_eq!(r.digits, [0, 1, 0]);
        assert!(Point::rational(q(1, 1)).is_err());
    }

    #[test]
    fn expansion_of_one_examples() {
        let e = digits_of_one(&Beta::integer(2).unwrap(), 5).unwrap();
        assert_eq!(e.raw_digits, [2, 0, 0, 0, 0]);
        assert_eq!(e.simple_parry, Some(1));
        assert_eq!(e.star_prefix(4).unwrap(), [1, 1, 1, 1]);

        let e = digits_of_one(&golden(), 6).unwrap();
        assert_eq!(e.raw_digits, [1, 1, 0, 0, 0, 0]);
        assert_eq!(e.simple_parry, Some(2));
        assert_eq!(e.star_prefix(6).unwrap(), [1, 0, 1, 0, 1, 0]);

        let trib = Beta::from_word(&[1, 1, 1]).unwrap();
        let e = digits_of_one(&trib, 6).unwrap();
        assert_eq!(e.raw_digits[..3], [1, 1, 1]);
        assert_eq!(e.star_prefix(6).unwrap(), [1, 1, 0, 1, 1, 0]);
    }

    #[test]
    fn orbit_of_one_examples() {
        let o = orbit_of_one(&Beta::integer(2).unwrap(), 4).unwrap();
        assert!(o.iter().all(|t| t.is_point() && t.lo().is_zero()));
        let o = orbit_of_one(&golden(), 3).unwrap();
        assert!((o[0].to_f64() - 0.618_033_988_749_895).abs() < 1e-15);
        assert!(o[1].lo().is_zero() && o[1].is_point());
        let o = orbit_of_one(&Beta::from_word(&[1, 0, 1]).unwrap(), 4).unwrap();
        assert!(o[2].is_point() && o[2].lo().is_zero());
    }

    #[test]
    fn zero_run_examples() {
        let z = zero_runs(&Beta::integer(2).unwrap(), 10).unwrap();
        assert!(z.runs.iter().all(|&l| l == 0));
        let z = zero_runs(&golden(), 5).unwrap();
        assert_eq!(z.runs, [1, 0, 1, 0, 1]);
        let z = zero_runs(&Beta::from_word(&[1, 0, 0, 1]).unwrap(), 10).unwrap();
        assert_eq!(z.star_digits[..10], [1, 0, 0, 0, 1, 0, 0, 0, 1, 0]);
        assert_eq!(z.runs[0], 3);
    }

    #[test]
    fn growth_examples() {
        let r = classify_zero_growth(&Beta::integer(2).unwrap(), 100, &[0.5]).unwrap();
        assert_eq!((r.growth, r.sup_ratio), (Growth::BoundedSoFar, 0.0));
        let r = classify_zero_growth(&golden(), 100, &[0.5]).unwrap();
        assert_eq!((r.growth, r.sup_ratio, r.argmax), (Growth::BoundedSoFar, 1.0, 1));
        let w = [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1];
        let r = classify_zero_growth(&Beta::from_word(&w).unwrap(), 100, &[0.5]).unwrap();
        assert_eq!(r.runs[0], 10);
        assert_eq!(r.sup_ratio, 10.0);
        assert_eq!(classify_runs(&[0, 0, 1, 2, 3, 4], &[]).growth, Growth::UnboundedEvidence);
    }

    #[test]
    fn fixed_enclosures_report_undetermined_ties() {
        // β = 2 as an enclosure: 2·1 touches the integer 2 and cannot be
        // decided without knowing β exactly
        let two = Interval::new(
            Dyadic::from_f64(2.0 - 1e-12).unwrap(),
            Dyadic::from_f64(2.0 + 1e-12).unwrap(),
            128,
        )
        .unwrap();
        let err = digits_of_one(&Beta::fixed(two).unwrap(), 3).unwrap_err();
        assert_eq!(err, Error::Undetermined { index: 1, bits: 128 });
    }

    #[test]
    fn left_endpoint_expansion_starts_with_word() {
        for n in 1..=6 {
            for w in self_admissible_words(n, 2) {
                let Ok(beta) = Beta::from_word(&w) else { continue };
                let e = digits_of_one(&beta, n + 4).unwrap();
                assert_eq!(e.raw_digits[..n], w[..], "{w:?}");
                for k in 1..=n {
                    assert!(is_self_admissible(&e.raw_digits[..k]));
                }
            }
        }
    }

    #[test]
    fn digits_are_admissible() {
        for beta in [Beta::integer(2).unwrap(), golden(), Beta::from_word(&[1, 1, 1]).unwrap()] {
            let e = digits_of_one(&beta, 16).unwrap();
            for num in 0..32 {
                let x = Point::rational(q(num, 32)).unwrap();
                let r = digits_of_x(&beta, &x, 12).unwrap();
                assert!(is_admissible(&r.digits, &e.star).unwrap(), "{beta} {num}/32");
            }
        }
    }

    #[test]
    fn tail_series_agrees_with_orbit() {
        let beta = Beta::rational(q(3, 2)).unwrap();
        let e = digits_of_one(&beta, 40).unwrap();
        assert_eq!(e.simple_parry, None);
        let b = beta.enclose(256).unwrap();
        for n in 1..20 {
            let t = tail_series(&e.raw_digits, n, &b).unwrap();
            assert!(t.intersects(&e.orbit[n - 1]), "n={n}");
        }
    }
}
