use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::Dyadic;
use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` of dyadic endpoints. Arithmetic rounds
/// outward to `prec` significant bits, so results always contain the exact
/// value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain("interval with lo > hi"));
        }
        Ok(Interval { lo, hi, prec })
    }

    pub(crate) fn from_ordered(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi, prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        Interval { lo: x.clone(), hi: x, prec }
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        Interval::point(Dyadic::from_int(v), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational_down(r, prec),
            hi: Dyadic::from_rational_up(r, prec),
            prec,
        }
    }

    /// The exact value of a double as a point interval.
    pub fn from_f64(x: f64, prec: u32) -> Result<Self> {
        Ok(Interval::point(Dyadic::from_f64(x)?, prec))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Dyadic {
        (&self.lo + &self.hi).mul_pow2(-1)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    /// Every point of `self` is below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then(|| Interval { lo, hi, prec: self.prec.max(other.prec) })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    /// The common floor of every point, if there is one.
    pub fn floor_certified(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        (a == self.hi.floor()).then_some(a)
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        Interval { lo: lo.round_down(prec), hi: hi.round_up(prec), prec }
    }

    pub fn mul_pow2(&self, k: i64) -> Interval {
        Interval { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k), prec: self.prec }
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::domain("reciprocal of an interval containing zero"));
        }
        let one = Dyadic::one();
        Ok(Interval {
            lo: one.div_down(&self.hi, self.prec)?,
            hi: one.div_up(&self.lo, self.prec)?,
            prec: self.prec,
        })
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::domain("division by an interval containing zero"));
        }
        let prec = self.prec.max(other.prec);
        let ends = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for (a, b) in ends {
            let down = a.div_down(b, prec)?;
            let up = a.div_up(b, prec)?;
            lo = Some(lo.map_or(down.clone(), |l| l.min(down)));
            hi = Some(hi.map_or(up.clone(), |h| h.max(up)));
        }
        Ok(Interval { lo: lo.unwrap(), hi: hi.unwrap(), prec })
    }

    /// `xⁿ`; tight for intervals of constant sign.
    pub fn powi(&self, n: u32) -> Interval {
        if self.lo.signum() >= 0 {
            let mut lo = Dyadic::one();
            let mut hi = Dyadic::one();
            for _ in 0..n {
                lo = (&lo * &self.lo).round_down(self.prec);
                hi = (&hi * &self.hi).round_up(self.prec);
            }
            return Interval { lo, hi, prec: self.prec };
        }
        let mut acc = Interval::from_int(1, self.prec);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            -self
        } else {
            let hi = (-&self.lo).max(self.hi.clone());
            Interval { lo: Dyadic::zero(), hi, prec: self.prec }
        }
    }

    /// Double-precision bounds, widened by one ulp so that they still
    /// enclose the interval.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        let lo = self.lo.to_f64();
        let hi = self.hi.to_f64();
        (next_down(lo), next_up(hi))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Endpoints as decimal strings rounded outward to a number of
    /// significant digits fixed by the precision.
    pub fn decimal_bounds(&self) -> (String, String) {
        let digits = decimal_digits(self.prec);
        (
            to_scientific(&self.lo, digits, Rounding::Down),
            to_scientific(&self.hi, digits, Rounding::Up),
        )
    }
}

pub(crate) fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    f64::from_bits(if x > 0.0 { bits + 1 } else { bits - 1 })
}

pub(crate) fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

/// Significant decimal digits carried by `prec` bits, plus one.
pub fn decimal_digits(prec: u32) -> usize {
    (prec as usize * 30103).div_ceil(100000) + 1
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rounding {
    Down,
    Up,
}

/// `x` in the form `d.ddd…e±k` with `digits` significant digits.
fn to_scientific(x: &Dyadic, digits: usize, mode: Rounding) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let r = x.to_rational();
    // estimate of ⌊log₁₀|x|⌋, corrected below
    let mut e10 = libm::floor(x.log2_floor().unwrap() as f64 * core::f64::consts::LOG10_2) as i64;
    loop {
        let shift = digits as i64 - 1 - e10;
        let scaled = scale10(&r, shift);
        let mut s = match mode {
            Rounding::Down => scaled.floor().to_integer(),
            Rounding::Up => scaled.ceil().to_integer(),
        };
        let neg = s.is_negative();
        s = s.abs();
        let text = s.to_string();
        if text.len() > digits {
            e10 += 1;
            continue;
        }
        if text.len() < digits {
            e10 -= 1;
            continue;
        }
        let (head, tail) = text.split_at(1);
        let tail = tail.trim_end_matches('0');
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(head);
        if !tail.is_empty() {
            out.push('.');
            out.push_str(tail);
        }
        if e10 != 0 {
            out.push_str(&alloc::format!("e{e10}"));
        }
        return out;
    }
}

fn scale10(r: &BigRational, k: i64) -> BigRational {
    let p = BigInt::from(10u32).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        r * BigRational::from_integer(p)
    } else {
        r / BigRational::from_integer(p)
    }
}

/// Renders `x` with `frac` digits after the decimal point (nearest).
fn to_fixed(x: &Dyadic, frac: usize) -> String {
    let scaled = scale10(&x.to_rational(), frac as i64).round().to_integer();
    let neg = scaled.is_negative();
    let text = scaled.abs().to_string();
    let text = if text.len() <= frac {
        let mut padded = "0".repeat(frac + 1 - text.len());
        padded.push_str(&text);
        padded
    } else {
        text
    };
    let (int, fr) = text.split_at(text.len() - frac);
    let mut out = String::new();
    if neg && scaled != BigInt::zero() {
        out.push('-');
    }
    out.push_str(int);
    if frac > 0 {
        out.push('.');
        out.push_str(fr);
    }
    out
}

impl fmt::Display for Interval {
    /// `mid~±~width`, with the midpoint printed to the digits the width
    /// justifies.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mid = self.mid();
        let radius = self.width();
        if radius.is_zero() {
            let digits = decimal_digits(self.prec);
            let mut s = to_fixed(&mid, digits);
            if s.contains('.') {
                s = s.trim_end_matches('0').trim_end_matches('.').to_string();
            }
            return write!(f, "{s}~±~0");
        }
        let e = radius.log2_floor().unwrap();
        let frac = libm::ceil(-(e as f64 + 1.0) * core::f64::consts::LOG10_2).max(0.0) as usize;
        let frac = frac.min(decimal_digits(self.prec) + 8);
        write!(
            f,
            "{}~±~{}",
            to_fixed(&mid, frac),
            to_scientific(&radius, 1, Rounding::Up)
        )
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, other: &Interval) -> Interval {
        Interval::rounded(&self.lo + &other.lo, &self.hi + &other.hi, self.prec.max(other.prec))
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, other: &Interval) -> Interval {
        Interval::rounded(&self.lo - &other.hi, &self.hi - &other.lo, self.prec.max(other.prec))
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, other: &Interval) -> Interval {
        let p = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Interval::rounded(lo, hi, self.prec.max(other.prec))
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Interval {
            type Output = Interval;
            fn $f(self, other: Interval) -> Interval {
                (&self).$f(&other)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);
