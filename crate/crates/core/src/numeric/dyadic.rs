use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `mant · 2^exp`, kept with an odd mantissa (or zero with `exp = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic { mant: mant >> tz, exp: exp + tz as i64 }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: k }
    }

    /// The exact value of a finite double.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::domain("non-finite float"));
        }
        if x == 0.0 {
            return Ok(Dyadic::zero());
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1u64 << 52), biased - 1075)
        };
        let mant = BigInt::from(m);
        Ok(Dyadic::new(if negative { -mant } else { mant }, e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// `⌊log₂|x|⌋` for non-zero `x`.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    /// `x · 2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Largest value with at most `prec` significant bits that is `≤ x`.
    pub fn round_down(&self, prec: u32) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        // `>>` on BigInt rounds toward −∞
        Dyadic::new(&self.mant >> shift, self.exp + shift as i64)
    }

    /// Smallest value with at most `prec` significant bits that is `≥ x`.
    pub fn round_up(&self, prec: u32) -> Self {
        -(-self).round_down(prec)
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.is_zero()
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `⌊x · 2^k⌋` as an integer.
    pub fn scaled_floor(&self, k: i64) -> BigInt {
        self.mul_pow2(k).floor()
    }

    /// `a / b` rounded down to about `prec` significant bits.
    pub fn div_down(&self, other: &Dyadic, prec: u32) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        let mut num = self.mant.clone();
        let mut den = other.mant.clone();
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        // size of the quotient mantissa before scaling
        let size = num.bits() as i64 - den.bits() as i64;
        let extra = prec as i64 + 2 - size;
        if extra > 0 {
            num <<= extra as u64;
        } else {
            den <<= (-extra) as u64;
        }
        let q = num.div_floor(&den);
        Ok(Dyadic::new(q, self.exp - other.exp - extra))
    }

    pub fn div_up(&self, other: &Dyadic, prec: u32) -> Result<Self> {
        Ok(-(-self).div_down(other, prec)?)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Largest dyadic `≤ r` with about `prec` significant bits.
    pub fn from_rational_down(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let size = r.numer().bits() as i64 - r.denom().bits() as i64;
        let k = prec as i64 + 2 - size;
        let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
        if k > 0 {
            num <<= k as u64;
        } else {
            den <<= (-k) as u64;
        }
        Dyadic::new(num.div_floor(&den), -k)
    }

    pub fn from_rational_up(r: &BigRational, prec: u32) -> Self {
        -Dyadic::from_rational_down(&-r, prec)
    }

    /// Nearest double (not certified).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 60 {
            let shift = bits - 60;
            (&self.mant >> shift, self.exp + shift as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_i64().expect("at most 61 bits") as f64;
        let e = e.clamp(-4000, 4000) as i32;
        libm::scalbn(m, e)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.signum().cmp(&other.signum()) {
            Ordering::Equal => {}
            o => return o,
        }
        (self - other).signum().cmp(&0)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, other: &Dyadic) -> Dyadic {
        self + &(-other)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $f(self, other: Dyadic) -> Dyadic {
                (&self).$f(&other)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x).unwrap()
    }

    #[test]
    fn normalisation_and_order() {
        assert_eq!(Dyadic::new(BigInt::from(12), 0), Dyadic::new(BigInt::from(3), 2));
        assert!(d(0.5) < d(0.75));
        assert!(d(-1.0) < d(0.0));
        assert_eq!(d(3.25).to_f64(), 3.25);
        assert_eq!(d(-0.1).to_f64(), -0.1);
    }

    #[test]
    fn directed_rounding_brackets() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let lo = Dyadic::from_rational_down(&third, 64);
        let hi = Dyadic::from_rational_up(&third, 64);
        assert!(lo.to_rational() < third && third < hi.to_rational());
        assert_eq!(&hi - &lo, Dyadic::pow2(lo.exponent().min(hi.exponent())));
        let x = d(-5.0 / 8.0);
        assert_eq!(x.round_down(1), d(-1.0));
        assert_eq!(x.round_up(1), d(-0.5));
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(d(2.5).floor(), BigInt::from(2));
        assert_eq!(d(-2.5).floor(), BigInt::from(-3));
        assert_eq!(d(-2.5).ceil(), BigInt::from(-2));
        assert_eq!(d(7.0).floor(), BigInt::from(7));
    }

    #[test]
    fn division_is_directed() {
        let a = Dyadic::from_int(1);
        let b = Dyadic::from_int(3);
        let lo = a.div_down(&b, 80).unwrap();
        let hi = a.div_up(&b, 80).unwrap();
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(lo.to_rational() < third && third < hi.to_rational());
        assert!((&hi - &lo).log2_floor().unwrap() <= -80);
        assert_eq!(d(6.0).div_down(&d(-2.0), 10).unwrap(), d(-3.0));
        assert!(a.div_down(&Dyadic::zero(), 10).is_err());
    }
}
