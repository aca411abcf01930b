use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Dyadic, Interval};
use crate::error::{Error, Result};

/// A polynomial with integer coefficients, lowest degree first, with no
/// trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// `xⁿ − Σ εᵢ x^{n−i}`, whose value at `β` is `βⁿ(1 − Σ εᵢ β⁻ⁱ)`.
    pub fn from_orbit_word(w: &[u32]) -> Self {
        let n = w.len();
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        for (i, &d) in w.iter().enumerate() {
            c[n - 1 - i] -= BigInt::from(d);
        }
        IntPoly::new(c)
    }

    /// The positive integer multiple of a rational polynomial with coprime
    /// integer coefficients.
    pub fn from_rational(coeffs: &[BigRational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        IntPoly::new(ints).primitive()
    }

    fn primitive(self) -> Self {
        let g = self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() || g.is_one() {
            return self;
        }
        IntPoly { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Exact value at a dyadic point.
    pub fn eval_exact(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Dyadic::from_bigint(c.clone());
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Outward-rounded enclosure of the range over `x ⊆ [0, ∞)`.
    ///
    /// Positive and negative coefficients are summed separately; both parts
    /// are increasing on `[0, ∞)`.
    pub fn eval(&self, x: &Interval) -> Result<Interval> {
        if x.lo().signum() < 0 {
            return Err(Error::domain("polynomial enclosures need a non-negative argument"));
        }
        let prec = x.prec();
        let pos: Vec<BigInt> = self.coeffs.iter().map(|c| c.clone().max(BigInt::zero())).collect();
        let neg: Vec<BigInt> = self.coeffs.iter().map(|c| (-c).max(BigInt::zero())).collect();
        let lo = &horner(&pos, x.lo(), prec, false) - &horner(&neg, x.hi(), prec, true);
        let hi = &horner(&pos, x.hi(), prec, true) - &horner(&neg, x.lo(), prec, false);
        Ok(Interval::from_ordered(lo.round_down(prec), hi.round_up(prec), prec))
    }

    /// Certified sign at `x ≥ 0`, trying a rounded evaluation at `prec` bits
    /// before falling back to exact arithmetic.
    pub fn sign_at(&self, x: &Dyadic, prec: u32) -> i32 {
        if x.signum() >= 0 {
            let v = self
                .eval(&Interval::point(x.clone(), prec))
                .expect("argument is non-negative");
            if v.is_positive() {
                return 1;
            }
            if v.is_negative() {
                return -1;
            }
        }
        self.eval_exact(x).signum()
    }

    fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs.iter().cloned().map(BigRational::from_integer).collect()
    }

    /// Greatest common divisor over ℚ, as a primitive integer polynomial
    /// with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = IntPoly::from_rational(&rem(&a.to_rational(), &b.to_rational()));
            a = b;
            b = r;
        }
        let a = a.primitive();
        if a.coeffs.last().is_some_and(Signed::is_negative) {
            IntPoly { coeffs: a.coeffs.iter().map(|c| -c).collect() }
        } else {
            a
        }
    }

    /// `self / d` over ℚ when `d` divides `self`, scaled to a primitive
    /// integer polynomial.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let (q, r) = divmod(&self.to_rational(), &d.to_rational());
        r.iter().all(Zero::is_zero).then(|| IntPoly::from_rational(&q))
    }
}

/// Nested multiplication for non-negative coefficients at `x ≥ 0`, rounded
/// down or up at every step.
fn horner(coeffs: &[BigInt], x: &Dyadic, prec: u32, up: bool) -> Dyadic {
    let round = |v: Dyadic| if up { v.round_up(prec) } else { v.round_down(prec) };
    let mut acc = Dyadic::zero();
    for c in coeffs.iter().rev() {
        acc = round(&(&acc * x) + &Dyadic::from_bigint(c.clone()));
    }
    acc
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "division by the zero polynomial");
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    divmod(a, b).1
}
