//! Exact arithmetic in `ℚ(β)` for a real algebraic `β`.
//!
//! Elements are polynomials in `β` reduced by the minimal polynomial; signs
//! are decided by bisecting a rational isolating interval of `β` until the
//! element's range excludes zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub struct Field {
    /// `β^d = Σ reduce[i] β^i`.
    reduce: Vec<BigRational>,
    lo: BigRational,
    hi: BigRational,
}

impl Field {
    /// `β` is the unique root of `x^d − Σ reduce[i] x^i` in `(lo, hi)`.
    pub fn new(reduce: &[i64], lo: BigRational, hi: BigRational) -> Field {
        let reduce = reduce.iter().map(|&c| q(c, 1)).collect();
        let mut f = Field { reduce, lo, hi };
        assert!(f.minpoly_at(&f.lo).is_negative() && f.minpoly_at(&f.hi).is_positive());
        for _ in 0..40 {
            f.bisect();
        }
        f
    }

    pub fn minpoly_at(&self, x: &BigRational) -> BigRational {
        let d = self.reduce.len();
        let mut v = num_traits::pow(x.clone(), d);
        for (i, c) in self.reduce.iter().enumerate() {
            v -= c * num_traits::pow(x.clone(), i);
        }
        v
    }

    pub fn bisect(&mut self) {
        let mid = (&self.lo + &self.hi) / q(2, 1);
        if self.minpoly_at(&mid).is_negative() {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn times_beta(&self, a: &[BigRational]) -> Vec<BigRational> {
        let d = self.reduce.len();
        let top = a[d - 1].clone();
        let mut out = vec![BigRational::zero(); d];
        out[1..d].clone_from_slice(&a[..d - 1]);
        for (o, r) in out.iter_mut().zip(&self.reduce) {
            *o += &top * r;
        }
        out
    }

    pub fn range(&self, a: &[BigRational]) -> (BigRational, BigRational) {
        let (mut lo, mut hi) = (BigRational::zero(), BigRational::zero());
        for (i, c) in a.iter().enumerate() {
            let pl = num_traits::pow(self.lo.clone(), i);
            let ph = num_traits::pow(self.hi.clone(), i);
            if c.is_negative() {
                lo += c * &ph;
                hi += c * &pl;
            } else {
                lo += c * &pl;
                hi += c * &ph;
            }
        }
        (lo, hi)
    }

    pub fn sign(&mut self, a: &[BigRational]) -> i32 {
        if a.iter().all(Zero::is_zero) {
            return 0;
        }
        loop {
            let (lo, hi) = self.range(a);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            self.bisect();
        }
    }

    /// Greedy digits and orbit of `x` (given as an element) to depth `n`.
    pub fn greedy(&mut self, x: Vec<BigRational>, n: usize) -> (Vec<u32>, Vec<Vec<BigRational>>) {
        let mut t = x;
        let mut digits = Vec::new();
        let mut orbit = Vec::new();
        for _ in 0..n {
            let y = self.times_beta(&t);
            let mut k = 0u32;
            loop {
                let mut z = y.clone();
                z[0] -= q(k as i64 + 1, 1);
                if self.sign(&z) < 0 {
                    break;
                }
                k += 1;
            }
            let mut next = y;
            next[0] -= q(k as i64, 1);
            digits.push(k);
            orbit.push(next.clone());
            t = next;
        }
        (digits, orbit)
    }

    pub fn constant(&self, c: BigRational) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.reduce.len()];
        v[0] = c;
        v
    }
}

pub fn golden_field() -> Field {
    Field::new(&[1, 1], q(3, 2), q(2, 1))
}

pub fn tribonacci_field() -> Field {
    Field::new(&[1, 1, 1], q(17, 10), q(19, 10))
}
