//! Shrinking targets: finite-depth hits of the orbit of one, covers of the
//! parameters whose orbit visits a shrinking ball, partition sums and
//! critical-exponent estimates.
//!
//! For a cylinder of order `n` the map `f(β) = Tⁿ_β 1` is an increasing
//! polynomial, so the parameters with `|f(β) − x(β)| < r` form one interval
//! whose ends solve `f(β) − x(β) = ±r`.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::beta::Beta;
use crate::cylinders::{cylinder_with_precision, positive_on, walk_words, Window};
use crate::error::{Error, Result};
use crate::expansion::one_with_precision;
use crate::numeric::{bracket_root, Dyadic, IntPoly, Interval};
use crate::words::{render, DigitWord};
use crate::{Verdict, DEFAULT_PRECISION, PRECISION_CAP};

/// The centre of the ball as a function of `β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// A fixed `x₀ ∈ [0, 1]`.
    Constant(BigRational),
    /// `x(β) = a + bβ`, Lipschitz with constant `|b|`.
    Affine { a: BigRational, b: BigRational },
}

impl Target {
    pub fn constant(x0: BigRational) -> Result<Target> {
        if x0.is_negative() || x0 > BigRational::one() {
            return Err(Error::domain("x0 must lie in [0, 1]"));
        }
        Ok(Target::Constant(x0))
    }

    pub fn lipschitz(&self) -> BigRational {
        match self {
            Target::Constant(_) => BigRational::zero(),
            Target::Affine { b, .. } => b.abs(),
        }
    }

    /// `(a, b)` with `x(β) = a + bβ`.
    fn coefficients(&self) -> (BigRational, BigRational) {
        match self {
            Target::Constant(x0) => (x0.clone(), BigRational::zero()),
            Target::Affine { a, b } => (a.clone(), b.clone()),
        }
    }

    pub fn eval(&self, beta: &Interval) -> Interval {
        let prec = beta.prec();
        let (a, b) = self.coefficients();
        let a = Interval::from_rational(&a, prec);
        if b.is_zero() {
            return a;
        }
        &a + &(&Interval::from_rational(&b, prec) * beta)
    }
}

/// The rule `n ↦ ℓₙ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rate {
    /// `ℓₙ = ⌈αn + c⌉`.
    Affine { alpha: BigRational, c: BigRational },
    /// `ℓ₁, ℓ₂, …` as listed; only the listed horizon is known.
    Table(Vec<u64>),
}

impl Rate {
    pub fn ell(&self, n: usize) -> Result<u64> {
        if n == 0 {
            return Err(Error::domain("rates start at n = 1"));
        }
        match self {
            Rate::Affine { alpha, c } => {
                let v = (alpha * BigRational::from_integer(BigInt::from(n)) + c).ceil();
                Ok(v.to_integer().to_i64().unwrap_or(0).max(0) as u64)
            }
            Rate::Table(t) => t.get(n - 1).copied().ok_or(Error::OutOfRange { index: n, len: t.len() }),
        }
    }

    /// `α = liminf ℓₙ/n` for affine rules; for tables the minimum over the
    /// listed horizon (a finite-horizon α).
    pub fn alpha(&self) -> f64 {
        match self {
            Rate::Affine { alpha, .. } => alpha.to_f64().unwrap_or(0.0),
            Rate::Table(t) => t
                .iter()
                .enumerate()
                .map(|(i, &l)| l as f64 / (i + 1) as f64)
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn is_finite_horizon(&self) -> bool {
        matches!(self, Rate::Table(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSpec {
    pub target: Target,
    pub rate: Rate,
}

impl TargetSpec {
    /// Reasons why a dimension statement about this spec would not apply.
    pub fn flags(&self, horizon: usize) -> Vec<String> {
        let mut flags = Vec::new();
        if let Some(n) = (1..=horizon).find(|&n| self.rate.ell(n) == Ok(0)) {
            flags.push(alloc::format!("rate gives l_n = 0 at n = {n}"));
        }
        let grows = match &self.rate {
            Rate::Affine { alpha, .. } => alpha.is_positive(),
            Rate::Table(t) => t.last().copied().unwrap_or(0) > t.first().copied().unwrap_or(0),
        };
        if !grows {
            flags.push("rate does not tend to infinity".into());
        }
        flags
    }

    /// `x(β) ∈ [0, 1]` checked at both window ends (affine targets are
    /// monotone).
    pub fn target_range_ok(&self, window: &Window) -> bool {
        let (a, b) = self.target.coefficients();
        [window.lo(), window.hi()].iter().all(|&beta| {
            let x = &a + &b * beta;
            !x.is_negative() && x <= BigRational::one()
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitRecord {
    pub n: usize,
    /// `|Tⁿ_β 1 − x(β)|`.
    pub distance: Interval,
    /// `β^{−ℓₙ}`.
    pub radius: Interval,
    pub hit: Verdict,
}

/// Certified comparisons `|Tⁿ_β 1 − x(β)| < β^{−ℓₙ}` for `n ≤ N`.
pub fn hit_depths(beta: &Beta, spec: &TargetSpec, big_n: usize) -> Result<Vec<HitRecord>> {
    let ells: Vec<u64> = (1..=big_n).map(|n| spec.rate.ell(n)).collect::<Result<_>>()?;
    let mut records: Vec<Option<HitRecord>> = alloc::vec![None; big_n];
    let mut prec = DEFAULT_PRECISION;
    loop {
        let e = one_with_precision(beta, big_n, prec)?;
        let b = beta.enclose(e.bits)?;
        let r = b.recip()?;
        let last_round = prec >= PRECISION_CAP || !beta.is_refinable();
        for n in 1..=big_n {
            if records[n - 1].as_ref().is_some_and(|h| h.hit != Verdict::Undetermined) {
                continue;
            }
            let distance = (&e.orbit[n - 1] - &spec.target.eval(&b)).abs();
            let radius = r.powi(ells[n - 1] as u32);
            let hit = if distance.certainly_lt(&radius) {
                Verdict::Holds
            } else if radius.certainly_le(&distance)
                || distance_equals_radius(beta, &spec.target, &e.raw_digits[..n], ells[n - 1])
            {
                Verdict::Fails
            } else {
                Verdict::Undetermined
            };
            records[n - 1] = Some(HitRecord { n, distance, radius, hit });
        }
        let pending = records.iter().flatten().any(|h| h.hit == Verdict::Undetermined);
        if !pending || last_round {
            return Ok(records.into_iter().flatten().collect());
        }
        prec = (prec * 2).min(PRECISION_CAP);
    }
}

/// Whether `|Tⁿ_β 1 − x(β)| = β^{−ℓ}` exactly: `β` is then a root of
/// `β^ℓ·(f(β) − x(β)) ∓ 1`, with `f` the orbit polynomial of the first `n`
/// digits of `ε(1, β)`.
fn distance_equals_radius(beta: &Beta, target: &Target, digits: &[u32], ell: u64) -> bool {
    let g = rational_coeffs(digits, target, &BigRational::zero());
    [BigRational::one(), -BigRational::one()].iter().any(|sign| {
        let mut c = alloc::vec![BigRational::zero(); ell as usize];
        c.extend(g.iter().cloned());
        c[0] -= sign;
        beta.is_root_of(&IntPoly::from_rational(&c)) == Some(true)
    })
}

/// Parameters of one cylinder whose orbit point lies in the ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub word: DigitWord,
    /// Enclosure of the left end of the piece.
    pub left: Interval,
    /// Enclosure of the right end of the piece.
    pub right: Interval,
    /// `false` when monotonicity could not be certified and the whole
    /// clipped cylinder was used instead.
    pub monotone: bool,
}

impl Piece {
    pub fn hull(&self) -> Interval {
        self.left.hull(&self.right)
    }

    /// Enclosure of the length; the lower end is clamped at 0.
    pub fn length(&self) -> Interval {
        let d = &self.right - &self.left;
        let lo = d.lo().clone().max(Dyadic::zero());
        Interval::new(lo, d.hi().clone(), d.prec()).expect("hi ≥ lo ≥ 0")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub window: Window,
    pub depth: usize,
    pub ell: u64,
    /// `β₀^{−ℓₙ}` with `β₀` the left end of the window.
    pub radius: BigRational,
    pub pieces: Vec<Piece>,
    pub cylinders: usize,
    pub prec: u32,
}

/// Precision needed to resolve pieces of size about `β^{−(ℓ+2n)}`.
pub fn cover_precision(window: &Window, n: usize, ell: u64, prec: u32) -> u32 {
    let log2_hi = window.hi().to_f64().map_or(64.0, libm::log2).max(1.0);
    let needed = ((ell as f64 + 2.0 * n as f64) * log2_hi) as u32 + 64;
    prec.max(needed).min(1 << 16)
}

/// `β₀^{−ℓ}` for the window's left end `β₀`.
pub fn cover_radius(window: &Window, ell: u64) -> BigRational {
    let exp = i32::try_from(ell).unwrap_or(i32::MAX);
    num_traits::Pow::pow(window.lo().recip(), exp as u32)
}

/// Coefficients of `f(β) − x(β) + shift`, lowest degree first.
fn rational_coeffs(word: &[u32], target: &Target, shift: &BigRational) -> Vec<BigRational> {
    let f = IntPoly::from_orbit_word(word);
    let mut c: Vec<BigRational> = f.coeffs().iter().cloned().map(BigRational::from_integer).collect();
    let (a, b) = target.coefficients();
    c[0] -= a;
    c[0] += shift;
    c[1] -= b;
    c
}

fn rational_poly(word: &[u32], target: &Target, shift: &BigRational) -> IntPoly {
    IntPoly::from_rational(&rational_coeffs(word, target, shift))
}

/// The piece of the cylinder of `word` (clipped to the window), if any.
pub fn cover_piece(
    word: &[u32],
    window: &Window,
    target: &Target,
    radius: &BigRational,
    prec: u32,
) -> Result<Option<Piece>> {
    let c = cylinder_with_precision(word, prec)?;
    let a = c.left().enclosure().lo().clone().max(Dyadic::from_rational_down(window.lo(), prec));
    let b = c.right().enclosure().hi().clone().min(Dyadic::from_rational_up(window.hi(), prec));
    if a >= b {
        return Ok(None);
    }
    let word_owned = DigitWord::new(word.to_vec())?;
    let whole = |monotone| Piece {
        word: word_owned.clone(),
        left: Interval::point(a.clone(), prec),
        right: Interval::point(b.clone(), prec),
        monotone,
    };
    // g(β) = f(β) − x(β); the piece is {−r < g < r}
    let g = rational_poly(word, target, &BigRational::zero());
    if positive_on(&g.derivative(), a.clone(), b.clone(), prec, 12)? != Verdict::Holds {
        return Ok(Some(whole(false)));
    }
    let above = rational_poly(word, target, radius);
    let below = rational_poly(word, target, &-radius);
    let left = if above.sign_at(&a, prec) >= 0 {
        Interval::point(a.clone(), prec)
    } else if above.sign_at(&b, prec) <= 0 {
        return Ok(None);
    } else {
        bracket_root(&above, &a, &b, -1, prec, None)?
    };
    let right = if below.sign_at(&b, prec) <= 0 {
        Interval::point(b.clone(), prec)
    } else if below.sign_at(&a, prec) >= 0 {
        return Ok(None);
    } else {
        bracket_root(&below, &a, &b, -1, prec, None)?
    };
    Ok(Some(Piece { word: word_owned, left, right, monotone: true }))
}

/// Everything needed to compute the pieces of a depth-`n` cover.
#[derive(Clone, Debug)]
pub struct CoverPlan {
    pub words: Vec<DigitWord>,
    pub ell: u64,
    pub radius: BigRational,
    pub prec: u32,
}

pub fn plan_cover(window: &Window, spec: &TargetSpec, n: usize, prec: u32) -> Result<CoverPlan> {
    let ell = spec.rate.ell(n)?;
    Ok(CoverPlan {
        words: walk_words(n, window)?,
        ell,
        radius: cover_radius(window, ell),
        prec: cover_precision(window, n, ell, prec),
    })
}

pub fn build_cover(window: &Window, spec: &TargetSpec, n: usize, prec: u32) -> Result<CoverReport> {
    let plan = plan_cover(window, spec, n, prec)?;
    let mut pieces = Vec::new();
    for w in &plan.words {
        if let Some(p) = cover_piece(w, window, &spec.target, &plan.radius, plan.prec)? {
            pieces.push(p);
        }
    }
    Ok(CoverReport {
        window: window.clone(),
        depth: n,
        ell: plan.ell,
        radius: plan.radius,
        cylinders: plan.words.len(),
        pieces,
        prec: plan.prec,
    })
}

/// `log₂` of a positive dyadic, accurate to a few ulps.
fn log2_dyadic(x: &Dyadic) -> f64 {
    let e = x.log2_floor().expect("positive");
    e as f64 + libm::log2(x.mul_pow2(-e).to_f64())
}

/// Outward enclosure of `Σ |piece|^s`, evaluated in double precision with a
/// relative safety margin.
pub fn partition_sum(report: &CoverReport, s: f64) -> Interval {
    partition_sum_of(&report.pieces, s)
}

pub fn partition_sum_of(pieces: &[Piece], s: f64) -> Interval {
    const MARGIN: f64 = 1e-12;
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    for p in pieces {
        let len = p.length();
        if s == 0.0 {
            lo += 1.0;
            hi += 1.0;
            continue;
        }
        if !len.lo().is_zero() {
            lo += libm::exp2(s * log2_dyadic(len.lo())) * (1.0 - MARGIN);
        }
        if !len.hi().is_zero() {
            hi += libm::exp2(s * log2_dyadic(len.hi())) * (1.0 + MARGIN);
        }
    }
    let slack = pieces.len() as f64 * f64::EPSILON;
    let lo = Dyadic::from_f64((lo * (1.0 - slack)).max(0.0)).expect("finite");
    let hi = Dyadic::from_f64(hi * (1.0 + slack)).expect("finite");
    Interval::new(lo, hi, 53).expect("lo ≤ hi")
}

/// The `s ∈ [0, 1]` at which the partition sum crosses 1, by bisection on
/// the midpoint of the sum to tolerance `tol`. An empty cover gives 0.
pub fn critical_exponent(pieces: &[Piece], tol: f64) -> f64 {
    if pieces.is_empty() {
        return 0.0;
    }
    let sum = |s: f64| partition_sum_of(pieces, s).to_f64();
    if sum(1.0) >= 1.0 {
        return 1.0;
    }
    if sum(0.0) <= 1.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if sum(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Certifies that every piece is no longer than
/// `2β₀^{−(ℓₙ+n−1)}`.
pub fn check_piece_bound(report: &CoverReport) -> Verdict {
    let exp = report.ell + report.depth as u64 - 1;
    let bound = BigRational::from_integer(BigInt::from(2))
        * num_traits::Pow::pow(report.window.lo().recip(), exp as u32);
    let bound = Interval::from_rational(&bound, report.prec);
    let mut verdict = Verdict::Holds;
    for p in &report.pieces {
        let len = p.length();
        verdict = verdict.and(if len.certainly_le(&bound) {
            Verdict::Holds
        } else if bound.certainly_lt(&len) {
            Verdict::Fails
        } else {
            Verdict::Undetermined
        });
    }
    verdict
}

/// For Lipschitz targets with `β₀ⁿ > 2L`: every piece is no longer than
/// `4β₀^{−ℓₙ−n}`. `None` when the depth is below that threshold.
pub fn check_lipschitz_piece_bound(report: &CoverReport, target: &Target) -> Option<Verdict> {
    let lo = report.window.lo();
    let lo_pow_n: BigRational = num_traits::Pow::pow(lo, report.depth as u32);
    let two_l = BigRational::from_integer(BigInt::from(2)) * target.lipschitz();
    if lo_pow_n <= two_l {
        return None;
    }
    let exp = report.ell + report.depth as u64;
    let bound = BigRational::from_integer(BigInt::from(4)) * num_traits::Pow::pow(lo.recip(), exp as u32);
    let bound = Interval::from_rational(&bound, report.prec);
    Some(report.pieces.iter().fold(Verdict::Holds, |v, p| {
        v.and(if p.length().certainly_le(&bound) { Verdict::Holds } else { Verdict::Fails })
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DepthEstimate {
    pub depth: usize,
    pub s_star: f64,
    pub pieces: usize,
    pub cylinders: usize,
    /// The cover was empty and `s_star` was set to 0.
    pub empty: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionReport {
    pub estimates: Vec<DepthEstimate>,
    pub alpha: f64,
    pub finite_horizon_alpha: bool,
    /// `1/(1+α)`.
    pub theory: f64,
    /// `(1/(1+α))·log β₁/log β₀` for the window `(β₀, β₁]`; `None` when
    /// `β₀ = 1`.
    pub window_bound: Option<f64>,
    pub flags: Vec<String>,
}

pub const DEFAULT_DEPTHS: [usize; 4] = [8, 12, 16, 20];
pub const DEFAULT_TOLERANCE: f64 = 1e-3;

pub fn dimension_summary(window: &Window, spec: &TargetSpec, estimates: Vec<DepthEstimate>) -> DimensionReport {
    let alpha = spec.rate.alpha();
    let theory = 1.0 / (1.0 + alpha);
    let lo = window.lo().to_f64().unwrap_or(1.0);
    let hi = window.hi().to_f64().unwrap_or(1.0);
    let window_bound = (lo > 1.0).then(|| theory * libm::log(hi) / libm::log(lo));
    let horizon = estimates.iter().map(|e| e.depth).max().unwrap_or(1);
    DimensionReport {
        estimates,
        alpha,
        finite_horizon_alpha: spec.rate.is_finite_horizon(),
        theory,
        window_bound,
        flags: spec.flags(horizon),
    }
}

pub fn estimate_dimension(
    window: &Window,
    spec: &TargetSpec,
    depths: &[usize],
    prec: u32,
    tol: f64,
) -> Result<DimensionReport> {
    if depths.windows(2).any(|d| d[0] >= d[1]) {
        return Err(Error::domain("depths must be increasing"));
    }
    let mut estimates = Vec::with_capacity(depths.len());
    for &n in depths {
        let report = build_cover(window, spec, n, prec)?;
        estimates.push(DepthEstimate {
            depth: n,
            s_star: critical_exponent(&report.pieces, tol),
            pieces: report.pieces.len(),
            cylinders: report.cylinders,
            empty: report.pieces.is_empty(),
        });
    }
    Ok(dimension_summary(window, spec, estimates))
}

/// Word of the piece containing `β`, if the enclosure meets one.
pub fn piece_meeting<'a>(report: &'a CoverReport, beta: &Interval) -> Option<&'a Piece> {
    report.pieces.iter().find(|p| p.hull().intersects(beta))
}

impl core::fmt::Display for Piece {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({}) {}", render(&self.word), self.hull())
    }
}

/// `a/b` from integers, for tests and callers building targets.
pub fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b)).reduced()
}
