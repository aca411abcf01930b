//! Finite-generation Cantor subsets of the shrinking-target set.
//!
//! Two nearby bases `β₀ < β₁` fix a common prefix and a family of blocks
//! `U_ℓ`. Each generation appends blocks to the previous words (the stems)
//! and then picks, for every stem, one full-recurrence extension whose
//! cylinder maps into the target ball under `β ↦ T^{n}_β 1`. The uniform
//! measure splits evenly over the stems.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::beta::Beta;
use crate::cylinders::cylinder_with_precision;
use crate::error::{Error, Result};
use crate::expansion::one_with_precision;
use crate::numeric::{bracket_root, compare_refining, Dyadic, IntPoly, Interval, UnitRoot};
use crate::recurrence::{maximal_completion, right_endpoint_word, tau};
use crate::targets::Rate;
use crate::words::{is_admissible, is_self_admissible, lex_compare, predecessor, render, Ceiling, DigitWord};
use crate::{Verdict, DEFAULT_PRECISION};

/// Largest number of stems a single generation may have.
pub const MAX_STEMS: usize = 1 << 20;

/// The setup shared by every generation: the two bases, the common prefix
/// length `M`, the zero padding `q`, the block family and the target.
#[derive(Clone, Debug)]
pub struct ConstructionParams {
    beta0: Beta,
    beta1: Beta,
    prefix0: Vec<u32>,
    prefix1: Vec<u32>,
    m: usize,
    q: usize,
    free_len: usize,
    beta2: UnitRoot,
    beta2_ceiling: Ceiling,
    free_words: Vec<DigitWord>,
    x0: BigRational,
    rate: Rate,
    closeness: (f64, f64),
}

impl ConstructionParams {
    pub fn beta0(&self) -> &Beta {
        &self.beta0
    }

    pub fn beta1(&self) -> &Beta {
        &self.beta1
    }

    /// `β₂`, the right end of the order-`M` cylinder of `ε(1, β₀)`.
    pub fn beta2(&self) -> &UnitRoot {
        &self.beta2
    }

    /// `ε*(1, β₂)`, the ceiling the free parts of the blocks obey.
    pub fn beta2_ceiling(&self) -> &Ceiling {
        &self.beta2_ceiling
    }

    /// First index at which `ε(1, β₀)` and `ε(1, β₁)` differ.
    pub fn first_disagreement(&self) -> usize {
        self.m
    }

    pub fn zero_padding(&self) -> usize {
        self.q
    }

    /// `N`, the length of the free part of a block.
    pub fn free_len(&self) -> usize {
        self.free_len
    }

    /// `ℓ = 4M + 2 + N`.
    pub fn block_len(&self) -> usize {
        4 * self.m + 2 + self.free_len
    }

    pub fn x0(&self) -> &BigRational {
        &self.x0
    }

    pub fn rate(&self) -> &Rate {
        &self.rate
    }

    /// `ε₁(1,β₀) … ε_M(1,β₀)`.
    pub fn prefix0(&self) -> &[u32] {
        &self.prefix0[..self.m]
    }

    /// `ε₁(1,β₁) … ε_M(1,β₁)`.
    pub fn prefix1(&self) -> &[u32] {
        &self.prefix1[..self.m]
    }

    /// The generation-0 word `(ε₁(1,β₁), …, ε_M(1,β₁), 0^q)`.
    pub fn root_word(&self) -> DigitWord {
        let mut v = self.prefix1().to_vec();
        v.resize(self.m + self.q, 0);
        DigitWord::from_vec(v)
    }

    /// Admissible free parts `(a₁, …, a_N)`, in increasing order.
    pub fn free_words(&self) -> &[DigitWord] {
        &self.free_words
    }

    pub fn block_count(&self) -> usize {
        self.free_words.len()
    }

    /// Measured sides of the closeness condition, `(lhs, rhs)`.
    pub fn closeness(&self) -> (f64, f64) {
        self.closeness
    }

    /// `(1/(1+α)) · (log β₂ / log β₁) · (N/ℓ)`.
    pub fn exponent_bound(&self) -> f64 {
        let alpha = self.rate.alpha();
        let l2 = libm::log(self.beta2.to_f64());
        let l1 = libm::log(self.beta1.to_f64());
        (l2 / l1) * (self.free_len as f64 / self.block_len() as f64) / (1.0 + alpha)
    }
}

/// Digits of one for `beta`, doubling the depth until `want` digits exist.
fn expansion_prefix(beta: &Beta, want: usize) -> Result<Vec<u32>> {
    let e = one_with_precision(beta, want, DEFAULT_PRECISION)?;
    if let Some(m) = e.simple_parry {
        return Err(Error::domain(format!(
            "{} has the finite expansion of one ({})",
            beta.describe(),
            render(&e.raw_digits[..m])
        )));
    }
    Ok(e.raw_digits)
}

/// Sets up the construction for `β₀ < β₁` and the target `x₀ < 1`.
///
/// Fails with [`Error::NotCloseEnough`] unless
/// `β₁(β₁−β₀)/(β₀−1)² ≤ (1−x₀)/2` is certified.
pub fn derive_params(
    beta0: &Beta,
    beta1: &Beta,
    x0: BigRational,
    free_len: usize,
    rate: Rate,
) -> Result<ConstructionParams> {
    if x0.is_negative() || x0 >= BigRational::one() {
        return Err(Error::domain("x0 must lie in [0, 1)"));
    }
    if free_len == 0 {
        return Err(Error::domain("free block length must be at least 1"));
    }
    let ordered = compare_refining(DEFAULT_PRECISION, true, |p| Ok((beta0.enclose(p)?, beta1.enclose(p)?)))?;
    if ordered != Verdict::Holds {
        return Err(Error::domain("need beta0 < beta1"));
    }
    let mut depth = 64;
    let (e0, e1, m) = loop {
        let e0 = expansion_prefix(beta0, depth)?;
        let e1 = expansion_prefix(beta1, depth)?;
        if let Some(i) = (0..depth).find(|&i| e0[i] != e1[i]) {
            break (e0, e1, i + 1);
        }
        if depth >= 4096 {
            return Err(Error::domain("expansions of one agree to depth 4096"));
        }
        depth *= 2;
    };
    // q ≥ M with a non-zero digit among ε_{M+1..M+q}(1, β₁)
    let mut e1 = e1;
    let first_nonzero = loop {
        if let Some(j) = (m..e1.len()).find(|&j| e1[j] != 0) {
            break j + 1;
        }
        depth *= 2;
        e1 = expansion_prefix(beta1, depth)?;
    };
    let q = (first_nonzero - m).max(m);
    if e1.len() < m + q {
        e1 = expansion_prefix(beta1, m + q)?;
    }

    let w0 = &e0[..m];
    let beta2 = UnitRoot::solve(&right_endpoint_word(w0)?, DEFAULT_PRECISION)?;
    if tau(w0) != m {
        return Err(Error::domain(format!(
            "the common-prefix word ({}) does not have full recurrence time",
            render(w0)
        )));
    }
    let beta2_ceiling = Ceiling::periodic(Vec::new(), w0.to_vec());
    let b2 = Beta::Root(beta2.clone());
    let star = one_with_precision(&b2, 3 * m, DEFAULT_PRECISION)?.star_prefix(3 * m)?;
    if star != beta2_ceiling.prefix(3 * m)? {
        return Err(Error::domain("the infinite expansion of one at beta2 is not the periodic prefix"));
    }
    let inside = compare_refining(DEFAULT_PRECISION, true, |p| Ok((beta0.enclose(p)?, b2.enclose(p)?)))?
        .and(compare_refining(DEFAULT_PRECISION, true, |p| Ok((b2.enclose(p)?, beta1.enclose(p)?)))?);
    if inside != Verdict::Holds {
        return Err(Error::domain("beta2 is not certified to lie strictly between beta0 and beta1"));
    }

    let (lhs, rhs) = closeness_sides(beta0, beta1, &x0, DEFAULT_PRECISION)?;
    let close = compare_refining(DEFAULT_PRECISION, false, |p| closeness_sides(beta0, beta1, &x0, p))?;
    if close != Verdict::Holds {
        return Err(Error::NotCloseEnough { lhs: lhs.to_f64(), rhs: rhs.to_f64() });
    }

    let free_words = admissible_words(&beta2_ceiling, free_len, w0[0])?;
    let params = ConstructionParams {
        beta0: beta0.clone(),
        beta1: beta1.clone(),
        prefix0: e0,
        prefix1: e1,
        m,
        q,
        free_len,
        beta2,
        beta2_ceiling,
        free_words,
        x0,
        rate,
        closeness: (lhs.to_f64(), rhs.to_f64()),
    };
    if !is_self_admissible(&params.root_word()) {
        return Err(Error::domain("the generation-0 word is not self-admissible"));
    }
    Ok(params)
}

fn closeness_sides(beta0: &Beta, beta1: &Beta, x0: &BigRational, prec: u32) -> Result<(Interval, Interval)> {
    let b0 = beta0.enclose(prec)?;
    let b1 = beta1.enclose(prec)?;
    let one = Interval::from_int(1, prec);
    let gap = &b0 - &one;
    let lhs = (&b1 * &(&b1 - &b0)).div(&(&gap * &gap))?;
    let half = (BigRational::one() - x0) / BigRational::from_integer(BigInt::from(2));
    Ok((lhs, Interval::from_rational(&half, prec)))
}

/// Every word of length `n` with digits at most `max_digit` that is
/// admissible under `ceiling`, in increasing order.
fn admissible_words(ceiling: &Ceiling, n: usize, max_digit: u32) -> Result<Vec<DigitWord>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if w.len() == n {
            out.push(DigitWord::from_vec(w));
            continue;
        }
        for d in (0..=max_digit).rev() {
            let mut v = w.clone();
            v.push(d);
            if is_admissible(&v, ceiling)? {
                stack.push(v);
            }
        }
    }
    Ok(out)
}

/// The blocks `(0^M, 1, 0^M, a₁,…,a_N, 0^M, 1, 0^M)` for every admissible
/// free part, in increasing order of the free part.
pub fn block_family(params: &ConstructionParams) -> Result<Vec<DigitWord>> {
    let m = params.m;
    let mut blocks = Vec::with_capacity(params.free_words.len());
    for a in &params.free_words {
        let mut u = vec![0u32; m];
        u.push(1);
        u.resize(2 * m + 1, 0);
        u.extend_from_slice(a);
        u.resize(3 * m + 1 + params.free_len, 0);
        u.push(1);
        u.resize(params.block_len(), 0);
        if !is_admissible(&u, &params.beta2_ceiling)? {
            return Err(Error::domain(format!("block ({}) is not admissible for beta2", render(&u))));
        }
        blocks.push(DigitWord::from_vec(u));
    }
    Ok(blocks)
}

/// Shape of generation `k`: `n_k = m_{k−1} + t_k·ℓ + i_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenerationShape {
    /// `t_k ≥ 1`, the number of blocks appended.
    pub blocks: usize,
    /// `i_k < ℓ`, trailing zeros after the blocks.
    pub pad: usize,
}

/// One word of the tree.
#[derive(Clone, Debug)]
pub struct Node {
    pub word: DigitWord,
    pub parent: Option<usize>,
    pub generation: usize,
    pub mu: BigRational,
    /// Length of the stem the word extends (`n_k`); the root has none.
    pub stem_len: Option<usize>,
    pub certificate: Option<LeafCertificate>,
}

/// What was checked for a chosen extension.
#[derive(Clone, Debug)]
pub struct LeafCertificate {
    pub self_admissible: bool,
    pub full_recurrence: bool,
    /// `|T^{n_k}_β 1 − x₀| < r_k` over the whole cylinder enclosure.
    pub hit: Verdict,
    /// Orbit image diameter `≤ 4β₀^{−ℓ_{n_k}}`.
    pub diameter: Verdict,
    /// The stem's orbit image `[0, f(β₁))` contains `(x₀+1)/2`.
    pub gamma: Verdict,
    /// Cylinder length `≥ ((β₀−1)²/β₀)·β₁^{−(m_k+M+1)}`.
    pub length_floor: Verdict,
    /// Enclosure of `{T^{n_k}_β 1 : β in the cylinder}`.
    pub image: Interval,
    /// Candidates examined before this one was chosen (inclusive).
    pub candidates: usize,
}

/// Bookkeeping for one generation.
#[derive(Clone, Debug)]
pub struct GenerationRecord {
    pub k: usize,
    pub shape: GenerationShape,
    /// `n_k`.
    pub stem_len: usize,
    /// `ℓ_{n_k}`.
    pub ell: u64,
    /// `m_k = n_k + ℓ_{n_k}`.
    pub order: usize,
    /// `r_k = 4(n_k + ℓ_{n_k})·β₀^{−ℓ_{n_k}}`.
    pub radius: Interval,
    /// `r_k < (1 − x₀)/2`.
    pub radius_ok: Verdict,
    pub candidates: usize,
    /// Examined candidates whose diameter bound did not certify.
    pub diameter_failures: usize,
    pub prec: u32,
}

#[derive(Clone, Debug)]
pub struct GenerationTree {
    pub params: ConstructionParams,
    pub nodes: Vec<Node>,
    pub generations: Vec<GenerationRecord>,
}

impl GenerationTree {
    /// The tree holding only the generation-0 word.
    pub fn new(params: ConstructionParams) -> GenerationTree {
        let root = Node {
            word: params.root_word(),
            parent: None,
            generation: 0,
            mu: BigRational::one(),
            stem_len: None,
            certificate: None,
        };
        GenerationTree { params, nodes: vec![root], generations: Vec::new() }
    }

    /// Number of completed generations after the root.
    pub fn depth(&self) -> usize {
        self.generations.len()
    }

    /// `m_k` for `k = 0, …, depth`.
    pub fn orders(&self) -> Vec<usize> {
        let mut v = vec![self.nodes[0].word.len()];
        v.extend(self.generations.iter().map(|g| g.order));
        v
    }

    pub fn generation(&self, k: usize) -> impl Iterator<Item = (usize, &Node)> {
        self.nodes.iter().enumerate().filter(move |(_, n)| n.generation == k)
    }

    pub fn children(&self, idx: usize) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(move |n| n.parent == Some(idx))
    }

    /// Whether the children of every internal node carry exactly the
    /// parent's measure.
    pub fn measure_is_additive(&self) -> bool {
        (0..self.nodes.len()).all(|i| {
            if self.nodes[i].generation >= self.depth() {
                return true;
            }
            let sum = self.children(i).fold(BigRational::zero(), |acc, c| acc + &c.mu);
            sum == self.nodes[i].mu
        })
    }

    /// `μ` of the cylinder of `prefix`: the total measure of the deepest
    /// generation's words that begin with it. Exact for prefixes no longer
    /// than `m_K`.
    pub fn measure_of_prefix(&self, prefix: &[u32]) -> BigRational {
        let k = self.depth();
        self.generation(k)
            .filter(|(_, n)| n.word.starts_with(prefix))
            .fold(BigRational::zero(), |acc, (_, n)| acc + &n.mu)
    }
}

/// A stem waiting for its extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stem {
    pub parent: usize,
    pub word: DigitWord,
}

/// Everything needed to extend the stems of generation `k`; stems are
/// independent of each other and can be processed in any order.
#[derive(Clone, Debug)]
pub struct GenerationPlan {
    pub record: GenerationRecord,
    pub stems: Vec<Stem>,
}

fn ball_radius(params: &ConstructionParams, n: usize, ell: u64, prec: u32) -> Result<Interval> {
    let b0 = params.beta0.enclose(prec)?;
    let scale = Interval::from_int(4 * (n as i64 + ell as i64), prec);
    Ok(&scale * &b0.powi(ell as u32).recip()?)
}

fn radius_verdict(params: &ConstructionParams, n: usize, ell: u64) -> Result<Verdict> {
    let half = (BigRational::one() - &params.x0) / BigRational::from_integer(BigInt::from(2));
    compare_refining(DEFAULT_PRECISION, true, |p| {
        Ok((ball_radius(params, n, ell, p)?, Interval::from_rational(&half, p)))
    })
}

fn search_precision(params: &ConstructionParams, stem_len: usize, order: usize) -> u32 {
    let log2 = libm::log2(params.beta1.to_f64()).max(1.0);
    (((order + stem_len) as f64 * log2) as u32 + 96).max(DEFAULT_PRECISION)
}

/// Stems and bookkeeping for the next generation.
pub fn plan_generation(tree: &GenerationTree, shape: GenerationShape) -> Result<GenerationPlan> {
    let params = &tree.params;
    let ell_block = params.block_len();
    if shape.blocks == 0 || shape.pad >= ell_block {
        return Err(Error::domain("need t_k >= 1 and i_k < block length"));
    }
    let k = tree.depth() + 1;
    let prev = tree.orders()[k - 1];
    let stem_len = prev + shape.blocks * ell_block + shape.pad;
    let ell = params.rate.ell(stem_len)?;
    if ell == 0 {
        return Err(Error::domain(format!("the rate gives l_n = 0 at n = {stem_len}")));
    }
    let order = stem_len + ell as usize;
    let prec = search_precision(params, stem_len, order);
    let radius = ball_radius(params, stem_len, ell, prec)?;
    let radius_ok = radius_verdict(params, stem_len, ell)?;

    let blocks = block_family(params)?;
    let per_parent = (blocks.len() as u128).checked_pow(shape.blocks as u32).unwrap_or(u128::MAX);
    let parents: Vec<usize> = tree.generation(k - 1).map(|(i, _)| i).collect();
    if per_parent.saturating_mul(parents.len() as u128) > MAX_STEMS as u128 {
        return Err(Error::domain(format!(
            "generation {k} would have {} x {per_parent} stems",
            parents.len()
        )));
    }
    let mut stems = Vec::new();
    for &p in &parents {
        let base = &tree.nodes[p].word;
        let mut idx = vec![0usize; shape.blocks];
        loop {
            let mut w = base.to_vec();
            for &i in &idx {
                w.extend_from_slice(&blocks[i]);
            }
            w.resize(stem_len, 0);
            stems.push(Stem { parent: p, word: DigitWord::from_vec(w) });
            // odometer over U^t, last block fastest
            let mut pos = shape.blocks;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < blocks.len() {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    let record = GenerationRecord {
        k,
        shape,
        stem_len,
        ell,
        order,
        radius,
        radius_ok,
        candidates: 0,
        diameter_failures: 0,
        prec,
    };
    Ok(GenerationPlan { record, stems })
}

/// How one candidate extension fares.
#[derive(Clone, Debug)]
pub struct CandidateCheck {
    pub word: DigitWord,
    pub full_recurrence: bool,
    pub hit: Verdict,
    pub diameter: Verdict,
    pub image: Interval,
}

impl CandidateCheck {
    pub fn qualifies(&self) -> bool {
        self.full_recurrence && self.hit.holds()
    }
}

/// Checks a single extension of `stem` against the generation's ball.
pub fn check_candidate(
    params: &ConstructionParams,
    record: &GenerationRecord,
    stem: &[u32],
    candidate: &[u32],
) -> Result<CandidateCheck> {
    if candidate.len() != record.order || !candidate.starts_with(stem) {
        return Err(Error::domain("candidate must extend the stem to the generation order"));
    }
    let prec = record.prec;
    let f = IntPoly::from_orbit_word(stem);
    let c = cylinder_with_precision(candidate, prec)?;
    let image = f.eval(&c.hull(prec)?)?;
    let x0 = Interval::from_rational(&params.x0, prec);
    let lo = &x0 - &record.radius;
    let hi = &x0 + &record.radius;
    let hit = if lo.certainly_lt(&image) && image.certainly_lt(&hi) {
        Verdict::Holds
    } else if image.hi() <= lo.lo() || image.lo() >= hi.hi() {
        Verdict::Fails
    } else {
        Verdict::Undetermined
    };
    let at_left = f.eval(&c.left().enclose(prec)?)?;
    let at_right = f.eval(&c.right().enclose(prec)?)?;
    let b0 = params.beta0.enclose(prec)?;
    let bound = &Interval::from_int(4, prec) * &b0.powi(record.ell as u32).recip()?;
    let spread = &at_right - &at_left;
    let diameter = if spread.certainly_le(&bound) {
        Verdict::Holds
    } else if bound.certainly_lt(&spread) {
        Verdict::Fails
    } else {
        Verdict::Undetermined
    };
    Ok(CandidateCheck {
        word: DigitWord::from_vec(candidate.to_vec()),
        full_recurrence: tau(candidate) == candidate.len(),
        hit,
        diameter,
        image,
    })
}

/// The chosen extension of one stem.
#[derive(Clone, Debug)]
pub struct Extension {
    pub stem: Stem,
    pub word: DigitWord,
    pub certificate: LeafCertificate,
    pub diameter_failures: usize,
}

/// Prefix of length `n` of `ε(1, q)` for a rational `q > 1`.
fn word_at(q: BigRational, n: usize) -> Result<Vec<u32>> {
    Ok(one_with_precision(&Beta::rational(q)?, n, DEFAULT_PRECISION)?.raw_digits)
}

/// Finds the lexicographically largest full-recurrence extension of the
/// stem whose cylinder maps into the ball around `x₀`.
///
/// The search starts at the cylinder containing the parameter where the
/// stem's orbit polynomial reaches `x₀ + r` and walks down through
/// self-admissible words.
pub fn search_extension(params: &ConstructionParams, record: &GenerationRecord, stem: &Stem) -> Result<Extension> {
    let prec = record.prec;
    let order = record.order;
    if !is_self_admissible(&stem.word) {
        return Err(Error::SearchFailed(format!("stem ({}) is not self-admissible", stem.word)));
    }
    let c = cylinder_with_precision(&stem.word, prec)?;
    let f = IntPoly::from_orbit_word(&stem.word);
    let sup = f.eval(&c.right().enclose(prec)?)?;
    let mid = (BigRational::one() + &params.x0) / BigRational::from_integer(BigInt::from(2));
    let mid = Interval::from_rational(&mid, prec);
    let gamma = if mid.certainly_lt(&sup) {
        Verdict::Holds
    } else if sup.certainly_le(&mid) {
        Verdict::Fails
    } else {
        Verdict::Undetermined
    };

    let top = maximal_completion(&stem.word, order).into_vec();
    let reach = &params.x0 + record.radius.lo().to_rational();
    let coeffs: Vec<BigRational> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let a = BigRational::from_integer(a.clone());
            if i == 0 {
                a - &reach
            } else {
                a
            }
        })
        .collect();
    let shifted = IntPoly::from_rational(&coeffs);
    let hull = c.hull(prec)?;
    let mut current = if shifted.sign_at(hull.hi(), prec) <= 0 {
        top.clone()
    } else {
        let root = bracket_root(&shifted, c.left().enclosure().lo(), hull.hi(), -1, prec, None)?;
        let w = word_at(root.lo().to_rational(), order)?;
        if lex_compare(&w, &top).is_gt() {
            top.clone()
        } else {
            w
        }
    };

    let limit = 16 * order + 64;
    let mut considered = 0;
    let mut diameter_failures = 0;
    loop {
        if !current.starts_with(&stem.word) || considered >= limit {
            return Err(Error::SearchFailed(format!(
                "no full-recurrence extension of ({}) of order {order} hits the ball of radius {} \
                 ({considered} candidates examined)",
                stem.word,
                record.radius
            )));
        }
        considered += 1;
        let check = check_candidate(params, record, &stem.word, &current)?;
        if check.diameter != Verdict::Holds {
            diameter_failures += 1;
        }
        if check.qualifies() {
            let length = cylinder_with_precision(&current, prec)?.length(prec)?;
            let length_floor = length_floor_verdict(params, &length, order + params.m + 1, prec)?;
            let certificate = LeafCertificate {
                self_admissible: is_self_admissible(&current),
                full_recurrence: check.full_recurrence,
                hit: check.hit,
                diameter: check.diameter,
                gamma,
                length_floor,
                image: check.image,
                candidates: considered,
            };
            return Ok(Extension {
                stem: stem.clone(),
                word: check.word,
                certificate,
                diameter_failures,
            });
        }
        let x0 = Interval::from_rational(&params.x0, prec);
        if check.image.certainly_lt(&(&x0 - &record.radius)) {
            // everything further down maps below the ball
            return Err(Error::SearchFailed(format!(
                "extensions of ({}) left the ball before a full-recurrence word was found",
                stem.word
            )));
        }
        current = match predecessor(&current) {
            Some(w) => w.into_vec(),
            None => Vec::new(),
        };
    }
}

/// `((β₀−1)²/β₀)·β₁^{−e}`.
fn length_floor(params: &ConstructionParams, exponent: usize, prec: u32) -> Result<Interval> {
    let b0 = params.beta0.enclose(prec)?;
    let b1 = params.beta1.enclose(prec)?;
    let gap = &b0 - &Interval::from_int(1, prec);
    let c = (&gap * &gap).div(&b0)?;
    Ok(&c * &b1.powi(exponent as u32).recip()?)
}

fn length_floor_verdict(params: &ConstructionParams, length: &Interval, exponent: usize, prec: u32) -> Result<Verdict> {
    let floor = length_floor(params, exponent, prec)?;
    Ok(if floor.certainly_le(length) {
        Verdict::Holds
    } else if length.certainly_lt(&floor) {
        Verdict::Fails
    } else {
        Verdict::Undetermined
    })
}

/// Adds the extensions of a plan as the next generation, then refreshes
/// the measure.
pub fn attach_generation(tree: &mut GenerationTree, plan: GenerationPlan, extensions: Vec<Extension>) -> Result<()> {
    let mut record = plan.record;
    if extensions.len() != plan.stems.len() {
        return Err(Error::domain("one extension per stem is required"));
    }
    for (stem, ext) in plan.stems.iter().zip(extensions) {
        if &ext.stem != stem {
            return Err(Error::domain("extensions are not in stem order"));
        }
        record.candidates += ext.certificate.candidates;
        record.diameter_failures += ext.diameter_failures;
        tree.nodes.push(Node {
            word: ext.word,
            parent: Some(stem.parent),
            generation: record.k,
            mu: BigRational::zero(),
            stem_len: Some(record.stem_len),
            certificate: Some(ext.certificate),
        });
    }
    tree.generations.push(record);
    assign_measure(tree);
    Ok(())
}

/// Builds generation `k = depth + 1` sequentially.
///
/// Fails if the ball radius is not certified below `(1 − x₀)/2`, or if
/// some stem has no qualifying extension.
pub fn build_generation(tree: &mut GenerationTree, shape: GenerationShape) -> Result<()> {
    let plan = plan_generation(tree, shape)?;
    if plan.record.radius_ok != Verdict::Holds {
        return Err(Error::domain(format!(
            "generation {}: radius {} is not below (1 - x0)/2",
            plan.record.k, plan.record.radius
        )));
    }
    let mut extensions = Vec::with_capacity(plan.stems.len());
    for stem in &plan.stems {
        extensions.push(search_extension(&tree.params, &plan.record, stem)?);
    }
    attach_generation(tree, plan, extensions)
}

/// `t_k = 1, i_k = 0`, raising `t_k` until the ball radius is certified
/// below `(1 − x₀)/2`.
pub fn default_schedule(params: &ConstructionParams, generations: usize) -> Result<Vec<GenerationShape>> {
    let mut out = Vec::new();
    let mut order = params.m + params.q;
    for _ in 0..generations {
        let mut t = 1;
        loop {
            let n = order + t * params.block_len();
            let ell = params.rate.ell(n)?;
            if ell > 0 && radius_verdict(params, n, ell)? == Verdict::Holds {
                out.push(GenerationShape { blocks: t, pad: 0 });
                order = n + ell as usize;
                break;
            }
            t += 1;
            if t > 16 {
                return Err(Error::SearchFailed(String::from(
                    "no block count up to 16 gives a ball radius below (1 - x0)/2",
                )));
            }
        }
    }
    Ok(out)
}

/// Builds the whole tree for a schedule.
pub fn build_tree(params: ConstructionParams, schedule: &[GenerationShape]) -> Result<GenerationTree> {
    let mut tree = GenerationTree::new(params);
    for &shape in schedule {
        build_generation(&mut tree, shape)?;
    }
    Ok(tree)
}

/// Sets `μ(root) = 1` and splits each node's measure uniformly over its
/// children: `(♯Σ_{β₂}^N)^{−t_k}` each.
pub fn assign_measure(tree: &mut GenerationTree) {
    let count = BigInt::from(tree.params.block_count());
    tree.nodes[0].mu = BigRational::one();
    for i in 1..tree.nodes.len() {
        let node = &tree.nodes[i];
        let parent = node.parent.expect("non-root nodes have parents");
        let t = tree.generations[node.generation - 1].shape.blocks;
        let share = BigRational::from_integer(num_traits::pow(count.clone(), t));
        tree.nodes[i].mu = &tree.nodes[parent].mu / share;
    }
}

/// `log μ(Iₙ) / log |I_{n+1}|` along one word of the tree.
#[derive(Clone, Debug)]
pub struct LocalExponent {
    pub depth: usize,
    pub mu: BigRational,
    /// `|I_{n+1}|`.
    pub length: Interval,
    /// Bounds on the ratio from the two ends of the length enclosure.
    pub ratio: (f64, f64),
    /// The corresponding lower bound on the liminf.
    pub bound: f64,
    /// The length of `I_{n+1}` clears the floor `C·β₁^{−e}`.
    pub length_floor: Verdict,
}

/// The finite-depth local exponent at order `depth` along node `node`.
pub fn local_exponent(tree: &GenerationTree, node: usize, depth: usize) -> Result<LocalExponent> {
    let word = &tree
        .nodes
        .get(node)
        .ok_or(Error::OutOfRange { index: node, len: tree.nodes.len() })?
        .word;
    if depth == 0 || depth + 1 > word.len() {
        return Err(Error::OutOfRange { index: depth, len: word.len() });
    }
    let mu = tree.measure_of_prefix(&word[..depth]);
    let next = &word[..depth + 1];
    let prec = search_precision(&tree.params, 0, depth + 1);
    let length = cylinder_with_precision(next, prec)?.length(prec)?;
    let log_mu = ln_rational(&mu);
    let (llo, lhi) = length.to_f64_bounds();
    let r1 = log_mu / libm::log(llo.max(f64::MIN_POSITIVE));
    let r2 = log_mu / libm::log(lhi);
    // n in [n_k, m_k) only meets full-recurrence words at order m_k + M + 1
    let n1 = depth + 1;
    let exponent = tree
        .generations
        .iter()
        .find(|g| g.stem_len <= n1 && n1 < g.order)
        .map_or(n1, |g| g.order)
        + tree.params.m
        + 1;
    Ok(LocalExponent {
        depth,
        mu,
        length_floor: length_floor_verdict(&tree.params, &length, exponent, prec)?,
        length,
        ratio: (r1.min(r2), r1.max(r2)),
        bound: tree.params.exponent_bound(),
    })
}

fn ln_rational(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = |v: &BigInt| v.bits() as i64;
    let (n, d) = (r.numer(), r.denom());
    let shift_n = (bits(n) - 60).max(0);
    let shift_d = (bits(d) - 60).max(0);
    let nf = (n >> shift_n as usize).to_f64().unwrap_or(f64::NAN);
    let df = (d >> shift_d as usize).to_f64().unwrap_or(f64::NAN);
    libm::log(nf) - libm::log(df) + (shift_n - shift_d) as f64 * core::f64::consts::LN_2
}

/// `ℓ_{n₁}` enlarged to the form `z·n₁ + m₀ + j·ℓ` with `z ≥ 1` and
/// `0 ≤ j < t₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodicSplit {
    pub z: usize,
    pub j: usize,
    pub ell: usize,
    /// How much `ℓ_{n₁}` was enlarged by.
    pub added: usize,
}

/// Smallest `z·n + m0 + j·block ≥ ell` with `z ≥ 1`, `0 ≤ j < blocks`.
pub fn periodic_split(ell: usize, n: usize, m0: usize, block: usize, blocks: usize) -> Result<PeriodicSplit> {
    if n == 0 || blocks == 0 {
        return Err(Error::domain("need n >= 1 and at least one block"));
    }
    let mut best: Option<PeriodicSplit> = None;
    let z_max = ell / n + 1;
    for z in 1..=z_max.max(1) {
        for j in 0..blocks {
            let v = z * n + m0 + j * block;
            if v >= ell && best.is_none_or(|b| v < b.ell) {
                best = Some(PeriodicSplit { z, j, ell: v, added: v - ell });
            }
        }
    }
    Ok(best.expect("z = ell/n + 1 always reaches ell"))
}

/// A word `(w^{z+1}, w₁…w_s)` whose cylinder returns close to one at time
/// `n = |w|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub word: DigitWord,
    pub period: usize,
    pub repeats: usize,
    pub suffix: usize,
    /// `L = z·n + s`; the certified radius is `β^{−L}`.
    pub radius_exponent: usize,
    pub self_admissible: bool,
    /// The word and its shift by `n` agree on `L` digits.
    pub agreement: bool,
    /// `|Tⁿ_β 1 − 1| < β^{−L}` on the whole cylinder.
    pub hit: Verdict,
}

/// Builds the periodic-prefix word for a full-recurrence `w` and certifies
/// the return of `Tⁿ_β 1` to one.
///
/// With `z = 0` and no suffix the cylinder's left end has `Tⁿ_β 1 = 0`, so
/// the strict inequality fails there.
pub fn periodic_prefix_witness(w: &[u32], z: usize, suffix: usize, prec: u32) -> Result<Witness> {
    let n = w.len();
    if n == 0 || tau(w) != n || !is_self_admissible(w) {
        return Err(Error::domain(format!("({}) is not self-admissible of full recurrence time", render(w))));
    }
    if suffix > n {
        return Err(Error::domain("suffix longer than the period"));
    }
    let mut v = Vec::with_capacity(n * (z + 1) + suffix);
    for _ in 0..=z {
        v.extend_from_slice(w);
    }
    v.extend_from_slice(&w[..suffix]);
    if !is_self_admissible(&v) {
        return Err(Error::domain(format!("periodic word ({}) is not self-admissible", render(&v))));
    }
    let radius_exponent = z * n + suffix;
    let agreement = v[..radius_exponent] == v[n..n + radius_exponent];
    let hit = if radius_exponent == 0 {
        Verdict::Fails
    } else {
        let prec = prec.max(((v.len() + n) as f64 * 1.6) as u32 + 64);
        let c = cylinder_with_precision(&v, prec)?;
        let hull = c.hull(prec)?;
        let f = IntPoly::from_orbit_word(w);
        returns_near_one(&f, hull.lo().clone(), hull.hi().clone(), radius_exponent as u32, prec, 16)?
    };
    Ok(Witness {
        word: DigitWord::from_vec(v),
        period: n,
        repeats: z,
        suffix,
        radius_exponent,
        self_admissible: true,
        agreement,
        hit,
    })
}

/// `|f(β) − 1| < β^{−L}` for every `β ∈ [a, b]`, bisecting up to `depth`
/// levels. When `f' > 0` is certified on `[a, b]` the check on each piece
/// uses `f(a) − 1 > −b^{−L}` and `f(b) − 1 < b^{−L}`, which only needs
/// point evaluations; otherwise `f` is evaluated on the whole piece.
fn returns_near_one(f: &IntPoly, a: Dyadic, b: Dyadic, ell: u32, prec: u32, depth: u32) -> Result<Verdict> {
    let increasing = crate::cylinders::positive_on(&f.derivative(), a.clone(), b.clone(), prec, 24)?;
    near_one_on(f, increasing == Verdict::Holds, a, b, ell, prec, depth)
}

fn near_one_on(f: &IntPoly, increasing: bool, a: Dyadic, b: Dyadic, ell: u32, prec: u32, depth: u32) -> Result<Verdict> {
    let one = Interval::from_int(1, prec);
    let radius_at = |x: &Dyadic| Interval::point(x.clone(), prec).powi(ell).recip();
    let holds = if increasing {
        let r = radius_at(&b)?;
        let low = &f.eval(&Interval::point(a.clone(), prec))? - &one;
        let high = &f.eval(&Interval::point(b.clone(), prec))? - &one;
        (-&r).certainly_lt(&low) && high.certainly_lt(&r)
    } else {
        let x = Interval::new(a.clone(), b.clone(), prec)?;
        let gap = (&f.eval(&x)? - &one).abs();
        gap.certainly_lt(&x.powi(ell).recip()?)
    };
    if holds {
        return Ok(Verdict::Holds);
    }
    if a == b {
        let gap = (&f.eval(&Interval::point(a.clone(), prec))? - &one).abs();
        if radius_at(&a)?.certainly_le(&gap) {
            return Ok(Verdict::Fails);
        }
    }
    if depth == 0 || a == b {
        return Ok(Verdict::Undetermined);
    }
    let m = (&a + &b).mul_pow2(-1);
    let left = near_one_on(f, increasing, a, m.clone(), ell, prec, depth - 1)?;
    if left != Verdict::Holds {
        return Ok(left);
    }
    near_one_on(f, increasing, m, b, ell, prec, depth - 1)
}
