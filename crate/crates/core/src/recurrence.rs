//! Recurrence time of words and the extensions it determines.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::words::{is_self_admissible, render, DigitWord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceInfo {
    pub word: DigitWord,
    pub tau: usize,
    pub is_full: bool,
}

/// Least `k ≥ 1` with `σᵏ w` equal to the prefix of length `n − k`, or `n`.
pub fn tau(w: &[u32]) -> usize {
    let n = w.len();
    (1..n).find(|&k| w[k..] == w[..n - k]).unwrap_or(n)
}

pub fn recurrence_time(w: &DigitWord) -> RecurrenceInfo {
    let t = tau(w);
    RecurrenceInfo { word: w.clone(), tau: t, is_full: t == w.len() }
}

fn require_self_admissible(w: &[u32]) -> Result<()> {
    if is_self_admissible(w) {
        Ok(())
    } else {
        Err(Error::domain(alloc::format!("({}) is not self-admissible", render(w))))
    }
}

/// Lexicographically largest self-admissible word of length `m` starting
/// with `w`: the first `τ(w)` digits of `w` repeated.
pub fn maximal_extension(w: &[u32], m: usize) -> Result<DigitWord> {
    require_self_admissible(w)?;
    if m < w.len() {
        return Err(Error::domain("extension length is shorter than the word"));
    }
    Ok(maximal_completion(w, m))
}

/// [`maximal_extension`] without the checks; `w` must be self-admissible.
pub(crate) fn maximal_completion(w: &[u32], m: usize) -> DigitWord {
    let k = tau(w);
    let v: Vec<u32> = (0..m).map(|i| w[i % k]).collect();
    DigitWord::from_vec(v)
}

/// `(ε₁,…,ε_{k−1}, ε_k + 1)` with `k = τ(w)`: the expansion of one at the
/// right end of the cylinder of `w`.
pub fn right_endpoint_word(w: &[u32]) -> Result<DigitWord> {
    require_self_admissible(w)?;
    let k = tau(w);
    let mut v = w[..k].to_vec();
    v[k - 1] += 1;
    debug_assert!(is_self_admissible(&v));
    Ok(DigitWord::from_vec(v))
}

/// `σⁱ u ≼ (ε₁,…,ε_{m−i})` for every `0 ≤ i < m`, where `w = (ε₁,…,ε_m)`.
pub fn is_valid_block(u: &[u32], w: &[u32]) -> Result<bool> {
    if u.len() != w.len() {
        return Err(Error::domain("block and word lengths differ"));
    }
    let m = w.len();
    Ok((0..m).all(|i| u[i..] <= w[..m - i]))
}

/// Whether bumping the last digit of `w` keeps it self-admissible. When it
/// does, `w` has full recurrence time.
pub fn branch_full_recurrence(w: &[u32]) -> bool {
    let mut v = w.to_vec();
    if let Some(last) = v.last_mut() {
        *last = last.saturating_add(1);
    }
    is_self_admissible(&v)
}
