//! Arithmetic-progression subsequences of vtm and the finite-prefix checks
//! behind the statement that `(v_{kn})` always contains `00` or `22`.

use std::collections::BTreeSet;

use crate::morphism::vtm_prefix;
use crate::word::{Letter, Word, WordError};

/// Letters `w[offset], w[offset + k], w[offset + 2k], ...` inside `w`.
pub fn subsequence_ap(w: &Word, k: usize, offset: usize) -> Result<Word, WordError> {
    if k == 0 {
        return Err(WordError::Domain("progression step must be at least 1".into()));
    }
    let letters = w.letters().iter().skip(offset).step_by(k).copied().collect();
    Ok(Word::from_raw(letters, w.alphabet_size()))
}

/// `v_{kn} = v_{k(n+1)} = letter` with `letter` in {0, 2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Theorem1Evidence {
    pub k: usize,
    pub n: usize,
    pub letter: Letter,
}

impl Theorem1Evidence {
    /// Re-checks the evidence against an arbitrary prefix of vtm.
    pub fn holds_in(&self, vtm: &[Letter]) -> bool {
        let (i, j) = (self.k * self.n, self.k * (self.n + 1));
        matches!(self.letter, 0 | 2) && j < vtm.len() && vtm[i] == self.letter && vtm[j] == self.letter
    }
}

/// Generates a vtm prefix of `prefix_len` letters and scans `(v_{kn})` for
/// `00` or `22`. `Ok(None)` means the prefix was too short to decide, not
/// that the claim fails.
pub fn check_theorem1(k: usize, prefix_len: usize) -> Result<Option<Theorem1Evidence>, WordError> {
    if k < 2 {
        return Err(WordError::Domain(format!("k must be at least 2, got {k}")));
    }
    Ok(theorem1_evidence_in(vtm_prefix(prefix_len).letters(), k))
}

/// Same scan over a caller-supplied vtm prefix, so one prefix can serve many k.
pub fn theorem1_evidence_in(vtm: &[Letter], k: usize) -> Option<Theorem1Evidence> {
    assert!(k >= 2, "k must be at least 2");
    let mut terms = vtm.iter().step_by(k);
    let mut prev = *terms.next()?;
    for (n, &cur) in terms.enumerate() {
        if cur == prev && matches!(cur, 0 | 2) {
            return Some(Theorem1Evidence { k, n, letter: cur });
        }
        prev = cur;
    }
    None
}

/// Residues mod `k` of the positions where `factor` occurs in `w`.
pub fn occurrence_residues(w: &Word, factor: &Word, k: usize) -> Result<BTreeSet<usize>, WordError> {
    if k == 0 {
        return Err(WordError::Domain("modulus must be at least 1".into()));
    }
    if factor.is_empty() {
        return Err(WordError::Domain("factor must be nonempty".into()));
    }
    let (text, pat) = (w.letters(), factor.letters());
    let mut residues = BTreeSet::new();
    if pat.len() > text.len() {
        return Ok(residues);
    }
    for i in 0..=text.len() - pat.len() {
        if text[i] == pat[0] && &text[i..i + pat.len()] == pat {
            residues.insert(i % k);
            if residues.len() == k {
                break;
            }
        }
    }
    Ok(residues)
}

/// Least `i` with `w[i] = w[i + k]` and `w[i]` in {0, 2}: the start of a
/// factor `0u0` or `2u2` of length `k + 1`.
pub fn find_bounded_gap_factor(w: &Word, k: usize) -> Option<usize> {
    let w = w.letters();
    (0..w.len().saturating_sub(k)).find(|&i| w[i] == w[i + k] && matches!(w[i], 0 | 2))
}
