//! Base-2 deterministic finite automata with output (DFAOs).
//!
//! Input is the binary representation of `n`, most significant digit first.
//! `n = 0` is the empty digit string; leading zeros are allowed and, for the
//! automata built here, do not change the output.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::partition::{canonical_quotient, refine};
use crate::word::Letter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DfaoError {
    #[error("compare_len too small: reconstructed automaton outputs {got} at n = {index}, sequence has {expected}")]
    CompareTooShort { index: u64, expected: Letter, got: Letter },
    #[error("sequence oracle has no letter at index {0}")]
    OracleExhausted(u64),
    #[error("kernel exploration exceeded {0} states")]
    TooManyStates(usize),
    #[error("malformed automaton: {0}")]
    Malformed(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Domain(String),
}

/// A complete binary DFAO. State ids are `0..state_count()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfao {
    initial: u32,
    delta: Vec<[u32; 2]>,
    output: Vec<Letter>,
}

impl Dfao {
    pub fn new(initial: u32, delta: Vec<[u32; 2]>, output: Vec<Letter>) -> Result<Self, DfaoError> {
        let n = delta.len();
        if n == 0 || output.len() != n {
            return Err(DfaoError::Malformed(format!(
                "{n} transition rows but {} outputs",
                output.len()
            )));
        }
        if initial as usize >= n {
            return Err(DfaoError::Malformed(format!("initial state {initial} out of range")));
        }
        if let Some((q, row)) = delta
            .iter()
            .enumerate()
            .find(|(_, row)| row.iter().any(|&t| t as usize >= n))
        {
            return Err(DfaoError::Malformed(format!(
                "state {q} has a transition outside 0..{n}: {row:?}"
            )));
        }
        Ok(Self { initial, delta, output })
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn transition(&self, state: u32, bit: u8) -> u32 {
        self.delta[state as usize][bit as usize]
    }

    pub fn output(&self, state: u32) -> Letter {
        self.output[state as usize]
    }

    /// Distinct output letters, ascending.
    pub fn letters(&self) -> Vec<Letter> {
        let mut letters = self.output.clone();
        letters.sort_unstable();
        letters.dedup();
        letters
    }

    /// State reached from the initial state on `n`'s binary digits.
    pub fn state_for(&self, n: u64) -> u32 {
        let bits = u64::BITS - n.leading_zeros();
        (0..bits)
            .rev()
            .fold(self.initial, |q, i| self.transition(q, ((n >> i) & 1) as u8))
    }

    pub fn run(&self, n: u64) -> Letter {
        self.output(self.state_for(n))
    }

    /// Runs on an explicit MSD-first digit string (digits must be 0 or 1).
    pub fn run_digits(&self, digits: &[u8]) -> Letter {
        let q = digits.iter().fold(self.initial, |q, &b| self.transition(q, b));
        self.output(q)
    }

    /// Moore refinement seeded by output letters, restricted to reachable
    /// states, with canonical breadth-first numbering.
    pub fn minimize(&self) -> Dfao {
        let flat: Vec<u32> = self.delta.iter().flatten().copied().collect();
        let seed: Vec<u32> = self.output.iter().map(|&c| c as u32).collect();
        let classes = refine(2, &flat, &seed);
        let canon = canonical_quotient(self.initial, 2, &flat, &classes);
        Dfao {
            initial: 0,
            delta: canon.delta.chunks(2).map(|c| [c[0], c[1]]).collect(),
            output: canon.reps.iter().map(|&r| self.output[r as usize]).collect(),
        }
    }

    /// Text form: `states N initial I`, then `state output t0 t1` per state.
    pub fn to_text(&self) -> String {
        let mut s = format!("states {} initial {}\n", self.state_count(), self.initial);
        for (q, (row, out)) in self.delta.iter().zip(&self.output).enumerate() {
            let _ = writeln!(s, "{q} {out} {} {}", row[0], row[1]);
        }
        s
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dfao {\n  rankdir=LR;\n  node [shape=circle];\n");
        let _ = writeln!(s, "  start [shape=point];\n  start -> {};", self.initial);
        for (q, out) in self.output.iter().enumerate() {
            let _ = writeln!(s, "  {q} [label=\"{q}/{out}\"];");
        }
        for (q, row) in self.delta.iter().enumerate() {
            if row[0] == row[1] {
                let _ = writeln!(s, "  {q} -> {} [label=\"0,1\"];", row[0]);
            } else {
                let _ = writeln!(s, "  {q} -> {} [label=\"0\"];", row[0]);
                let _ = writeln!(s, "  {q} -> {} [label=\"1\"];", row[1]);
            }
        }
        s.push_str("}\n");
        s
    }
}

impl fmt::Display for Dfao {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Dfao {
    type Err = DfaoError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(DfaoError::Parse {
            line: 1,
            message: "empty automaton file".into(),
        })?;
        let err = |line, message: &str| DfaoError::Parse {
            line,
            message: message.to_string(),
        };
        let h: Vec<&str> = header.split_whitespace().collect();
        let (n, initial) = match h.as_slice() {
            ["states", n, "initial", i] => (
                n.parse::<usize>().map_err(|_| err(line, "bad state count"))?,
                i.parse::<u32>().map_err(|_| err(line, "bad initial state"))?,
            ),
            _ => return Err(err(line, "expected `states N initial I`")),
        };
        let mut delta = Vec::with_capacity(n);
        let mut output = Vec::with_capacity(n);
        for q in 0..n {
            let (line, row) = lines
                .next()
                .ok_or_else(|| err(line, &format!("missing line for state {q}")))?;
            let nums: Vec<u32> = row
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| err(line, "expected `state output t0 t1`"))?;
            match nums.as_slice() {
                &[s, out, t0, t1] if s as usize == q && out <= Letter::MAX as u32 => {
                    delta.push([t0, t1]);
                    output.push(out as Letter);
                }
                _ => return Err(err(line, &format!("expected `{q} output t0 t1`"))),
            }
        }
        if let Some((line, _)) = lines.next() {
            return Err(err(line, "trailing content"));
        }
        Dfao::new(initial, delta, output)
    }
}

/// The kernel subsequence `n -> s(2^exponent * n + residue)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KernelElement {
    pub exponent: u32,
    pub residue: u64,
}

impl KernelElement {
    /// Kernel elements in shortlex order of their digit strings: the `t`-th
    /// element (t >= 1) is the binary representation of `t` without its
    /// leading 1, read as `exponent` digits.
    pub fn shortlex(count: usize) -> impl Iterator<Item = KernelElement> {
        (1..=count as u64).map(|t| {
            let exponent = u64::BITS - 1 - t.leading_zeros();
            KernelElement {
                exponent,
                residue: t - (1 << exponent),
            }
        })
    }

    /// Index of the `n`-th term of this subsequence.
    pub fn at(&self, n: u64) -> u64 {
        (n << self.exponent) + self.residue
    }
}

const KERNEL_STATE_LIMIT: usize = 4096;

/// Reconstructs a minimal MSD-first DFAO for a 2-automatic sequence.
///
/// A state is represented by the number `m` whose digits lead to it. Reading
/// bit `b` from `m` leads to `2m + b`. Two numbers `m`, `m'` lead to the same
/// state exactly when `s(2^e m + r) = s(2^e m' + r)` for every kernel element
/// `(e, r)`; this is tested on the first `compare_len` elements in shortlex
/// order, which is why the result is then checked on all `n < verify_len`.
/// The recurrence behind the transitions is
/// `s(2^e (2m + b) + r) = s(2^(e+1) m + (b 2^e + r))`.
pub fn kernel_dfao(
    seq: impl Fn(u64) -> Option<Letter>,
    compare_len: usize,
    verify_len: u64,
) -> Result<Dfao, DfaoError> {
    let elements: Vec<KernelElement> = KernelElement::shortlex(compare_len.max(1)).collect();
    let signature = |m: u64| -> Result<Vec<Letter>, DfaoError> {
        elements
            .iter()
            .map(|el| {
                let i = el.at(m);
                seq(i).ok_or(DfaoError::OracleExhausted(i))
            })
            .collect()
    };

    let mut reps: Vec<u64> = vec![0];
    let mut outputs: Vec<Letter> = Vec::new();
    let mut seen: HashMap<Vec<Letter>, u32> = HashMap::new();
    let root = signature(0)?;
    outputs.push(root[0]);
    seen.insert(root, 0);
    let mut delta: Vec<[u32; 2]> = Vec::new();
    let mut head = 0;
    while head < reps.len() {
        let m = reps[head];
        let mut row = [0u32; 2];
        for (b, slot) in row.iter_mut().enumerate() {
            let child = 2 * m + b as u64;
            let sig = signature(child)?;
            *slot = match seen.get(&sig) {
                Some(&q) => q,
                None => {
                    if reps.len() >= KERNEL_STATE_LIMIT {
                        return Err(DfaoError::TooManyStates(KERNEL_STATE_LIMIT));
                    }
                    let q = reps.len() as u32;
                    reps.push(child);
                    outputs.push(sig[0]);
                    seen.insert(sig, q);
                    q
                }
            };
        }
        delta.push(row);
        head += 1;
    }

    let dfao = Dfao::new(0, delta, outputs)?.minimize();
    for n in 0..verify_len {
        let expected = seq(n).ok_or(DfaoError::OracleExhausted(n))?;
        let got = dfao.run(n);
        if got != expected {
            return Err(DfaoError::CompareTooShort {
                index: n,
                expected,
                got,
            });
        }
    }
    Ok(dfao)
}

/// Whether `s(i) = 0` implies `s(2i) = 0` and `s(i) = 2` implies `s(2i) = 2`
/// for all `i < bound`.
pub fn check_doubling(d: &Dfao, bound: u64) -> bool {
    (0..bound).all(|i| match d.run(i) {
        c @ (0 | 2) => d.run(2 * i) == c,
        _ => true,
    })
}

/// Whether `s(2^l) = 2` for `1 <= l <= max_exp`.
pub fn check_power_of_two(d: &Dfao, max_exp: u32) -> bool {
    (1..=max_exp.min(63)).all(|l| d.run(1 << l) == 2)
}

/// Writes `k = 2^a k'` with `k'` odd.
pub fn decompose_even(k: u64) -> Result<(u32, u64), DfaoError> {
    if k == 0 {
        return Err(DfaoError::Domain("cannot decompose 0".into()));
    }
    let a = k.trailing_zeros();
    Ok((a, k >> a))
}

/// A vtm DFAO reconstructed from a morphic prefix and verified on all
/// `n < 2^20`.
pub fn vtm_dfao() -> Dfao {
    let prefix = crate::morphism::vtm_prefix(1 << 22);
    let letters = prefix.letters();
    kernel_dfao(|i| letters.get(i as usize).copied(), 1 << 12, 1 << 20).expect("vtm is 2-automatic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::vtm_prefix;
    use crate::oracles::thue_morse;

    fn vtm_oracle(len: usize) -> impl Fn(u64) -> Option<Letter> {
        let v = vtm_prefix(len);
        move |i| v.get(i as usize)
    }

    fn residue_mod3() -> Dfao {
        // outputs 1 exactly when n = 2 (mod 3)
        Dfao::new(0, vec![[0, 1], [2, 0], [1, 2]], vec![0, 0, 1]).unwrap()
    }

    #[test]
    fn vtm_dfao_matches_morphic_generation() {
        let d = vtm_dfao();
        let v = vtm_prefix(1 << 16);
        for n in 0..(1u64 << 16) {
            assert_eq!(d.run(n), v[n as usize], "n = {n}");
        }
        assert_eq!(d.run(0), 0);
        assert_eq!(d.run_digits(&[]), d.run_digits(&[0]));
        assert_eq!([d.run(2), d.run(4), d.run(8)], [2, 2, 2]);
    }

    #[test]
    fn leading_zeros_are_ignored() {
        let d = vtm_dfao();
        for n in 0..(1u64 << 10) {
            let bits = 64 - n.leading_zeros();
            let digits: Vec<u8> = (0..bits).rev().map(|i| ((n >> i) & 1) as u8).collect();
            for pad in 0..=4 {
                let mut padded = vec![0; pad];
                padded.extend_from_slice(&digits);
                assert_eq!(d.run_digits(&padded), d.run(n));
            }
        }
    }

    #[test]
    fn kernel_of_constant_and_thue_morse() {
        let c = kernel_dfao(|_| Some(0), 64, 1 << 12).unwrap();
        assert_eq!(c.state_count(), 1);
        let tm = kernel_dfao(|n| Some(thue_morse(n)), 256, 1 << 16).unwrap();
        assert_eq!(tm.state_count(), 2);
        for n in 0..1000 {
            assert_eq!(tm.run(n), thue_morse(n));
        }
    }

    #[test]
    fn kernel_reports_short_comparisons() {
        // Agrees with 0 on the first 31 terms; a single comparison cannot see it.
        let seq = |n: u64| Some(u8::from(n == 31));
        let err = kernel_dfao(seq, 1, 64).unwrap_err();
        assert!(matches!(err, DfaoError::CompareTooShort { .. }), "{err}");
        let err = kernel_dfao(vtm_oracle(100), 1 << 12, 1 << 10).unwrap_err();
        assert!(matches!(err, DfaoError::OracleExhausted(_)));
    }

    #[test]
    fn kernel_is_stable_under_longer_comparison() {
        let oracle = vtm_oracle(1 << 22);
        let a = kernel_dfao(&oracle, 1 << 10, 1 << 18).unwrap();
        let b = kernel_dfao(&oracle, 1 << 11, 1 << 18).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn minimization_merges_duplicates() {
        let d = vtm_dfao();
        assert_eq!(d.minimize(), d);
        // duplicate state 1 as a fresh state and point the initial state's
        // 1-transition at the copy
        let mut delta: Vec<[u32; 2]> = (0..d.state_count() as u32)
            .map(|q| [d.transition(q, 0), d.transition(q, 1)])
            .collect();
        let mut output: Vec<Letter> = (0..d.state_count() as u32).map(|q| d.output(q)).collect();
        let target = d.transition(d.initial(), 1);
        let copy = delta.len() as u32;
        delta.push(delta[target as usize]);
        output.push(output[target as usize]);
        delta[d.initial() as usize][1] = copy;
        let bigger = Dfao::new(d.initial(), delta, output).unwrap();
        assert_eq!(bigger.state_count(), d.state_count() + 1);
        let small = bigger.minimize();
        assert_eq!(small.state_count(), d.state_count());
        for n in 0..(1 << 12) {
            assert_eq!(small.run(n), bigger.run(n));
        }
        assert_eq!(small, d);
    }

    #[test]
    fn minimization_is_idempotent_and_drops_unreachable() {
        let d = Dfao::new(0, vec![[0, 0], [1, 1], [0, 1]], vec![0, 1, 0]).unwrap();
        let m = d.minimize();
        assert_eq!(m.state_count(), 1);
        assert_eq!(m.minimize(), m);
    }

    #[test]
    fn doubling_and_powers_of_two() {
        let d = vtm_dfao();
        assert!(check_doubling(&d, 100_000));
        assert!(check_power_of_two(&d, 19));
        assert!(!check_doubling(&residue_mod3(), 10));
        let tm = kernel_dfao(|n| Some(thue_morse(n)), 64, 1024).unwrap();
        assert!(!check_power_of_two(&tm, 3));
    }

    #[test]
    fn decompose() {
        assert_eq!(decompose_even(12).unwrap(), (2, 3));
        assert_eq!(decompose_even(7).unwrap(), (0, 7));
        assert_eq!(decompose_even(64).unwrap(), (6, 1));
        assert!(decompose_even(0).is_err());
    }

    #[test]
    fn text_format_round_trips() {
        let d = vtm_dfao();
        let parsed: Dfao = d.to_text().parse().unwrap();
        assert_eq!(parsed, d);
        assert!("states 1 initial 0\n0 0 0\n".parse::<Dfao>().is_err());
        assert!("states 1 initial 0\n0 0 0 1\n".parse::<Dfao>().is_err());
        assert!(d.to_dot().starts_with("digraph"));
    }

    #[test]
    fn kernel_elements_in_shortlex_order() {
        let els: Vec<(u32, u64)> = KernelElement::shortlex(7).map(|e| (e.exponent, e.residue)).collect();
        assert_eq!(els, [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2), (2, 3)]);
    }
}
