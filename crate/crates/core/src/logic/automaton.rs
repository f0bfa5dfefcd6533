//! Deterministic automata over tuples of binary digits.
//!
//! Each track carries one variable's binary representation, most significant
//! digit first, all tracks left-padded with zeros to a common length. A
//! column is encoded as a symbol whose bit `j` is the digit on track `j`.
//! Tracks are kept sorted by name, so automata over the same variables share
//! one symbol encoding.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use super::LogicError;
use crate::partition::{canonical_quotient, refine};

/// Maximum number of tracks; symbols are enumerated explicitly.
pub const MAX_TRACKS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Implies,
}

impl BoolOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Implies => !a || b,
        }
    }
}

/// Raised by subset construction when it would exceed a state budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct CeilingExceeded(pub usize);

/// A complete deterministic multi-track automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrackAutomaton {
    tracks: Vec<String>,
    initial: u32,
    accepting: Vec<bool>,
    /// `delta[q * alphabet + symbol]`
    delta: Vec<u32>,
}

impl TrackAutomaton {
    pub(crate) fn from_parts(tracks: Vec<String>, initial: u32, accepting: Vec<bool>, delta: Vec<u32>) -> Self {
        debug_assert!(tracks.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(delta.len(), accepting.len() << tracks.len());
        Self {
            tracks,
            initial,
            accepting,
            delta,
        }
    }

    /// Accepts every assignment (`true`) or none (`false`).
    pub fn constant(tracks: &[String], value: bool) -> Self {
        let tracks = sorted_tracks(tracks);
        let alpha = 1 << tracks.len();
        Self::from_parts(tracks, 0, vec![value], vec![0; alpha])
    }

    pub(crate) fn into_parts(self) -> (Vec<String>, u32, Vec<bool>, Vec<u32>) {
        (self.tracks, self.initial, self.accepting, self.delta)
    }

    pub fn tracks(&self) -> &[String] {
        &self.tracks
    }

    pub fn arity(&self) -> usize {
        self.tracks.len()
    }

    pub fn alphabet(&self) -> usize {
        1 << self.tracks.len()
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    pub fn step(&self, q: u32, symbol: usize) -> u32 {
        self.delta[q as usize * self.alphabet() + symbol]
    }

    /// Membership for one value per track, in track order.
    pub fn accepts(&self, values: &[u64]) -> Result<bool, LogicError> {
        if values.len() != self.arity() {
            return Err(LogicError::Arity {
                expected: self.tracks.clone(),
                got: values.len(),
            });
        }
        let len = values.iter().map(|v| u64::BITS - v.leading_zeros()).max().unwrap_or(0);
        let mut q = self.initial;
        for bit in (0..len).rev() {
            let symbol = values
                .iter()
                .enumerate()
                .fold(0, |s, (j, v)| s | ((((v >> bit) & 1) as usize) << j));
            q = self.step(q, symbol);
        }
        Ok(self.is_accepting(q))
    }

    /// Membership with values given by variable name, in any order.
    pub fn accepts_named(&self, assignment: &[(&str, u64)]) -> Result<bool, LogicError> {
        let names: BTreeSet<&str> = assignment.iter().map(|(n, _)| *n).collect();
        let tracks: BTreeSet<&str> = self.tracks.iter().map(String::as_str).collect();
        if names != tracks || assignment.len() != self.arity() {
            return Err(LogicError::Arity {
                expected: self.tracks.clone(),
                got: assignment.len(),
            });
        }
        let values: Vec<u64> = self
            .tracks
            .iter()
            .map(|t| assignment.iter().find(|(n, _)| n == t).unwrap().1)
            .collect();
        self.accepts(&values)
    }

    /// Truth value of a closed formula: acceptance of the empty input.
    pub fn decide(&self) -> Result<bool, LogicError> {
        if !self.tracks.is_empty() {
            return Err(LogicError::Arity {
                expected: self.tracks.clone(),
                got: 0,
            });
        }
        Ok(self.is_accepting(self.initial))
    }

    /// Accepted tuples in shortlex order of their shortest encodings, up to
    /// `limit` tuples and 64-bit values. For a single track this lists the
    /// accepted numbers in increasing order.
    pub fn enumerate(&self, limit: usize) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        if self.is_accepting(self.initial) {
            out.push(vec![0; self.arity()]);
        }
        if self.tracks.is_empty() {
            return out;
        }
        let n = self.state_count();
        let alpha = self.alphabet();
        // live[r][q]: some word of length exactly r leads from q to acceptance
        let mut live = vec![self.accepting.clone()];
        for r in 0..64 {
            let prev: &Vec<bool> = &live[r];
            let next = (0..n)
                .map(|q| (0..alpha).any(|s| prev[self.delta[q * alpha + s] as usize]))
                .collect();
            live.push(next);
        }
        let mut path = Vec::with_capacity(64);
        for len in 1..=64usize {
            if out.len() >= limit {
                break;
            }
            self.walk(self.initial, len, &live, &mut path, &mut out, limit);
        }
        out.truncate(limit);
        out
    }

    fn walk(
        &self,
        q: u32,
        remaining: usize,
        live: &[Vec<bool>],
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<u64>>,
        limit: usize,
    ) {
        if out.len() >= limit || !live[remaining][q as usize] {
            return;
        }
        if remaining == 0 {
            let values = (0..self.arity())
                .map(|j| path.iter().fold(0u64, |v, s| (v << 1) | ((s >> j) & 1) as u64))
                .collect();
            out.push(values);
            return;
        }
        // the leading column of a shortest encoding is nonzero
        let first = usize::from(path.is_empty());
        for s in first..self.alphabet() {
            path.push(s);
            self.walk(self.step(q, s), remaining - 1, live, path, out, limit);
            path.pop();
        }
    }

    /// Minimal automaton in canonical breadth-first numbering.
    pub fn minimize(&self) -> Self {
        let alpha = self.alphabet();
        let seed: Vec<u32> = self.accepting.iter().map(|&a| a as u32).collect();
        let classes = refine(alpha, &self.delta, &seed);
        let canon = canonical_quotient(self.initial, alpha, &self.delta, &classes);
        Self::from_parts(
            self.tracks.clone(),
            0,
            canon.reps.iter().map(|&r| self.accepting[r as usize]).collect(),
            canon.delta,
        )
    }

    pub fn complement(&self) -> Self {
        let mut c = self.clone();
        c.accepting.iter_mut().for_each(|a| *a = !*a);
        c
    }

    /// Prepending an all-zero column never changes acceptance.
    pub fn is_padding_closed(&self) -> bool {
        let seed: Vec<u32> = self.accepting.iter().map(|&a| a as u32).collect();
        let classes = refine(self.alphabet(), &self.delta, &seed);
        let q0 = self.initial as usize;
        classes[q0] == classes[self.step(self.initial, 0) as usize]
    }

    /// Same language over the same tracks.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.tracks == other.tracks && self.minimize() == other.minimize()
    }

    /// Boolean combination over the union of both track sets. Tracks missing
    /// from one side are unconstrained there. The result is minimized.
    /// Errors leave `subformula` empty for the caller to fill in.
    pub fn product(&self, other: &Self, op: BoolOp, ceiling: usize) -> Result<Self, LogicError> {
        let union: Vec<String> = sorted_tracks(&self.tracks.iter().chain(&other.tracks).cloned().collect::<Vec<_>>());
        if union.len() > MAX_TRACKS {
            return Err(LogicError::TooManyTracks {
                subformula: String::new(),
            });
        }
        let alpha = 1 << union.len();
        let left = symbol_map(&union, &self.tracks);
        let right = symbol_map(&union, &other.tracks);
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut delta = Vec::new();
        let mut head = 0;
        while head < pairs.len() {
            let (p, q) = pairs[head];
            for s in 0..alpha {
                let next = (self.step(p, left[s]), other.step(q, right[s]));
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if pairs.len() >= ceiling {
                            return Err(LogicError::StateCeiling {
                                subformula: String::new(),
                                limit: ceiling,
                            });
                        }
                        let id = pairs.len() as u32;
                        pairs.push(next);
                        index.insert(next, id);
                        id
                    }
                };
                delta.push(id);
            }
            head += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| op.apply(self.is_accepting(p), other.is_accepting(q)))
            .collect();
        Ok(Self::from_parts(union, 0, accepting, delta).minimize())
    }

    /// Existential projection of `var`. Leading columns whose remaining
    /// tracks are all zero may still carry digits of the erased variable, so
    /// every state reachable from the initial state by such columns is an
    /// initial state of the projected automaton.
    pub fn project(&self, var: &str, ceiling: usize) -> Result<Self, LogicError> {
        let j = self
            .tracks
            .iter()
            .position(|t| t == var)
            .ok_or_else(|| LogicError::MissingTrack(var.to_string()))?;
        let tracks: Vec<String> = self.tracks.iter().filter(|t| *t != var).cloned().collect();
        let alpha = 1 << tracks.len();
        let widen = |s: usize, b: usize| {
            let low = s & ((1 << j) - 1);
            let high = (s >> j) << (j + 1);
            low | (b << j) | high
        };

        let mut initial = vec![self.initial];
        let mut seen: BTreeSet<u32> = initial.iter().copied().collect();
        let mut head = 0;
        while head < initial.len() {
            let q = initial[head];
            for b in 0..2 {
                let t = self.step(q, widen(0, b));
                if seen.insert(t) {
                    initial.push(t);
                }
            }
            head += 1;
        }
        let nfa = Nfa {
            tracks,
            initial,
            accepting: self.accepting.clone(),
            delta: (0..self.state_count())
                .flat_map(|q| {
                    (0..alpha).map(move |s| {
                        let a = self.delta[q * self.alphabet() + widen(s, 0)];
                        let b = self.delta[q * self.alphabet() + widen(s, 1)];
                        if a == b {
                            vec![a]
                        } else {
                            vec![a, b]
                        }
                    })
                })
                .collect(),
        };
        nfa.determinize(ceiling)
            .map(|d| d.minimize())
            .map_err(|CeilingExceeded(limit)| LogicError::StateCeiling {
                subformula: String::new(),
                limit,
            })
    }

    /// Text form: `tracks ...`, `states N initial I`, then one line per state
    /// `state accepting t0 t1 ... t(2^tracks - 1)`, where symbol bit `j` is
    /// the digit on track `j`.
    pub fn to_text(&self) -> String {
        let mut s = String::from("tracks");
        for t in &self.tracks {
            s.push(' ');
            s.push_str(t);
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "states {} initial {}", self.state_count(), self.initial);
        let alpha = self.alphabet();
        for q in 0..self.state_count() {
            let _ = write!(s, "{q} {}", u8::from(self.accepting[q]));
            for sym in 0..alpha {
                let _ = write!(s, " {}", self.delta[q * alpha + sym]);
            }
            s.push('\n');
        }
        s
    }

    /// DOT with edges labelled by digit tuples in track order.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph automaton {\n  rankdir=LR;\n");
        let _ = writeln!(s, "  label=\"tracks: ({})\";", self.tracks.join(","));
        let _ = writeln!(s, "  start [shape=point];\n  start -> {};", self.initial);
        for q in 0..self.state_count() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  {q} [shape={shape}];");
        }
        let alpha = self.alphabet();
        for q in 0..self.state_count() {
            let mut by_target: Vec<(u32, Vec<String>)> = Vec::new();
            for sym in 0..alpha {
                let t = self.delta[q * alpha + sym];
                let label = self.tuple_label(sym);
                match by_target.iter_mut().find(|(x, _)| *x == t) {
                    Some((_, labels)) => labels.push(label),
                    None => by_target.push((t, vec![label])),
                }
            }
            for (t, labels) in by_target {
                let _ = writeln!(s, "  {q} -> {t} [label=\"{}\"];", labels.join(" "));
            }
        }
        s.push_str("}\n");
        s
    }

    fn tuple_label(&self, sym: usize) -> String {
        let digits: Vec<String> = (0..self.arity()).map(|j| ((sym >> j) & 1).to_string()).collect();
        format!("({})", digits.join(","))
    }
}

impl FromStr for TrackAutomaton {
    type Err = LogicError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |line: usize, m: &str| LogicError::Format(format!("line {line}: {m}"));
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| bad(1, "empty input"))?;
        let mut words = header.split_whitespace();
        if words.next() != Some("tracks") {
            return Err(bad(ln, "expected `tracks ...`"));
        }
        let tracks: Vec<String> = words.map(str::to_string).collect();
        if sorted_tracks(&tracks) != tracks || tracks.len() > MAX_TRACKS {
            return Err(bad(ln, "tracks must be distinct and sorted"));
        }
        let (ln, states) = lines.next().ok_or_else(|| bad(ln + 1, "missing `states` line"))?;
        let h: Vec<&str> = states.split_whitespace().collect();
        let (n, initial): (usize, u32) = match h.as_slice() {
            ["states", n, "initial", i] => (
                n.parse().map_err(|_| bad(ln, "bad state count"))?,
                i.parse().map_err(|_| bad(ln, "bad initial state"))?,
            ),
            _ => return Err(bad(ln, "expected `states N initial I`")),
        };
        let alpha = 1usize << tracks.len();
        let mut accepting = Vec::with_capacity(n);
        let mut delta = Vec::with_capacity(n * alpha);
        for q in 0..n {
            let (ln, row) = lines.next().ok_or_else(|| bad(0, &format!("missing state {q}")))?;
            let nums: Vec<u32> = row
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| bad(ln, "non-numeric entry"))?;
            if nums.len() != alpha + 2 || nums[0] as usize != q || nums[1] > 1 {
                return Err(bad(ln, &format!("expected `{q} accepting` and {alpha} targets")));
            }
            if nums[2..].iter().any(|&t| t as usize >= n) {
                return Err(bad(ln, "transition target out of range"));
            }
            accepting.push(nums[1] == 1);
            delta.extend_from_slice(&nums[2..]);
        }
        if initial as usize >= n {
            return Err(bad(ln, "initial state out of range"));
        }
        Ok(Self::from_parts(tracks, initial, accepting, delta))
    }
}

/// Intermediate nondeterministic form over sorted tracks.
pub(crate) struct Nfa {
    pub tracks: Vec<String>,
    pub initial: Vec<u32>,
    pub accepting: Vec<bool>,
    /// `delta[q * alphabet + symbol]` lists successor states
    pub delta: Vec<Vec<u32>>,
}

impl Nfa {
    /// Subset construction over reachable subsets; the empty subset becomes
    /// the rejecting sink, so the result is complete.
    pub fn determinize(&self, ceiling: usize) -> Result<TrackAutomaton, CeilingExceeded> {
        let alpha = 1 << self.tracks.len();
        let mut start: Vec<u32> = self.initial.clone();
        start.sort_unstable();
        start.dedup();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut delta = Vec::new();
        let mut head = 0;
        let mut scratch: Vec<u32> = Vec::new();
        while head < subsets.len() {
            for s in 0..alpha {
                scratch.clear();
                for &q in &subsets[head] {
                    scratch.extend_from_slice(&self.delta[q as usize * alpha + s]);
                }
                scratch.sort_unstable();
                scratch.dedup();
                let id = match index.get(&scratch) {
                    Some(&id) => id,
                    None => {
                        if subsets.len() >= ceiling {
                            return Err(CeilingExceeded(ceiling));
                        }
                        let id = subsets.len() as u32;
                        subsets.push(scratch.clone());
                        index.insert(scratch.clone(), id);
                        id
                    }
                };
                delta.push(id);
            }
            head += 1;
        }
        let accepting = subsets
            .iter()
            .map(|set| set.iter().any(|&q| self.accepting[q as usize]))
            .collect();
        Ok(TrackAutomaton::from_parts(self.tracks.clone(), 0, accepting, delta))
    }
}

pub(crate) fn sorted_tracks(tracks: &[String]) -> Vec<String> {
    let set: BTreeSet<&String> = tracks.iter().collect();
    set.into_iter().cloned().collect()
}

/// For each symbol over `wide`, the symbol it induces over `narrow`
/// (a subset of `wide`).
fn symbol_map(wide: &[String], narrow: &[String]) -> Vec<usize> {
    let positions: Vec<usize> = narrow
        .iter()
        .map(|t| wide.iter().position(|w| w == t).expect("narrow tracks are a subset"))
        .collect();
    (0..1usize << wide.len())
        .map(|s| {
            positions
                .iter()
                .enumerate()
                .fold(0, |acc, (j, &p)| acc | (((s >> p) & 1) << j))
        })
        .collect()
}

/// Re-expresses an automaton whose symbols range over positional operands
/// (names may repeat, e.g. `x + x = y`) as an automaton over the distinct
/// variable names. Repeated operands read the same digit.
pub(crate) fn relabel_positional(
    operands: &[String],
    initial: u32,
    accepting: Vec<bool>,
    delta: &[u32],
) -> TrackAutomaton {
    let tracks = sorted_tracks(operands);
    let p_alpha = 1 << operands.len();
    let map: Vec<usize> = (0..1usize << tracks.len())
        .map(|s| {
            operands.iter().enumerate().fold(0, |acc, (p, name)| {
                let j = tracks.iter().position(|t| t == name).unwrap();
                acc | (((s >> j) & 1) << p)
            })
        })
        .collect();
    let n = accepting.len();
    let new_delta = (0..n)
        .flat_map(|q| map.iter().map(move |&ps| delta[q * p_alpha + ps]))
        .collect();
    TrackAutomaton::from_parts(tracks, initial, accepting, new_delta).minimize()
}
