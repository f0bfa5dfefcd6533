//! Bottom-up compilation of formulas to minimal multi-track automata.
//!
//! Sums inside atoms are flattened into fresh existentially quantified
//! variables, so every atom automaton is one of: `x = y`, `x < y`, `x <= y`,
//! `x = c`, `x + y = z` and `SEQ[x] = @c`. Fresh variables are named `#n`,
//! which the parser can never produce.

use std::collections::BTreeMap;

use super::ast::{CmpOp, Formula, Term, TermPart};
use super::automaton::{relabel_positional, BoolOp, Nfa, TrackAutomaton};
use super::LogicError;
use crate::dfao::Dfao;

/// Named automatic sequences available to `SEQ[t]=@c` atoms.
pub type Sequences = BTreeMap<String, Dfao>;

pub const DEFAULT_STATE_CEILING: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    Not,
    And,
    Or,
    Implies,
}

pub struct Compiler<'s> {
    sequences: &'s Sequences,
    ceiling: usize,
    fresh: usize,
}

impl<'s> Compiler<'s> {
    pub fn new(sequences: &'s Sequences) -> Self {
        Self {
            sequences,
            ceiling: DEFAULT_STATE_CEILING,
            fresh: 0,
        }
    }

    /// Largest number of states any intermediate construction may reach.
    pub fn with_ceiling(mut self, ceiling: usize) -> Self {
        self.ceiling = ceiling.max(1);
        self
    }

    pub fn compile(&mut self, f: &Formula) -> Result<TrackAutomaton, LogicError> {
        let a = match f {
            Formula::Exists(v, body) => {
                let a = self.compile(body)?;
                self.exists(v, a, f)?
            }
            Formula::Forall(v, body) => {
                let a = self.compile(body)?.complement();
                self.exists(v, a, f)?.complement()
            }
            Formula::Not(body) => self.compile(body)?.complement(),
            Formula::And(a, b) => self.binary(f, a, b, BoolOp::And)?,
            Formula::Or(a, b) => self.binary(f, a, b, BoolOp::Or)?,
            Formula::Implies(a, b) => self.binary(f, a, b, BoolOp::Implies)?,
            Formula::Compare(lhs, op, rhs) => self.comparison(f, lhs, *op, rhs)?,
            Formula::SeqAtom { seq, index, letter } => self.sequence_atom(f, seq, index, *letter)?,
        };
        if !a.is_padding_closed() {
            return Err(LogicError::PaddingViolation(f.to_string()));
        }
        Ok(a)
    }

    fn binary(&mut self, f: &Formula, a: &Formula, b: &Formula, op: BoolOp) -> Result<TrackAutomaton, LogicError> {
        let a = self.compile(a)?;
        let b = self.compile(b)?;
        a.product(&b, op, self.ceiling).map_err(|e| attach(e, f))
    }

    /// `E v` over `a`; a variable the body does not mention is vacuous.
    fn exists(&self, v: &str, a: TrackAutomaton, f: &Formula) -> Result<TrackAutomaton, LogicError> {
        if !a.tracks().iter().any(|t| t == v) {
            return Ok(a);
        }
        a.project(v, self.ceiling).map_err(|e| attach(e, f))
    }

    fn fresh_var(&mut self) -> String {
        self.fresh += 1;
        format!("#{}", self.fresh)
    }

    /// Reduces a term to a single variable, pushing the defining atoms of any
    /// fresh variables it introduces.
    fn term_var(&mut self, t: &Term, defs: &mut Vec<TrackAutomaton>, fresh: &mut Vec<String>) -> String {
        let mut names = t.parts.iter().map(|p| match p {
            TermPart::Var(v) => v.clone(),
            TermPart::Const(c) => {
                let v = self.fresh_var();
                defs.push(constant_atom(&v, *c));
                fresh.push(v.clone());
                v
            }
        });
        let mut acc = names.next().expect("terms are nonempty");
        let rest: Vec<String> = names.collect();
        for next in rest {
            let sum = self.fresh_var();
            defs.push(addition_atom(&acc, &next, &sum));
            fresh.push(sum.clone());
            acc = sum;
        }
        acc
    }

    /// Conjoins `base` with the definitions of fresh variables and projects
    /// them away again.
    fn close_atom(
        &mut self,
        f: &Formula,
        base: TrackAutomaton,
        defs: Vec<TrackAutomaton>,
        fresh: Vec<String>,
    ) -> Result<TrackAutomaton, LogicError> {
        let mut a = base;
        for d in defs {
            a = a.product(&d, BoolOp::And, self.ceiling).map_err(|e| attach(e, f))?;
        }
        for v in fresh.iter().rev() {
            a = self.exists(v, a, f)?;
        }
        Ok(a)
    }

    fn comparison(&mut self, f: &Formula, lhs: &Term, op: CmpOp, rhs: &Term) -> Result<TrackAutomaton, LogicError> {
        let (mut defs, mut fresh) = (Vec::new(), Vec::new());
        let x = self.term_var(lhs, &mut defs, &mut fresh);
        let y = self.term_var(rhs, &mut defs, &mut fresh);
        let base = match op {
            CmpOp::Eq => equality_atom(&x, &y),
            CmpOp::Ne => equality_atom(&x, &y).complement(),
            CmpOp::Lt => order_atom(&x, &y, true),
            CmpOp::Le => order_atom(&x, &y, false),
            CmpOp::Gt => order_atom(&y, &x, true),
            CmpOp::Ge => order_atom(&y, &x, false),
        };
        self.close_atom(f, base, defs, fresh)
    }

    fn sequence_atom(
        &mut self,
        f: &Formula,
        seq: &str,
        index: &Term,
        letter: u8,
    ) -> Result<TrackAutomaton, LogicError> {
        let dfao = self
            .sequences
            .get(seq)
            .ok_or_else(|| LogicError::UnknownSequence(seq.to_string()))?;
        let letters = dfao.letters();
        if !letters.contains(&letter) {
            return Err(LogicError::LetterNotInSequence {
                seq: seq.to_string(),
                letter,
                letters,
            });
        }
        let (mut defs, mut fresh) = (Vec::new(), Vec::new());
        let x = self.term_var(index, &mut defs, &mut fresh);
        let base = sequence_letter_atom(dfao, &x, letter);
        if !base.is_padding_closed() {
            return Err(LogicError::PaddingViolation(format!("{seq}[{x}]=@{letter}")));
        }
        self.close_atom(f, base, defs, fresh)
    }
}

/// Names the offending subformula in errors raised by automaton operations.
fn attach(e: LogicError, f: &Formula) -> LogicError {
    match e {
        LogicError::StateCeiling { subformula, limit } if subformula.is_empty() => LogicError::StateCeiling {
            subformula: f.to_string(),
            limit,
        },
        LogicError::TooManyTracks { subformula } if subformula.is_empty() => LogicError::TooManyTracks {
            subformula: f.to_string(),
        },
        other => other,
    }
}

/// Compiles with the default state ceiling.
pub fn compile(f: &Formula, sequences: &Sequences) -> Result<TrackAutomaton, LogicError> {
    Compiler::new(sequences).compile(f)
}

/// Automaton of a single atom (`Compare` or `SeqAtom`).
pub fn atom_automaton(atom: &Formula, sequences: &Sequences) -> Result<TrackAutomaton, LogicError> {
    match atom {
        Formula::Compare(..) | Formula::SeqAtom { .. } => compile(atom, sequences),
        other => Err(LogicError::Format(format!("`{other}` is not an atom"))),
    }
}

/// Boolean combination of compiled automata; `b` is ignored for `Not`.
pub fn combine(op: CombineOp, a: &TrackAutomaton, b: Option<&TrackAutomaton>) -> Result<TrackAutomaton, LogicError> {
    let op = match op {
        CombineOp::Not => return Ok(a.complement().minimize()),
        CombineOp::And => BoolOp::And,
        CombineOp::Or => BoolOp::Or,
        CombineOp::Implies => BoolOp::Implies,
    };
    let b = b.ok_or_else(|| LogicError::Format("binary combination needs two automata".into()))?;
    a.product(b, op, DEFAULT_STATE_CEILING)
}

fn names(vars: &[&str]) -> Vec<String> {
    vars.iter().map(|s| s.to_string()).collect()
}

/// `x = y`: states 0 (equal so far, accepting) and 1 (dead).
fn equality_atom(x: &str, y: &str) -> TrackAutomaton {
    let mut delta = Vec::new();
    for q in 0..2u32 {
        for s in 0..4usize {
            let equal = (s & 1) == (s >> 1);
            delta.push(if q == 0 && equal { 0 } else { 1 });
        }
    }
    relabel_positional(&names(&[x, y]), 0, vec![true, false], &delta)
}

/// `x < y` (strict) or `x <= y`: the first differing digit decides.
/// States 0 (equal so far), 1 (x < y), 2 (x > y).
fn order_atom(x: &str, y: &str, strict: bool) -> TrackAutomaton {
    let mut delta = Vec::new();
    for q in 0..3u32 {
        for s in 0..4usize {
            let (bx, by) = (s & 1, s >> 1);
            delta.push(match q {
                0 if bx < by => 1,
                0 if bx > by => 2,
                q => q,
            });
        }
    }
    relabel_positional(&names(&[x, y]), 0, vec![!strict, true, false], &delta)
}

/// `x = c`: state `j` has matched the first `j` significant digits of `c`;
/// the last state is a dead sink.
fn constant_atom(x: &str, c: u64) -> TrackAutomaton {
    let bits: Vec<usize> = {
        let len = u64::BITS - c.leading_zeros();
        (0..len).rev().map(|i| ((c >> i) & 1) as usize).collect()
    };
    let dead = bits.len() as u32 + 1;
    let mut delta = Vec::new();
    for j in 0..=bits.len() {
        for b in 0..2usize {
            delta.push(if j == 0 && b == 0 {
                0
            } else if j < bits.len() && bits[j] == b {
                j as u32 + 1
            } else {
                dead
            });
        }
    }
    delta.extend([dead, dead]);
    let mut accepting = vec![false; bits.len() + 2];
    accepting[bits.len()] = true;
    relabel_positional(&names(&[x]), 0, accepting, &delta)
}

/// `x + y = z`, read most significant digit first. State `s` is the carry
/// the current column must pass upwards; each column guesses the carry it
/// receives from below, and the guess is checked when the input ends.
fn addition_atom(x: &str, y: &str, z: &str) -> TrackAutomaton {
    let mut delta = Vec::new();
    for carry_out in 0..2usize {
        for s in 0..8usize {
            let (bx, by, bz) = (s & 1, (s >> 1) & 1, s >> 2);
            let targets = (0..2usize)
                .filter(|&carry_in| bx + by + carry_in == bz + 2 * carry_out)
                .map(|c| c as u32)
                .collect();
            delta.push(targets);
        }
    }
    let nfa = Nfa {
        tracks: names(&["#p0", "#p1", "#p2"]),
        initial: vec![0],
        accepting: vec![true, false],
        delta,
    };
    let dfa = nfa.determinize(16).expect("addition has at most 4 subsets");
    let (_, initial, accepting, delta) = dfa.into_parts();
    relabel_positional(&names(&[x, y, z]), initial, accepting, &delta)
}

/// `SEQ[x] = @letter` over a DFAO read on track `x`.
fn sequence_letter_atom(dfao: &Dfao, x: &str, letter: u8) -> TrackAutomaton {
    let n = dfao.state_count() as u32;
    let delta: Vec<u32> = (0..n)
        .flat_map(|q| [dfao.transition(q, 0), dfao.transition(q, 1)])
        .collect();
    let accepting = (0..n).map(|q| dfao.output(q) == letter).collect();
    relabel_positional(&names(&[x]), dfao.initial(), accepting, &delta)
}
