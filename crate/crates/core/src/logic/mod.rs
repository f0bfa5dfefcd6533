//! A small Walnut-style decision procedure: first-order predicates over
//! base-2 automatic sequences with natural-number addition and order are
//! compiled to multi-track automata and decided.

mod ast;
mod automaton;
mod compile;
mod parser;

use thiserror::Error;

pub use ast::{CmpOp, Formula, Term, TermPart};
pub use automaton::{BoolOp, TrackAutomaton, MAX_TRACKS};
pub use compile::{atom_automaton, combine, compile, CombineOp, Compiler, Sequences, DEFAULT_STATE_CEILING};
pub use parser::{parse_predicate, ParseError};

/// The predicate from which `(v_{kn})` containing `00` or `22` follows:
/// vtm has a factor `0u0` or `2u2` of length `k + 1`.
pub const SAME_FIRST_LAST: &str = "Ei (VTM[i]=@0 & VTM[i+k]=@0)|(VTM[i]=@2 & VTM[i+k]=@2)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown sequence `{0}`")]
    UnknownSequence(String),
    #[error("letter @{letter} is not an output of sequence `{seq}` (outputs: {letters:?})")]
    LetterNotInSequence { seq: String, letter: u8, letters: Vec<u8> },
    #[error("state ceiling of {limit} exceeded while compiling `{subformula}`")]
    StateCeiling { subformula: String, limit: usize },
    #[error("`{subformula}` needs more than {MAX_TRACKS} simultaneous tracks")]
    TooManyTracks { subformula: String },
    #[error("automaton has no track named `{0}`")]
    MissingTrack(String),
    #[error("expected one value for each of the tracks {expected:?}, got {got}")]
    Arity { expected: Vec<String>, got: usize },
    #[error("automaton for `{0}` is not invariant under leading zero columns")]
    PaddingViolation(String),
    #[error("malformed automaton text: {0}")]
    Format(String),
}
