//! Squarefree words, base-2 automatic sequences and a small first-order
//! predicate compiler over them, centred on the ternary word
//! `vtm = 012021012102012...`, the fixed point of 0 -> 012, 1 -> 02, 2 -> 1.

pub mod cyclic;
pub mod dfao;
pub mod logic;
pub mod morphism;
pub mod progressions;
pub mod squares;
pub mod word;

mod partition;

#[cfg(any(test, feature = "oracles"))]
pub mod oracles;

pub use dfao::{Dfao, DfaoError};
pub use morphism::{vtm_prefix, Morphism};
pub use squares::{find_square, is_squarefree, SquareWitness};
pub use word::{Letter, Word, WordError};
