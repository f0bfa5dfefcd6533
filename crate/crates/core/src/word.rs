//! Finite words over small integer-coded alphabets.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use thiserror::Error;

/// A letter is a small non-negative integer code.
pub type Letter = u8;

/// Largest alphabet representable by the digit-string text format.
pub const MAX_ALPHABET: u8 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter {letter} at position {position} is outside the alphabet of size {alphabet_size}")]
    LetterOutOfAlphabet {
        letter: Letter,
        position: usize,
        alphabet_size: u8,
    },
    #[error("invalid character {ch:?} at position {position}; words are digit strings")]
    BadCharacter { ch: char, position: usize },
    #[error("alphabet size must be between 1 and {MAX_ALPHABET}, got {0}")]
    BadAlphabet(u8),
    #[error("{0}")]
    Domain(String),
}

/// A finite word. Every letter code is strictly below `alphabet_size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
    alphabet_size: u8,
}

impl Word {
    pub fn new(letters: Vec<Letter>, alphabet_size: u8) -> Result<Self, WordError> {
        if alphabet_size == 0 || alphabet_size > MAX_ALPHABET {
            return Err(WordError::BadAlphabet(alphabet_size));
        }
        if let Some((position, &letter)) = letters.iter().enumerate().find(|(_, &l)| l >= alphabet_size) {
            return Err(WordError::LetterOutOfAlphabet {
                letter,
                position,
                alphabet_size,
            });
        }
        Ok(Self { letters, alphabet_size })
    }

    pub fn empty(alphabet_size: u8) -> Self {
        Self::new(Vec::new(), alphabet_size).expect("valid alphabet size")
    }

    /// Parses a digit string over an alphabet of the given size.
    pub fn parse(text: &str, alphabet_size: u8) -> Result<Self, WordError> {
        let letters = digits(text)?;
        Self::new(letters, alphabet_size)
    }

    /// Parses a ternary digit string.
    pub fn ternary(text: &str) -> Result<Self, WordError> {
        Self::parse(text, 3)
    }

    /// Codes arbitrary characters by order of first appearance, e.g. "tartar"
    /// becomes 0,1,2,0,1,2.
    pub fn from_symbols(text: &str) -> Self {
        let mut seen: Vec<char> = Vec::new();
        let letters = text
            .chars()
            .map(|c| match seen.iter().position(|&s| s == c) {
                Some(i) => i as Letter,
                None => {
                    seen.push(c);
                    (seen.len() - 1) as Letter
                }
            })
            .collect();
        let alphabet_size = (seen.len() as u8).max(1);
        Self { letters, alphabet_size }
    }

    pub(crate) fn from_raw(letters: Vec<Letter>, alphabet_size: u8) -> Self {
        debug_assert!(letters.iter().all(|&l| l < alphabet_size));
        Self { letters, alphabet_size }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Letter> {
        self.letters.get(i).copied()
    }

    /// The factor `[start, end)` as a new word over the same alphabet.
    pub fn factor(&self, start: usize, end: usize) -> Word {
        Word::from_raw(self.letters[start..end].to_vec(), self.alphabet_size)
    }

    pub fn prefix(&self, len: usize) -> Word {
        self.factor(0, len.min(self.len()))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.starts_with(&self.letters)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::from_raw(letters, self.alphabet_size.max(other.alphabet_size))
    }

    /// Digit-string serialization, newline-terminated.
    pub fn to_line(&self) -> String {
        let mut s = self.to_string();
        s.push('\n');
        s
    }
}

impl Index<usize> for Word {
    type Output = Letter;

    fn index(&self, i: usize) -> &Letter {
        &self.letters[i]
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.letters.iter().map(|&l| (b'0' + l) as char).collect();
        f.write_str(&s)
    }
}

/// Parses with the smallest alphabet that fits, but at least ternary.
impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = digits(s)?;
        let alphabet_size = letters.iter().max().map_or(3, |&m| (m + 1).max(3));
        Word::new(letters, alphabet_size)
    }
}

fn digits(text: &str) -> Result<Vec<Letter>, WordError> {
    text.trim_end_matches(['\n', '\r'])
        .chars()
        .enumerate()
        .map(|(position, ch)| {
            ch.to_digit(10)
                .map(|d| d as Letter)
                .ok_or(WordError::BadCharacter { ch, position })
        })
        .collect()
}
