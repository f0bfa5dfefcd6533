//! Morphisms on words and prefixes of their fixed points.

use std::fmt;
use std::str::FromStr;

use crate::word::{Letter, Word, WordError};

/// A morphism given by one image per letter, all over the same alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(images: Vec<Word>) -> Result<Self, WordError> {
        let alphabet_size = images.len();
        if alphabet_size == 0 || alphabet_size > crate::word::MAX_ALPHABET as usize {
            return Err(WordError::BadAlphabet(alphabet_size.min(255) as u8));
        }
        let images = images
            .into_iter()
            .map(|w| Word::new(w.into_letters(), alphabet_size as u8))
            .collect::<Result<_, _>>()?;
        Ok(Self { images })
    }

    /// The map 0 -> 012, 1 -> 02, 2 -> 1 whose fixed point is vtm.
    pub fn vtm() -> Self {
        Self::new(vec![
            Word::from_raw(vec![0, 1, 2], 3),
            Word::from_raw(vec![0, 2], 3),
            Word::from_raw(vec![1], 3),
        ])
        .expect("vtm morphism is well formed")
    }

    /// The Thue–Morse map 0 -> 01, 1 -> 10.
    pub fn thue_morse() -> Self {
        Self::new(vec![Word::from_raw(vec![0, 1], 2), Word::from_raw(vec![1, 0], 2)])
            .expect("Thue-Morse morphism is well formed")
    }

    pub fn alphabet_size(&self) -> u8 {
        self.images.len() as u8
    }

    pub fn image(&self, a: Letter) -> &Word {
        &self.images[a as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// `Some(k)` when every image has length `k`.
    pub fn uniform_length(&self) -> Option<usize> {
        let k = self.images[0].len();
        self.images.iter().all(|w| w.len() == k).then_some(k)
    }

    /// Whether iterating from `a` converges to an infinite fixed point.
    pub fn prolongable_at(&self, a: Letter) -> bool {
        self.images.get(a as usize).is_some_and(|w| w.len() >= 2 && w[0] == a)
    }

    pub fn apply(&self, w: &Word) -> Result<Word, WordError> {
        let alphabet_size = self.alphabet_size();
        let mut out = Vec::with_capacity(w.len() * 2);
        for (position, &a) in w.letters().iter().enumerate() {
            let image = self.images.get(a as usize).ok_or(WordError::LetterOutOfAlphabet {
                letter: a,
                position,
                alphabet_size,
            })?;
            out.extend_from_slice(image.letters());
        }
        Ok(Word::from_raw(out, alphabet_size))
    }

    /// Exactly `min_len` letters of the fixed point starting with `seed`.
    pub fn fixed_point_prefix(&self, seed: Letter, min_len: usize) -> Result<Word, WordError> {
        if !self.prolongable_at(seed) {
            return Err(WordError::Domain(format!(
                "morphism is not prolongable at letter {seed}"
            )));
        }
        let mut letters = vec![seed];
        // The fixed point prefix of length L determines the next iterate's
        // first |h(prefix)| letters, so each round only expands what is needed.
        while letters.len() < min_len {
            let mut next = Vec::with_capacity(min_len.min(letters.len() * 4) + 8);
            for &a in &letters {
                next.extend_from_slice(self.images[a as usize].letters());
                if next.len() >= min_len {
                    break;
                }
            }
            letters = next;
        }
        letters.truncate(min_len);
        Ok(Word::from_raw(letters, self.alphabet_size()))
    }
}

/// The first `len` letters of vtm.
pub fn vtm_prefix(len: usize) -> Word {
    Morphism::vtm()
        .fixed_point_prefix(0, len)
        .expect("vtm morphism is prolongable at 0")
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, image) in self.images.iter().enumerate() {
            if a > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}:{image}")?;
        }
        Ok(())
    }
}

/// Parses `"0:012,1:02,2:1"`. Letters must be listed as 0, 1, ... in order.
impl FromStr for Morphism {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut images = Vec::new();
        for (expected, part) in s.split(',').map(str::trim).enumerate() {
            let (letter, image) = part
                .split_once(':')
                .ok_or_else(|| WordError::Domain(format!("expected `letter:image`, got {part:?}")))?;
            let letter: usize = letter
                .trim()
                .parse()
                .map_err(|_| WordError::Domain(format!("bad letter {letter:?}")))?;
            if letter != expected {
                return Err(WordError::Domain(format!(
                    "images must be listed in letter order; expected {expected}, got {letter}"
                )));
            }
            images.push(image.trim().to_string());
        }
        let alphabet_size = images.len() as u8;
        let images = images
            .iter()
            .map(|t| Word::parse(t, alphabet_size))
            .collect::<Result<Vec<_>, _>>()?;
        Morphism::new(images)
    }
}
