//! Cyclic uniform ternary morphisms: `h(i) = sigma^i(h(0))` where sigma is
//! the rotation 0 -> 1 -> 2 -> 0 and every image has the same length `k`.
//!
//! A squarefree such morphism with `h(i)` beginning with `i` satisfies
//! `h(w)[k n] = w[n]`, so applying it to any squarefree ternary `w` yields a
//! squarefree word whose `k`-step progression from 0 is `w` itself.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::morphism::Morphism;
use crate::squares::{find_square, is_squarefree_slice, SquareWitness};
use crate::word::{Letter, Word, WordError};

/// Largest `k` accepted by exhaustive search (3^(k-1) leaves).
pub const EXHAUSTIVE_MAX_K: usize = 13;

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("expected a ternary alphabet, got {0} letters")]
    NotTernary(u8),
    #[error("morphism is not uniform")]
    NotUniform,
    #[error("image length must be at least 1")]
    EmptyImage,
    #[error("image of 0 must begin with 0, got {0}")]
    BadFirstLetter(Word),
    #[error("exhaustive search is limited to k <= {EXHAUSTIVE_MAX_K}, got {0}")]
    ExhaustiveTooLarge(usize),
    #[error("input word contains the square at position {}, period {}", .0.position, .0.period)]
    InputNotSquarefree(SquareWitness),
    #[error("morphism with image0 = {0} is not squarefree")]
    Uncertified(Word),
    #[error("malformed morphism file: {0}")]
    Parse(String),
}

/// Applies sigma^power letterwise.
pub fn sigma(w: &Word, power: u32) -> Result<Word, MorphismError> {
    if w.alphabet_size() > 3 {
        if let Some(&bad) = w.letters().iter().find(|&&l| l > 2) {
            return Err(WordError::LetterOutOfAlphabet {
                letter: bad,
                position: w.letters().iter().position(|&l| l == bad).unwrap(),
                alphabet_size: 3,
            }
            .into());
        }
    }
    let shift = (power % 3) as Letter;
    Ok(Word::from_raw(
        w.letters().iter().map(|&l| (l + shift) % 3).collect(),
        3,
    ))
}

/// A cyclic `k`-uniform ternary morphism, given by the image of 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicUniformMorphism {
    image0: Word,
}

impl CyclicUniformMorphism {
    pub fn new(image0: Word) -> Result<Self, MorphismError> {
        let image0 = Word::new(image0.into_letters(), 3)?;
        match image0.get(0) {
            None => Err(MorphismError::EmptyImage),
            Some(0) => Ok(Self { image0 }),
            Some(_) => Err(MorphismError::BadFirstLetter(image0)),
        }
    }

    pub fn k(&self) -> usize {
        self.image0.len()
    }

    pub fn image0(&self) -> &Word {
        &self.image0
    }

    pub fn image(&self, letter: Letter) -> Word {
        sigma(&self.image0, letter as u32).expect("image0 is ternary")
    }

    pub fn as_morphism(&self) -> Morphism {
        Morphism::new((0..3).map(|i| self.image(i)).collect()).expect("three ternary images")
    }

    pub fn is_squarefree(&self) -> bool {
        is_squarefree_morphism(&self.as_morphism()).expect("cyclic morphisms are uniform and ternary")
    }
}

/// Default word length for [`CyclicUniformMorphism::cross_check`].
pub const CROSS_CHECK_LEN: usize = 8;

impl CyclicUniformMorphism {
    /// Applies the morphism to every squarefree ternary word of length at
    /// most `max_len` and tests each image directly.
    pub fn cross_check(&self, max_len: usize) -> bool {
        let m = self.as_morphism();
        let mut buf = Vec::new();
        short_squarefree_words(max_len).iter().all(|w| {
            buf.clear();
            for &a in w {
                buf.extend_from_slice(m.image(a).letters());
            }
            is_squarefree_slice(&buf)
        })
    }
}

impl fmt::Display for CyclicUniformMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.image0)
    }
}

/// Squarefree ternary words of length 0 to `max_len`.
fn short_squarefree_words(max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in 0..3 {
                let mut v: Vec<Letter> = w.clone();
                v.push(a);
                if is_squarefree_slice(&v) {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Whether a uniform ternary morphism maps squarefree words to squarefree
/// words. For uniform morphisms on three letters it suffices that the images
/// of the squarefree words of length at most 3 are squarefree.
pub fn is_squarefree_morphism(m: &Morphism) -> Result<bool, MorphismError> {
    if m.alphabet_size() != 3 {
        return Err(MorphismError::NotTernary(m.alphabet_size()));
    }
    match m.uniform_length() {
        None => return Err(MorphismError::NotUniform),
        Some(0) => return Err(MorphismError::EmptyImage),
        Some(_) => {}
    }
    let mut buf = Vec::new();
    Ok(short_squarefree_words(3).iter().all(|w| {
        buf.clear();
        for &a in w {
            buf.extend_from_slice(m.image(a).letters());
        }
        is_squarefree_slice(&buf)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Lexicographically least solution, visiting at most `node_budget`
    /// search nodes.
    First { node_budget: u64 },
    /// Every solution; limited to `k <= EXHAUSTIVE_MAX_K`.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(CyclicUniformMorphism),
    /// Every solution in lexicographic order; empty means none exist.
    All(Vec<CyclicUniformMorphism>),
    /// `First` mode stopped without a solution. This is not a claim that
    /// none exists.
    BudgetExhausted {
        nodes: u64,
    },
}

/// Depth-first search over `image0` in lexicographic order with
/// `image0[0] = 0`, pruning prefixes that contain a square (every prefix of
/// `image0` appears, rotated, inside some image of the test words).
/// `threads > 1` splits the tree by the second letter; the outcome does not
/// depend on `threads`.
pub fn search_cyclic_squarefree(k: usize, mode: SearchMode, threads: usize) -> Result<SearchOutcome, MorphismError> {
    if k == 0 {
        return Err(MorphismError::EmptyImage);
    }
    if mode == SearchMode::Exhaustive && k > EXHAUSTIVE_MAX_K {
        return Err(MorphismError::ExhaustiveTooLarge(k));
    }
    let budget = match mode {
        SearchMode::First { node_budget } => node_budget,
        SearchMode::Exhaustive => u64::MAX,
    };
    let collect_all = mode == SearchMode::Exhaustive;
    let roots: Vec<Vec<Letter>> = if k == 1 {
        vec![vec![0]]
    } else {
        vec![vec![0, 1], vec![0, 2]]
    };

    let results: Vec<Subtree> = if threads > 1 && roots.len() > 1 {
        std::thread::scope(|s| {
            let handles: Vec<_> = roots
                .iter()
                .map(|root| s.spawn(move || Subtree::search(k, root.clone(), budget, collect_all)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search thread panicked"))
                .collect()
        })
    } else {
        let mut out = Vec::new();
        let mut used = 0u64;
        for root in &roots {
            let r = Subtree::search(k, root.clone(), budget.saturating_sub(used), collect_all);
            used = used.saturating_add(r.nodes);
            let stop = !collect_all && r.first.is_some();
            out.push(r);
            if stop {
                break;
            }
        }
        out
    };

    if collect_all {
        let all = results.into_iter().flat_map(|r| r.solutions).collect();
        return Ok(SearchOutcome::All(all));
    }
    // Replay the sequential budget accounting over the subtrees in order.
    let mut used = 0u64;
    for r in results {
        if let Some((found, at)) = r.first {
            if used.saturating_add(at) <= budget {
                return Ok(SearchOutcome::Found(found));
            }
            return Ok(SearchOutcome::BudgetExhausted { nodes: budget });
        }
        used = used.saturating_add(r.nodes);
        if used >= budget {
            return Ok(SearchOutcome::BudgetExhausted { nodes: budget });
        }
    }
    Ok(SearchOutcome::BudgetExhausted { nodes: used })
}

struct Subtree {
    /// First solution and the node count at which it was reached.
    first: Option<(CyclicUniformMorphism, u64)>,
    solutions: Vec<CyclicUniformMorphism>,
    nodes: u64,
}

impl Subtree {
    fn search(k: usize, root: Vec<Letter>, budget: u64, collect_all: bool) -> Subtree {
        let mut st = Subtree {
            first: None,
            solutions: Vec::new(),
            nodes: 0,
        };
        let mut prefix = root;
        if is_squarefree_slice(&prefix) {
            st.dfs(k, &mut prefix, budget, collect_all);
        }
        st
    }

    /// Returns true to stop the search.
    fn dfs(&mut self, k: usize, prefix: &mut Vec<Letter>, budget: u64, collect_all: bool) -> bool {
        if self.nodes >= budget {
            return true;
        }
        self.nodes += 1;
        if prefix.len() == k {
            let c = CyclicUniformMorphism {
                image0: Word::from_raw(prefix.clone(), 3),
            };
            if c.is_squarefree() {
                if self.first.is_none() {
                    self.first = Some((c.clone(), self.nodes));
                }
                if !collect_all {
                    return true;
                }
                self.solutions.push(c);
            }
            return false;
        }
        for a in 0..3 {
            if prefix.last() == Some(&a) {
                continue;
            }
            prefix.push(a);
            if ends_squarefree(prefix) && self.dfs(k, prefix, budget, collect_all) {
                prefix.pop();
                return true;
            }
            prefix.pop();
        }
        false
    }
}

/// Given that `w[..len-1]` is squarefree, whether `w` is: only squares
/// ending at the last letter need checking.
fn ends_squarefree(w: &[Letter]) -> bool {
    let n = w.len();
    (1..=n / 2).all(|p| w[n - 2 * p..n - p] != w[n - p..])
}

/// `h(w)` for a squarefree ternary `w` and a squarefree cyclic `h`.
pub fn embed(w: &Word, c: &CyclicUniformMorphism) -> Result<Word, MorphismError> {
    let w = Word::new(w.letters().to_vec(), 3)?;
    if let Some(witness) = find_square(&w) {
        return Err(MorphismError::InputNotSquarefree(witness));
    }
    if !c.is_squarefree() {
        return Err(MorphismError::Uncertified(c.image0.clone()));
    }
    Ok(c.as_morphism().apply(&w)?)
}

/// A morphism as stored on disk:
/// ```text
/// k 5
/// image0 01210
/// certified no
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismRecord {
    pub morphism: CyclicUniformMorphism,
    pub certified: bool,
}

impl MorphismRecord {
    pub fn certify(morphism: CyclicUniformMorphism) -> Self {
        let certified = morphism.is_squarefree();
        Self { morphism, certified }
    }
}

impl fmt::Display for MorphismRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k {}", self.morphism.k())?;
        writeln!(f, "image0 {}", self.morphism.image0)?;
        writeln!(f, "certified {}", if self.certified { "yes" } else { "no" })
    }
}

impl FromStr for MorphismRecord {
    type Err = MorphismError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| MorphismError::Parse(m.to_string());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let mut field = |name: &str| -> Result<String, MorphismError> {
            let line = lines.next().ok_or_else(|| bad(&format!("missing `{name}` line")))?;
            match line.split_once(char::is_whitespace) {
                Some((key, value)) if key == name => Ok(value.trim().to_string()),
                _ => Err(bad(&format!("expected `{name} ...`, got {line:?}"))),
            }
        };
        let k: usize = field("k")?.parse().map_err(|_| bad("k is not a number"))?;
        let image0 = Word::ternary(&field("image0")?)?;
        let certified = match field("certified")?.as_str() {
            "yes" => true,
            "no" => false,
            other => return Err(bad(&format!("certified must be yes or no, got {other:?}"))),
        };
        if image0.len() != k {
            return Err(bad(&format!("image0 has length {} but k = {k}", image0.len())));
        }
        Ok(Self {
            morphism: CyclicUniformMorphism::new(image0)?,
            certified,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::vtm_prefix;
    use crate::oracles::{all_squarefree_words, naive_is_squarefree};
    use crate::progressions::subsequence_ap;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t(s: &str) -> Word {
        Word::ternary(s).unwrap()
    }

    /// Squarefree images of every squarefree word of length <= max_len.
    fn oracle_squarefree(m: &Morphism, max_len: usize) -> bool {
        (0..=max_len).all(|len| {
            all_squarefree_words(3, len).iter().all(|w| {
                let image: Vec<Letter> = w.iter().flat_map(|&a| m.image(a).letters().to_vec()).collect();
                naive_is_squarefree(&image)
            })
        })
    }

    fn first(k: usize) -> CyclicUniformMorphism {
        match search_cyclic_squarefree(
            k,
            SearchMode::First {
                node_budget: DEFAULT_NODE_BUDGET,
            },
            1,
        )
        .unwrap()
        {
            SearchOutcome::Found(c) => c,
            other => panic!("k = {k}: {other:?}"),
        }
    }

    #[test]
    fn sigma_rotates() {
        assert_eq!(sigma(&t("012"), 1).unwrap(), t("120"));
        let w = t("0210121");
        assert_eq!(sigma(&w, 3).unwrap(), w);
        assert_eq!(sigma(&sigma(&w, 1).unwrap(), 2).unwrap(), w);
        assert!(sigma(&Word::parse("03", 4).unwrap(), 1).is_err());
    }

    #[test]
    fn images_are_rotations() {
        let c = CyclicUniformMorphism::new(t("012")).unwrap();
        let m = c.as_morphism();
        assert_eq!(m.images(), &[t("012"), t("120"), t("201")]);
        let id = CyclicUniformMorphism::new(t("0")).unwrap();
        assert_eq!(id.as_morphism().images(), &[t("0"), t("1"), t("2")]);
        assert!(CyclicUniformMorphism::new(t("10")).is_err());
        assert!(CyclicUniformMorphism::new(t("")).is_err());
    }

    #[test]
    fn finite_criterion_small_cases() {
        let rot = CyclicUniformMorphism::new(t("012")).unwrap().as_morphism();
        assert!(!is_squarefree_morphism(&rot).unwrap());
        assert!(!naive_is_squarefree(rot.apply(&t("021")).unwrap().letters()));
        let id = CyclicUniformMorphism::new(t("0")).unwrap().as_morphism();
        assert!(is_squarefree_morphism(&id).unwrap());
        let sq = Morphism::new(vec![t("00"), t("12"), t("21")]).unwrap();
        assert!(!is_squarefree_morphism(&sq).unwrap());
        assert!(matches!(
            is_squarefree_morphism(&Morphism::vtm()),
            Err(MorphismError::NotUniform)
        ));
        assert!(matches!(
            is_squarefree_morphism(&Morphism::thue_morse()),
            Err(MorphismError::NotTernary(2))
        ));
    }

    #[test]
    fn search_k1_is_identity() {
        assert_eq!(first(1).image0(), &t("0"));
    }

    #[test]
    fn exhaustive_small_k_matches_enumeration() {
        for k in 1..=9 {
            let SearchOutcome::All(found) = search_cyclic_squarefree(k, SearchMode::Exhaustive, 1).unwrap() else {
                panic!()
            };
            // oracle: every completion of image0[0] = 0, tested on words of length <= 8
            let expected: Vec<CyclicUniformMorphism> = (0..3usize.pow(k as u32 - 1))
                .filter_map(|mut code| {
                    let mut letters = vec![0; k];
                    for slot in letters[1..].iter_mut().rev() {
                        *slot = (code % 3) as Letter;
                        code /= 3;
                    }
                    let c = CyclicUniformMorphism::new(Word::new(letters, 3).unwrap()).unwrap();
                    oracle_squarefree(&c.as_morphism(), 5).then_some(c)
                })
                .collect();
            assert_eq!(found, expected, "k = {k}");
        }
        assert!(matches!(
            search_cyclic_squarefree(14, SearchMode::Exhaustive, 1),
            Err(MorphismError::ExhaustiveTooLarge(14))
        ));
    }

    #[test]
    fn search_is_deterministic_across_threads() {
        for k in [11, 13, 23] {
            let mode = SearchMode::First {
                node_budget: DEFAULT_NODE_BUDGET,
            };
            let a = search_cyclic_squarefree(k, mode, 1).unwrap();
            let b = search_cyclic_squarefree(k, mode, 4).unwrap();
            assert_eq!(a, b, "k = {k}");
        }
        let a = search_cyclic_squarefree(12, SearchMode::Exhaustive, 1).unwrap();
        let b = search_cyclic_squarefree(12, SearchMode::Exhaustive, 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tiny_budget_is_not_a_nonexistence_claim() {
        let out = search_cyclic_squarefree(23, SearchMode::First { node_budget: 5 }, 1).unwrap();
        assert_eq!(out, SearchOutcome::BudgetExhausted { nodes: 5 });
        let par = search_cyclic_squarefree(23, SearchMode::First { node_budget: 5 }, 2).unwrap();
        assert_eq!(par, out);
    }

    #[test]
    fn k23_morphism_is_certified_and_embeds() {
        let c = first(23);
        assert_eq!(c.k(), 23);
        let m = c.as_morphism();
        for i in 0..3 {
            assert_eq!(m.image(i).len(), 23);
            assert_eq!(m.image(i)[0], i);
        }
        assert!(is_squarefree_morphism(&m).unwrap());
        assert!(oracle_squarefree(&m, 8));
        assert!(c.cross_check(CROSS_CHECK_LEN));

        let w = vtm_prefix(100);
        let v = embed(&w, &c).unwrap();
        assert_eq!(v.len(), 2300);
        assert!(naive_is_squarefree(v.letters()));
        assert_eq!(subsequence_ap(&v, 23, 0).unwrap(), w);
        assert_eq!(embed(&t("0"), &c).unwrap(), *c.image0());
    }

    #[test]
    fn cross_check_rejects_non_squarefree() {
        // 01 maps to 0112
        let c = CyclicUniformMorphism::new(t("01")).unwrap();
        assert!(!c.is_squarefree());
        assert!(!c.cross_check(3));
        assert_eq!(c.cross_check(8), oracle_squarefree(&c.as_morphism(), 8));
        assert!(CyclicUniformMorphism::new(t("0")).unwrap().cross_check(8));
    }

    #[test]
    fn embed_preconditions() {
        let c = first(23);
        assert!(matches!(embed(&t("00"), &c), Err(MorphismError::InputNotSquarefree(_))));
        assert!(embed(&t("010"), &c).is_ok());
        let bad = CyclicUniformMorphism::new(t("012")).unwrap();
        assert!(matches!(embed(&t("01"), &bad), Err(MorphismError::Uncertified(_))));
    }

    #[test]
    fn criterion_agrees_with_length8_oracle_on_random_candidates() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for k in [5, 11, 23] {
            // half the candidates use squarefree images so the criterion has
            // to look past single letters
            let mut candidates: Vec<Morphism> = (0..500)
                .map(|round| {
                    let images = (0..3)
                        .map(|_| {
                            let letters = if round % 2 == 0 {
                                random_squarefree(&mut rng, k)
                            } else {
                                (0..k).map(|_| rng.gen_range(0..3)).collect()
                            };
                            Word::new(letters, 3).unwrap()
                        })
                        .collect();
                    Morphism::new(images).unwrap()
                })
                .collect();
            if let SearchOutcome::Found(c) = search_cyclic_squarefree(
                k,
                SearchMode::First {
                    node_budget: DEFAULT_NODE_BUDGET,
                },
                1,
            )
            .unwrap()
            {
                candidates.push(c.as_morphism());
            }
            for m in &candidates {
                assert_eq!(
                    is_squarefree_morphism(m).unwrap(),
                    oracle_squarefree(m, 8),
                    "k = {k}, {m}"
                );
            }
        }
    }

    fn random_squarefree(rng: &mut ChaCha8Rng, k: usize) -> Vec<Letter> {
        loop {
            let mut w: Vec<Letter> = Vec::with_capacity(k);
            let mut stuck = false;
            while w.len() < k && !stuck {
                let start = rng.gen_range(0..3);
                stuck = true;
                for d in 0..3 {
                    w.push((start + d) % 3);
                    if ends_squarefree(&w) {
                        stuck = false;
                        break;
                    }
                    w.pop();
                }
            }
            if !stuck {
                return w;
            }
        }
    }

    #[test]
    fn record_format() {
        let rec = MorphismRecord::certify(first(23));
        let text = rec.to_string();
        assert!(text.starts_with("k 23\nimage0 0"));
        assert!(text.ends_with("certified yes\n"));
        assert_eq!(text.parse::<MorphismRecord>().unwrap(), rec);
        assert!("k 3\nimage0 0120\ncertified yes\n".parse::<MorphismRecord>().is_err());
        assert!("k 3\nimage0 012\ncertified maybe\n".parse::<MorphismRecord>().is_err());
        let rec = MorphismRecord::certify(CyclicUniformMorphism::new(t("012")).unwrap());
        assert!(!rec.certified);
    }
}
