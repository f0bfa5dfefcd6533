//! Square detection in O(n log n).
//!
//! The word is split in half; squares inside either half are found
//! recursively and squares crossing the split are found with four
//! Z-function passes (Main–Lorentz). For a crossing square with half-length
//! `l` centred at a fixed position, the admissible start positions form an
//! interval, so only its least element is reported.

use crate::word::{Letter, Word};

/// A square `xx` occurring in a word: `word[position..position + period]`
/// equals `word[position + period..position + 2 * period]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareWitness {
    pub position: usize,
    pub period: usize,
}

impl SquareWitness {
    /// Checks the witness against `w` letter by letter.
    pub fn holds_in(&self, w: &[Letter]) -> bool {
        let p = self.period;
        p >= 1
            && self.position + 2 * p <= w.len()
            && w[self.position..self.position + p] == w[self.position + p..self.position + 2 * p]
    }
}

/// The square with least position, ties broken by least period.
pub fn find_square(w: &Word) -> Option<SquareWitness> {
    find_square_in(w.letters())
}

pub fn find_square_in(w: &[Letter]) -> Option<SquareWitness> {
    let mut best: Option<SquareWitness> = None;
    scan(w, 0, &mut |cand| {
        if best.is_none_or(|b| cand < b) {
            best = Some(cand);
        }
        false
    });
    best
}

pub fn is_squarefree(w: &Word) -> bool {
    is_squarefree_slice(w.letters())
}

pub fn is_squarefree_slice(w: &[Letter]) -> bool {
    !scan(w, 0, &mut |_| true)
}

/// Blocks at most this long are searched directly.
const SMALL: usize = 48;

/// Reports candidate squares of `s` (offset by `shift`) to `visit`.
/// Returns true as soon as `visit` asks to stop.
fn scan(s: &[Letter], shift: usize, visit: &mut impl FnMut(SquareWitness) -> bool) -> bool {
    let n = s.len();
    if n < 2 {
        return false;
    }
    if n <= SMALL {
        return match least_square_direct(s) {
            Some((position, period)) => visit(SquareWitness {
                position: shift + position,
                period,
            }),
            None => false,
        };
    }
    let nu = n / 2;
    let nv = n - nu;
    let (u, v) = s.split_at(nu);
    if scan(u, shift, visit) || scan(v, shift + nu, visit) {
        return true;
    }

    const SEP: Letter = Letter::MAX;
    let ru: Vec<Letter> = u.iter().rev().copied().collect();
    let rv: Vec<Letter> = v.iter().rev().copied().collect();

    let z1 = z_function(&ru);
    let z2 = z_function(&joined(v, u, SEP));
    let z3 = z_function(&joined(&ru, &rv, SEP));
    let z4 = z_function(v);
    let get = |z: &[u32], i: usize| z.get(i).map_or(0, |&x| x as usize);

    for centre in 0..n {
        let left = centre < nu;
        let (l, k1, k2) = if left {
            let l = nu - centre;
            (l, get(&z1, nu - centre), get(&z2, nv + 1 + centre))
        } else {
            let l = centre - nu + 1;
            (l, get(&z3, nu + 1 + nv - 1 - (centre - nu)), get(&z4, centre - nu + 1))
        };
        if k1 + k2 < l {
            continue;
        }
        // Split of the left half of the square into l1 letters before the
        // centre and l2 = l - l1 after; the start shrinks as l1 grows.
        let lo = 1.max(l.saturating_sub(k2));
        let mut hi = l.min(k1);
        if left && hi == l {
            hi -= 1;
        }
        if lo > hi {
            continue;
        }
        let position = if left {
            shift + centre - hi
        } else {
            shift + centre + 1 - l - hi
        };
        if visit(SquareWitness { position, period: l }) {
            return true;
        }
    }
    false
}

fn least_square_direct(s: &[Letter]) -> Option<(usize, usize)> {
    (0..s.len()).find_map(|i| {
        (1..=(s.len() - i) / 2)
            .find(|&p| s[i..i + p] == s[i + p..i + 2 * p])
            .map(|p| (i, p))
    })
}

fn joined(a: &[Letter], b: &[Letter], sep: Letter) -> Vec<Letter> {
    let mut out = Vec::with_capacity(a.len() + b.len() + 1);
    out.extend_from_slice(a);
    out.push(sep);
    out.extend_from_slice(b);
    out
}

/// `z[i]` is the length of the longest common prefix of `s` and `s[i..]`;
/// `z[0]` is 0.
fn z_function(s: &[Letter]) -> Vec<u32> {
    let n = s.len();
    let mut z = vec![0u32; n];
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        let mut k = if i < r { (r - i).min(z[i - l] as usize) } else { 0 };
        while i + k < n && s[k] == s[i + k] {
            k += 1;
        }
        z[i] = k as u32;
        if i + k > r {
            l = i;
            r = i + k;
        }
    }
    z
}
