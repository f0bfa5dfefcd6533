//! Brute-force reference implementations. These are deliberately naive and
//! share no code with the algorithms they are used to check.

use crate::squares::SquareWitness;
use crate::word::Letter;

/// Tries every (position, period) pair in order.
pub fn naive_find_square(w: &[Letter]) -> Option<SquareWitness> {
    let n = w.len();
    for position in 0..n {
        for period in 1..=(n - position) / 2 {
            if (0..period).all(|j| w[position + j] == w[position + period + j]) {
                return Some(SquareWitness { position, period });
            }
        }
    }
    None
}

/// Length of the shortest prefix of `w` that contains a square, if any.
/// Since squarefreeness is inherited by prefixes, this answers the
/// squarefree question for every prefix of `w` at once.
pub fn shortest_square_prefix(w: &[Letter]) -> Option<usize> {
    for end in 2..=w.len() {
        for period in 1..=end / 2 {
            let start = end - 2 * period;
            if (0..period).all(|j| w[start + j] == w[start + period + j]) {
                return Some(end);
            }
        }
    }
    None
}

pub fn naive_is_squarefree(w: &[Letter]) -> bool {
    shortest_square_prefix(w).is_none()
}

/// All squarefree words of length exactly `len` over `{0, .., alphabet-1}`,
/// in lexicographic order, by filtering every word of that length.
pub fn all_squarefree_words(alphabet: u8, len: usize) -> Vec<Vec<Letter>> {
    let total = (alphabet as usize).pow(len as u32);
    let mut out = Vec::new();
    let mut w = vec![0; len];
    for mut code in 0..total {
        for slot in w.iter_mut().rev() {
            *slot = (code % alphabet as usize) as Letter;
            code /= alphabet as usize;
        }
        if naive_is_squarefree(&w) {
            out.push(w.clone());
        }
    }
    out
}

/// Positions `i` at which `factor` occurs in `w`, by direct comparison.
pub fn naive_occurrences(w: &[Letter], factor: &[Letter]) -> Vec<usize> {
    if factor.len() > w.len() {
        return Vec::new();
    }
    (0..=w.len() - factor.len())
        .filter(|&i| &w[i..i + factor.len()] == factor)
        .collect()
}

/// Thue–Morse letter: parity of the number of ones in binary.
pub fn thue_morse(n: u64) -> Letter {
    (n.count_ones() % 2) as Letter
}

/// A formula together with a direct evaluation of it. `values` follow the
/// sorted free-variable order; `vtm` must be long enough for every bounded
/// search the evaluation does (2^14 letters suffice for values below 2^7).
pub struct PredicateCase {
    pub formula: &'static str,
    pub vars: &'static [&'static str],
    pub eval: fn(vtm: &[Letter], values: &[u64]) -> bool,
}

fn at(v: &[Letter], n: u64) -> Letter {
    v[n as usize]
}

/// Quantified cases search for witnesses only below the prefix length.
pub fn predicate_cases() -> Vec<PredicateCase> {
    macro_rules! case {
        ($f:expr, [$($var:expr),*], |$v:ident, $x:ident| $body:expr) => {
            PredicateCase {
                formula: $f,
                vars: &[$($var),*],
                eval: |$v, $x| {
                    let _ = &$v;
                    $body
                },
            }
        };
    }
    vec![
        case!("i=j", ["i", "j"], |v, x| x[0] == x[1]),
        case!("i<j", ["i", "j"], |v, x| x[0] < x[1]),
        case!("i<=j+1", ["i", "j"], |v, x| x[0] <= x[1] + 1),
        case!("i+j=k", ["i", "j", "k"], |v, x| x[0] + x[1] == x[2]),
        case!("i+i=j", ["i", "j"], |v, x| 2 * x[0] == x[1]),
        case!("i+3=j+k", ["i", "j", "k"], |v, x| x[0] + 3 == x[1] + x[2]),
        case!("i!=j & j>=k", ["i", "j", "k"], |v, x| x[0] != x[1] && x[1] >= x[2]),
        case!("~(i<j) | k=5", ["i", "j", "k"], |v, x| x[0] >= x[1] || x[2] == 5),
        case!("i<j => j<k", ["i", "j", "k"], |v, x| x[0] >= x[1] || x[1] < x[2]),
        case!("i>=j & j>k", ["i", "j", "k"], |v, x| x[0] >= x[1] && x[1] > x[2]),
        case!("VTM[i]=@0", ["i"], |v, x| at(v, x[0]) == 0),
        case!("VTM[i+j]=@2", ["i", "j"], |v, x| at(v, x[0] + x[1]) == 2),
        case!("VTM[i]!=@1 & VTM[j]=@1", ["i", "j"], |v, x| at(v, x[0]) != 1
            && at(v, x[1]) == 1),
        case!("VTM[i]=@0 & VTM[i+1]=@2", ["i"], |v, x| at(v, x[0]) == 0
            && at(v, x[0] + 1) == 2),
        case!("VTM[i+j+k]=@1 | i+j+k<4", ["i", "j", "k"], |v, x| {
            let s = x[0] + x[1] + x[2];
            at(v, s) == 1 || s < 4
        }),
        case!("VTM[i]=@2 => VTM[i+i]=@2", ["i"], |v, x| at(v, x[0]) != 2
            || at(v, 2 * x[0]) == 2),
        case!("Ej j<i & VTM[j]=@1", ["i"], |v, x| (0..x[0]).any(|j| at(v, j) == 1)),
        case!("Aj j<i => VTM[j]!=@1", ["i"], |v, x| (0..x[0]).all(|j| at(v, j) != 1)),
        case!("Ej i=j+j", ["i"], |v, x| x[0] % 2 == 0),
        case!("Ej,k i=j+k+1 & j=k", ["i"], |v, x| x[0] % 2 == 1),
        case!("Ej j<3 & VTM[i+j]=@1", ["i"], |v, x| (0..3)
            .any(|j| at(v, x[0] + j) == 1)),
        case!("Ak k<j => VTM[i+k]!=@0", ["i", "j"], |v, x| (0..x[1])
            .all(|k| at(v, x[0] + k) != 0)),
        case!("Ei,j k=i+j & i<j", ["k"], |v, x| (0..=x[0])
            .any(|i| (0..=x[0]).any(|j| i + j == x[0] && i < j))),
        case!("Ei i<j & i>k", ["j", "k"], |v, x| (0..x[0]).any(|i| i > x[1])),
        case!("Ej (VTM[i+j]=@0 & VTM[i+j+1]=@0)", ["i"], |v, x| {
            (x[0] as usize..v.len() - 1).any(|n| v[n] == 0 && v[n + 1] == 0)
        }),
        case!(
            "Ei (VTM[i]=@0 & VTM[i+k]=@0)|(VTM[i]=@2 & VTM[i+k]=@2)",
            ["k"],
            |v, x| {
                let k = x[0] as usize;
                (0..v.len() - k).any(|i| v[i] == v[i + k] && v[i] != 1)
            }
        ),
    ]
}
