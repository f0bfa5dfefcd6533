//! Moore partition refinement and canonical renumbering, shared by DFAOs and
//! multi-track automata. Transition tables are flat: `delta[q * alphabet + s]`.

use std::collections::HashMap;

/// Coarsest partition compatible with `seed` (output letter, or acceptance)
/// and closed under transitions. Class ids are dense but otherwise arbitrary.
pub(crate) fn refine(alphabet: usize, delta: &[u32], seed: &[u32]) -> Vec<u32> {
    let n = seed.len();
    let mut classes = renumber(seed.iter().map(|&c| vec![c]));
    let mut count = distinct(&classes);
    loop {
        let next = renumber((0..n).map(|q| {
            let mut sig = Vec::with_capacity(alphabet + 1);
            sig.push(classes[q]);
            sig.extend((0..alphabet).map(|s| classes[delta[q * alphabet + s] as usize]));
            sig
        }));
        let next_count = distinct(&next);
        classes = next;
        if next_count == count {
            return classes;
        }
        count = next_count;
    }
}

fn renumber(sigs: impl Iterator<Item = Vec<u32>>) -> Vec<u32> {
    let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
    sigs.map(|sig| {
        let next = ids.len() as u32;
        *ids.entry(sig).or_insert(next)
    })
    .collect()
}

fn distinct(classes: &[u32]) -> usize {
    classes.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
}

/// Quotient automaton in canonical form: states numbered in breadth-first
/// order from the initial class (initial = 0), symbols explored in
/// increasing order. Unreachable classes are dropped. Two automata
/// computing the same function have identical canonical forms.
pub(crate) struct Canonical {
    pub delta: Vec<u32>,
    /// An original state representing each new state.
    pub reps: Vec<u32>,
}

pub(crate) fn canonical_quotient(initial: u32, alphabet: usize, delta: &[u32], classes: &[u32]) -> Canonical {
    let mut index: HashMap<u32, u32> = HashMap::new();
    let mut reps = vec![initial];
    index.insert(classes[initial as usize], 0);
    let mut out = Vec::new();
    let mut head = 0;
    while head < reps.len() {
        let rep = reps[head] as usize;
        for s in 0..alphabet {
            let target = delta[rep * alphabet + s];
            let class = classes[target as usize];
            let id = *index.entry(class).or_insert_with(|| {
                reps.push(target);
                (reps.len() - 1) as u32
            });
            out.push(id);
        }
        head += 1;
    }
    Canonical { delta: out, reps }
}
