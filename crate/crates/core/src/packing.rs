//! Exact maximum set packing by branch and bound.
//!
//! Used to compute availability: the largest family of pairwise-disjoint
//! recovery sets for one coordinate. Families are small (a few hundred sets
//! over at most a few hundred elements), so states are bitsets over the
//! candidate list and explored states are memoized with their best known
//! bound.

use std::collections::HashMap;

type Bits = Vec<u64>;

fn bits(len: usize) -> Bits {
    vec![0; len.div_ceil(64)]
}

#[inline]
fn set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

#[inline]
fn get(b: &Bits, i: usize) -> bool {
    (b[i / 64] >> (i % 64)) & 1 == 1
}

fn ones(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let t = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(w * 64 + t)
        })
    })
}

fn count(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

#[derive(Clone, Copy, Debug)]
enum Memo {
    Exact(usize),
    AtMost(usize),
}

/// Result of a packing search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    /// Indices into the candidate list, increasing.
    pub chosen: Vec<usize>,
    /// False when the node budget ran out; `chosen` is then only a lower bound.
    pub exact: bool,
}

struct Solver<'a> {
    sets: &'a [Vec<usize>],
    /// For each element, the candidate sets that contain it.
    by_element: Vec<Bits>,
    /// For each candidate, the candidates it conflicts with (itself included).
    conflicts: Vec<Bits>,
    min_size: usize,
    memo: HashMap<Bits, Memo>,
    exact_sets: HashMap<Bits, Vec<usize>>,
    nodes: u64,
    node_budget: u64,
    exhausted: bool,
}

impl<'a> Solver<'a> {
    fn new(sets: &'a [Vec<usize>], node_budget: u64) -> Self {
        let universe = sets.iter().flatten().copied().max().map_or(0, |m| m + 1);
        let mut by_element = vec![bits(sets.len()); universe];
        for (s, members) in sets.iter().enumerate() {
            for &e in members {
                set(&mut by_element[e], s);
            }
        }
        let conflicts = sets
            .iter()
            .map(|members| {
                let mut c = bits(sets.len());
                for &e in members {
                    for (w, x) in c.iter_mut().zip(&by_element[e]) {
                        *w |= x;
                    }
                }
                c
            })
            .collect();
        Solver {
            sets,
            by_element,
            conflicts,
            min_size: sets.iter().map(Vec::len).min().unwrap_or(1).max(1),
            memo: HashMap::new(),
            exact_sets: HashMap::new(),
            nodes: 0,
            node_budget,
            exhausted: false,
        }
    }

    fn upper_bound(&self, state: &Bits) -> usize {
        let mut covered = bits(self.by_element.len());
        for s in ones(state) {
            for &e in &self.sets[s] {
                set(&mut covered, e);
            }
        }
        count(state).min(count(&covered) / self.min_size)
    }

    /// Best packing from `state` with more than `lower` sets, if one exists.
    fn solve(&mut self, state: &Bits, lower: usize) -> Option<Vec<usize>> {
        if state.iter().all(|&w| w == 0) {
            return None;
        }
        match self.memo.get(state) {
            Some(&Memo::Exact(v)) => {
                return (v > lower).then(|| self.exact_sets[state].clone());
            }
            Some(&Memo::AtMost(v)) if v <= lower => return None,
            _ => {}
        }
        let bound = self.upper_bound(state);
        if bound <= lower {
            self.remember_bound(state, bound);
            return None;
        }
        self.nodes += 1;
        if self.nodes > self.node_budget {
            self.exhausted = true;
            return None;
        }

        // branch on the element contained in the fewest remaining candidates
        let mut pivot = None;
        let mut pivot_count = usize::MAX;
        for (e, holders) in self.by_element.iter().enumerate() {
            let c = holders.iter().zip(state).map(|(a, b)| (a & b).count_ones() as usize).sum();
            if c > 0 && c < pivot_count {
                pivot = Some(e);
                pivot_count = c;
            }
        }
        let pivot = pivot.expect("nonempty state covers some element");
        let holders: Vec<usize> = ones(state)
            .filter(|&s| get(&self.by_element[pivot], s))
            .collect();

        let mut best: Option<Vec<usize>> = None;
        let mut floor = lower;
        for s in holders {
            let rest: Bits = state
                .iter()
                .zip(&self.conflicts[s])
                .map(|(a, c)| a & !c)
                .collect();
            let sub = if floor == 0 {
                Some(self.solve(&rest, 0).unwrap_or_default())
            } else {
                self.solve(&rest, floor - 1)
            };
            if let Some(mut p) = sub {
                p.push(s);
                if p.len() > floor {
                    floor = p.len();
                    best = Some(p);
                }
            }
            if self.exhausted {
                return best;
            }
        }
        let without: Bits = state
            .iter()
            .zip(&self.by_element[pivot])
            .map(|(a, h)| a & !h)
            .collect();
        if let Some(p) = self.solve(&without, floor) {
            best = Some(p);
        }
        if self.exhausted {
            return best;
        }
        match &best {
            Some(p) if p.len() > lower => {
                self.memo.insert(state.clone(), Memo::Exact(p.len()));
                self.exact_sets.insert(state.clone(), p.clone());
            }
            _ => self.remember_bound(state, lower),
        }
        best
    }

    fn remember_bound(&mut self, state: &Bits, v: usize) {
        let entry = self.memo.entry(state.clone()).or_insert(Memo::AtMost(v));
        if let Memo::AtMost(old) = entry {
            *old = (*old).min(v);
        }
    }
}

/// Greedy packing in the given order; used as the initial incumbent.
pub fn greedy_packing(sets: &[Vec<usize>]) -> Vec<usize> {
    let mut used = std::collections::HashSet::new();
    let mut chosen = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        if s.iter().all(|e| !used.contains(e)) {
            used.extend(s.iter().copied());
            chosen.push(i);
        }
    }
    chosen
}

/// Maximum number of pairwise-disjoint sets, with a witness. The witness is
/// deterministic for a given input order.
pub fn max_packing(sets: &[Vec<usize>], node_budget: u64) -> Packing {
    let greedy = greedy_packing(sets);
    if sets.is_empty() {
        return Packing {
            chosen: Vec::new(),
            exact: true,
        };
    }
    let mut solver = Solver::new(sets, node_budget);
    let mut all = bits(sets.len());
    for i in 0..sets.len() {
        set(&mut all, i);
    }
    let found = solver.solve(&all, greedy.len());
    let mut chosen = match found {
        Some(p) if p.len() > greedy.len() => p,
        _ => greedy,
    };
    chosen.sort_unstable();
    Packing {
        chosen,
        exact: !solver.exhausted,
    }
}
