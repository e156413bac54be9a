//! Bucket partitions, query plans and the multiset batch verifier.
//!
//! A plan answers a multiset of `t` coordinate queries by choosing one
//! recovery set per occurrence. Reads are globally disjoint across the plan
//! (a direct read occupies its coordinate like any other read), and each
//! bucket contributes at most `tau` reads.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::harness::{PlanSizeCount, Verdict, VerificationReport, REPORT_SCHEMA};
use crate::recovery::{RecoverySet, RecoverySource};
use crate::rng::SplitMix64;

/// Exhaustive verification refuses more multisets than this unless the
/// caller raises the budget.
pub const DEFAULT_EXHAUSTIVE_BUDGET: u128 = 1 << 21;

/// A partition of the coordinates `0..n` into buckets.
///
/// Buckets are kept sorted internally and ordered by their smallest element;
/// bucket ids refer to that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BucketPartition {
    n: usize,
    buckets: Vec<Vec<usize>>,
    assignment: Vec<usize>,
}

impl BucketPartition {
    pub fn new(n: usize, buckets: Vec<Vec<usize>>) -> Result<Self> {
        let mut buckets: Vec<Vec<usize>> = buckets
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        if buckets.iter().any(Vec::is_empty) {
            return Err(Error::InvalidPartition("empty bucket".into()));
        }
        buckets.sort_unstable_by_key(|b| b[0]);
        let mut assignment = vec![usize::MAX; n];
        for (id, b) in buckets.iter().enumerate() {
            for &i in b {
                if i >= n {
                    return Err(Error::InvalidPartition(format!("index {} exceeds n = {n}", i + 1)));
                }
                if assignment[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("index {} appears twice", i + 1)));
                }
                assignment[i] = id;
            }
        }
        if let Some(gap) = assignment.iter().position(|&a| a == usize::MAX) {
            return Err(Error::InvalidPartition(format!("index {} is in no bucket", gap + 1)));
        }
        Ok(BucketPartition {
            n,
            buckets,
            assignment,
        })
    }

    /// Every coordinate in its own bucket.
    pub fn singletons(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| vec![i]).collect()).expect("singletons partition")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.buckets.len()
    }

    pub fn buckets(&self) -> &[Vec<usize>] {
        &self.buckets
    }

    pub fn bucket_of(&self, i: usize) -> usize {
        self.assignment[i]
    }

    /// One bucket per line, 1-based indices separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.buckets {
            let line: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Inverse of [`to_text`](Self::to_text). Blank lines and lines starting
    /// with `#` are skipped; `n` is the largest index present.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut buckets = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bucket = line
                .split_whitespace()
                .map(|tok| match tok.parse::<usize>() {
                    Ok(0) | Err(_) => Err(Error::Parse {
                        line: no + 1,
                        msg: format!("expected a positive index, found {tok:?}"),
                    }),
                    Ok(v) => Ok(v - 1),
                })
                .collect::<Result<Vec<_>>>()?;
            buckets.push(bucket);
        }
        let n = buckets.iter().flatten().max().map_or(0, |&m| m + 1);
        Self::new(n, buckets)
    }
}

impl fmt::Display for BucketPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .buckets
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Buckets for `Hamming(s)`: the all-ones column alone, every other column
/// with its complement.
pub fn hamming_buckets(s: usize) -> Result<BucketPartition> {
    if !(2..=16).contains(&s) {
        return Err(Error::param(format!("Hamming buckets need 2 <= s <= 16, got {s}")));
    }
    // column j (1-based) is the binary expansion of j, so complements sum to 2^s - 1
    let all_ones = (1usize << s) - 1;
    let mut buckets: Vec<Vec<usize>> = (1..1usize << (s - 1))
        .map(|a| vec![a - 1, all_ones - a - 1])
        .collect();
    buckets.push(vec![all_ones - 1]);
    BucketPartition::new(all_ones, buckets)
}

/// The ten buckets for `RM(1,4)`.
pub fn rm14_buckets() -> BucketPartition {
    let one_based: [&[usize]; 10] = [
        &[1],
        &[2],
        &[3],
        &[4],
        &[5, 6],
        &[7, 8],
        &[9, 11],
        &[10, 12],
        &[13, 16],
        &[14, 15],
    ];
    let buckets = one_based
        .iter()
        .map(|b| b.iter().map(|i| i - 1).collect())
        .collect();
    BucketPartition::new(16, buckets).expect("fixed partition")
}

/// Partition of `0..2n` for a `(u | u+v)` code: `i + n` joins the bucket of `i`.
pub fn lift_buckets_uv(b: &BucketPartition) -> BucketPartition {
    let n = b.n();
    let buckets = b
        .buckets()
        .iter()
        .map(|bucket| bucket.iter().copied().chain(bucket.iter().map(|i| i + n)).collect())
        .collect();
    BucketPartition::new(2 * n, buckets).expect("lift of a partition")
}

/// Partition of `0..4n` with four shifted copies `B, B+n, B+2n, B+3n` of
/// every bucket.
pub fn lift_buckets_quad(b: &BucketPartition) -> BucketPartition {
    let n = b.n();
    let buckets = (0..4)
        .flat_map(|s| {
            b.buckets()
                .iter()
                .map(move |bucket| bucket.iter().map(|i| i + s * n).collect())
        })
        .collect();
    BucketPartition::new(4 * n, buckets).expect("lift of a partition")
}

/// Unions of `tau` consecutive buckets, giving `ceil(m / tau)` buckets.
pub fn merge_buckets(b: &BucketPartition, tau: usize) -> Result<BucketPartition> {
    if tau == 0 {
        return Err(Error::param("tau must be at least 1"));
    }
    let buckets = b.buckets().chunks(tau).map(|group| group.concat()).collect();
    BucketPartition::new(b.n(), buckets)
}

/// The tuple `(n, k, t, m, tau)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchParams {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub m: usize,
    pub tau: usize,
}

impl BatchParams {
    pub fn new(n: usize, k: usize, t: usize, m: usize, tau: usize) -> Result<Self> {
        if [n, k, t, m, tau].contains(&0) {
            return Err(Error::param("batch parameters must be positive"));
        }
        if m * tau < t {
            return Err(Error::param(format!("m * tau = {} cannot serve t = {t} reads", m * tau)));
        }
        Ok(BatchParams { n, k, t, m, tau })
    }
}

impl fmt::Display for BatchParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.n, self.k, self.t, self.m, self.tau)
    }
}

/// `(n, k, t, m, tau)` to `(n tau, k, t, m tau, 1)`.
pub fn split_code_tau(p: BatchParams) -> BatchParams {
    BatchParams {
        n: p.n * p.tau,
        m: p.m * p.tau,
        tau: 1,
        ..p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Optimality {
    pub bound: usize,
    /// `m tau >= bound`.
    pub satisfied: bool,
    pub met_with_equality: bool,
}

/// The lower bound `(t - 1) r + 1` on `m tau` for locality `r`.
pub fn optimality_check(p: BatchParams, r: usize) -> Result<Optimality> {
    if r == 0 {
        return Err(Error::param("locality must be at least 1"));
    }
    let bound = (p.t - 1) * r + 1;
    let m_tau = p.m * p.tau;
    Ok(Optimality {
        bound,
        satisfied: m_tau >= bound,
        met_with_equality: m_tau == bound,
    })
}

/// A multiset of `t` coordinates, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QueryMultiset {
    indices: Vec<usize>,
}

impl QueryMultiset {
    pub fn new(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::param("a query needs at least one index"));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::param(format!("query index {} is outside 1..={n}", bad + 1)));
        }
        indices.sort_unstable();
        Ok(QueryMultiset { indices })
    }

    /// From 1-based indices.
    pub fn from_one_based(n: usize, indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::param("query indices are 1-based"));
        }
        Self::new(n, indices.iter().map(|i| i - 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    pub fn t(&self) -> usize {
        self.indices.len()
    }
}

impl fmt::Display for QueryMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn binomial_exact(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by i + 1 at every step
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Number of size-`t` multisets over `n` symbols, `C(n + t - 1, t)`.
pub fn multiset_count(n: usize, t: usize) -> Option<u128> {
    if n == 0 {
        return Some((t == 0) as u128);
    }
    binomial_exact((n + t - 1) as u128, t as u128)
}

/// The multiset of lexicographic rank `rank` among sorted size-`t` tuples
/// over `0..n`, via the shift `a_j + j` to a strictly increasing tuple.
pub fn unrank_multiset(n: usize, t: usize, mut rank: u128) -> Vec<usize> {
    let big = n + t - 1;
    let mut out = Vec::with_capacity(t);
    let mut c = 0usize;
    for j in 0..t {
        loop {
            let after = binomial_exact((big - 1 - c) as u128, (t - j - 1) as u128).expect("count fits");
            if rank < after {
                break;
            }
            rank -= after;
            c += 1;
        }
        out.push(c - j);
        c += 1;
    }
    out
}

/// Advances a sorted tuple to its lexicographic successor.
pub fn next_multiset(n: usize, q: &mut [usize]) -> bool {
    let Some(pos) = q.iter().rposition(|&v| v + 1 < n) else {
        return false;
    };
    let v = q[pos] + 1;
    for x in &mut q[pos..] {
        *x = v;
    }
    true
}

/// One recovery set per query occurrence, in query order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryPlan {
    pub query: QueryMultiset,
    pub sets: Vec<RecoverySet>,
}

impl QueryPlan {
    /// Checks targets, global disjointness and the per-bucket budget.
    pub fn check(&self, buckets: &BucketPartition, tau: usize) -> Result<()> {
        if self.sets.len() != self.query.t() {
            return Err(Error::LengthMismatch {
                expected: self.query.t(),
                found: self.sets.len(),
            });
        }
        let mut used = vec![false; buckets.n()];
        let mut load = vec![0usize; buckets.m()];
        for (s, &target) in self.sets.iter().zip(self.query.indices()) {
            if s.target() != target {
                return Err(Error::param(format!("set for {} serves {}", target + 1, s.target() + 1)));
            }
            for &r in s.reads() {
                if r >= buckets.n() || std::mem::replace(&mut used[r], true) {
                    return Err(Error::param(format!("coordinate {} read twice", r + 1)));
                }
                load[buckets.bucket_of(r)] += 1;
            }
        }
        if let Some(b) = load.iter().position(|&l| l > tau) {
            return Err(Error::param(format!("bucket {} read {} times", b + 1, load[b])));
        }
        Ok(())
    }

    /// Reads per bucket.
    pub fn bucket_loads(&self, buckets: &BucketPartition) -> Vec<usize> {
        let mut load = vec![0; buckets.m()];
        for s in &self.sets {
            for &r in s.reads() {
                load[buckets.bucket_of(r)] += 1;
            }
        }
        load
    }

    pub fn total_reads(&self) -> usize {
        self.sets.iter().map(RecoverySet::size).sum()
    }
}

#[derive(Clone, Debug)]
struct Candidate {
    set: RecoverySet,
    reads: Vec<u32>,
    buckets: Vec<u32>,
}

/// Per-coordinate candidate recovery sets over a fixed partition and `tau`,
/// ready for plan search.
pub struct Planner {
    label: String,
    source: String,
    n: usize,
    k: usize,
    buckets: BucketPartition,
    tau: usize,
    candidates: Vec<Vec<Candidate>>,
}

impl Planner {
    /// Collects candidates for every coordinate. Sets that exceed `tau` on
    /// their own, and sets whose reads strictly contain another candidate's,
    /// can never be needed and are dropped.
    pub fn new(
        code: &LinearCode,
        buckets: &BucketPartition,
        tau: usize,
        source: &dyn RecoverySource,
    ) -> Result<Self> {
        let n = code.n();
        if buckets.n() != n || source.length() != n {
            return Err(Error::param(format!(
                "code length {n}, partition length {} and recovery source length {} differ",
                buckets.n(),
                source.length()
            )));
        }
        if tau == 0 {
            return Err(Error::param("tau must be at least 1"));
        }
        let candidates = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut sets = vec![RecoverySet::direct(i)];
                sets.extend(source.recovery_sets(i)?.into_iter().filter(|s| !s.is_direct()));
                Ok(prepare_candidates(sets, buckets, tau))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Planner {
            label: code.label().to_string(),
            source: source.describe(),
            n,
            k: code.k(),
            buckets: buckets.clone(),
            tau,
            candidates,
        })
    }

    pub fn buckets(&self) -> &BucketPartition {
        &self.buckets
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of candidates kept for coordinate `i`, direct read included.
    pub fn candidate_count(&self, i: usize) -> usize {
        self.candidates[i].len()
    }

    /// A plan for `query`, or `None` if no combination of candidates works.
    ///
    /// Occurrences are tried in order of fewest candidates; each tries its
    /// candidates in order (direct read, then by size, then by reads).
    /// Repeated targets take candidates in increasing position, which skips
    /// permutations of the same choice.
    pub fn find_plan(&self, query: &QueryMultiset) -> Option<QueryPlan> {
        let t = query.t();
        let mut order: Vec<usize> = (0..t).collect();
        order.sort_by_key(|&j| (self.candidates[query.indices()[j]].len(), query.indices()[j], j));
        let mut state = SearchState {
            used: vec![false; self.n],
            load: vec![0; self.buckets.m()],
            choice: vec![0; t],
        };
        if !self.search(query.indices(), &order, 0, &mut state) {
            return None;
        }
        let sets = (0..t)
            .map(|j| self.candidates[query.indices()[j]][state.choice[j]].set.clone())
            .collect();
        Some(QueryPlan {
            query: query.clone(),
            sets,
        })
    }

    fn search(&self, targets: &[usize], order: &[usize], depth: usize, st: &mut SearchState) -> bool {
        if depth == order.len() {
            return true;
        }
        let j = order[depth];
        let target = targets[j];
        let start = match depth.checked_sub(1).map(|d| order[d]) {
            Some(prev) if targets[prev] == target => st.choice[prev] + 1,
            _ => 0,
        };
        for (idx, cand) in self.candidates[target].iter().enumerate().skip(start) {
            if self.place(cand, st) {
                st.choice[j] = idx;
                if self.search(targets, order, depth + 1, st) {
                    return true;
                }
                self.unplace(cand, cand.reads.len(), st);
            }
        }
        false
    }

    fn place(&self, cand: &Candidate, st: &mut SearchState) -> bool {
        for (p, (&r, &b)) in cand.reads.iter().zip(&cand.buckets).enumerate() {
            let (r, b) = (r as usize, b as usize);
            if st.used[r] || st.load[b] as usize >= self.tau {
                self.unplace(cand, p, st);
                return false;
            }
            st.used[r] = true;
            st.load[b] += 1;
        }
        true
    }

    /// Reverts the first `placed` reads of `cand`.
    fn unplace(&self, cand: &Candidate, placed: usize, st: &mut SearchState) {
        for (&r, &b) in cand.reads.iter().zip(&cand.buckets).take(placed) {
            st.used[r as usize] = false;
            st.load[b as usize] -= 1;
        }
    }
}

struct SearchState {
    used: Vec<bool>,
    load: Vec<u32>,
    choice: Vec<usize>,
}

fn prepare_candidates(sets: Vec<RecoverySet>, buckets: &BucketPartition, tau: usize) -> Vec<Candidate> {
    let sets = crate::recovery::canonicalize(sets);
    let mut kept: Vec<Candidate> = Vec::with_capacity(sets.len());
    for set in sets {
        let mut load: BTreeMap<usize, usize> = BTreeMap::new();
        for &r in set.reads() {
            *load.entry(buckets.bucket_of(r)).or_default() += 1;
        }
        if load.values().any(|&l| l > tau) {
            continue;
        }
        // candidates arrive by size, so any subset of this one is already kept
        let dominated = kept
            .iter()
            .any(|c| c.set.size() < set.size() && is_subset(c.set.reads(), set.reads()));
        if dominated {
            continue;
        }
        kept.push(Candidate {
            reads: set.reads().iter().map(|&r| r as u32).collect(),
            buckets: set.reads().iter().map(|&r| buckets.bucket_of(r) as u32).collect(),
            set,
        });
    }
    kept
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// Convenience wrapper building a [`Planner`] for a single query.
pub fn find_plan(
    code: &LinearCode,
    buckets: &BucketPartition,
    query: &QueryMultiset,
    tau: usize,
    source: &dyn RecoverySource,
) -> Result<Option<QueryPlan>> {
    Ok(Planner::new(code, buckets, tau, source)?.find_plan(query))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub budget: u128,
    pub record_time: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            workers: None,
            budget: DEFAULT_EXHAUSTIVE_BUDGET,
            record_time: false,
        }
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    checked: u64,
    load_histogram: Vec<u64>,
    plan_sizes: BTreeMap<usize, u64>,
    bucket_totals: Vec<u64>,
    max_load: usize,
    first_failure: Option<Vec<usize>>,
}

impl Tally {
    fn new(m: usize, tau: usize) -> Self {
        Tally {
            load_histogram: vec![0; tau + 1],
            bucket_totals: vec![0; m],
            ..Default::default()
        }
    }

    fn record(&mut self, planner: &Planner, query: &[usize]) {
        self.checked += 1;
        let q = QueryMultiset {
            indices: query.to_vec(),
        };
        match planner.find_plan(&q) {
            Some(plan) => {
                let loads = plan.bucket_loads(&planner.buckets);
                for (b, &l) in loads.iter().enumerate() {
                    self.load_histogram[l] += 1;
                    self.bucket_totals[b] += l as u64;
                    self.max_load = self.max_load.max(l);
                }
                *self.plan_sizes.entry(plan.total_reads()).or_default() += 1;
            }
            None => {
                self.load_histogram[0] += planner.buckets.m() as u64;
                if self.first_failure.as_ref().is_none_or(|f| query < f.as_slice()) {
                    self.first_failure = Some(query.to_vec());
                }
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        for (a, b) in self.load_histogram.iter_mut().zip(&other.load_histogram) {
            *a += b;
        }
        for (a, b) in self.bucket_totals.iter_mut().zip(&other.bucket_totals) {
            *a += b;
        }
        for (size, count) in other.plan_sizes {
            *self.plan_sizes.entry(size).or_default() += count;
        }
        self.max_load = self.max_load.max(other.max_load);
        self.first_failure = match (self.first_failure, other.first_failure) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Draws a uniform size-`t` multiset over `0..n`.
pub fn sample_multiset(rng: &mut SplitMix64, n: usize, t: usize) -> Vec<usize> {
    let total = multiset_count(n, t).expect("count fits in u128");
    unrank_multiset(n, t, rng.below(total))
}

/// Checks every size-`t` multiset (or `count` seeded samples) for a plan.
///
/// Work is split into contiguous rank ranges; per-range tallies are merged
/// in range order, and the reported counterexample is the lexicographically
/// smallest failing query, so the report does not depend on the number of
/// workers.
pub fn verify_batch(planner: &Planner, t: usize, mode: Mode, options: VerifyOptions) -> Result<VerificationReport> {
    let started = Instant::now();
    let n = planner.n;
    let m = planner.buckets.m();
    let params = BatchParams::new(n, planner.k, t, m, planner.tau)?;
    let run = || -> Result<Tally> {
        match mode {
            Mode::Exhaustive => {
                let total = multiset_count(n, t).unwrap_or(u128::MAX);
                if total > options.budget {
                    return Err(Error::BudgetExceeded {
                        needed: total,
                        budget: options.budget,
                    });
                }
                let chunk = chunk_size(total as u64);
                let starts: Vec<u64> = (0..total as u64).step_by(chunk as usize).collect();
                Ok(starts
                    .into_par_iter()
                    .map(|start| {
                        let len = chunk.min(total as u64 - start);
                        let mut tally = Tally::new(m, planner.tau);
                        let mut q = unrank_multiset(n, t, start as u128);
                        for i in 0..len {
                            if i > 0 {
                                next_multiset(n, &mut q);
                            }
                            tally.record(planner, &q);
                        }
                        tally
                    })
                    .collect::<Vec<_>>()
                    .into_iter()
                    .fold(Tally::new(m, planner.tau), Tally::merge))
            }
            Mode::Sampled { count, seed } => {
                let mut rng = SplitMix64::new(seed);
                let samples: Vec<Vec<usize>> = (0..count).map(|_| sample_multiset(&mut rng, n, t)).collect();
                let chunk = chunk_size(count) as usize;
                Ok(samples
                    .par_chunks(chunk.max(1))
                    .map(|qs| {
                        let mut tally = Tally::new(m, planner.tau);
                        for q in qs {
                            tally.record(planner, q);
                        }
                        tally
                    })
                    .collect::<Vec<_>>()
                    .into_iter()
                    .fold(Tally::new(m, planner.tau), Tally::merge))
            }
        }
    };
    let tally = match options.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::param(format!("cannot start {w} workers: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let (mode_name, seed) = match mode {
        Mode::Exhaustive => ("exhaustive", None),
        Mode::Sampled { seed, .. } => ("sampled", Some(seed)),
    };
    Ok(VerificationReport {
        schema: REPORT_SCHEMA.to_string(),
        code: planner.label.clone(),
        source: planner.source.clone(),
        params,
        verdict: if tally.first_failure.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        counterexample: tally.first_failure.map(|q| q.iter().map(|i| i + 1).collect()),
        queries_checked: tally.checked,
        mode: mode_name.to_string(),
        seed,
        max_bucket_load: tally.max_load,
        load_histogram: tally.load_histogram,
        plan_size_histogram: tally
            .plan_sizes
            .into_iter()
            .map(|(reads, count)| PlanSizeCount { reads, count })
            .collect(),
        bucket_totals: tally.bucket_totals,
        wall_time_ms: options.record_time.then(|| started.elapsed().as_millis() as u64),
    })
}

fn chunk_size(total: u64) -> u64 {
    (total / 256).clamp(64, 1 << 14)
}
