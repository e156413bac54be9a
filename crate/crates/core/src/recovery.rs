//! Recovery sets, locality and availability.
//!
//! Every recovery set except the direct read comes from a dual codeword
//! `λ` with `λ_i ≠ 0`: the parity equation `Σ λ_j c_j = 0` solves for `c_i`
//! in terms of the other coordinates in the support. Sets are normalized so
//! the target's implicit coefficient is `-1`, which makes
//! `c_target = Σ coeff_j · c_j`.
//!
//! For first-order Reed-Muller codes the dual words are characterized by the
//! evaluation points (`Σ λ_i P_i = 0` and `Σ λ_i = 0`), which gives a second,
//! enumeration-free route to the same sets. Both routes are kept and
//! cross-checked.

use std::collections::HashMap;

use crate::codes::{EvaluationPointSet, LinearCode};
use crate::error::{Error, Result};
use crate::field::{FieldVector, PrimeField, ENUMERATION_CAP};
use crate::packing;

/// Candidate families above this size are refused by [`availability_exact`].
pub const PACKING_CANDIDATE_CAP: usize = 5000;

/// Upper limit on column subsets examined by the support search.
const SUPPORT_SEARCH_LIMIT: u128 = 50_000_000;

/// A way to decode coordinate `target`: either a direct read, or a linear
/// combination of other coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecoverySet {
    target: usize,
    reads: Vec<usize>,
    coefficients: Vec<u32>,
}

impl RecoverySet {
    pub fn direct(target: usize) -> Self {
        RecoverySet {
            target,
            reads: vec![target],
            coefficients: Vec::new(),
        }
    }

    /// A non-direct set. `coefficients[j]` belongs to `reads[j]`; pairs are
    /// sorted by read index.
    pub fn new(target: usize, reads: Vec<usize>, coefficients: Vec<u32>) -> Result<Self> {
        if reads.is_empty() {
            return Err(Error::param("a recovery set reads at least one coordinate"));
        }
        if reads == [target] && coefficients.is_empty() {
            return Ok(Self::direct(target));
        }
        if reads.len() != coefficients.len() {
            return Err(Error::LengthMismatch {
                expected: reads.len(),
                found: coefficients.len(),
            });
        }
        if reads.contains(&target) {
            return Err(Error::param("a combining recovery set must not read its target"));
        }
        if coefficients.contains(&0) {
            return Err(Error::param("recovery coefficients must be nonzero"));
        }
        let mut pairs: Vec<(usize, u32)> = reads.into_iter().zip(coefficients).collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::param("duplicate read index"));
        }
        let (reads, coefficients) = pairs.into_iter().unzip();
        Ok(RecoverySet {
            target,
            reads,
            coefficients,
        })
    }

    /// Binary set: every coefficient is one.
    pub fn binary(target: usize, reads: Vec<usize>) -> Result<Self> {
        let ones = vec![1; reads.len()];
        Self::new(target, reads, ones)
    }

    /// The set obtained from dual word `lambda`, if `lambda[target] ≠ 0` and
    /// the word has other support.
    pub fn from_dual_word(field: PrimeField, lambda: &[u32], target: usize) -> Option<Self> {
        let lt = *lambda.get(target)?;
        if lt == 0 {
            return None;
        }
        let scale = field.neg(field.inv(lt).ok()?);
        let mut reads = Vec::new();
        let mut coefficients = Vec::new();
        for (j, &l) in lambda.iter().enumerate() {
            if j != target && l != 0 {
                reads.push(j);
                coefficients.push(field.mul(l, scale));
            }
        }
        if reads.is_empty() {
            return None;
        }
        Some(RecoverySet {
            target,
            reads,
            coefficients,
        })
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn reads(&self) -> &[usize] {
        &self.reads
    }

    /// Empty for a direct read.
    pub fn coefficients(&self) -> &[u32] {
        &self.coefficients
    }

    pub fn is_direct(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Number of coordinates read.
    pub fn size(&self) -> usize {
        self.reads.len()
    }

    /// Value of the target computed from `codeword`.
    pub fn decode(&self, field: PrimeField, codeword: &[u32]) -> u32 {
        if self.is_direct() {
            return codeword[self.target];
        }
        self.reads
            .iter()
            .zip(&self.coefficients)
            .fold(0, |acc, (&j, &c)| field.add(acc, field.mul(c, codeword[j])))
    }

    /// The dual word behind the set: `-1` at the target, the coefficients on
    /// the reads. `None` for a direct read.
    pub fn dual_vector(&self, field: PrimeField, n: usize) -> Option<FieldVector> {
        if self.is_direct() {
            return None;
        }
        let mut v = vec![0u32; n];
        v[self.target] = field.neg(1);
        for (&j, &c) in self.reads.iter().zip(&self.coefficients) {
            v[j] = c % field.modulus();
        }
        Some(FieldVector::new(field, v).expect("reduced"))
    }

    /// Whether the set decodes its target on every codeword of `code`.
    pub fn is_valid_for(&self, code: &LinearCode) -> Result<bool> {
        let n = code.n();
        if self.target >= n || self.reads.iter().any(|&j| j >= n) {
            return Ok(false);
        }
        match self.dual_vector(code.field(), n) {
            None => Ok(true),
            Some(lambda) => Ok(code.generator().mul_vec(&lambda)?.iter().all(|&e| e == 0)),
        }
    }

    /// Same set with every index moved by `offset`.
    pub fn shifted(&self, offset: usize) -> RecoverySet {
        RecoverySet {
            target: self.target + offset,
            reads: self.reads.iter().map(|&j| j + offset).collect(),
            coefficients: self.coefficients.clone(),
        }
    }

    /// Candidate order: direct read first, then by size, then by reads.
    pub fn order_key(&self) -> (bool, usize, &[usize], &[u32]) {
        (!self.is_direct(), self.reads.len(), &self.reads, &self.coefficients)
    }
}

/// Sorts into candidate order and keeps one set per read set.
pub fn canonicalize(mut sets: Vec<RecoverySet>) -> Vec<RecoverySet> {
    sets.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
    sets.dedup_by(|a, b| a.reads == b.reads);
    sets
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

fn enumeration_cost(code: &LinearCode) -> Option<u128> {
    let r = code.n() - code.k();
    (r <= ENUMERATION_CAP).then(|| (code.q() as u128).pow(r as u32))
}

fn support_search_cost(code: &LinearCode, weight_cap: usize) -> u128 {
    let n = code.n();
    let binary = code.field().is_binary() && code.k() <= 64;
    (2..=weight_cap.min(n))
        .map(|w| {
            // binary search looks up the last element instead of iterating it
            let free = if binary { w.saturating_sub(2) } else { w - 1 };
            binomial_u128(n - 1, free)
        })
        .fold(0u128, u128::saturating_add)
}

/// All recovery sets for coordinate `target` coming from dual words of
/// weight at most `weight_cap`, deduplicated by read set, in candidate order.
///
/// Enumerates the dual code when that is cheaper, and otherwise searches
/// column subsets of the generator for dependencies of full support.
pub fn recovery_sets_generic(
    code: &LinearCode,
    target: usize,
    weight_cap: usize,
) -> Result<Vec<RecoverySet>> {
    if target >= code.n() {
        return Err(Error::param(format!(
            "coordinate {} is outside 1..={}",
            target + 1,
            code.n()
        )));
    }
    let search = support_search_cost(code, weight_cap);
    match enumeration_cost(code) {
        Some(e) if e <= search => recovery_sets_by_enumeration(code, target, weight_cap),
        _ if search <= SUPPORT_SEARCH_LIMIT => recovery_sets_by_support(code, target, weight_cap),
        _ => Err(Error::EnumerationCap {
            dim: code.n() - code.k(),
            cap: ENUMERATION_CAP,
        }),
    }
}

/// Route 1: enumerate dual codewords of weight at most `weight_cap`.
pub fn recovery_sets_by_enumeration(
    code: &LinearCode,
    target: usize,
    weight_cap: usize,
) -> Result<Vec<RecoverySet>> {
    let field = code.field();
    let mut sets = Vec::new();
    let cap = weight_cap;
    code.parity().for_each_codeword(|w| {
        if w[target] != 0 {
            let weight = w.iter().filter(|&&e| e != 0).count();
            if weight <= cap {
                sets.extend(RecoverySet::from_dual_word(field, w, target));
            }
        }
        true
    })?;
    Ok(canonicalize(sets))
}

/// Route 2: search supports through `target` directly on the generator.
pub fn recovery_sets_by_support(
    code: &LinearCode,
    target: usize,
    weight_cap: usize,
) -> Result<Vec<RecoverySet>> {
    let mut sets = Vec::new();
    for w in 2..=weight_cap.min(code.n()) {
        sets.extend(supports_through(code, target, w, false));
    }
    Ok(canonicalize(sets))
}

/// Recovery sets from dual words of weight exactly `weight` through `target`.
fn supports_through(
    code: &LinearCode,
    target: usize,
    weight: usize,
    first_only: bool,
) -> Vec<RecoverySet> {
    if code.field().is_binary() && code.k() <= 64 {
        binary_supports_through(code, target, weight, first_only)
    } else {
        generic_supports_through(code, target, weight, first_only)
    }
}

/// Over GF(2) the indicator of `T` is a dual word iff the generator columns
/// indexed by `T` sum to zero.
fn binary_supports_through(
    code: &LinearCode,
    target: usize,
    weight: usize,
    first_only: bool,
) -> Vec<RecoverySet> {
    let g = code.generator();
    let n = code.n();
    let cols: Vec<u64> = (0..n)
        .map(|c| (0..g.row_count()).fold(0u64, |acc, r| acc | (g.get(r, c) as u64) << r))
        .collect();
    let mut by_value: HashMap<u64, Vec<usize>> = HashMap::new();
    for (j, &v) in cols.iter().enumerate() {
        if j != target {
            by_value.entry(v).or_default().push(j);
        }
    }
    let others: Vec<usize> = (0..n).filter(|&j| j != target).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(weight);
    fn walk(
        others: &[usize],
        start: usize,
        remaining: usize,
        acc: u64,
        chosen: &mut Vec<usize>,
        cols: &[u64],
        by_value: &HashMap<u64, Vec<usize>>,
        target: usize,
        first_only: bool,
        out: &mut Vec<RecoverySet>,
    ) -> bool {
        if remaining == 1 {
            let after = chosen.last().copied();
            if let Some(js) = by_value.get(&acc) {
                for &j in js {
                    if after.is_some_and(|a| j <= a) {
                        continue;
                    }
                    let mut reads = chosen.clone();
                    reads.push(j);
                    out.push(RecoverySet::binary(target, reads).expect("distinct reads"));
                    if first_only {
                        return true;
                    }
                }
            }
            return false;
        }
        for idx in start..others.len() {
            let j = others[idx];
            chosen.push(j);
            let done = walk(
                others,
                idx + 1,
                remaining - 1,
                acc ^ cols[j],
                chosen,
                cols,
                by_value,
                target,
                first_only,
                out,
            );
            chosen.pop();
            if done {
                return true;
            }
        }
        false
    }
    walk(
        &others,
        0,
        weight - 1,
        cols[target],
        &mut chosen,
        &cols,
        &by_value,
        target,
        first_only,
        &mut out,
    );
    out
}

fn generic_supports_through(
    code: &LinearCode,
    target: usize,
    weight: usize,
    first_only: bool,
) -> Vec<RecoverySet> {
    let field = code.field();
    let g = code.generator();
    let n = code.n();
    let others: Vec<usize> = (0..n).filter(|&j| j != target).collect();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..weight - 1).collect();
    if weight - 1 > others.len() {
        return out;
    }
    loop {
        let mut cols = vec![target];
        cols.extend(idx.iter().map(|&i| others[i]));
        let ns = g.select_columns(&cols).null_space();
        if ns.row_count() > 0 {
            let mut best: Option<RecoverySet> = None;
            let _ = ns.for_each_codeword(|v| {
                if v.iter().all(|&e| e != 0) {
                    let mut lambda = vec![0u32; n];
                    for (&c, &e) in cols.iter().zip(v) {
                        lambda[c] = e;
                    }
                    let set = RecoverySet::from_dual_word(field, &lambda, target)
                        .expect("full support through target");
                    if best.as_ref().is_none_or(|b| set < *b) {
                        best = Some(set);
                    }
                }
                true
            });
            if let Some(set) = best {
                out.push(set);
                if first_only {
                    return out;
                }
            }
        }
        // next combination of `weight - 1` positions in lexicographic order
        let k = idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < others.len() - (k - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Whether `lambda` is a dual word of `RM_q(1, mu)` by the point criterion:
/// `Σ λ_i P_i = 0` and `Σ λ_i = 0`.
pub fn rm1_dual_membership(lambda: &FieldVector, pts: &EvaluationPointSet) -> Result<bool> {
    if lambda.len() != pts.len() {
        return Err(Error::LengthMismatch {
            expected: pts.len(),
            found: lambda.len(),
        });
    }
    let f = pts.field();
    if lambda.field() != f {
        return Err(Error::ModulusMismatch {
            left: f.modulus(),
            right: lambda.field().modulus(),
        });
    }
    let mut total = 0;
    let mut point_sum = vec![0u32; pts.mu()];
    for (i, &l) in lambda.entries().iter().enumerate() {
        if l == 0 {
            continue;
        }
        total = f.add(total, l);
        for (s, &x) in point_sum.iter_mut().zip(pts.point(i)) {
            *s = f.add(*s, f.mul(l, x));
        }
    }
    Ok(total == 0 && point_sum.iter().all(|&s| s == 0))
}

/// Minimum-weight recovery sets of `RM_q(1, mu)` straight from point
/// arithmetic. For `q = 2` these are the triples `{b, c, d}` with
/// `P_b + P_c + P_d = P_target`; for odd `q` the pairs `{b, c}` with
/// `P_c = (α+1)^{-1}(P_target + α P_b)`, `α ∉ {0, -1}`.
pub fn recovery_sets_rm1_points(q: u32, mu: usize, target: usize) -> Result<Vec<RecoverySet>> {
    let field = PrimeField::new(q)?;
    let pts = EvaluationPointSet::new(field, mu)?;
    let n = pts.len();
    if target >= n {
        return Err(Error::param(format!("coordinate {} is outside 1..={n}", target + 1)));
    }
    let mut sets = Vec::new();
    if field.is_binary() {
        // point index bits are the coordinates, so point addition is XOR
        for b in 0..n {
            if b == target {
                continue;
            }
            for c in b + 1..n {
                if c == target {
                    continue;
                }
                let d = target ^ b ^ c;
                if d > c {
                    sets.push(RecoverySet::binary(target, vec![b, c, d])?);
                }
            }
        }
        return Ok(canonicalize(sets));
    }
    let pa = pts.point(target);
    for b in 0..n {
        if b == target {
            continue;
        }
        let pb = pts.point(b);
        for alpha in 1..q - 1 {
            let scale = field.inv(alpha + 1)?;
            let pc: Vec<u32> = pa
                .iter()
                .zip(pb)
                .map(|(&x, &y)| field.mul(scale, field.add(x, field.mul(alpha, y))))
                .collect();
            let c = pts.index_of(&pc);
            sets.push(RecoverySet::new(
                target,
                vec![b, c],
                vec![field.neg(alpha), alpha + 1],
            )?);
        }
    }
    Ok(canonicalize(sets))
}

/// Smallest weight of a dual word through each coordinate, or `None` where no
/// dual word has that coordinate in its support.
fn min_dual_weight_per_coordinate(code: &LinearCode, start: usize) -> Result<Vec<Option<usize>>> {
    let n = code.n();
    if let Some(cost) = enumeration_cost(code) {
        if cost <= 1 << 20 {
            let mut best = vec![None::<usize>; n];
            code.parity().for_each_codeword(|w| {
                let weight = w.iter().filter(|&&e| e != 0).count();
                for (j, &e) in w.iter().enumerate() {
                    if e != 0 && best[j].is_none_or(|b| weight < b) {
                        best[j] = Some(weight);
                    }
                }
                true
            })?;
            return Ok(best);
        }
    }
    let g = code.generator();
    let k = code.k();
    (0..n)
        .map(|i| {
            // a dual word through i exists iff column i is spanned by the others
            let rest: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            if g.select_columns(&rest).rank() < k {
                return Ok(None);
            }
            for w in start.max(2)..=n {
                if support_search_cost(code, w) > SUPPORT_SEARCH_LIMIT {
                    return Err(Error::EnumerationCap {
                        dim: n - k,
                        cap: ENUMERATION_CAP,
                    });
                }
                if !supports_through(code, i, w, true).is_empty() {
                    return Ok(Some(w));
                }
            }
            Ok(None)
        })
        .collect()
}

/// All-symbol locality: the largest, over coordinates, of the smallest
/// recovery set size. When every coordinate lies on a minimum-weight dual
/// word this is `d' - 1` with `d'` the dual minimum distance.
///
/// Fails with [`Error::UncoveredCoordinate`] if some coordinate is not in the
/// support of any dual word, i.e. it cannot be recovered from the others.
pub fn locality(code: &LinearCode) -> Result<usize> {
    let n = code.n();
    if code.k() == n {
        return Err(Error::UncoveredCoordinate(0));
    }
    if code.k() == 0 {
        return Err(Error::param("the zero code has no recoverable symbols"));
    }
    let d_dual = code.dual().min_distance()?;
    let per = min_dual_weight_per_coordinate(code, d_dual)?;
    let mut worst = 0;
    for (i, w) in per.into_iter().enumerate() {
        match w {
            None => return Err(Error::UncoveredCoordinate(i)),
            Some(w) => worst = worst.max(w),
        }
    }
    Ok(worst - 1)
}

/// Pairwise-disjoint recovery sets for one coordinate, each of size at most
/// `size_bound`. Direct reads never appear here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvailabilityCertificate {
    pub target: usize,
    pub sets: Vec<RecoverySet>,
    pub size_bound: usize,
}

impl AvailabilityCertificate {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Checks the structural invariants, and validity against `code` if given.
    pub fn check(&self, code: Option<&LinearCode>) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for s in &self.sets {
            if s.is_direct() || s.target() != self.target {
                return Err(Error::param("certificate holds a foreign or direct set"));
            }
            if s.size() > self.size_bound {
                return Err(Error::param(format!(
                    "set of size {} exceeds bound {}",
                    s.size(),
                    self.size_bound
                )));
            }
            for &j in s.reads() {
                if j == self.target || !seen.insert(j) {
                    return Err(Error::param(format!("coordinate {} reused", j + 1)));
                }
            }
            if let Some(code) = code {
                if !s.is_valid_for(code)? {
                    return Err(Error::param("set does not decode its target"));
                }
            }
        }
        Ok(())
    }
}

/// Maximum number of disjoint recovery sets of size at most `r` for
/// `target`, by exact set packing.
pub fn availability_exact(code: &LinearCode, target: usize, r: usize) -> Result<AvailabilityCertificate> {
    let (cert, exact) = availability_search(code, target, r, u64::MAX)?;
    debug_assert!(exact);
    Ok(cert)
}

/// Like [`availability_exact`] but gives up after `node_budget` search
/// nodes. The flag says whether the result is proven maximal.
pub fn availability_search(
    code: &LinearCode,
    target: usize,
    r: usize,
    node_budget: u64,
) -> Result<(AvailabilityCertificate, bool)> {
    if r == 0 {
        return Err(Error::param("r must be at least 1"));
    }
    let candidates = recovery_sets_generic(code, target, r + 1)?;
    if candidates.len() > PACKING_CANDIDATE_CAP {
        return Err(Error::CandidateCap {
            count: candidates.len(),
            cap: PACKING_CANDIDATE_CAP,
        });
    }
    let families: Vec<Vec<usize>> = candidates.iter().map(|s| s.reads().to_vec()).collect();
    let packing = packing::max_packing(&families, node_budget);
    let cert = AvailabilityCertificate {
        target,
        sets: packing.chosen.iter().map(|&i| candidates[i].clone()).collect(),
        size_bound: r,
    };
    Ok((cert, packing.exact))
}

/// Three 0-based point indices of `F_2^mu` (bit `j` of an index is `x_{j+1}`).
pub type PointTriple = [usize; 3];

fn check_mu(mu: usize) -> Result<()> {
    if mu > 24 {
        return Err(Error::param(format!("mu = {mu} is too large")));
    }
    Ok(())
}

/// Appends coordinates `(a, b)` as the two new most significant bits.
#[inline]
fn extend_point(p: usize, a: usize, b: usize, shift: usize) -> usize {
    p | a << shift | b << (shift + 1)
}

/// The four triples obtained from one zero-sum triple when two coordinates
/// are appended.
fn fourfold(t: PointTriple, shift: usize) -> [PointTriple; 4] {
    let [s1, s2, s3] = t;
    let e = |p, a, b| extend_point(p, a, b, shift);
    [
        [e(s1, 0, 0), e(s2, 0, 0), e(s3, 0, 0)],
        [e(s1, 1, 0), e(s2, 0, 1), e(s3, 1, 1)],
        [e(s1, 0, 1), e(s2, 1, 1), e(s3, 1, 0)],
        [e(s1, 1, 1), e(s2, 1, 0), e(s3, 0, 1)],
    ]
}

fn sorted(mut t: PointTriple) -> PointTriple {
    t.sort_unstable();
    t
}

/// `(2^mu - 1) / 3` disjoint zero-sum triples covering every nonzero point of
/// `F_2^mu`, for even `mu`.
pub fn availability_construct_even(mu: usize) -> Result<Vec<PointTriple>> {
    check_mu(mu)?;
    if mu < 2 || mu % 2 == 1 {
        return Err(Error::param(format!("even construction needs even mu >= 2, got {mu}")));
    }
    if mu == 2 {
        return Ok(vec![[1, 2, 3]]);
    }
    let shift = mu - 2;
    let mut out: Vec<PointTriple> = availability_construct_even(mu - 2)?
        .into_iter()
        .flat_map(|t| fourfold(t, shift))
        .map(sorted)
        .collect();
    let e = |a, b| extend_point(0, a, b, shift);
    out.push(sorted([e(1, 1), e(1, 0), e(0, 1)]));
    Ok(out)
}

/// Zero-sum triples for odd `mu`, plus the nonzero points left unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddConstruction {
    pub triples: Vec<PointTriple>,
    pub unused: Vec<usize>,
}

/// At least `(2^mu - 4) / 4` disjoint zero-sum triples for odd `mu >= 3`,
/// leaving at least three nonzero points unused.
pub fn availability_construct_odd(mu: usize) -> Result<OddConstruction> {
    check_mu(mu)?;
    if mu < 3 || mu % 2 == 0 {
        return Err(Error::param(format!("odd construction needs odd mu >= 3, got {mu}")));
    }
    let triples = if mu == 3 {
        vec![[1, 2, 3]]
    } else {
        let prev = availability_construct_odd(mu - 2)?;
        let shift = mu - 2;
        let mut out: Vec<PointTriple> = prev
            .triples
            .iter()
            .flat_map(|&t| fourfold(t, shift))
            .map(sorted)
            .collect();
        let [t1, t2, t3] = [prev.unused[0], prev.unused[1], prev.unused[2]];
        let e = |p, a, b| extend_point(p, a, b, shift);
        out.push(sorted([e(0, 1, 0), e(t1, 0, 1), e(t1, 1, 1)]));
        out.push(sorted([e(0, 0, 1), e(t2, 1, 1), e(t2, 1, 0)]));
        out.push(sorted([e(0, 1, 1), e(t3, 1, 0), e(t3, 0, 1)]));
        out
    };
    let mut used = vec![false; 1 << mu];
    for t in &triples {
        for &p in t {
            used[p] = true;
        }
    }
    let unused = (1..1usize << mu).filter(|&p| !used[p]).collect();
    Ok(OddConstruction { triples, unused })
}

/// Turns zero-sum triples into a certificate for coordinate `target` of
/// `RM(1, mu)` by translating every point by `P_target`.
pub fn rm1_certificate_from_triples(target: usize, triples: &[PointTriple]) -> AvailabilityCertificate {
    let sets = triples
        .iter()
        .map(|t| RecoverySet::binary(target, t.iter().map(|&p| p ^ target).collect()).expect("nonzero points"))
        .collect();
    AvailabilityCertificate {
        target,
        sets,
        size_bound: 3,
    }
}

/// Constructive availability of `RM(1, mu)` at `target`: the even or odd
/// triple construction, translated.
pub fn rm1_constructive_certificate(mu: usize, target: usize) -> Result<AvailabilityCertificate> {
    if target >= 1 << mu {
        return Err(Error::param(format!("coordinate {} is outside 1..={}", target + 1, 1 << mu)));
    }
    let triples = if mu % 2 == 0 {
        availability_construct_even(mu)?
    } else {
        availability_construct_odd(mu)?.triples
    };
    Ok(rm1_certificate_from_triples(target, &triples))
}

/// `⌊(q^mu - 1)/2⌋` disjoint pairs recovering `target` in `RM_q(1, mu)`,
/// odd `q`. Each pair `{b, c}` satisfies `P_c = (α+1)^{-1}(P_a + α P_b)` with
/// `α = -1/2`, i.e. `P_c = 2 P_a - P_b`, which pairs the points off exactly.
pub fn availability_construct_qary(q: u32, mu: usize, target: usize) -> Result<AvailabilityCertificate> {
    let field = PrimeField::new(q)?;
    if field.is_binary() {
        return Err(Error::param("the pairing construction needs odd q"));
    }
    let pts = EvaluationPointSet::new(field, mu)?;
    let n = pts.len();
    if target >= n {
        return Err(Error::param(format!("coordinate {} is outside 1..={n}", target + 1)));
    }
    let alpha = field.neg(field.inv(2)?);
    let scale = field.inv(field.add(alpha, 1))?;
    let pa = pts.point(target).to_vec();
    let mut used = vec![false; n];
    used[target] = true;
    let mut sets = Vec::new();
    for b in 0..n {
        if used[b] {
            continue;
        }
        let pc: Vec<u32> = pa
            .iter()
            .zip(pts.point(b))
            .map(|(&x, &y)| field.mul(scale, field.add(x, field.mul(alpha, y))))
            .collect();
        let c = pts.index_of(&pc);
        debug_assert!(!used[c] && c != b);
        used[b] = true;
        used[c] = true;
        sets.push(RecoverySet::new(
            target,
            vec![b, c],
            vec![field.neg(alpha), field.add(alpha, 1)],
        )?);
    }
    Ok(AvailabilityCertificate {
        target,
        sets,
        size_bound: 2,
    })
}

/// Lifts recovery sets of a length-`n` binary code into quarter `quarter` of
/// the length-`4n` code whose dual contains `(a|a|0|0)`, `(a|0|a|0)`, ... for
/// every dual word `a` of the base.
///
/// A direct read moves into the quarter. Any other set `R` for `i` becomes,
/// for each partner quarter `s' ≠ quarter`, the set reading `R + quarter·n`
/// together with `(R ∪ {i}) + s'·n`; one set per partner, partners ascending.
pub fn lift_recovery_sets(sets: &[RecoverySet], n: usize, quarter: usize) -> Result<Vec<RecoverySet>> {
    if quarter > 3 {
        return Err(Error::param(format!("quarter {quarter} is outside 0..=3")));
    }
    let mut out = Vec::new();
    for s in sets {
        if s.is_direct() {
            out.push(s.shifted(quarter * n));
            continue;
        }
        if s.coefficients().iter().any(|&c| c != 1) {
            return Err(Error::param("quarter lifting is defined for binary recovery sets"));
        }
        for partner in (0..4).filter(|&p| p != quarter) {
            out.push(lift_one(s, n, quarter, partner));
        }
    }
    Ok(out)
}

fn lift_one(s: &RecoverySet, n: usize, quarter: usize, partner: usize) -> RecoverySet {
    let mut reads: Vec<usize> = s.reads().iter().map(|&j| j + quarter * n).collect();
    reads.extend(s.reads().iter().chain([&s.target()]).map(|&j| j + partner * n));
    RecoverySet::binary(s.target() + quarter * n, reads).expect("quarters are disjoint")
}

/// Supplies candidate recovery sets per coordinate to the batch planner.
/// Direct reads are implicit and need not be returned.
pub trait RecoverySource: Send + Sync {
    /// Code length the source serves.
    fn length(&self) -> usize;

    fn recovery_sets(&self, target: usize) -> Result<Vec<RecoverySet>>;

    fn describe(&self) -> String;
}

/// Dual-word recovery sets of any code, up to a weight cap.
pub struct GenericSource {
    code: LinearCode,
    weight_cap: usize,
}

impl GenericSource {
    pub fn new(code: LinearCode, weight_cap: usize) -> Self {
        GenericSource { code, weight_cap }
    }

    /// All dual words; only feasible when the dual is enumerable.
    pub fn all(code: LinearCode) -> Self {
        let n = code.n();
        GenericSource::new(code, n)
    }
}

impl RecoverySource for GenericSource {
    fn length(&self) -> usize {
        self.code.n()
    }

    fn recovery_sets(&self, target: usize) -> Result<Vec<RecoverySet>> {
        recovery_sets_generic(&self.code, target, self.weight_cap)
    }

    fn describe(&self) -> String {
        format!("generic(weight<={})", self.weight_cap)
    }
}

/// Minimum-weight sets of `RM_q(1, mu)` from point arithmetic.
pub struct PointSource {
    q: u32,
    mu: usize,
}

impl PointSource {
    pub fn new(q: u32, mu: usize) -> Result<Self> {
        PrimeField::new(q)?;
        EvaluationPointSet::new(PrimeField::new(q)?, mu)?;
        Ok(PointSource { q, mu })
    }
}

impl RecoverySource for PointSource {
    fn length(&self) -> usize {
        (self.q as usize).pow(self.mu as u32)
    }

    fn recovery_sets(&self, target: usize) -> Result<Vec<RecoverySet>> {
        recovery_sets_rm1_points(self.q, self.mu, target)
    }

    fn describe(&self) -> String {
        format!("points(q={},mu={})", self.q, self.mu)
    }
}

/// Sets for a `(u | u+v)` code whose dual is built from nested duals
/// `C2⊥ ⊆ C1⊥`: a base set `R` of `C2` serves coordinate `i` as is and
/// coordinate `i + n` shifted by `n`.
pub struct UvLiftSource {
    base: Box<dyn RecoverySource>,
}

impl UvLiftSource {
    pub fn new(base: Box<dyn RecoverySource>) -> Self {
        UvLiftSource { base }
    }
}

impl RecoverySource for UvLiftSource {
    fn length(&self) -> usize {
        2 * self.base.length()
    }

    fn recovery_sets(&self, target: usize) -> Result<Vec<RecoverySet>> {
        let n = self.base.length();
        if target < n {
            self.base.recovery_sets(target)
        } else {
            Ok(self
                .base
                .recovery_sets(target - n)?
                .iter()
                .map(|s| s.shifted(n))
                .collect())
        }
    }

    fn describe(&self) -> String {
        format!("uv-lift({})", self.base.describe())
    }
}

/// Quarter-lifted sets for `RM(rho+1, mu+2)` from sets of `RM(rho, mu)`.
pub struct QuadLiftSource {
    base: Box<dyn RecoverySource>,
}

impl QuadLiftSource {
    pub fn new(base: Box<dyn RecoverySource>) -> Self {
        QuadLiftSource { base }
    }
}

impl RecoverySource for QuadLiftSource {
    fn length(&self) -> usize {
        4 * self.base.length()
    }

    fn recovery_sets(&self, target: usize) -> Result<Vec<RecoverySet>> {
        let n = self.base.length();
        let quarter = target / n;
        let base = self.base.recovery_sets(target % n)?;
        Ok(canonicalize(lift_recovery_sets(&base, n, quarter)?))
    }

    fn describe(&self) -> String {
        format!("quad-lift({})", self.base.describe())
    }
}
