//! Linear codes and the families used throughout the crate: binary Hamming
//! codes, binary Reed-Muller codes via the `(u | u+v)` recursion, and q-ary
//! first-order Reed-Muller codes via polynomial evaluation.
//!
//! Coordinates are 0-based in this API. Text formats and the CLI use 1-based
//! indices.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{FieldMatrix, FieldVector, PrimeField, ENUMERATION_CAP};

/// A linear `[n, k]` code over GF(q), holding a full-rank generator and a
/// full-rank parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    label: String,
    generator: FieldMatrix,
    parity: FieldMatrix,
}

impl LinearCode {
    /// Builds a code from a full-rank generator. The parity-check matrix is
    /// the null space of the generator.
    pub fn from_generator(generator: FieldMatrix, label: impl Into<String>) -> Result<Self> {
        let rank = generator.rank();
        if rank != generator.row_count() {
            return Err(Error::param(format!(
                "generator has {} rows but rank {rank}",
                generator.row_count()
            )));
        }
        let parity = generator.null_space();
        Ok(LinearCode {
            label: label.into(),
            generator,
            parity,
        })
    }

    /// Builds the code `{c : parity · cᵀ = 0}`. Dependent rows are dropped.
    pub fn from_parity(parity: &FieldMatrix, label: impl Into<String>) -> Self {
        let parity_basis = parity.row_basis();
        LinearCode {
            label: label.into(),
            generator: parity_basis.null_space(),
            parity: parity_basis,
        }
    }

    /// The zero code `{0}` of length `n`.
    pub fn zero(field: PrimeField, n: usize) -> Self {
        LinearCode {
            label: format!("Zero({n})"),
            generator: FieldMatrix::zeros(field, 0, n),
            parity: FieldMatrix::identity(field, n),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn field(&self) -> PrimeField {
        self.generator.field()
    }

    pub fn q(&self) -> u32 {
        self.field().modulus()
    }

    pub fn n(&self) -> usize {
        self.generator.col_count()
    }

    pub fn k(&self) -> usize {
        self.generator.row_count()
    }

    pub fn generator(&self) -> &FieldMatrix {
        &self.generator
    }

    pub fn parity(&self) -> &FieldMatrix {
        &self.parity
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode {
            label: format!("dual({})", self.label),
            generator: self.parity.clone(),
            parity: self.generator.clone(),
        }
    }

    /// Membership via `parity · vᵀ = 0`.
    pub fn contains(&self, v: &FieldVector) -> Result<bool> {
        Ok(self.parity.mul_vec(v)?.iter().all(|&e| e == 0))
    }

    /// Same code, compared as subspaces.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.generator.same_row_space(&other.generator)
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.field() == other.field()
            && self.n() == other.n()
            && (0..self.k()).all(|i| other.contains(&self.generator.row(i)).unwrap_or(false))
    }

    /// Number of codewords of each weight `0..=n`.
    ///
    /// Enumerates whichever of the code and its dual is smaller and, in the
    /// second case, transforms the dual distribution with the MacWilliams
    /// identity. Both routes are exact.
    pub fn weight_distribution(&self) -> Result<Vec<BigInt>> {
        let (k, r) = (self.k(), self.n() - self.k());
        if k <= r || r > ENUMERATION_CAP {
            weight_distribution_direct(&self.generator)
        } else {
            let dual = weight_distribution_direct(&self.parity)?;
            Ok(macwilliams(&dual, self.n(), self.q(), r))
        }
    }

    /// Minimum nonzero weight. The zero code has none.
    pub fn min_distance(&self) -> Result<usize> {
        if self.k() == 0 {
            return Err(Error::param("the zero code has no minimum distance"));
        }
        let dist = self.weight_distribution()?;
        Ok(dist
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, a)| **a > BigInt::from(0))
            .map(|(w, _)| w)
            .expect("a nonzero code has a nonzero word"))
    }

    /// Plain-text serialization: a `q n k` header followed by the generator
    /// rows as space-separated residues.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.q(), self.n(), self.k());
        for row in self.generator.rows() {
            let parts: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str, label: impl Into<String>) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `q n k` header".into(),
        })?;
        let nums = parse_numbers(header, hl + 1)?;
        let [q, n, k] = nums[..] else {
            return Err(Error::Parse {
                line: hl + 1,
                msg: "header must be `q n k`".into(),
            });
        };
        let field = PrimeField::new(q)?;
        let (n, k) = (n as usize, k as usize);
        let mut rows = Vec::with_capacity(k);
        for (ln, line) in lines {
            let row = parse_numbers(line, ln + 1)?;
            if row.len() != n {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("expected {n} entries, found {}", row.len()),
                });
            }
            if let Some(bad) = row.iter().find(|&&e| e >= q) {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("{bad} is not a residue mod {q}"),
                });
            }
            rows.push(row);
        }
        if rows.len() != k {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header promises {k} rows, found {}", rows.len()),
            });
        }
        LinearCode::from_generator(FieldMatrix::new(field, n, rows)?, label)
    }
}

impl fmt::Display for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}, {}]_{}", self.label, self.n(), self.k(), self.q())
    }
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<u32>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("`{tok}` is not a non-negative integer"),
            })
        })
        .collect()
}

fn weight_distribution_direct(generator: &FieldMatrix) -> Result<Vec<BigInt>> {
    let n = generator.col_count();
    let mut counts = vec![0u64; n + 1];
    generator.for_each_codeword(|w| {
        counts[w.iter().filter(|&&e| e != 0).count()] += 1;
        true
    })?;
    Ok(counts.into_iter().map(BigInt::from).collect())
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Krawtchouk polynomial `K_j(i)` for length `n` over an alphabet of size `q`.
fn krawtchouk(j: usize, i: usize, n: usize, q: u32) -> BigInt {
    let mut acc = BigInt::from(0);
    for s in 0..=j {
        let term = binomial(i, s) * binomial(n - i, j - s) * BigInt::from(q - 1).pow((j - s) as u32);
        if s % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Weight distribution of a code from that of its `dual_dim`-dimensional dual.
fn macwilliams(dual: &[BigInt], n: usize, q: u32, dual_dim: usize) -> Vec<BigInt> {
    let size = BigInt::from(q).pow(dual_dim as u32);
    (0..=n)
        .map(|j| {
            let total: BigInt = dual
                .iter()
                .enumerate()
                .filter(|(_, b)| **b != BigInt::from(0))
                .map(|(i, b)| b * krawtchouk(j, i, n, q))
                .sum();
            debug_assert_eq!(&total % &size, BigInt::from(0));
            total / &size
        })
        .collect()
}

/// Binary Hamming code with `s` parity checks. Column `j` (1-based) of the
/// parity-check matrix is the binary expansion of `j`, least significant bit
/// in the first row.
pub fn hamming_code(s: usize) -> Result<LinearCode> {
    if !(2..=16).contains(&s) {
        return Err(Error::param(format!("Hamming code needs 2 <= s <= 16, got {s}")));
    }
    let n = (1usize << s) - 1;
    let rows = (0..s)
        .map(|bit| (1..=n).map(|j| ((j >> bit) & 1) as u32).collect())
        .collect();
    let h = FieldMatrix::from_raw(PrimeField::BINARY, n, rows);
    Ok(LinearCode {
        label: format!("Hamming({s})"),
        generator: h.null_space(),
        parity: h,
    })
}

pub fn dual_code(c: &LinearCode) -> LinearCode {
    c.dual()
}

/// Generator `G_{rho,mu}` of the binary Reed-Muller code by the recursion
/// `G_{rho,mu} = [[G_{rho,mu-1}, G_{rho,mu-1}], [0, G_{rho-1,mu-1}]]`.
pub fn rm_generator(rho: usize, mu: usize) -> FieldMatrix {
    let f = PrimeField::BINARY;
    let n = 1usize << mu;
    if rho == 0 {
        return FieldMatrix::from_raw(f, n, vec![vec![1; n]]);
    }
    if rho == mu {
        return FieldMatrix::identity(f, n);
    }
    let top = rm_generator(rho, mu - 1);
    let bottom = rm_generator(rho - 1, mu - 1);
    let half = n / 2;
    let upper = top.hstack(&top).expect("equal row counts");
    let lower = FieldMatrix::zeros(f, bottom.row_count(), half)
        .hstack(&bottom)
        .expect("equal row counts");
    upper.vstack(&lower).expect("equal widths")
}

/// Binary Reed-Muller code `RM(rho, mu)`.
pub fn rm_binary(rho: usize, mu: usize) -> Result<LinearCode> {
    if rho > mu {
        return Err(Error::param(format!("RM(rho, mu) needs rho <= mu, got ({rho}, {mu})")));
    }
    if mu > 20 {
        return Err(Error::param(format!("mu = {mu} is too large")));
    }
    LinearCode::from_generator(rm_generator(rho, mu), format!("RM({rho},{mu})"))
}

/// `F_q^mu` in the fixed coordinate order: the point at 0-based index `i` is
/// the base-q expansion of `i`, with `x_1` the least significant digit.
///
/// The first `q^(mu-1)` points therefore have `x_mu = 0`, which lines the
/// evaluation order up with the `(u | u+v)` halves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationPointSet {
    field: PrimeField,
    mu: usize,
    points: Vec<Vec<u32>>,
}

impl EvaluationPointSet {
    pub fn new(field: PrimeField, mu: usize) -> Result<Self> {
        let q = field.modulus() as usize;
        let n = q
            .checked_pow(mu as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| Error::param(format!("q^mu = {q}^{mu} is too large")))?;
        let points = (0..n)
            .map(|mut i| {
                (0..mu)
                    .map(|_| {
                        let d = (i % q) as u32;
                        i /= q;
                        d
                    })
                    .collect()
            })
            .collect();
        Ok(EvaluationPointSet { field, mu, points })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &[u32] {
        &self.points[index]
    }

    /// Inverse of [`point`](Self::point).
    pub fn index_of(&self, point: &[u32]) -> usize {
        let q = self.field.modulus() as usize;
        point.iter().rev().fold(0, |acc, &d| acc * q + d as usize)
    }
}

/// First-order q-ary Reed-Muller code: evaluations of `1, x_1, ..., x_mu` on
/// [`EvaluationPointSet`].
pub fn rm_q_first_order(q: u32, mu: usize) -> Result<LinearCode> {
    if mu < 1 {
        return Err(Error::param("RM_q(1, mu) needs mu >= 1"));
    }
    let field = PrimeField::new(q)?;
    let pts = EvaluationPointSet::new(field, mu)?;
    let n = pts.len();
    let mut rows = vec![vec![1u32; n]];
    for var in 0..mu {
        rows.push(pts.points().iter().map(|p| p[var]).collect());
    }
    LinearCode::from_generator(
        FieldMatrix::from_raw(field, n, rows),
        format!("RMq({q};1,{mu})"),
    )
}

/// The `(u | u+v)` combination of two codes of equal length over one field.
pub fn uv_construct(c1: &LinearCode, c2: &LinearCode) -> Result<LinearCode> {
    if c1.field() != c2.field() {
        return Err(Error::ModulusMismatch {
            left: c1.q(),
            right: c2.q(),
        });
    }
    if c1.n() != c2.n() {
        return Err(Error::LengthMismatch {
            expected: c1.n(),
            found: c2.n(),
        });
    }
    let f = c1.field();
    let g1 = c1.generator();
    let upper = g1.hstack(g1)?;
    let lower = FieldMatrix::zeros(f, c2.k(), c1.n()).hstack(c2.generator())?;
    LinearCode::from_generator(
        upper.vstack(&lower)?,
        format!("({0}|{0}+{1})", c1.label(), c2.label()),
    )
}

pub fn min_distance(c: &LinearCode) -> Result<usize> {
    c.min_distance()
}

pub fn contains(c: &LinearCode, v: &FieldVector) -> Result<bool> {
    c.contains(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_3_matches_the_worked_example() {
        let h = hamming_code(3).unwrap();
        let expected = [
            [1, 0, 1, 0, 1, 0, 1],
            [0, 1, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ];
        for (row, want) in h.parity().rows().iter().zip(expected) {
            assert_eq!(row[..], want[..]);
        }
        assert_eq!((h.n(), h.k()), (7, 4));
        assert_eq!(h.min_distance().unwrap(), 3);
    }

    #[test]
    fn hamming_2_is_repetition() {
        let h = hamming_code(2).unwrap();
        assert_eq!((h.n(), h.k()), (3, 1));
        let words: Vec<Vec<u32>> = h
            .generator()
            .codewords(None)
            .unwrap()
            .map(|v| v.into_entries())
            .collect();
        assert_eq!(words, vec![vec![0, 0, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn hamming_rejects_small_s() {
        assert!(hamming_code(1).is_err());
    }

    #[test]
    fn simplex_weights() {
        let simplex = hamming_code(3).unwrap().dual();
        assert_eq!((simplex.n(), simplex.k()), (7, 3));
        let weights: Vec<usize> = simplex
            .generator()
            .codewords(None)
            .unwrap()
            .map(|v| v.weight())
            .collect();
        assert_eq!(weights.iter().filter(|&&w| w == 4).count(), 7);
        assert_eq!(weights.iter().filter(|&&w| w == 0).count(), 1);
    }

    #[test]
    fn rm14_weight_distribution() {
        let c = rm_binary(1, 4).unwrap();
        assert_eq!((c.n(), c.k()), (16, 5));
        let dist = c.weight_distribution().unwrap();
        assert_eq!(dist[0], BigInt::from(1));
        assert_eq!(dist[8], BigInt::from(30));
        assert_eq!(dist[16], BigInt::from(1));
        assert_eq!(dist.iter().sum::<BigInt>(), BigInt::from(32));
        assert_eq!(c.generator().rank(), 5);
    }

    #[test]
    fn rm_base_cases() {
        let c = rm_binary(0, 3).unwrap();
        assert_eq!(c.generator().rows(), &[vec![1u32; 8]]);
        let full = rm_binary(2, 2).unwrap();
        assert!(full
            .generator()
            .same_row_space(&FieldMatrix::identity(PrimeField::BINARY, 4)));
        assert!(rm_binary(3, 2).is_err());
    }

    #[test]
    fn rmq_small_generators() {
        let c = rm_q_first_order(3, 1).unwrap();
        assert_eq!(c.generator().rows(), &[vec![1, 1, 1], vec![0, 1, 2]]);
        let c = rm_q_first_order(3, 2).unwrap();
        assert_eq!((c.n(), c.k()), (9, 3));
        assert!(matches!(rm_q_first_order(4, 2), Err(Error::NotPrime(4))));
    }

    #[test]
    fn rmq_binary_matches_recursive_rm() {
        let a = rm_q_first_order(2, 4).unwrap();
        let b = rm_binary(1, 4).unwrap();
        assert!(a.same_code(&b));
    }

    #[test]
    fn dual_min_distances_of_first_order_rm() {
        assert_eq!(rm_q_first_order(2, 4).unwrap().dual().min_distance().unwrap(), 4);
        assert_eq!(rm_q_first_order(3, 2).unwrap().dual().min_distance().unwrap(), 3);
    }

    #[test]
    fn dual_of_rm14_is_rm24() {
        assert!(rm_binary(1, 4).unwrap().dual().same_code(&rm_binary(2, 4).unwrap()));
        let h = hamming_code(4).unwrap();
        assert!(h.dual().dual().same_code(&h));
    }

    #[test]
    fn uv_of_rm13_and_rm03_is_rm14() {
        let uv = uv_construct(&rm_binary(1, 3).unwrap(), &rm_binary(0, 3).unwrap()).unwrap();
        assert!(uv.same_code(&rm_binary(1, 4).unwrap()));
    }

    #[test]
    fn uv_with_zero_code_repeats() {
        let c = hamming_code(3).unwrap();
        let uv = uv_construct(&c, &LinearCode::zero(PrimeField::BINARY, 7)).unwrap();
        assert_eq!(uv.k(), c.k());
        for w in uv.generator().codewords(None).unwrap() {
            assert_eq!(w.entries()[..7], w.entries()[7..]);
        }
    }

    #[test]
    fn uv_rejects_mismatch() {
        let a = rm_binary(1, 3).unwrap();
        let b = rm_binary(1, 2).unwrap();
        assert!(matches!(uv_construct(&a, &b), Err(Error::LengthMismatch { .. })));
        let c = rm_q_first_order(3, 1).unwrap();
        let d = hamming_code(2).unwrap();
        assert!(matches!(uv_construct(&c, &d), Err(Error::ModulusMismatch { .. })));
    }

    #[test]
    fn contains_basics() {
        let c = rm_binary(1, 4).unwrap();
        assert!(c.contains(&FieldVector::zeros(PrimeField::BINARY, 16)).unwrap());
        for i in 0..c.k() {
            assert!(c.contains(&c.generator().row(i)).unwrap());
        }
        assert!(c.contains(&FieldVector::zeros(PrimeField::BINARY, 8)).is_err());
        let ternary = FieldVector::zeros(PrimeField::new(3).unwrap(), 16);
        assert!(c.contains(&ternary).is_err());
    }

    #[test]
    fn macwilliams_agrees_with_direct_enumeration() {
        for c in [
            hamming_code(3).unwrap(),
            hamming_code(4).unwrap(),
            rm_binary(2, 4).unwrap(),
            rm_q_first_order(3, 2).unwrap().dual(),
            rm_q_first_order(5, 1).unwrap().dual(),
        ] {
            let direct = weight_distribution_direct(c.generator()).unwrap();
            let dual = weight_distribution_direct(c.parity()).unwrap();
            assert_eq!(macwilliams(&dual, c.n(), c.q(), c.n() - c.k()), direct, "{c}");
        }
    }

    #[test]
    fn text_roundtrip() {
        for c in [hamming_code(3).unwrap(), rm_q_first_order(3, 2).unwrap()] {
            let text = c.to_text();
            let back = LinearCode::from_text(&text, c.label()).unwrap();
            assert_eq!(back.to_text(), text);
            assert_eq!(back.generator(), c.generator());
        }
    }

    #[test]
    fn text_parse_errors() {
        assert!(LinearCode::from_text("", "x").is_err());
        assert!(LinearCode::from_text("2 3", "x").is_err());
        assert!(LinearCode::from_text("4 2 1\n1 1\n", "x").is_err());
        assert!(LinearCode::from_text("2 2 1\n1 2\n", "x").is_err());
        assert!(LinearCode::from_text("2 2 2\n1 1\n", "x").is_err());
        assert!(LinearCode::from_text("2 2 2\n1 1\n1 1\n", "x").is_err());
    }

    #[test]
    fn point_order_puts_last_variable_most_significant() {
        let pts = EvaluationPointSet::new(PrimeField::new(3).unwrap(), 2).unwrap();
        assert_eq!(pts.point(0), &[0, 0]);
        assert_eq!(pts.point(1), &[1, 0]);
        assert_eq!(pts.point(3), &[0, 1]);
        for i in 0..pts.len() {
            assert_eq!(pts.index_of(pts.point(i)), i);
        }
    }
}
