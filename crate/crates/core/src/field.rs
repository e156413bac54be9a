//! Prime-field arithmetic and the dense linear algebra the rest of the crate
//! is built on: row reduction, null spaces and codeword enumeration.
//!
//! Residues are stored as plain `u32` values inside vectors and matrices; the
//! owning [`PrimeField`] travels alongside them and performs the arithmetic.
//! [`FieldElement`] is the checked, self-describing scalar used at API
//! boundaries where operands may come from different fields.
//!
//! Binary matrices take a bit-packed path (see [`crate::gf2`]) for row
//! reduction and enumeration. The packed path is observably identical to the
//! generic one.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{PackedCodewords, PackedMatrix};

/// Largest dimension for which full codeword enumeration is attempted.
pub const ENUMERATION_CAP: usize = 24;

/// Trial-division primality test. Moduli here are tiny.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub const BINARY: PrimeField = PrimeField { p: 2 };

    pub fn new(p: u32) -> Result<Self> {
        if p > u16::MAX as u32 {
            return Err(Error::param(format!("modulus {p} is too large")));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn is_binary(self) -> bool {
        self.p == 2
    }

    /// Maps any integer onto its residue.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(self, a: u32) -> Result<u32> {
        if a % self.p == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    pub fn element(self, value: u32) -> FieldElement {
        FieldElement {
            value: value % self.p,
            modulus: self.p,
        }
    }

    /// All residues in increasing order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// A residue tagged with its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

impl FieldElement {
    pub fn new(value: u32, modulus: u32) -> Result<Self> {
        Ok(PrimeField::new(modulus)?.element(value))
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    fn field(self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    fn shared(self, other: FieldElement) -> Result<PrimeField> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(self.field())
    }

    pub fn add(self, other: FieldElement) -> Result<FieldElement> {
        let f = self.shared(other)?;
        Ok(f.element(f.add(self.value, other.value)))
    }

    pub fn sub(self, other: FieldElement) -> Result<FieldElement> {
        let f = self.shared(other)?;
        Ok(f.element(f.sub(self.value, other.value)))
    }

    pub fn mul(self, other: FieldElement) -> Result<FieldElement> {
        let f = self.shared(other)?;
        Ok(f.element(f.mul(self.value, other.value)))
    }

    pub fn neg(self) -> FieldElement {
        let f = self.field();
        f.element(f.neg(self.value))
    }

    pub fn inv(self) -> Result<FieldElement> {
        let f = self.field();
        Ok(f.element(f.inv(self.value)?))
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A vector over a prime field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldVector {
    field: PrimeField,
    entries: Vec<u32>,
}

impl FieldVector {
    pub fn new(field: PrimeField, entries: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| e >= field.p) {
            return Err(Error::param(format!(
                "entry {bad} is not a residue of {field}"
            )));
        }
        Ok(FieldVector { field, entries })
    }

    /// Reduces arbitrary integers into the field.
    pub fn from_ints(field: PrimeField, values: &[i64]) -> Self {
        FieldVector {
            field,
            entries: values.iter().map(|&v| field.reduce(v)).collect(),
        }
    }

    pub(crate) fn from_raw(field: PrimeField, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&e| e < field.p));
        FieldVector { field, entries }
    }

    pub fn zeros(field: PrimeField, len: usize) -> Self {
        FieldVector {
            field,
            entries: vec![0; len],
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn get(&self, i: usize) -> FieldElement {
        self.field.element(self.entries[i])
    }

    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    /// 0-based indices of the nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check(&self, other: &FieldVector) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch {
                left: self.field.p,
                right: other.field.p,
            });
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldVector) -> Result<FieldVector> {
        self.check(other)?;
        let f = self.field;
        Ok(FieldVector::from_raw(
            f,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: u32) -> FieldVector {
        let f = self.field;
        let c = c % f.p;
        FieldVector::from_raw(f, self.entries.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn dot(&self, other: &FieldVector) -> Result<u32> {
        self.check(other)?;
        Ok(dot(self.field, &self.entries, &other.entries))
    }
}

impl fmt::Display for FieldVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[inline]
pub(crate) fn dot(field: PrimeField, a: &[u32], b: &[u32]) -> u32 {
    let p = field.p as u64;
    let mut acc = 0u64;
    for (&x, &y) in a.iter().zip(b) {
        acc = (acc + x as u64 * y as u64) % p;
    }
    acc as u32
}

/// A dense rectangular matrix over a prime field.
///
/// A matrix may have zero rows; it always knows its column count.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    field: PrimeField,
    cols: usize,
    rows: Vec<Vec<u32>>,
}

impl FieldMatrix {
    pub fn new(field: PrimeField, cols: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        for row in &rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|&&e| e >= field.p) {
                return Err(Error::param(format!(
                    "entry {bad} is not a residue of {field}"
                )));
            }
        }
        Ok(FieldMatrix { field, cols, rows })
    }

    pub(crate) fn from_raw(field: PrimeField, cols: usize, rows: Vec<Vec<u32>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        FieldMatrix { field, cols, rows }
    }

    pub fn from_vectors(field: PrimeField, cols: usize, vectors: &[FieldVector]) -> Result<Self> {
        for v in vectors {
            if v.field != field {
                return Err(Error::ModulusMismatch {
                    left: field.p,
                    right: v.field.p,
                });
            }
        }
        Self::new(field, cols, vectors.iter().map(|v| v.entries.clone()).collect())
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            cols,
            rows: vec![vec![0; cols]; rows],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.rows[i][i] = 1;
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> FieldVector {
        FieldVector::from_raw(self.field, self.rows[i].clone())
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.rows[r][c]
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut rows = vec![vec![0; self.rows.len()]; self.cols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, &e) in row.iter().enumerate() {
                rows[c][r] = e;
            }
        }
        FieldMatrix::from_raw(self.field, self.rows.len(), rows)
    }

    /// `self · vᵀ`, one residue per row.
    pub fn mul_vec(&self, v: &FieldVector) -> Result<Vec<u32>> {
        if v.field != self.field {
            return Err(Error::ModulusMismatch {
                left: self.field.p,
                right: v.field.p,
            });
        }
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| dot(self.field, row, &v.entries))
            .collect())
    }

    /// `self · otherᵀ`.
    pub fn mul_transpose(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if other.field != self.field {
            return Err(Error::ModulusMismatch {
                left: self.field.p,
                right: other.field.p,
            });
        }
        if other.cols != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|a| other.rows.iter().map(|b| dot(self.field, a, b)).collect())
            .collect();
        Ok(FieldMatrix::from_raw(self.field, other.rows.len(), rows))
    }

    /// Columns in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> FieldMatrix {
        let rows = self
            .rows
            .iter()
            .map(|row| cols.iter().map(|&c| row[c]).collect())
            .collect();
        FieldMatrix::from_raw(self.field, cols.len(), rows)
    }

    /// Reduced row echelon form and the (0-based, increasing) pivot columns.
    /// Row count is preserved; zero rows sink to the bottom.
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        if self.field.is_binary() {
            let (packed, pivots) = PackedMatrix::from_matrix(self).rref();
            (packed.to_matrix(), pivots)
        } else {
            self.rref_generic()
        }
    }

    /// Row reduction without the packed GF(2) fast path.
    pub fn rref_generic(&self) -> (FieldMatrix, Vec<usize>) {
        let f = self.field;
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.cols {
            if lead == rows.len() {
                break;
            }
            let Some(sel) = (lead..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(lead, sel);
            let inv = f.inv(rows[lead][col]).expect("pivot is nonzero");
            for e in rows[lead].iter_mut() {
                *e = f.mul(*e, inv);
            }
            let pivot_row = rows[lead].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == lead || row[col] == 0 {
                    continue;
                }
                let factor = row[col];
                for (e, &pv) in row.iter_mut().zip(&pivot_row) {
                    *e = f.sub(*e, f.mul(factor, pv));
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (FieldMatrix::from_raw(f, self.cols, rows), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// The nonzero rows of the reduced form: a canonical basis of the row space.
    pub fn row_basis(&self) -> FieldMatrix {
        let (mut r, pivots) = self.rref();
        r.rows.truncate(pivots.len());
        r
    }

    /// A basis of `{x : self · xᵀ = 0}`, one row per free column.
    pub fn null_space(&self) -> FieldMatrix {
        let f = self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![0u32; self.cols];
            x[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = f.neg(r.rows[row][free]);
            }
            basis.push(x);
        }
        FieldMatrix::from_raw(f, self.cols, basis)
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &FieldVector) -> Result<bool> {
        if v.field != self.field {
            return Err(Error::ModulusMismatch {
                left: self.field.p,
                right: v.field.p,
            });
        }
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut stacked = self.rows.clone();
        stacked.push(v.entries.clone());
        let base = self.rank();
        Ok(FieldMatrix::from_raw(self.field, self.cols, stacked).rank() == base)
    }

    pub fn same_row_space(&self, other: &FieldMatrix) -> bool {
        self.field == other.field && self.cols == other.cols && self.row_basis() == other.row_basis()
    }

    /// Block matrix `[self | other]`; row counts must agree.
    pub fn hstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.rows.len() != other.rows.len() {
            return Err(Error::LengthMismatch {
                expected: self.rows.len(),
                found: other.rows.len(),
            });
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        Ok(FieldMatrix::from_raw(self.field, self.cols + other.cols, rows))
    }

    /// Block matrix `[self ; other]`; column counts must agree.
    pub fn vstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(FieldMatrix::from_raw(self.field, self.cols, rows))
    }

    /// Every linear combination of the rows, in lexicographic order of the
    /// coefficient vector (first row most significant). With a `weight_cap`,
    /// only words of weight at most the cap are yielded.
    pub fn codewords(&self, weight_cap: Option<usize>) -> Result<Codewords> {
        Codewords::new(self, weight_cap)
    }

    /// Same as [`codewords`](Self::codewords) but never takes the packed path.
    pub fn codewords_generic(&self, weight_cap: Option<usize>) -> Result<Codewords> {
        check_cap(self.rows.len())?;
        Ok(Codewords {
            weight_cap,
            inner: Inner::Generic(GenericCodewords::new(self)),
        })
    }

    /// Calls `visit` with every combination of rows (as raw residues), in the
    /// same order as [`codewords`](Self::codewords). Returns early when the
    /// visitor returns `false`.
    pub fn for_each_codeword(&self, mut visit: impl FnMut(&[u32]) -> bool) -> Result<()> {
        check_cap(self.rows.len())?;
        if self.field.is_binary() {
            let packed = PackedMatrix::from_matrix(self);
            let mut buf = vec![0u32; self.cols];
            let mut it = PackedCodewords::new(&packed);
            while let Some(words) = it.next_words() {
                crate::gf2::unpack_into(words, &mut buf);
                if !visit(&buf) {
                    break;
                }
            }
        } else {
            let mut it = GenericCodewords::new(self);
            while let Some(w) = it.next_word() {
                if !visit(w) {
                    break;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let parts: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

fn check_cap(dim: usize) -> Result<()> {
    if dim > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            dim,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

/// Odometer over coefficient vectors; each step adds exactly one row.
struct GenericCodewords {
    field: PrimeField,
    rows: Vec<Vec<u32>>,
    digits: Vec<u32>,
    current: Vec<u32>,
    started: bool,
    done: bool,
}

impl GenericCodewords {
    fn new(m: &FieldMatrix) -> Self {
        GenericCodewords {
            field: m.field,
            rows: m.rows.clone(),
            digits: vec![0; m.rows.len()],
            current: vec![0; m.cols],
            started: false,
            done: false,
        }
    }

    fn next_word(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let f = self.field;
        let mut j = self.rows.len();
        loop {
            if j == 0 {
                self.done = true;
                return None;
            }
            j -= 1;
            for (c, &r) in self.current.iter_mut().zip(&self.rows[j]) {
                *c = f.add(*c, r);
            }
            self.digits[j] += 1;
            if self.digits[j] == f.p {
                self.digits[j] = 0;
            } else {
                break;
            }
        }
        Some(&self.current)
    }
}

enum Inner {
    Generic(GenericCodewords),
    Packed(PackedCodewords),
}

/// Stream of codewords produced by [`FieldMatrix::codewords`].
pub struct Codewords {
    weight_cap: Option<usize>,
    inner: Inner,
}

impl Codewords {
    fn new(m: &FieldMatrix, weight_cap: Option<usize>) -> Result<Self> {
        check_cap(m.rows.len())?;
        let inner = if m.field.is_binary() {
            Inner::Packed(PackedCodewords::new(&PackedMatrix::from_matrix(m)))
        } else {
            Inner::Generic(GenericCodewords::new(m))
        };
        Ok(Codewords { weight_cap, inner })
    }
}

impl Iterator for Codewords {
    type Item = FieldVector;

    fn next(&mut self) -> Option<FieldVector> {
        let cap = self.weight_cap.unwrap_or(usize::MAX);
        match &mut self.inner {
            Inner::Generic(g) => {
                let field = g.field;
                while let Some(w) = g.next_word() {
                    if w.iter().filter(|&&e| e != 0).count() <= cap {
                        return Some(FieldVector::from_raw(field, w.to_vec()));
                    }
                }
                None
            }
            Inner::Packed(p) => {
                let n = p.cols();
                while let Some(words) = p.next_words() {
                    let weight: u32 = words.iter().map(|w| w.count_ones()).sum();
                    if weight as usize <= cap {
                        let mut buf = vec![0u32; n];
                        crate::gf2::unpack_into(words, &mut buf);
                        return Some(FieldVector::from_raw(PrimeField::BINARY, buf));
                    }
                }
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn mat(p: u32, rows: &[&[u32]]) -> FieldMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        FieldMatrix::new(gf(p), cols, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn scalar_examples() {
        let one = FieldElement::new(1, 2).unwrap();
        assert_eq!(one.add(one).unwrap().value(), 0);
        assert_eq!(FieldElement::new(2, 3).unwrap().inv().unwrap().value(), 2);
        assert_eq!(FieldElement::new(3, 5).unwrap().neg().value(), 2);
    }

    #[test]
    fn scalar_errors() {
        let a = FieldElement::new(1, 3).unwrap();
        let b = FieldElement::new(1, 5).unwrap();
        assert!(matches!(a.add(b), Err(Error::ModulusMismatch { .. })));
        assert!(matches!(
            FieldElement::new(0, 7).unwrap().inv(),
            Err(Error::ZeroInverse)
        ));
        assert!(matches!(PrimeField::new(4), Err(Error::NotPrime(4))));
        assert!(matches!(PrimeField::new(1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn rref_examples() {
        let id = FieldMatrix::identity(gf(2), 3);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2]));

        let (r, piv) = mat(2, &[&[1, 1], &[1, 1]]).rref();
        assert_eq!(r, mat(2, &[&[1, 1], &[0, 0]]));
        assert_eq!(piv, vec![0]);

        let zero = FieldMatrix::zeros(gf(3), 2, 4);
        assert_eq!(zero.rref(), (zero.clone(), vec![]));
    }

    #[test]
    fn null_space_of_identity_is_trivial() {
        for p in [2, 3, 5] {
            let ns = FieldMatrix::identity(gf(p), 5).null_space();
            assert_eq!(ns.row_count(), 0);
            assert_eq!(ns.col_count(), 5);
        }
    }

    #[test]
    fn null_space_of_hamming_parity() {
        let h = mat(
            2,
            &[
                &[1, 0, 1, 0, 1, 0, 1],
                &[0, 1, 1, 0, 0, 1, 1],
                &[0, 0, 0, 1, 1, 1, 1],
            ],
        );
        let ns = h.null_space();
        assert_eq!(ns.row_count(), 4);
        for i in 0..ns.row_count() {
            assert!(h.mul_vec(&ns.row(i)).unwrap().iter().all(|&e| e == 0));
        }
    }

    #[test]
    fn enumeration_of_empty_generator() {
        let g = FieldMatrix::zeros(gf(3), 0, 4);
        let words: Vec<_> = g.codewords(None).unwrap().collect();
        assert_eq!(words, vec![FieldVector::zeros(gf(3), 4)]);
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let g = mat(3, &[&[1, 0], &[0, 1]]);
        let words: Vec<Vec<u32>> = g.codewords(None).unwrap().map(|v| v.into_entries()).collect();
        let expected: Vec<Vec<u32>> = (0..3)
            .flat_map(|a| (0..3).map(move |b| vec![a, b]))
            .collect();
        assert_eq!(words, expected);

        let g2 = mat(2, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let words: Vec<Vec<u32>> = g2.codewords(None).unwrap().map(|v| v.into_entries()).collect();
        let expected: Vec<Vec<u32>> = (0..8u32)
            .map(|m| vec![(m >> 2) & 1, (m >> 1) & 1, m & 1])
            .collect();
        assert_eq!(words, expected);
    }

    #[test]
    fn enumeration_refuses_above_cap() {
        let g = FieldMatrix::identity(gf(2), ENUMERATION_CAP + 1);
        assert!(matches!(
            g.codewords(None),
            Err(Error::EnumerationCap { dim: 25, cap: 24 })
        ));
    }

    #[test]
    fn weight_cap_filters() {
        let g = mat(2, &[&[1, 1, 1, 0], &[0, 1, 1, 1]]);
        let light: Vec<_> = g.codewords(Some(2)).unwrap().collect();
        // 0000, 1001 (sum of rows)
        assert_eq!(light.len(), 2);
        assert!(light.iter().all(|v| v.weight() <= 2));
    }

    fn arb_matrix() -> impl Strategy<Value = FieldMatrix> {
        (prop::sample::select(vec![2u32, 3, 5, 7]), 1usize..6, 1usize..9).prop_flat_map(
            |(p, r, c)| {
                prop::collection::vec(prop::collection::vec(0..p, c), r).prop_map(move |rows| {
                    FieldMatrix::new(PrimeField::new(p).unwrap(), c, rows).unwrap()
                })
            },
        )
    }

    proptest! {
        #[test]
        fn field_axioms(p in prop::sample::select(vec![2u32, 3, 5, 7]), a in 0u32..7, b in 0u32..7, c in 0u32..7) {
            let f = PrimeField::new(p).unwrap();
            let (a, b, c) = (a % p, b % p, c % p);
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }

        #[test]
        fn rref_preserves_row_space(m in arb_matrix()) {
            let (r, pivots) = m.rref();
            prop_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
            for i in 0..m.row_count() {
                prop_assert!(r.row_space_contains(&m.row(i)).unwrap());
            }
            for i in 0..r.row_count() {
                prop_assert!(m.row_space_contains(&r.row(i)).unwrap());
            }
        }

        #[test]
        fn null_space_is_annihilated(m in arb_matrix()) {
            let ns = m.null_space();
            for i in 0..ns.row_count() {
                prop_assert!(m.mul_vec(&ns.row(i)).unwrap().iter().all(|&e| e == 0));
            }
            prop_assert_eq!(m.rank() + ns.rank(), m.col_count());
            prop_assert_eq!(ns.row_count(), m.col_count() - m.rank());
        }

        #[test]
        fn double_null_space_recovers_row_space(m in arb_matrix()) {
            let back = m.null_space().null_space();
            prop_assert!(back.same_row_space(&m));
        }

        #[test]
        fn packed_and_generic_paths_agree(m in arb_matrix()) {
            prop_assert_eq!(m.rref(), m.rref_generic());
            let a: Vec<_> = m.codewords(Some(3)).unwrap().collect();
            let b: Vec<_> = m.codewords_generic(Some(3)).unwrap().collect();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn enumeration_yields_every_combination_once(m in arb_matrix()) {
            let basis = m.row_basis();
            let k = basis.row_count() as u32;
            let q = m.field().modulus() as usize;
            let seen: HashSet<Vec<u32>> = basis.codewords(None).unwrap().map(|v| v.into_entries()).collect();
            prop_assert_eq!(seen.len(), q.pow(k));
        }
    }
}
