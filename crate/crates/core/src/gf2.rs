//! Bit-packed GF(2) rows. Bit `c % 64` of word `c / 64` holds column `c`.

use crate::field::{FieldMatrix, PrimeField};

#[inline]
pub(crate) fn word_count(cols: usize) -> usize {
    cols.div_ceil(64)
}

pub(crate) fn pack(entries: &[u32]) -> Vec<u64> {
    let mut out = vec![0u64; word_count(entries.len())];
    for (c, &e) in entries.iter().enumerate() {
        if e & 1 == 1 {
            out[c / 64] |= 1 << (c % 64);
        }
    }
    out
}

pub(crate) fn unpack_into(words: &[u64], out: &mut [u32]) {
    for (c, slot) in out.iter_mut().enumerate() {
        *slot = ((words[c / 64] >> (c % 64)) & 1) as u32;
    }
}

/// Dense binary matrix with packed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedMatrix {
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl PackedMatrix {
    pub fn from_matrix(m: &FieldMatrix) -> Self {
        assert!(m.field().is_binary(), "packed path is GF(2) only");
        PackedMatrix {
            cols: m.col_count(),
            rows: m.rows().iter().map(|r| pack(r)).collect(),
        }
    }

    pub fn to_matrix(&self) -> FieldMatrix {
        let rows = self
            .rows
            .iter()
            .map(|w| {
                let mut buf = vec![0u32; self.cols];
                unpack_into(w, &mut buf);
                buf
            })
            .collect();
        FieldMatrix::from_raw(PrimeField::BINARY, self.cols, rows)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    #[inline]
    fn bit(&self, r: usize, c: usize) -> bool {
        (self.rows[r][c / 64] >> (c % 64)) & 1 == 1
    }

    /// Reduced row echelon form; same contract as [`FieldMatrix::rref`].
    pub fn rref(mut self) -> (PackedMatrix, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.cols {
            if lead == self.rows.len() {
                break;
            }
            let Some(sel) = (lead..self.rows.len()).find(|&r| self.bit(r, col)) else {
                continue;
            };
            self.rows.swap(lead, sel);
            let pivot = self.rows[lead].clone();
            for r in 0..self.rows.len() {
                if r != lead && self.bit(r, col) {
                    for (w, p) in self.rows[r].iter_mut().zip(&pivot) {
                        *w ^= p;
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (self, pivots)
    }
}

/// Lexicographic enumeration of the row span.
///
/// Stepping the coefficient counter from `m` to `m + 1` flips its trailing
/// one bits plus the next zero, so the codeword changes by a precomputed XOR
/// of the corresponding trailing rows.
pub(crate) struct PackedCodewords {
    cols: usize,
    /// `flip[t]` = XOR of the last `t + 1` rows.
    flip: Vec<Vec<u64>>,
    counter: u64,
    total: u64,
    current: Vec<u64>,
}

impl PackedCodewords {
    pub(crate) fn new(m: &PackedMatrix) -> Self {
        let k = m.rows.len();
        let words = word_count(m.cols);
        let mut flip = Vec::with_capacity(k);
        let mut acc = vec![0u64; words];
        for row in m.rows.iter().rev() {
            for (a, r) in acc.iter_mut().zip(row) {
                *a ^= r;
            }
            flip.push(acc.clone());
        }
        PackedCodewords {
            cols: m.cols,
            flip,
            counter: 0,
            total: 1u64 << k,
            current: vec![0u64; words],
        }
    }

    pub(crate) fn cols(&self) -> usize {
        self.cols
    }

    pub(crate) fn next_words(&mut self) -> Option<&[u64]> {
        if self.counter >= self.total {
            return None;
        }
        if self.counter > 0 {
            let t = (self.counter - 1).trailing_ones() as usize;
            for (c, f) in self.current.iter_mut().zip(&self.flip[t]) {
                *c ^= f;
            }
        }
        self.counter += 1;
        Some(&self.current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_roundtrip_across_word_boundary() {
        let entries: Vec<u32> = (0..130).map(|i| (i % 3 == 0) as u32).collect();
        let mut back = vec![0; 130];
        unpack_into(&pack(&entries), &mut back);
        assert_eq!(back, entries);
    }

    #[test]
    fn flip_sequence_visits_all_words() {
        let m = FieldMatrix::identity(PrimeField::BINARY, 4);
        let mut it = PackedCodewords::new(&PackedMatrix::from_matrix(&m));
        let mut seen = Vec::new();
        while let Some(w) = it.next_words() {
            seen.push(w[0]);
        }
        // coefficient vector (c0..c3) maps to bit c0 at column 0, so the
        // first row is the most significant coefficient
        let expected: Vec<u64> = (0..16u64)
            .map(|m| ((m >> 3) & 1) | ((m >> 2) & 1) << 1 | ((m >> 1) & 1) << 2 | (m & 1) << 3)
            .collect();
        assert_eq!(seen, expected);
    }
}
