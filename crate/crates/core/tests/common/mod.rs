#![allow(dead_code)]

use batchlab::batch::{hamming_buckets, BucketPartition};
use batchlab::codes::{hamming_code, rm_binary, rm_q_first_order, LinearCode};
use batchlab::field::{FieldMatrix, PrimeField};
use batchlab::rng::SplitMix64;

/// Generator of the code of all multilinear polynomials of degree at most
/// `rho`, evaluated at the points of F_2^mu (bit j of the index is x_{j+1}).
pub fn evaluation_generator(rho: usize, mu: usize) -> FieldMatrix {
    let n = 1usize << mu;
    let rows = (0usize..n)
        .filter(|mask| mask.count_ones() as usize <= rho)
        .map(|mask| (0..n).map(|p| (p & mask == mask) as u32).collect())
        .collect();
    FieldMatrix::new(PrimeField::BINARY, n, rows).unwrap()
}

pub fn random_codeword(code: &LinearCode, rng: &mut SplitMix64) -> Vec<u32> {
    let f = code.field();
    let mut w = vec![0u32; code.n()];
    for row in code.generator().rows() {
        let c = rng.below(f.modulus() as u128) as u32;
        for (x, &g) in w.iter_mut().zip(row) {
            *x = f.add(*x, f.mul(c, g));
        }
    }
    w
}

/// Every code of length at most 8 the library constructs, with duals,
/// leaving out zero codes.
pub fn all_small_codes() -> Vec<LinearCode> {
    let mut codes = vec![hamming_code(2).unwrap(), hamming_code(3).unwrap()];
    for mu in 0..=3 {
        for rho in 0..=mu {
            codes.push(rm_binary(rho, mu).unwrap());
        }
    }
    for (q, mu) in [(2, 1), (2, 2), (2, 3), (3, 1), (5, 1), (7, 1)] {
        codes.push(rm_q_first_order(q, mu).unwrap());
    }
    let duals: Vec<LinearCode> = codes.iter().map(LinearCode::dual).collect();
    codes.extend(duals);
    codes.retain(|c| c.k() > 0);
    codes
}

/// A handful of partitions of `0..n`: singletons, one bucket, consecutive
/// pairs, the Hamming buckets at n = 7, and a seeded random one.
pub fn small_partitions(n: usize) -> Vec<BucketPartition> {
    let mut out = vec![
        BucketPartition::singletons(n),
        BucketPartition::new(n, vec![(0..n).collect()]).unwrap(),
        BucketPartition::new(n, (0..n).collect::<Vec<_>>().chunks(2).map(<[usize]>::to_vec).collect()).unwrap(),
    ];
    if n == 7 {
        out.push(hamming_buckets(3).unwrap());
    }
    let mut rng = SplitMix64::new(n as u64);
    let m = n.div_ceil(2).max(1);
    let mut groups = vec![Vec::new(); m];
    for i in 0..n {
        groups[rng.below_usize(m)].push(i);
    }
    groups.retain(|g| !g.is_empty());
    out.push(BucketPartition::new(n, groups).unwrap());
    out.dedup();
    out
}
