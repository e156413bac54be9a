mod common;

use batchlab::batch::{
    hamming_buckets, lift_buckets_uv, merge_buckets, rm14_buckets, sample_multiset, verify_batch, BucketPartition,
    Mode, Planner, QueryMultiset, VerifyOptions,
};
use batchlab::codes::{hamming_code, rm_binary, LinearCode};
use batchlab::field::{FieldMatrix, PrimeField};
use batchlab::harness::{oracle_verify, Verdict};
use batchlab::recovery::{GenericSource, PointSource, RecoverySource};
use batchlab::rng::SplitMix64;
use common::random_codeword;
use proptest::prelude::*;

fn pass(planner: &Planner, t: usize) -> bool {
    verify_batch(planner, t, Mode::Exhaustive, VerifyOptions::default())
        .unwrap()
        .verdict
        == Verdict::Pass
}

#[test]
fn hamming_plans_hold_on_every_subcode() {
    let h = hamming_code(3).unwrap();
    let buckets = hamming_buckets(3).unwrap();
    let planner = Planner::new(&h, &buckets, 1, &GenericSource::all(h.clone())).unwrap();
    let rows = h.generator().rows().to_vec();
    let subcodes: Vec<LinearCode> = (1u32..16)
        .map(|mask| {
            let chosen = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, r)| r.clone())
                .collect();
            LinearCode::from_generator(FieldMatrix::new(PrimeField::BINARY, 7, chosen).unwrap(), "sub").unwrap()
        })
        .collect();
    for sub in &subcodes {
        assert!(sub.is_subcode_of(&h));
    }
    let mut q = vec![0, 0];
    loop {
        let query = QueryMultiset::new(7, q.clone()).unwrap();
        let plan = planner.find_plan(&query).unwrap();
        for sub in &subcodes {
            plan.check(&buckets, 1).unwrap();
            for s in &plan.sets {
                assert!(s.is_valid_for(sub).unwrap());
            }
        }
        if !batchlab::batch::next_multiset(7, &mut q) {
            break;
        }
    }
}

#[test]
fn uv_lifted_buckets_keep_passing_with_own_sets() {
    let mut buckets = rm14_buckets();
    for mu in 4..=5 {
        let code = rm_binary(1, mu).unwrap();
        let planner = Planner::new(&code, &buckets, 1, &PointSource::new(2, mu).unwrap()).unwrap();
        assert!(pass(&planner, 4), "RM(1,{mu})");
        buckets = lift_buckets_uv(&buckets);
    }
}

#[test]
fn merging_preserves_a_pass() {
    let code = rm_binary(1, 4).unwrap();
    let source = PointSource::new(2, 4).unwrap();
    for tau in [2, 5, 10] {
        let merged = merge_buckets(&rm14_buckets(), tau).unwrap();
        assert_eq!(merged.m(), 10usize.div_ceil(tau));
        let planner = Planner::new(&code, &merged, tau, &source).unwrap();
        assert!(pass(&planner, 4), "tau = {tau}");
    }
}

#[test]
fn sources_agree_on_rm14() {
    let code = rm_binary(1, 4).unwrap();
    let generic = GenericSource::all(code.clone());
    let points = PointSource::new(2, 4).unwrap();
    for t in 1..=5 {
        let a = verify_batch(
            &Planner::new(&code, &rm14_buckets(), 1, &generic).unwrap(),
            t,
            Mode::Exhaustive,
            VerifyOptions::default(),
        )
        .unwrap();
        let b = verify_batch(
            &Planner::new(&code, &rm14_buckets(), 1, &points).unwrap(),
            t,
            Mode::Exhaustive,
            VerifyOptions::default(),
        )
        .unwrap();
        assert_eq!((a.verdict, a.counterexample), (b.verdict, b.counterexample), "t = {t}");
    }
}

#[test]
fn sampled_plans_decode_random_codewords() {
    let code = rm_binary(1, 4).unwrap();
    let planner = Planner::new(&code, &rm14_buckets(), 1, &GenericSource::all(code.clone())).unwrap();
    let mut rng = SplitMix64::new(77);
    for _ in 0..50 {
        let q = QueryMultiset::new(16, sample_multiset(&mut rng, 16, 4)).unwrap();
        let plan = planner.find_plan(&q).unwrap();
        plan.check(planner.buckets(), 1).unwrap();
        for _ in 0..100 {
            let w = random_codeword(&code, &mut rng);
            for s in &plan.sets {
                assert_eq!(s.decode(code.field(), &w), w[s.target()]);
            }
        }
    }
}

fn arb_code() -> impl Strategy<Value = LinearCode> {
    (prop::sample::select(vec![2u32, 3]), 2usize..=6, 1usize..=3, any::<u64>()).prop_filter_map(
        "full rank",
        |(q, n, k, seed)| {
            let mut rng = SplitMix64::new(seed);
            let rows = (0..k.min(n))
                .map(|_| (0..n).map(|_| rng.below(q as u128) as u32).collect())
                .collect();
            let g = FieldMatrix::new(PrimeField::new(q).unwrap(), n, rows).ok()?;
            LinearCode::from_generator(g, "random").ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verifier_matches_oracle_on_random_codes(
        code in arb_code(),
        seed in any::<u64>(),
        t in 1usize..=3,
        tau in 1usize..=2,
    ) {
        let n = code.n();
        let mut rng = SplitMix64::new(seed);
        let m = 1 + rng.below_usize(n);
        let mut groups = vec![Vec::new(); m];
        for i in 0..n {
            groups[rng.below_usize(m)].push(i);
        }
        groups.retain(|g| !g.is_empty());
        let buckets = BucketPartition::new(n, groups).unwrap();
        let truth = oracle_verify(&code, &buckets, t, tau).unwrap();
        let planner = Planner::new(&code, &buckets, tau, &GenericSource::all(code.clone())).unwrap();
        match verify_batch(&planner, t, Mode::Exhaustive, VerifyOptions::default()) {
            Ok(r) => prop_assert_eq!(r.verdict == Verdict::Pass, truth),
            Err(_) => prop_assert!(!truth && buckets.m() * tau < t),
        }
    }

    #[test]
    fn generic_sets_decode(code in arb_code(), seed in any::<u64>()) {
        let source = GenericSource::all(code.clone());
        let mut rng = SplitMix64::new(seed);
        for i in 0..code.n() {
            let sets = source.recovery_sets(i).unwrap();
            for _ in 0..5 {
                let w = random_codeword(&code, &mut rng);
                for s in &sets {
                    prop_assert_eq!(s.decode(code.field(), &w), w[i]);
                }
            }
        }
    }
}
