use batchlab::batch::{hamming_buckets, verify_batch, Mode, Planner, VerifyOptions};
use batchlab::codes::hamming_code;
use batchlab::harness::{to_csv, to_json, VerificationReport};
use batchlab::recovery::GenericSource;

const GOLDEN_JSON: &str = include_str!("../../../book/src/reports/hamming3-t2.json");
const GOLDEN_CSV: &str = include_str!("../../../book/src/reports/hamming3-t2.csv");

fn hamming3_t2() -> VerificationReport {
    let h = hamming_code(3).unwrap();
    let planner = Planner::new(&h, &hamming_buckets(3).unwrap(), 1, &GenericSource::all(h.clone())).unwrap();
    verify_batch(&planner, 2, Mode::Exhaustive, VerifyOptions::default()).unwrap()
}

#[test]
fn json_matches_golden_sample() {
    assert_eq!(to_json(&hamming3_t2()), GOLDEN_JSON);
}

#[test]
fn csv_matches_golden_sample() {
    assert_eq!(to_csv(&hamming3_t2()), GOLDEN_CSV);
}

#[test]
fn golden_sample_parses() {
    let r: VerificationReport = serde_json::from_str(GOLDEN_JSON).unwrap();
    assert_eq!(r, hamming3_t2());
}
