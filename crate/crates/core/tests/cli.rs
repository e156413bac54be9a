use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use batchlab::batch::{find_plan, BucketPartition, QueryMultiset};
use batchlab::codes::hamming_code;
use batchlab::harness::{read_report, Verdict, VerificationReport};
use batchlab::recovery::GenericSource;

fn batchlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_batchlab"))
        .args(args)
        .env_remove("BATCHLAB_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_rm14_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = batchlab(&[
        "verify", "--code", "rm:1,4", "--buckets", "builtin:rm14", "--t", "4", "--tau", "1", "--mode",
        "exhaustive", "--out", path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: VerificationReport = read_report(&out).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.queries_checked, 3876);
    assert!(r.counterexample.is_none());
}

#[test]
fn analyze_hamming() {
    let o = batchlab(&["analyze", "--code", "hamming:3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("locality 3"), "{text}");
    assert!(text.contains("dual min distance 4"), "{text}");
}

#[test]
fn bound_reports_equality() {
    let o = batchlab(&["bound", "--t", "4", "--r", "3", "--m", "10", "--tau", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "bound 10, equality: true");
}

#[test]
fn fail_verdict_exits_one_and_witness_rechecks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fail.json");
    let o = batchlab(&[
        "verify", "--code", "hamming:3", "--buckets", "builtin:hamming:3", "--t", "3", "--out", path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r: VerificationReport = read_report(&out).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    let code = hamming_code(3).unwrap();
    let buckets = batchlab::batch::hamming_buckets(3).unwrap();
    let q = QueryMultiset::from_one_based(7, r.counterexample.as_ref().unwrap()).unwrap();
    let plan = find_plan(&code, &buckets, &q, 1, &GenericSource::all(code.clone())).unwrap();
    assert!(plan.is_none());
}

#[test]
fn usage_errors_and_refusals_exit_two() {
    assert_eq!(batchlab(&["verify"]).status.code(), Some(2));
    assert_eq!(batchlab(&["construct", "--code", "golay:23"]).status.code(), Some(2));
    let sampled_without_seed = batchlab(&[
        "verify", "--code", "rm:1,4", "--buckets", "builtin:rm14", "--t", "4", "--mode", "sampled",
    ]);
    assert_eq!(sampled_without_seed.status.code(), Some(2));
    let bad_lift = batchlab(&[
        "verify", "--code", "rm:0,6", "--buckets", "builtin:rm14+quad", "--t", "2", "--source", "quad-lift",
    ]);
    assert_eq!(bad_lift.status.code(), Some(2));
    let wrong_length = batchlab(&["verify", "--code", "rm:1,5", "--buckets", "builtin:rm14", "--t", "2"]);
    assert_eq!(wrong_length.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("refused.json");
    let o = batchlab(&[
        "verify", "--code", "rm:1,4", "--buckets", "builtin:rm14", "--t", "4", "--budget", "100", "--out",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let r: VerificationReport = read_report(&out).unwrap();
    assert_eq!(r.verdict, Verdict::Refused);
}

#[test]
fn reports_are_byte_identical_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for (i, workers) in ["1", "3"].iter().enumerate() {
        for mode in [["--mode", "exhaustive"], ["--mode", "sampled"]] {
            let out = dir.path().join(format!("{i}-{}.json", mode[1]));
            let o = batchlab(&[
                "verify", "--code", "rm:1,5", "--buckets", "builtin:rm14+uv", "--t", "4", mode[0], mode[1],
                "--seed", "11", "--count", "3000", "--workers", workers, "--out", path_str(&out),
            ]);
            assert_eq!(o.status.code(), Some(0));
            bodies.push(fs::read(&out).unwrap());
        }
    }
    assert_eq!(bodies[0], bodies[2]);
    assert_eq!(bodies[1], bodies[3]);
}

#[test]
fn quad_lift_source_from_the_cli() {
    let o = batchlab(&[
        "verify", "--code", "rm:2,6", "--buckets", "builtin:rm14+quad", "--t", "4", "--source", "quad-lift",
        "--mode", "sampled", "--seed", "5", "--count", "2000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((r.params.m, r.verdict), (40, Verdict::Pass));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_batchlab"))
        .args([
            "simulate", "--code", "hamming:3", "--buckets", "builtin:hamming:3", "--t", "2", "--count", "200",
            "--seed", "3", "--format", "csv",
        ])
        .env("BATCHLAB_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("simulate.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4);
}

#[test]
fn simulate_is_reproducible_and_reports_unplannable_queries() {
    let args = [
        "simulate", "--code", "rm:1,4", "--buckets", "builtin:rm14", "--t", "4", "--count", "1000", "--seed", "42",
    ];
    let a = batchlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, batchlab(&args).stdout);
    let stats: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(stats["max_single_query_load"], 1);

    let fail = batchlab(&[
        "simulate", "--code", "hamming:3", "--buckets", "builtin:hamming:3", "--t", "3", "--count", "1000", "--seed",
        "1",
    ]);
    assert_eq!(fail.status.code(), Some(1));
}

#[test]
fn files_written_by_the_cli_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let code_path = dir.path().join("h3.code");
    let bucket_path = dir.path().join("h3.buckets");
    assert_eq!(
        batchlab(&["construct", "--code", "hamming:3", "--out", path_str(&code_path)]).status.code(),
        Some(0)
    );
    assert_eq!(
        batchlab(&["buckets", "--buckets", "builtin:hamming:3", "--out", path_str(&bucket_path)]).status.code(),
        Some(0)
    );
    assert_eq!(
        BucketPartition::from_text(&fs::read_to_string(&bucket_path).unwrap()).unwrap(),
        batchlab::batch::hamming_buckets(3).unwrap()
    );
    let code_spec = format!("file:{}", path_str(&code_path));
    let bucket_spec = format!("file:{}", path_str(&bucket_path));
    let o = batchlab(&["verify", "--code", &code_spec, "--buckets", &bucket_spec, "--t", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn buckets_prints_the_worked_example() {
    let o = batchlab(&["buckets", "--buckets", "builtin:hamming:3"]);
    assert_eq!(stdout(&o), "1 6\n2 5\n3 4\n7\n");
}
