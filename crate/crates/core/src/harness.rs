//! Brute-force oracle, workload simulation and report files.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::batch::{sample_multiset, BatchParams, BucketPartition, Planner, QueryMultiset};
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

pub const REPORT_SCHEMA: &str = "batchlab/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Refused,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Refused => "refused",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanSizeCount {
    pub reads: usize,
    pub count: u64,
}

/// Outcome of a batch verification run. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub code: String,
    pub source: String,
    pub params: BatchParams,
    pub verdict: Verdict,
    /// Smallest failing query in lexicographic order.
    pub counterexample: Option<Vec<usize>>,
    pub queries_checked: u64,
    pub mode: String,
    pub seed: Option<u64>,
    pub max_bucket_load: usize,
    /// Entry `l` counts (query, bucket) pairs where the bucket served `l`
    /// reads; failed queries count as load zero everywhere.
    pub load_histogram: Vec<u64>,
    pub plan_size_histogram: Vec<PlanSizeCount>,
    /// Reads served by each bucket over all planned queries.
    pub bucket_totals: Vec<u64>,
    pub wall_time_ms: Option<u64>,
}

impl VerificationReport {
    /// A report for a run that was not attempted, e.g. over budget.
    pub fn refused(code: &LinearCode, params: BatchParams, mode: &str, seed: Option<u64>) -> Self {
        VerificationReport {
            schema: REPORT_SCHEMA.to_string(),
            code: code.label().to_string(),
            source: String::new(),
            params,
            verdict: Verdict::Refused,
            counterexample: None,
            queries_checked: 0,
            mode: mode.to_string(),
            seed,
            max_bucket_load: 0,
            load_histogram: vec![0; params.tau + 1],
            plan_size_histogram: Vec::new(),
            bucket_totals: vec![0; params.m],
            wall_time_ms: None,
        }
    }
}

/// Truth by brute force: every dual codeword is enumerated as a parity
/// equation, and every combination of read sets is tried for every query.
///
/// Shares nothing with the planner beyond the linear algebra.
pub fn oracle_verify(code: &LinearCode, buckets: &BucketPartition, t: usize, tau: usize) -> Result<bool> {
    let n = code.n();
    let dual_dim = n - code.generator().rank();
    if n > 10 || dual_dim > 8 || t > 3 {
        return Err(Error::OracleScale(format!("n = {n}, dual dimension {dual_dim}, t = {t}")));
    }
    if buckets.n() != n || t == 0 || tau == 0 {
        return Err(Error::param("oracle needs matching lengths and positive t, tau"));
    }
    let mut read_sets: Vec<BTreeSet<Vec<usize>>> = (0..n).map(|i| BTreeSet::from([vec![i]])).collect();
    code.generator().null_space().for_each_codeword(|w| {
        for i in 0..n {
            if w[i] != 0 {
                let reads: Vec<usize> = (0..n).filter(|&j| j != i && w[j] != 0).collect();
                if !reads.is_empty() {
                    read_sets[i].insert(reads);
                }
            }
        }
        true
    })?;
    let read_sets: Vec<Vec<Vec<usize>>> = read_sets.into_iter().map(|s| s.into_iter().collect()).collect();

    let mut query = Vec::with_capacity(t);
    Ok(all_queries_plannable(n, t, 0, &mut query, &read_sets, buckets, tau))
}

fn all_queries_plannable(
    n: usize,
    t: usize,
    from: usize,
    query: &mut Vec<usize>,
    read_sets: &[Vec<Vec<usize>>],
    buckets: &BucketPartition,
    tau: usize,
) -> bool {
    if query.len() == t {
        let mut chosen = Vec::with_capacity(t);
        return some_combination_works(query, &mut chosen, read_sets, buckets, tau);
    }
    for i in from..n {
        query.push(i);
        let ok = all_queries_plannable(n, t, i, query, read_sets, buckets, tau);
        query.pop();
        if !ok {
            return false;
        }
    }
    true
}

fn some_combination_works<'a>(
    query: &[usize],
    chosen: &mut Vec<&'a Vec<usize>>,
    read_sets: &'a [Vec<Vec<usize>>],
    buckets: &BucketPartition,
    tau: usize,
) -> bool {
    if chosen.len() == query.len() {
        let mut seen = BTreeSet::new();
        let mut load = vec![0usize; buckets.m()];
        for &r in chosen.iter().flat_map(|s| s.iter()) {
            if !seen.insert(r) {
                return false;
            }
            load[buckets.bucket_of(r)] += 1;
        }
        return load.iter().all(|&l| l <= tau);
    }
    for s in &read_sets[query[chosen.len()]] {
        chosen.push(s);
        let ok = some_combination_works(query, chosen, read_sets, buckets, tau);
        chosen.pop();
        if ok {
            return true;
        }
    }
    false
}

/// Per-bucket traffic from planning a stream of random queries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkloadStats {
    pub schema: String,
    pub code: String,
    pub t: usize,
    pub tau: usize,
    pub seed: u64,
    pub query_count: u64,
    /// Cumulative reads per bucket.
    pub bucket_reads: Vec<u64>,
    pub max_single_query_load: usize,
}

/// Plans `count` uniform random size-`t` multisets drawn from `seed`.
/// Stops at the first query without a plan.
pub fn simulate_workload(planner: &Planner, label: &str, t: usize, count: u64, seed: u64) -> Result<WorkloadStats> {
    if t == 0 {
        return Err(Error::param("t must be at least 1"));
    }
    let n = planner.n();
    let mut rng = SplitMix64::new(seed);
    let mut stats = WorkloadStats {
        schema: REPORT_SCHEMA.to_string(),
        code: label.to_string(),
        t,
        tau: planner.tau(),
        seed,
        query_count: 0,
        bucket_reads: vec![0; planner.buckets().m()],
        max_single_query_load: 0,
    };
    for _ in 0..count {
        let q = QueryMultiset::new(n, sample_multiset(&mut rng, n, t))?;
        let plan = planner
            .find_plan(&q)
            .ok_or_else(|| Error::Unplannable(q.one_based()))?;
        for (total, load) in stats.bucket_reads.iter_mut().zip(plan.bucket_loads(planner.buckets())) {
            *total += load as u64;
            stats.max_single_query_load = stats.max_single_query_load.max(load);
        }
        stats.query_count += 1;
    }
    Ok(stats)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Something with a JSON form and a per-bucket CSV column.
pub trait Report: Serialize {
    fn bucket_column(&self) -> &[u64];
}

impl Report for VerificationReport {
    fn bucket_column(&self) -> &[u64] {
        &self.bucket_totals
    }
}

impl Report for WorkloadStats {
    fn bucket_column(&self) -> &[u64] {
        &self.bucket_reads
    }
}

/// Pretty JSON with a trailing newline; field order follows the struct.
pub fn to_json(r: &impl Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

/// Header `bucket,reads`, then one row per bucket.
pub fn to_csv(r: &impl Report) -> String {
    let mut s = String::from("bucket,reads\n");
    for (b, v) in r.bucket_column().iter().enumerate() {
        s.push_str(&format!("{},{v}\n", b + 1));
    }
    s
}

pub fn render(r: &impl Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => to_json(r),
        ReportFormat::Csv => to_csv(r),
    }
}

pub fn emit_report(r: &impl Report, format: ReportFormat, path: &Path) -> Result<()> {
    fs::write(path, render(r, format)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a JSON report written by [`emit_report`].
pub fn read_report<R: DeserializeOwned>(path: &Path) -> Result<R> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}
