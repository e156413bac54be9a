//! Command-line front end. Exit codes: 0 pass or success, 1 fail verdict,
//! 2 usage error or refusal.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::batch::{
    hamming_buckets, lift_buckets_quad, lift_buckets_uv, merge_buckets, optimality_check, rm14_buckets,
    verify_batch, BatchParams, BucketPartition, Mode, Planner, VerifyOptions, DEFAULT_EXHAUSTIVE_BUDGET,
};
use crate::codes::{hamming_code, rm_binary, rm_q_first_order, LinearCode};
use crate::error::{Error, Result};
use crate::harness::{render, simulate_workload, Report, ReportFormat, VerificationReport};
use crate::recovery::{
    availability_construct_qary, availability_search, locality, rm1_constructive_certificate, GenericSource,
    PointSource, QuadLiftSource, RecoverySource, UvLiftSource,
};

/// Default directory for report files when `--out` is not given.
pub const OUT_DIR_ENV: &str = "BATCHLAB_OUT_DIR";

const CODE_FAMILIES: &str = "hamming:S, rm:R,M, rmq:Q,M, file:PATH, dual:<spec>";

#[derive(Parser, Debug)]
#[command(name = "batchlab", version, about = "Batch codes from Hamming and Reed-Muller codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print code parameters and optionally write the generator.
    Construct {
        #[arg(long)]
        code: String,
        /// Write `q n k` and the generator rows here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distances, locality and availability with a certificate.
    Analyze {
        #[arg(long)]
        code: String,
        /// Coordinate for the availability certificate (1-based).
        #[arg(long, default_value_t = 1)]
        target: usize,
        /// Size bound for availability; defaults to the locality.
        #[arg(long)]
        r: Option<usize>,
        /// Search nodes for the exact availability search.
        #[arg(long, default_value_t = 2_000_000)]
        node_budget: u64,
    },
    /// Print a bucket partition, one bucket per line.
    Buckets {
        #[arg(long)]
        buckets: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the batch property over query multisets.
    Verify {
        #[command(flatten)]
        setup: Setup,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        /// Samples in sampled mode.
        #[arg(long, default_value_t = 100_000)]
        count: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; defaults to the machine's parallelism.
        #[arg(long)]
        workers: Option<usize>,
        /// Largest number of multisets checked in exhaustive mode.
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_BUDGET)]
        budget: u128,
        /// Record wall time in the report (makes reports differ between runs).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Lower bound (t-1)r+1 on m*tau.
    Bound {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        tau: usize,
    },
    /// Plan random queries and report per-bucket traffic.
    Simulate {
        #[command(flatten)]
        setup: Setup,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
struct Setup {
    #[arg(long)]
    code: String,
    /// builtin:hamming:S, builtin:rm14, singletons:N or file:PATH, with
    /// optional +uv, +quad and +merge:TAU suffixes.
    #[arg(long)]
    buckets: String,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 1)]
    tau: usize,
    #[arg(long, value_enum, default_value_t = SourceArg::Auto)]
    source: SourceArg,
}

#[derive(Args, Debug)]
struct Output {
    /// Report file; without it the report goes to stdout, or to
    /// $BATCHLAB_OUT_DIR when that is set.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    Auto,
    Generic,
    Points,
    UvLift,
    QuadLift,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Csv => ReportFormat::Csv,
        }
    }
}

/// Parsed `--code` value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeSpec {
    Hamming(usize),
    Rm(usize, usize),
    Rmq(u32, usize),
    File(PathBuf),
    Dual(Box<CodeSpec>),
}

impl CodeSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let (family, rest) = spec
            .split_once(':')
            .ok_or_else(|| Error::param(format!("code spec {spec:?} lacks a family; valid: {CODE_FAMILIES}")))?;
        let nums = |expected: usize| -> Result<Vec<usize>> {
            let v = rest
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::param(format!("bad numbers in {spec:?}")))?;
            if v.len() != expected {
                return Err(Error::param(format!("{family} takes {expected} numbers, got {spec:?}")));
            }
            Ok(v)
        };
        Ok(match family {
            "hamming" => CodeSpec::Hamming(nums(1)?[0]),
            "rm" => {
                let v = nums(2)?;
                CodeSpec::Rm(v[0], v[1])
            }
            "rmq" => {
                let v = nums(2)?;
                let q = u32::try_from(v[0]).map_err(|_| Error::param("q too large"))?;
                CodeSpec::Rmq(q, v[1])
            }
            "file" => CodeSpec::File(PathBuf::from(rest)),
            "dual" => CodeSpec::Dual(Box::new(CodeSpec::parse(rest)?)),
            other => {
                return Err(Error::param(format!(
                    "unknown code family {other:?}; valid: {CODE_FAMILIES}"
                )))
            }
        })
    }

    pub fn build(&self) -> Result<LinearCode> {
        match self {
            CodeSpec::Hamming(s) => hamming_code(*s),
            CodeSpec::Rm(r, m) => rm_binary(*r, *m),
            CodeSpec::Rmq(q, m) => rm_q_first_order(*q, *m),
            CodeSpec::File(path) => {
                let text = fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                LinearCode::from_text(&text, path.display().to_string())
            }
            CodeSpec::Dual(inner) => Ok(inner.build()?.dual()),
        }
    }

    /// `(q, mu)` when the spec denotes a first-order Reed-Muller code.
    fn first_order_rm(&self) -> Option<(u32, usize)> {
        match *self {
            CodeSpec::Rm(1, mu) => Some((2, mu)),
            CodeSpec::Rmq(q, mu) => Some((q, mu)),
            _ => None,
        }
    }
}

/// Parses a `--buckets` value.
pub fn parse_buckets(spec: &str) -> Result<BucketPartition> {
    let mut parts = spec.split('+');
    let base = parts.next().unwrap_or_default();
    let mut b = if let Some(rest) = base.strip_prefix("builtin:") {
        match rest.split_once(':') {
            Some(("hamming", s)) => hamming_buckets(s.parse().map_err(|_| Error::param(format!("bad s in {spec:?}")))?)?,
            None if rest == "rm14" => rm14_buckets(),
            _ => return Err(Error::param(format!("unknown builtin {rest:?}; valid: hamming:S, rm14"))),
        }
    } else if let Some(n) = base.strip_prefix("singletons:") {
        BucketPartition::singletons(n.parse().map_err(|_| Error::param(format!("bad n in {spec:?}")))?)
    } else if let Some(path) = base.strip_prefix("file:") {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        BucketPartition::from_text(&text)?
    } else {
        return Err(Error::param(format!(
            "bucket spec {spec:?} must start with builtin:, singletons: or file:"
        )));
    };
    for suffix in parts {
        b = match suffix.split_once(':') {
            None if suffix == "uv" => lift_buckets_uv(&b),
            None if suffix == "quad" => lift_buckets_quad(&b),
            Some(("merge", tau)) => merge_buckets(&b, tau.parse().map_err(|_| Error::param("bad merge factor"))?)?,
            _ => return Err(Error::param(format!("unknown bucket transform {suffix:?}; valid: uv, quad, merge:TAU"))),
        };
    }
    Ok(b)
}

/// Dual words up to this dimension are enumerated in full.
const FULL_DUAL_DIM: usize = 16;

fn default_source(spec: &CodeSpec, code: &LinearCode) -> Result<Box<dyn RecoverySource>> {
    if code.n() - code.k() <= FULL_DUAL_DIM {
        return Ok(Box::new(GenericSource::all(code.clone())));
    }
    if let Some((q, mu)) = spec.first_order_rm() {
        return Ok(Box::new(PointSource::new(q, mu)?));
    }
    let d = code.dual().min_distance()?;
    Ok(Box::new(GenericSource::new(code.clone(), d)))
}

fn make_source(kind: SourceArg, spec: &CodeSpec, code: &LinearCode) -> Result<Box<dyn RecoverySource>> {
    match kind {
        SourceArg::Auto => default_source(spec, code),
        SourceArg::Generic => Ok(Box::new(GenericSource::all(code.clone()))),
        SourceArg::Points => {
            let (q, mu) = spec
                .first_order_rm()
                .ok_or_else(|| Error::param("--source points needs rm:1,M or rmq:Q,M"))?;
            Ok(Box::new(PointSource::new(q, mu)?))
        }
        SourceArg::UvLift => match *spec {
            CodeSpec::Rm(rho, mu) if rho < mu && mu >= 2 => {
                let base = CodeSpec::Rm(rho, mu - 1);
                let base_src = default_source(&base, &base.build()?)?;
                Ok(Box::new(UvLiftSource::new(base_src)))
            }
            _ => Err(Error::param("--source uv-lift needs rm:R,M with R < M")),
        },
        SourceArg::QuadLift => match *spec {
            CodeSpec::Rm(rho, mu) if rho >= 1 && mu >= 2 && rho <= mu - 1 => {
                let base = CodeSpec::Rm(rho - 1, mu - 2);
                let base_src = default_source(&base, &base.build()?)?;
                Ok(Box::new(QuadLiftSource::new(base_src)))
            }
            _ => Err(Error::param(
                "--source quad-lift needs rm:R,M with 1 <= R < M, lifting RM(R-1,M-2)",
            )),
        },
    }
}

struct Prepared {
    code: LinearCode,
    buckets: BucketPartition,
    planner: Planner,
}

fn prepare(setup: &Setup) -> Result<Prepared> {
    let spec = CodeSpec::parse(&setup.code)?;
    let code = spec.build()?;
    let buckets = parse_buckets(&setup.buckets)?;
    if buckets.n() != code.n() {
        return Err(Error::param(format!(
            "buckets cover {} coordinates but the code has length {}",
            buckets.n(),
            code.n()
        )));
    }
    let source = make_source(setup.source, &spec, &code)?;
    if source.length() != code.n() {
        return Err(Error::param("recovery source does not match the code length"));
    }
    let planner = Planner::new(&code, &buckets, setup.tau, source.as_ref())?;
    Ok(Prepared { code, buckets, planner })
}

fn write_output(report: &impl Report, output: &Output, default_name: &str) -> Result<()> {
    let text = render(report, output.format.into());
    let ext = match output.format {
        FormatArg::Json => "json",
        FormatArg::Csv => "csv",
    };
    let path = match (&output.out, std::env::var_os(OUT_DIR_ENV)) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => Some(Path::new(&dir).join(format!("{default_name}.{ext}"))),
        (None, None) => None,
    };
    match path {
        Some(p) => fs::write(&p, text).map_err(|source| Error::Io { path: p, source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    let mut out = std::io::stdout().lock();
    match command {
        Command::Construct { code, out: path } => {
            let c = CodeSpec::parse(&code)?.build()?;
            let _ = writeln!(out, "{}: n={} k={} q={}", c.label(), c.n(), c.k(), c.q());
            match c.min_distance() {
                Ok(d) => {
                    let _ = writeln!(out, "min distance {d}");
                }
                Err(e) => {
                    let _ = writeln!(out, "min distance unavailable: {e}");
                }
            }
            if let Some(p) = path {
                fs::write(&p, c.to_text()).map_err(|source| Error::Io { path: p, source })?;
            }
            Ok(0)
        }
        Command::Analyze {
            code,
            target,
            r,
            node_budget,
        } => {
            let spec = CodeSpec::parse(&code)?;
            let c = spec.build()?;
            if target == 0 || target > c.n() {
                return Err(Error::param(format!("target must be in 1..={}", c.n())));
            }
            let _ = writeln!(out, "{}: n={} k={} q={}", c.label(), c.n(), c.k(), c.q());
            let _ = writeln!(out, "min distance {}", c.min_distance()?);
            let _ = writeln!(out, "dual min distance {}", c.dual().min_distance()?);
            let loc = locality(&c)?;
            let _ = writeln!(out, "locality {loc}");
            let r = r.unwrap_or(loc);
            let t0 = target - 1;
            match availability_search(&c, t0, r, node_budget) {
                Ok((cert, exact)) => {
                    let kind = if exact { "exact" } else { "lower bound, search budget hit" };
                    let _ = writeln!(out, "availability at {target} (r={r}): {} ({kind})", cert.len());
                    for s in &cert.sets {
                        let reads: Vec<String> = s.reads().iter().map(|j| (j + 1).to_string()).collect();
                        let _ = writeln!(out, "  {{{}}}", reads.join(","));
                    }
                }
                Err(e) => {
                    let _ = writeln!(out, "availability at {target} (r={r}): not computed ({e})");
                }
            }
            match spec.first_order_rm() {
                Some((2, mu)) if r >= 3 && mu >= 2 => {
                    let cert = rm1_constructive_certificate(mu, t0)?;
                    let _ = writeln!(out, "constructive availability {}", cert.len());
                }
                Some((q, mu)) if q > 2 && r >= 2 => {
                    let cert = availability_construct_qary(q, mu, t0)?;
                    let _ = writeln!(out, "constructive availability {}", cert.len());
                }
                _ => {}
            }
            Ok(0)
        }
        Command::Buckets { buckets, out: path } => {
            let b = parse_buckets(&buckets)?;
            match path {
                Some(p) => fs::write(&p, b.to_text()).map_err(|source| Error::Io { path: p, source })?,
                None => {
                    let _ = write!(out, "{}", b.to_text());
                }
            }
            Ok(0)
        }
        Command::Verify {
            setup,
            mode,
            count,
            seed,
            workers,
            budget,
            timing,
            output,
        } => {
            let mode = match (mode, seed) {
                (ModeArg::Exhaustive, _) => Mode::Exhaustive,
                (ModeArg::Sampled, Some(seed)) => Mode::Sampled { count, seed },
                (ModeArg::Sampled, None) => return Err(Error::param("sampled mode requires --seed")),
            };
            let prepared = prepare(&setup)?;
            let options = VerifyOptions {
                workers,
                budget,
                record_time: timing,
            };
            let report = match verify_batch(&prepared.planner, setup.t, mode, options) {
                Err(e @ Error::BudgetExceeded { .. }) => {
                    let params = BatchParams::new(
                        prepared.code.n(),
                        prepared.code.k(),
                        setup.t,
                        prepared.buckets.m(),
                        setup.tau,
                    )?;
                    let refused = VerificationReport::refused(&prepared.code, params, "exhaustive", None);
                    write_output(&refused, &output, "verify")?;
                    eprintln!("refused: {e}; use --mode sampled or raise --budget");
                    return Ok(2);
                }
                r => r?,
            };
            write_output(&report, &output, "verify")?;
            eprintln!(
                "{}: {} queries checked ({}) for {} {}",
                report.verdict, report.queries_checked, report.mode, report.code, report.params
            );
            if let Some(q) = &report.counterexample {
                eprintln!("counterexample {q:?}");
            }
            Ok(match report.verdict {
                crate::harness::Verdict::Pass => 0,
                crate::harness::Verdict::Fail => 1,
                crate::harness::Verdict::Refused => 2,
            })
        }
        Command::Bound { t, r, m, tau } => {
            let params = BatchParams {
                n: 1,
                k: 1,
                t,
                m,
                tau,
            };
            if t == 0 || m == 0 || tau == 0 {
                return Err(Error::param("t, m and tau must be positive"));
            }
            let o = optimality_check(params, r)?;
            let _ = writeln!(out, "bound {}, equality: {}", o.bound, o.met_with_equality);
            Ok(if o.satisfied { 0 } else { 1 })
        }
        Command::Simulate {
            setup,
            count,
            seed,
            output,
        } => {
            let prepared = prepare(&setup)?;
            match simulate_workload(&prepared.planner, prepared.code.label(), setup.t, count, seed) {
                Ok(stats) => {
                    write_output(&stats, &output, "simulate")?;
                    Ok(0)
                }
                Err(Error::Unplannable(q)) => {
                    eprintln!("query {q:?} has no plan");
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_specs() {
        assert_eq!(CodeSpec::parse("hamming:3").unwrap(), CodeSpec::Hamming(3));
        assert_eq!(CodeSpec::parse("rm:1,4").unwrap(), CodeSpec::Rm(1, 4));
        assert_eq!(
            CodeSpec::parse("dual:rmq:3,2").unwrap(),
            CodeSpec::Dual(Box::new(CodeSpec::Rmq(3, 2)))
        );
        let err = CodeSpec::parse("golay:23").unwrap_err().to_string();
        assert!(err.contains("hamming:S"), "{err}");
        assert!(CodeSpec::parse("rm:1").is_err());
        assert!(CodeSpec::parse("rm").is_err());
    }

    #[test]
    fn bucket_specs() {
        assert_eq!(parse_buckets("builtin:rm14").unwrap(), rm14_buckets());
        let b = parse_buckets("builtin:rm14+uv+uv").unwrap();
        assert_eq!((b.n(), b.m()), (64, 10));
        let q = parse_buckets("builtin:rm14+quad").unwrap();
        assert_eq!((q.n(), q.m()), (64, 40));
        assert_eq!(parse_buckets("builtin:rm14+merge:2").unwrap().m(), 5);
        assert_eq!(parse_buckets("singletons:5").unwrap().m(), 5);
        assert_eq!(parse_buckets("builtin:hamming:3").unwrap().m(), 4);
        assert!(parse_buckets("builtin:nope").is_err());
        assert!(parse_buckets("builtin:rm14+twist").is_err());
    }

    #[test]
    fn sources_check_their_parameters() {
        let rm = rm_binary(1, 5).unwrap();
        assert!(make_source(SourceArg::QuadLift, &CodeSpec::Rm(1, 5), &rm).is_ok());
        assert!(make_source(SourceArg::QuadLift, &CodeSpec::Rm(0, 5), &rm).is_err());
        assert!(make_source(SourceArg::Points, &CodeSpec::Hamming(3), &hamming_code(3).unwrap()).is_err());
        let src = make_source(SourceArg::UvLift, &CodeSpec::Rm(1, 5), &rm).unwrap();
        assert_eq!(src.length(), 32);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["batchlab", "bound", "--t", "4", "--r", "3", "--m", "10"]), 0);
        assert_eq!(run(["batchlab", "bound", "--t", "4", "--r", "3", "--m", "9"]), 1);
        assert_eq!(run(["batchlab", "frobnicate"]), 2);
        assert_eq!(run(["batchlab", "construct", "--code", "golay:23"]), 2);
    }
}
