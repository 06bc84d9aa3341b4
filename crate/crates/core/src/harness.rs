//! Batch verification over ranges and over powers of three.
//!
//! Work is split into contiguous chunks handed to a pool of scoped threads.
//! Results are merged strictly in chunk order, so the summary and the
//! progress stream do not depend on the worker count.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use serde::Serialize;

use crate::accelerated::{cross_check, AcceleratedTrace};
use crate::classical::total_stopping_time;
use crate::error::{Error, Result};
use crate::natural::Natural;

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_CHUNK_SIZE: u64 = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub budget: u64,
    pub workers: usize,
    pub chunk_size: u64,
    /// Skip every `n` below this value.
    pub resume_from: Option<u64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            budget: DEFAULT_BUDGET,
            workers: 1,
            chunk_size: DEFAULT_CHUNK_SIZE,
            resume_from: None,
        }
    }
}

/// Outcome of verifying a single `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified { i_min: usize, cardinality: u64 },
    /// Cross-check disagreed with the oracle.
    Mismatch,
    Undecided,
}

pub fn verify_one(n: u64, budget: u64) -> Result<Verdict> {
    let n = Natural::from_u64(n)?;
    match cross_check(&n, budget) {
        Ok(c) if c.passed() => Ok(Verdict::Verified {
            i_min: c.i_min,
            cardinality: c.formula,
        }),
        Ok(_) => Ok(Verdict::Mismatch),
        Err(e) if e.is_undecided() => Ok(Verdict::Undecided),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub lo: u64,
    pub hi: u64,
    pub verified: u64,
    pub undecided: u64,
    pub mismatched: Vec<u64>,
    /// `(n, i_min)`; ties keep the smallest `n`.
    pub max_i_min: Option<(u64, usize)>,
    /// `(n, cardinality)`; ties keep the smallest `n`.
    pub max_cardinality: Option<(u64, u64)>,
    pub histogram: BTreeMap<usize, u64>,
}

impl ScanSummary {
    fn empty(lo: u64, hi: u64) -> Self {
        ScanSummary {
            lo,
            hi,
            verified: 0,
            undecided: 0,
            mismatched: Vec::new(),
            max_i_min: None,
            max_cardinality: None,
            histogram: BTreeMap::new(),
        }
    }

    pub fn scanned(&self) -> u64 {
        self.verified + self.undecided + self.mismatched.len() as u64
    }

    fn record(&mut self, n: u64, verdict: Verdict) {
        match verdict {
            Verdict::Verified { i_min, cardinality } => {
                self.verified += 1;
                *self.histogram.entry(i_min).or_default() += 1;
                if self.max_i_min.is_none_or(|(_, best)| i_min > best) {
                    self.max_i_min = Some((n, i_min));
                }
                if self.max_cardinality.is_none_or(|(_, best)| cardinality > best) {
                    self.max_cardinality = Some((n, cardinality));
                }
            }
            Verdict::Mismatch => self.mismatched.push(n),
            Verdict::Undecided => self.undecided += 1,
        }
    }

    /// Folds in a summary covering the range directly after this one.
    fn absorb(&mut self, next: ScanSummary) {
        self.verified += next.verified;
        self.undecided += next.undecided;
        self.mismatched.extend(next.mismatched);
        if let Some((n, v)) = next.max_i_min {
            if self.max_i_min.is_none_or(|(_, best)| v > best) {
                self.max_i_min = Some((n, v));
            }
        }
        if let Some((n, v)) = next.max_cardinality {
            if self.max_cardinality.is_none_or(|(_, best)| v > best) {
                self.max_cardinality = Some((n, v));
            }
        }
        for (k, c) in next.histogram {
            *self.histogram.entry(k).or_default() += c;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// Runs `work(i)` for `i in 0..jobs` on `workers` threads and feeds results
/// to `sink` in ascending `i` as soon as each prefix is complete.
fn run_ordered<T, W, S>(jobs: usize, workers: usize, work: W, mut sink: S) -> io::Result<()>
where
    T: Send,
    W: Fn(usize) -> T + Sync,
    S: FnMut(usize, T) -> io::Result<()>,
{
    let workers = workers.clamp(1, jobs.max(1));
    if workers == 1 {
        for i in 0..jobs {
            sink(i, work(i))?;
        }
        return Ok(());
    }

    let next_job = AtomicUsize::new(0);
    thread::scope(|scope| {
        let (tx, rx) = mpsc::channel();
        for _ in 0..workers {
            let tx = tx.clone();
            let next_job = &next_job;
            let work = &work;
            scope.spawn(move || loop {
                let i = next_job.fetch_add(1, Ordering::Relaxed);
                if i >= jobs || tx.send((i, work(i))).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending = BTreeMap::new();
        let mut expected = 0;
        for (i, result) in rx {
            pending.insert(i, result);
            while let Some(result) = pending.remove(&expected) {
                if let Err(e) = sink(expected, result) {
                    // stop handing out work; workers exit on their next fetch
                    next_job.store(jobs, Ordering::Relaxed);
                    return Err(e);
                }
                expected += 1;
            }
        }
        Ok(())
    })
}

/// Verifies every `n` in `[lo, hi)` and writes one
/// `CHUNK <lo> <hi> ok=<count> undecided=<count>` line per chunk to
/// `progress`, in range order.
pub fn scan_range<W: Write + ?Sized>(
    lo: u64,
    hi: u64,
    config: &ScanConfig,
    progress: &mut W,
) -> Result<ScanSummary> {
    if lo < 1 || lo >= hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let start = config.resume_from.map_or(lo, |r| r.clamp(lo, hi));
    let chunk = config.chunk_size.max(1);
    let jobs = (hi - start).div_ceil(chunk) as usize;
    let bounds = |i: usize| {
        let a = start + i as u64 * chunk;
        (a, (a + chunk).min(hi))
    };

    let mut summary = ScanSummary::empty(start, hi);
    let mut failure = None;
    let io_result = run_ordered(
        jobs,
        config.workers,
        |i| {
            let (a, b) = bounds(i);
            let mut part = ScanSummary::empty(a, b);
            for n in a..b {
                part.record(n, verify_one(n, config.budget)?);
            }
            Ok(part)
        },
        |i, part: Result<ScanSummary>| {
            let (a, b) = bounds(i);
            match part {
                Ok(part) => {
                    writeln!(
                        progress,
                        "CHUNK {a} {b} ok={} undecided={}",
                        part.verified, part.undecided
                    )?;
                    progress.flush()?;
                    summary.absorb(part);
                }
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
            Ok(())
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    io_result.map_err(|e| Error::Parse(format!("progress stream: {e}")))?;
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerOfThree {
    pub exponent: u32,
    pub i_min: Option<usize>,
    pub cardinality: Option<u64>,
    pub stopping_time: Option<u64>,
    pub terminated: bool,
    /// The last row is `(x, y) = (4, 1)`.
    pub at_fixed_point: bool,
    /// Full cross-check against the classical oracle passed.
    pub cross_checked: bool,
}

impl PowerOfThree {
    pub fn passed(&self) -> bool {
        self.terminated
            && self.at_fixed_point
            && self.cross_checked
            && self.cardinality.is_some()
            && self.cardinality == self.stopping_time.map(|s| s + 1)
    }
}

pub fn power_of_three(exponent: u32, budget: u64) -> PowerOfThree {
    let n = Natural::pow(3, exponent).expect("3^e is nonzero");
    let trace = AcceleratedTrace::run(&n, budget);
    let last = trace.rows.last().expect("trace has a row");
    let at_fixed_point = last.x.to_u64() == Some(4) && last.y.is_one();
    PowerOfThree {
        exponent,
        i_min: trace.i_min,
        cardinality: crate::accelerated::cardinality_formula(&trace).ok(),
        stopping_time: total_stopping_time(&n, budget).ok(),
        terminated: trace.terminated,
        at_fixed_point,
        cross_checked: cross_check(&n, budget).is_ok_and(|c| c.passed()),
    }
}

/// Runs the accelerated iteration on `3^e` for `e` in `1..=max_exp`.
pub fn powers_of_three(max_exp: u32, budget: u64, workers: usize) -> Result<Vec<PowerOfThree>> {
    if max_exp == 0 {
        return Err(Error::InvalidRange { lo: 1, hi: 1 });
    }
    let mut out = Vec::with_capacity(max_exp as usize);
    run_ordered(
        max_exp as usize,
        workers,
        |i| power_of_three(i as u32 + 1, budget),
        |_, r| {
            out.push(r);
            Ok(())
        },
    )
    .expect("collecting into memory cannot fail");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(lo: u64, hi: u64, workers: usize, chunk: u64) -> (ScanSummary, String) {
        let config = ScanConfig {
            workers,
            chunk_size: chunk,
            ..ScanConfig::default()
        };
        let mut progress = Vec::new();
        let s = scan_range(lo, hi, &config, &mut progress).unwrap();
        (s, String::from_utf8(progress).unwrap())
    }

    #[test]
    fn single_value() {
        let (s, progress) = scan(1, 2, 1, 1024);
        assert_eq!(s.verified, 1);
        assert_eq!(s.max_i_min, Some((1, 0)));
        assert_eq!(s.max_cardinality, Some((1, 1)));
        assert_eq!(progress, "CHUNK 1 2 ok=1 undecided=0\n");
    }

    #[test]
    fn first_two_hundred() {
        let (s, _) = scan(1, 201, 3, 16);
        assert_eq!(s.verified, 200);
        assert_eq!(s.undecided, 0);
        assert!(s.mismatched.is_empty());
        assert_eq!(s.max_i_min, Some((171, 45)));
        assert_eq!(s.histogram.values().sum::<u64>(), 200);
    }

    #[test]
    fn invalid_ranges() {
        let mut sink = Vec::new();
        let c = ScanConfig::default();
        assert!(scan_range(0, 5, &c, &mut sink).is_err());
        assert!(scan_range(5, 5, &c, &mut sink).is_err());
        assert!(scan_range(9, 5, &c, &mut sink).is_err());
    }

    #[test]
    fn progress_stream_is_ordered() {
        let (a, pa) = scan(1, 5000, 1, 100);
        let (b, pb) = scan(1, 5000, 7, 100);
        assert_eq!(a, b);
        assert_eq!(pa, pb);
        assert_eq!(pa.lines().count(), 50);
        assert_eq!(pa.lines().last(), Some("CHUNK 4901 5000 ok=99 undecided=0"));
    }

    #[test]
    fn chunk_size_does_not_matter() {
        assert_eq!(scan(1, 3000, 4, 7).0, scan(1, 3000, 2, 1024).0);
    }

    #[test]
    fn resume_skips_prefix() {
        let config = ScanConfig {
            resume_from: Some(150),
            chunk_size: 10,
            ..ScanConfig::default()
        };
        let mut progress = Vec::new();
        let s = scan_range(1, 201, &config, &mut progress).unwrap();
        assert_eq!(s.lo, 150);
        assert_eq!(s.verified, 51);
        let progress = String::from_utf8(progress).unwrap();
        assert!(progress.starts_with("CHUNK 150 160 "));
        assert_eq!(s, scan(150, 201, 2, 10).0);
    }

    #[test]
    fn budget_is_monotone() {
        let tight = ScanConfig {
            budget: 20,
            ..ScanConfig::default()
        };
        let mut sink = io::sink();
        let small = scan_range(1, 500, &tight, &mut sink).unwrap();
        assert!(small.undecided > 0);
        assert_eq!(small.scanned(), 499);
        for n in 1..500 {
            if let Verdict::Verified { .. } = verify_one(n, 20).unwrap() {
                assert_eq!(verify_one(n, 21).unwrap(), verify_one(n, DEFAULT_BUDGET).unwrap());
            }
        }
    }

    #[test]
    fn per_n_reproducible() {
        assert_eq!(
            verify_one(27, DEFAULT_BUDGET).unwrap(),
            Verdict::Verified {
                i_min: 41,
                cardinality: 112
            }
        );
    }

    #[test]
    fn small_powers_of_three() {
        let p = powers_of_three(2, DEFAULT_BUDGET, 1).unwrap();
        assert_eq!(p[0].exponent, 1);
        assert_eq!(p[0].i_min, Some(2));
        assert_eq!(p[1].stopping_time, Some(19));
        assert_eq!(p[1].cardinality, Some(20));
        assert!(p.iter().all(PowerOfThree::passed));
        assert!(powers_of_three(0, DEFAULT_BUDGET, 1).is_err());
    }

    #[test]
    fn power_of_three_trace_of_three() {
        let t = AcceleratedTrace::run(&Natural::from_u64(3).unwrap(), 10);
        let ys: Vec<_> = t.rows.iter().map(|r| r.y.to_u64().unwrap()).collect();
        assert_eq!(ys, [3, 5, 1, 1]);
    }
}
