use std::hint::black_box;
use std::time::Instant;

use super::meter::MeterScope;
use super::registry::StructureSpec;
use super::workload::{generate, WorkloadSpec};
use super::HarnessError;
use crate::api::PredecessorSet;

/// Results of one iteration, or the average over all iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub structure: String,
    pub params: String,
    pub width: u32,
    pub n: usize,
    /// `None` marks the average row.
    pub iteration: Option<usize>,
    pub seed: u64,
    pub insert_ns: u64,
    pub query_ns: u64,
    pub delete_ns: u64,
    pub insert_ops_s: f64,
    pub query_ops_s: f64,
    pub delete_ops_s: f64,
    /// `None` when allocations are not metered.
    pub peak_bytes: Option<u64>,
    pub bytes_after_insert: Option<u64>,
    pub bits_per_key: Option<f64>,
}

/// What an iteration produced besides timings, for checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunCheck {
    /// Folded predecessor answers of the query phase.
    pub checksum: u64,
    /// Structure size after the delete phase.
    pub final_len: usize,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub measurements: Vec<Measurement>,
    pub checks: Vec<RunCheck>,
}

impl ExperimentResult {
    /// Per-iteration rows followed by the average row.
    pub fn rows_with_average(&self) -> Vec<Measurement> {
        let mut rows = self.measurements.clone();
        if let Some(avg) = average(&self.measurements) {
            rows.push(avg);
        }
        rows
    }
}

#[inline]
fn fold(checksum: u64, answer: Option<u64>) -> u64 {
    checksum
        .rotate_left(5)
        .wrapping_add(answer.map_or(0x9e37_79b9_7f4a_7c15, |p| p ^ 0x5555))
}

fn ops_per_sec(ops: usize, ns: u64) -> f64 {
    ops as f64 / (ns.max(1) as f64 / 1e9)
}

/// Runs the three-phase protocol: insert all keys, run all queries, delete
/// the keys in insertion order, once per iteration.
pub fn run_experiment(spec: &WorkloadSpec, structure: &StructureSpec) -> Result<ExperimentResult, HarnessError> {
    spec.validate()?;
    let mut result = ExperimentResult {
        measurements: Vec::with_capacity(spec.iterations),
        checks: Vec::with_capacity(spec.iterations),
    };
    for iteration in 0..spec.iterations {
        let workload = generate(spec, iteration)?;
        let scope = MeterScope::open();
        let mut set = structure.build(spec.width)?;

        let start = Instant::now();
        for &x in &workload.inserts {
            black_box(set.insert(x));
        }
        let insert_ns = start.elapsed().as_nanos() as u64;
        let bytes_after_insert = scope.as_ref().map(|s| s.live() as u64);

        let start = Instant::now();
        let mut checksum = 0u64;
        for &x in &workload.queries {
            checksum = fold(checksum, set.predecessor(black_box(x)));
        }
        let query_ns = start.elapsed().as_nanos() as u64;
        black_box(checksum);

        let start = Instant::now();
        for &x in &workload.inserts {
            black_box(set.remove(x));
        }
        let delete_ns = start.elapsed().as_nanos() as u64;
        let final_len = set.len();
        let peak_bytes = scope.as_ref().map(|s| s.peak() as u64);
        drop(set);

        result.measurements.push(Measurement {
            structure: structure.kind.id().to_string(),
            params: structure.params_string(),
            width: spec.width.bits(),
            n: spec.n,
            iteration: Some(iteration),
            seed: spec.iteration_seed(iteration),
            insert_ns,
            query_ns,
            delete_ns,
            insert_ops_s: ops_per_sec(spec.n, insert_ns),
            query_ops_s: ops_per_sec(spec.q, query_ns),
            delete_ops_s: ops_per_sec(spec.n, delete_ns),
            peak_bytes,
            bytes_after_insert,
            bits_per_key: bytes_after_insert.map(|b| 8.0 * b as f64 / spec.n as f64),
        });
        result.checks.push(RunCheck { checksum, final_len });
    }
    Ok(result)
}

/// Checksum an oracle would produce for the same workload, per iteration.
pub fn reference_checksums(spec: &WorkloadSpec) -> Result<Vec<u64>, HarnessError> {
    (0..spec.iterations)
        .map(|i| {
            let workload = generate(spec, i)?;
            let mut keys = workload.inserts.clone();
            keys.sort_unstable();
            keys.dedup();
            Ok(workload.queries.iter().fold(0, |acc, &x| {
                let r = keys.partition_point(|&k| k <= x);
                fold(acc, r.checked_sub(1).map(|i| keys[i]))
            }))
        })
        .collect()
}

/// Mean of every numeric column; memory stays `None` if any row lacks it.
pub fn average(rows: &[Measurement]) -> Option<Measurement> {
    let first = rows.first()?;
    let k = rows.len() as f64;
    let mean_u = |f: fn(&Measurement) -> u64| (rows.iter().map(|r| f(r) as f64).sum::<f64>() / k).round() as u64;
    let mean_f = |f: fn(&Measurement) -> f64| rows.iter().map(f).sum::<f64>() / k;
    let mean_opt = |f: fn(&Measurement) -> Option<f64>| -> Option<f64> {
        rows.iter().map(f).sum::<Option<f64>>().map(|s| s / k)
    };
    Some(Measurement {
        iteration: None,
        seed: first.seed,
        insert_ns: mean_u(|r| r.insert_ns),
        query_ns: mean_u(|r| r.query_ns),
        delete_ns: mean_u(|r| r.delete_ns),
        insert_ops_s: mean_f(|r| r.insert_ops_s),
        query_ops_s: mean_f(|r| r.query_ops_s),
        delete_ops_s: mean_f(|r| r.delete_ops_s),
        peak_bytes: mean_opt(|r| r.peak_bytes.map(|b| b as f64)).map(|b| b.round() as u64),
        bytes_after_insert: mean_opt(|r| r.bytes_after_insert.map(|b| b as f64)).map(|b| b.round() as u64),
        bits_per_key: mean_opt(|r| r.bits_per_key),
        ..first.clone()
    })
}
