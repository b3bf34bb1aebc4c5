//! The benchmark protocol from code: insert n keys, run q queries, delete
//! in insertion order, and write the measurements as CSV to stdout.
//!
//! cargo run --release --example experiment

use std::io;

use dynpred::api::Width;
use dynpred::harness::{self, CountingAllocator, StructureSpec, WorkloadSpec};

// Without this the memory columns read NA.
#[global_allocator]
static ALLOC: CountingAllocator = CountingAllocator;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let workload = WorkloadSpec { width: Width::W40, n: 1 << 18, q: 200_000, iterations: 3, seed: 1 };
    let specs = [
        StructureSpec::parse("yfast-ul", &["t=2^8"])?,
        StructureSpec::parse("btree-ls", &["B=64"])?,
        StructureSpec::parse("us-hash", &["bucket=hybrid"])?,
    ];
    let expected = harness::reference_checksums(&workload)?;
    let mut rows = Vec::new();
    for spec in &specs {
        let result = harness::run_experiment(&workload, spec)?;
        let checks_ok = result.checks.iter().zip(&expected).all(|(c, &want)| c.checksum == want && c.final_len == 0);
        eprintln!("{spec}: checksums match the sorted-array reference: {checks_ok}");
        rows.extend(result.rows_with_average());
    }
    harness::write_csv(io::stdout().lock(), &rows)?;
    Ok(())
}
