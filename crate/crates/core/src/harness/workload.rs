use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::api::Width;

/// Stream of a per-iteration generator that draws the insert keys.
pub const INSERT_STREAM: u64 = 0;
/// Stream that draws the query keys.
pub const QUERY_STREAM: u64 = 1;

/// One experiment: `iterations` runs of inserting `n` random keys, querying
/// `q` random keys and deleting the keys again.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkloadSpec {
    pub width: Width,
    pub n: usize,
    pub q: usize,
    pub iterations: usize,
    /// Iteration `i` uses seed `seed + i`.
    pub seed: u64,
}

impl Default for WorkloadSpec {
    fn default() -> Self {
        WorkloadSpec {
            width: Width::W32,
            n: 1 << 20,
            q: 1_000_000,
            iterations: 5,
            seed: 1,
        }
    }
}

impl WorkloadSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n < 2 || self.q < 1 || self.iterations < 1 {
            return Err(HarnessError::Workload(format!(
                "need n >= 2, q >= 1 and iterations >= 1, got n = {}, q = {}, iterations = {}",
                self.n, self.q, self.iterations
            )));
        }
        Ok(())
    }

    pub fn iteration_seed(&self, iteration: usize) -> u64 {
        self.seed.wrapping_add(iteration as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workload {
    /// Uniform draws from the universe, with replacement.
    pub inserts: Vec<u64>,
    /// Uniform draws from `[min(S), max(S))` for the inserted set S.
    pub queries: Vec<u64>,
}

fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Deterministic workload of the given iteration. Fails if every insert
/// draw hit the same key, leaving no query range.
pub fn generate(spec: &WorkloadSpec, iteration: usize) -> Result<Workload, HarnessError> {
    spec.validate()?;
    let seed = spec.iteration_seed(iteration);
    let max = spec.width.max_key();
    let mut rng = stream(seed, INSERT_STREAM);
    let inserts: Vec<u64> = (0..spec.n).map(|_| rng.gen_range(0..=max)).collect();
    let lo = *inserts.iter().min().expect("n >= 2");
    let hi = *inserts.iter().max().expect("n >= 2");
    if lo == hi {
        return Err(HarnessError::Workload(format!("all {} insert keys equal {lo}", spec.n)));
    }
    let mut rng = stream(seed, QUERY_STREAM);
    let queries = (0..spec.q).map(|_| rng.gen_range(lo..hi)).collect();
    Ok(Workload { inserts, queries })
}
