//! Differential checking against a sorted array, including what a
//! divergence report looks like for a deliberately broken set.
//!
//! cargo run --release --example differential

use dynpred::api::{OracleSet, PredecessorSet, Width};
use dynpred::harness::{self, apply, random_ops, standard_specs, Op};

/// Loses every key once it holds more than 50.
struct Leaky(OracleSet);

impl PredecessorSet for Leaky {
    fn insert(&mut self, key: u64) -> bool {
        let changed = self.0.insert(key);
        if self.0.len() > 50 {
            *self = Leaky(OracleSet::new(self.0.width()));
        }
        changed
    }
    fn remove(&mut self, key: u64) -> bool {
        self.0.remove(key)
    }
    fn predecessor(&self, key: u64) -> Option<u64> {
        self.0.predecessor(key)
    }
    fn len(&self) -> usize {
        self.0.len()
    }
    fn width(&self) -> Width {
        self.0.width()
    }
    fn to_sorted_vec(&self) -> Vec<u64> {
        self.0.to_sorted_vec()
    }
    fn heap_bytes(&self) -> usize {
        self.0.heap_bytes()
    }
}

fn main() {
    for spec in standard_specs().into_iter().filter(|s| s.kind.supports(Width::W32)) {
        match harness::verify(&spec, Width::W32, 20_000, 42).unwrap() {
            Ok(()) => println!("ok   {spec}"),
            Err(d) => println!("FAIL {d}"),
        }
    }

    let ops = random_ops(Width::W32, 1000, 7);
    let mut leaky = Leaky(OracleSet::new(Width::W32));
    let mut oracle = OracleSet::new(Width::W32);
    let first = ops.iter().chain([&Op::Contents]).position(|&op| apply(&mut leaky, op) != apply(&mut oracle, op));
    println!("broken set diverges first at op {first:?}");
}
