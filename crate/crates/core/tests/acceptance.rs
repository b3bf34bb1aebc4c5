//! Acceptance suite: one PASS/FAIL line per criterion, then a single
//! assertion that all of them passed.
//!
//! The lines bypass output capture, so `cargo test --test acceptance` shows
//! them.

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use dynpred::api::{PredecessorSet, Width};
use dynpred::fusion::{FusionNode, FusionNode16, FusionNode8, RankSearch, RowWord};
use dynpred::harness::{
    self, reference_checksums, run_experiment, standard_specs, CountingAllocator, StructureKind, StructureSpec,
    WorkloadSpec,
};
use dynpred::sampling::{BucketKind, TopKind, USConfig, UniverseSampling};
use dynpred::word_ops::{self, native, portable, Word256};
use dynpred::yfast::{BucketOrder, YFastConfig, YFastTrie};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[global_allocator]
static ALLOC: CountingAllocator = CountingAllocator;

fn w5() -> Width {
    Width::new(5).unwrap()
}

fn within(limit: Duration, body: impl FnOnce() -> String) -> String {
    let start = Instant::now();
    let detail = body();
    let took = start.elapsed();
    assert!(took <= limit, "took {took:.2?}, limit {limit:?}");
    format!("{detail}; {took:.2?} (limit {limit:?})")
}

fn rows<W: RowWord>(node: &FusionNode<W>) -> (Vec<u64>, Vec<u64>) {
    let n = node.len();
    ((0..n).map(|i| node.branch_row(i)).collect(), (0..n).map(|i| node.free_row(i)).collect())
}

fn worked_examples() -> String {
    within(Duration::from_secs(1), || {
        for search in [RankSearch::Packed, RankSearch::Linear] {
            let node = FusionNode8::rebuild(&[2, 3, 12, 27], search).unwrap();
            assert_eq!(node.mask(), 0b11001);
            // Column c of a row is branching position c in ascending order;
            // a free bit marks a don't-care entry.
            assert_eq!(rows(&node), (vec![0b000, 0b001, 0b010, 0b100], vec![0b000, 0b000, 0b001, 0b011]));
            assert_eq!(node.match_rank(25), 4);
            assert_eq!(node.match_rank(4), 1);
            assert_eq!(node.match_rank(0b00111), 2);
            assert_eq!(node.match_rank(0b11000), 4);
            assert_eq!(node.predecessor(25), Some(12));
            assert_eq!(node.predecessor(4), Some(3));

            let mut node = node;
            assert!(node.remove(12));
            assert_eq!(node.mask(), 0b10001);
            assert_eq!(rows(&node), (vec![0b00, 0b01, 0b10], vec![0b00, 0b00, 0b01]));
            assert_eq!(node, FusionNode8::rebuild(&[2, 3, 27], search).unwrap());
        }
        "rebuild {2,3,12,27}, matches 4/1/2/4, pred(25)=12, pred(4)=3, delete 12".into()
    })
}

fn canonical_steps<W: RowWord>(bits: u32, steps: usize, seed: u64) {
    let max = Width::new(bits).unwrap().max_key();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut node = FusionNode::<W>::new(RankSearch::Packed);
    // A shared high part makes the branching positions cluster low.
    let base = rng.gen_range(0..=max);
    for step in 0..steps {
        let fresh = if rng.gen_bool(0.5) { rng.gen_range(0..=max) } else { (base ^ rng.gen_range(0..256)) & max };
        let grow = node.is_empty() || (!node.is_full() && rng.gen_bool(0.55));
        if grow {
            node.insert(fresh).unwrap();
        } else {
            let victim = if rng.gen_bool(0.9) { *node.keys().choose(&mut rng).unwrap() } else { fresh };
            node.remove(victim);
        }
        let canonical = FusionNode::<W>::rebuild(node.keys(), RankSearch::Packed).unwrap();
        assert_eq!(node, canonical, "k={} w={bits} step {step}", W::LANES);
    }
}

fn canonical_rebuild() -> String {
    within(Duration::from_secs(30), || {
        for (i, bits) in [32, 40, 64].into_iter().enumerate() {
            canonical_steps::<u64>(bits, 10_000, 100 + i as u64);
            canonical_steps::<Word256>(bits, 10_000, 200 + i as u64);
        }
        "10^4 steps for k in {8,16} and w in {32,40,64}, state equals rebuild after each".into()
    })
}

fn brute_pred(keys: &[u64], x: u64) -> Option<u64> {
    keys.iter().copied().filter(|&k| k <= x).max()
}

fn subsets(universe: u64, max_size: usize, mut visit: impl FnMut(&[u64])) -> usize {
    fn rec(next: u64, universe: u64, max_size: usize, cur: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64]), n: &mut usize) {
        visit(cur);
        *n += 1;
        if cur.len() == max_size {
            return;
        }
        for k in next..universe {
            cur.push(k);
            rec(k + 1, universe, max_size, cur, visit, n);
            cur.pop();
        }
    }
    let mut count = 0;
    rec(0, universe, max_size, &mut Vec::new(), &mut visit, &mut count);
    count
}

/// Inserts `keys`, checks every query, then deletes them one by one and
/// checks every query again after each delete.
fn check_dynamic(set: &mut dyn PredecessorSet, keys: &[u64], label: &str) {
    for &k in keys {
        assert!(set.insert(k), "{label} insert {k} into {keys:?}");
    }
    let mut live = keys.to_vec();
    loop {
        for x in 0..32 {
            assert_eq!(set.predecessor(x), brute_pred(&live, x), "{label} {live:?} pred {x}");
        }
        let Some(k) = live.first().copied() else { break };
        live.remove(0);
        assert!(set.remove(k), "{label} remove {k}");
    }
    assert!(set.is_empty());
}

fn exhaustive() -> String {
    within(Duration::from_secs(60), || {
        let w = w5();
        let yfast: Vec<YFastConfig> = [BucketOrder::Unsorted, BucketOrder::Sorted]
            .into_iter()
            .map(|order| YFastConfig { t: 2, c: 2, gamma: 1.0, order })
            .collect();
        let mut us = Vec::new();
        for top in [TopKind::Array, TopKind::Hash] {
            for bucket in [BucketKind::BitVector, BucketKind::List, BucketKind::Hybrid] {
                us.push(USConfig { k_b: 3, top, bucket, theta_min: 3, theta_max: 3 });
            }
        }
        let sets = subsets(32, 4, |keys| {
            for search in [RankSearch::Packed, RankSearch::Linear] {
                let node = FusionNode8::rebuild(keys, search).unwrap();
                let wide = FusionNode16::rebuild(keys, search).unwrap();
                for x in 0..32 {
                    let want = brute_pred(keys, x);
                    assert_eq!(node.predecessor(x), want, "fusion {keys:?} pred {x}");
                    assert_eq!(wide.predecessor(x), want, "fusion-wide {keys:?} pred {x}");
                }
            }
            for &cfg in &yfast {
                check_dynamic(&mut YFastTrie::new(w, cfg).unwrap(), keys, "yfast");
            }
            for &cfg in &us {
                check_dynamic(&mut UniverseSampling::new(w, cfg).unwrap(), keys, "us");
            }
        });
        assert_eq!(sets, 41_449);
        format!("{sets} sets x 32 queries: fusion (k=8,16), yfast t=2 c=2 gamma=1, us b=8 theta=3")
    })
}

fn supported_widths(kind: StructureKind) -> Vec<Width> {
    Width::ALL.into_iter().filter(|&w| kind.supports(w)).collect()
}

/// Bucket numbers a universe-sampling soak may touch, as a power of two.
const BUCKET_RANGE_BITS: u32 = 24;

/// Key window for the soak. With buckets of `2^k_b` keys there are
/// `2^(w - k_b)` bucket numbers: an array top may need an entry for each,
/// and a hash top probes them one by one below a query. Where that exceeds
/// the limit, keys are drawn from a window of `2^(k_b + 24)` keys instead.
fn soak_span(spec: &StructureSpec, width: Width) -> u32 {
    match spec.us_config() {
        Some(c) => width.bits().min(c.k_b + BUCKET_RANGE_BITS),
        None => width.bits(),
    }
}

fn differential_soak() -> String {
    within(Duration::from_secs(300), || {
        let mut runs = 0;
        let mut windowed = Vec::new();
        for (i, spec) in standard_specs().into_iter().enumerate() {
            for width in supported_widths(spec.kind) {
                let seed = 1000 + i as u64;
                let span = soak_span(&spec, width);
                if span < width.bits() {
                    windowed.push(format!("{spec} w={width} span=2^{span}"));
                }
                if let Err(d) = harness::verify_within(&spec, width, span, 100_000, seed).unwrap() {
                    panic!("{d}");
                }
                runs += 1;
            }
        }
        format!("{runs} structure/width pairs x 10^5 ops agree with the oracle; key window: {}", windowed.join(", "))
    })
}

fn figure_state(order: BucketOrder) -> YFastTrie {
    YFastTrie::from_parts(
        w5(),
        YFastConfig { t: 2, c: 2, gamma: 1.0, order },
        &[],
        &[(0, true, &[3, 6, 7, 9]), (17, false, &[17, 18, 19]), (20, true, &[21, 23])],
    )
    .unwrap()
}

fn figure_replay() -> String {
    within(Duration::from_secs(1), || {
        for order in [BucketOrder::Unsorted, BucketOrder::Sorted] {
            let mut t = figure_state(order);
            let l_bot = t.l_bot();
            assert!(t.insert(8));
            let b = t.buckets();
            let reps: Vec<_> = b.iter().map(|v| v.rep).collect();
            assert_eq!(reps, [None, Some(0), Some(7), Some(17), Some(20)]);
            assert_eq!(b[1].keys, [3, 6]);
            assert_eq!(b[2].keys, [7, 8, 9]);
            assert!(!b[2].rep_dead);
            assert_eq!(t.l_bot(), l_bot);
            t.validate().unwrap();

            let mut t = figure_state(order);
            assert!(t.remove(21));
            let b = t.buckets();
            let reps: Vec<_> = b.iter().map(|v| v.rep).collect();
            assert_eq!(reps, [None, Some(0), Some(17)]);
            assert_eq!(b[2].keys, [17, 18, 19, 23]);
            assert_eq!(t.l_bot(), t.l_top());
            t.validate().unwrap();
        }
        "insert 8 splits to {3,6}/{7,8,9} with rep 7; delete 21 merges and drops rep 20".into()
    })
}

fn word_ops_pass(rng: &mut ChaCha8Rng, samples: usize) {
    let hw = word_ops::hardware_support();
    assert!(hw.bmi2 && hw.sse2 && hw.avx2, "no intrinsic path to compare against: {hw:?}");
    for _ in 0..samples {
        let x: u64 = rng.gen();
        // Sparse and dense masks both matter for pext/pdep.
        let mask: u64 = match rng.gen_range(0..3) {
            0 => rng.gen(),
            1 => rng.gen::<u64>() & rng.gen::<u64>() & rng.gen::<u64>(),
            _ => rng.gen::<u64>() | rng.gen::<u64>(),
        };
        let pext = portable::extract_bits(x, mask);
        assert_eq!(native::extract_bits(x, mask), Some(pext));
        assert_eq!(word_ops::extract_bits(x, mask), pext);
        let pdep = portable::deposit_bits(x, mask);
        assert_eq!(native::deposit_bits(x, mask), Some(pdep));
        assert_eq!(word_ops::deposit_bits(x, mask), pdep);
        if mask != 0 {
            let r = rng.gen_range(1..=mask.count_ones());
            let s = portable::select1(mask, r);
            assert_eq!(native::select1(mask, r), Some(s));
            assert_eq!(word_ops::select1(mask, r), Ok(s));
        }
        assert_eq!(native::msb0(x), portable::msb0(x));
        assert_eq!(word_ops::msb0(x).ok(), portable::msb0(x));
        assert_eq!(native::tzcnt(x), portable::tzcnt(x));
        assert_eq!(word_ops::tzcnt(x), portable::tzcnt(x));
        assert_eq!(word_ops::count_trailing_ones(x), portable::count_trailing_ones(x));

        let y: u8 = rng.gen();
        assert_eq!(native::packed_rank(x, y), Some(portable::packed_rank(x, y)));
        assert_eq!(word_ops::packed_rank(x, y), portable::packed_rank(x, y));
        let lanes = Word256::from_limbs(rng.gen());
        let y16: u16 = rng.gen();
        assert_eq!(native::packed_rank_wide(&lanes, y16), Some(portable::packed_rank_wide(&lanes, y16)));
        assert_eq!(word_ops::packed_rank_wide(&lanes, y16), portable::packed_rank_wide(&lanes, y16));
    }
}

fn word_op_equivalence() -> String {
    assert_eq!(word_ops::backend_from_env(Some("1")), word_ops::Backend::Portable);
    assert_eq!(word_ops::backend_from_env(None), word_ops::Backend::Native);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut passes = Vec::new();
    for portable_backend in [false, true] {
        word_ops::force_portable(portable_backend);
        word_ops_pass(&mut rng, 100_000);
        passes.push(format!("{:?}", word_ops::backend()));
    }
    word_ops::force_portable(false);
    format!("10^5 inputs per op, native == portable, dispatch checked under {}", passes.join(" and "))
}

fn bits_per_key(spec: &StructureSpec, workload: &WorkloadSpec) -> f64 {
    let result = run_experiment(workload, spec).unwrap();
    result.measurements[0].bits_per_key.expect("allocation meter installed")
}

fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|p| p[1] < p[0])
}

fn memory_trends() -> String {
    let workload = WorkloadSpec { width: Width::W64, n: 1 << 20, q: 1000, iterations: 1, seed: 1 };
    let yfast: Vec<f64> = [64, 128, 256, 512]
        .iter()
        .map(|t| bits_per_key(&StructureSpec::new(StructureKind::YFastUl).with("t", t), &workload))
        .collect();
    let btree: Vec<f64> = [8, 16, 64, 128, 256]
        .iter()
        .map(|b| bits_per_key(&StructureSpec::new(StructureKind::BTreeLs).with("B", b), &workload))
        .collect();
    let show = |v: &[f64]| v.iter().map(|x| format!("{x:.1}")).collect::<Vec<_>>().join(" > ");
    let detail = format!("yfast t=64..512: {}; btree B=8..256: {}", show(&yfast), show(&btree));
    assert!(strictly_decreasing(&yfast), "yfast not decreasing: {detail}");
    assert!(strictly_decreasing(&btree), "btree not decreasing: {detail}");
    detail
}

/// Whether a structure's top level at this width fits the machine: over
/// uniform keys an array top needs an entry per bucket number in range and
/// a hash top probes that many numbers below each query.
fn top_level_fits(spec: &StructureSpec, width: Width) -> bool {
    spec.us_config().is_none_or(|c| width.bits() - c.k_b <= BUCKET_RANGE_BITS)
}

fn harness_protocol() -> String {
    let workload = WorkloadSpec { width: Width::W32, n: 10_000, q: 10_000, iterations: 2, seed: 5 };
    let mut runs = 0;
    let mut skipped = Vec::new();
    for spec in standard_specs() {
        for width in supported_widths(spec.kind) {
            if !top_level_fits(&spec, width) {
                skipped.push(format!("{spec} w={width}"));
                continue;
            }
            let workload = WorkloadSpec { width, ..workload };
            let expected = reference_checksums(&workload).unwrap();
            let result = run_experiment(&workload, &spec).unwrap();
            assert_eq!(result.checks.len(), expected.len());
            for (check, want) in result.checks.iter().zip(&expected) {
                assert_eq!(check.final_len, 0, "{spec} w={width}");
                assert_eq!(check.checksum, *want, "{spec} w={width}");
            }
            runs += 1;
        }
    }
    format!(
        "{runs} structure/width pairs end empty with oracle checksums at n=q=10^4; skipped (over 2^{BUCKET_RANGE_BITS} bucket numbers): {}",
        skipped.join(", ")
    )
}

/// Writes past the test harness's output capture, so the lines show up in
/// a plain `cargo test` run.
fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

type Criterion = (&'static str, fn() -> String);

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("worked examples", worked_examples),
        ("fusion canonical rebuild", canonical_rebuild),
        ("exhaustive w=5", exhaustive),
        ("differential soak", differential_soak),
        ("y-fast figure replay", figure_replay),
        ("word-op equivalence", word_op_equivalence),
        ("memory trends", memory_trends),
        ("harness protocol", harness_protocol),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(detail) => report(&format!("PASS {name}: {detail}")),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                report(&format!("FAIL {name}: {msg}"));
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
