use super::*;
use crate::api::OracleSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_config(order: BucketOrder) -> YFastConfig {
    YFastConfig {
        t: 2,
        c: 2,
        gamma: 1.0,
        order,
    }
}

fn w5() -> Width {
    Width::new(5).unwrap()
}

/// The state drawn in the y-fast figure: w = 5, t = 2, c = 2, γ = 1.
fn figure_state(order: BucketOrder) -> YFastTrie {
    YFastTrie::from_parts(
        w5(),
        small_config(order),
        &[],
        &[(0, true, &[3, 6, 7, 9]), (17, false, &[17, 18, 19]), (20, true, &[21, 23])],
    )
    .unwrap()
}

#[test]
fn rejects_bad_config() {
    let bad = [
        YFastConfig { t: 3, ..YFastConfig::default() },
        YFastConfig { gamma: 0.0, ..YFastConfig::default() },
        YFastConfig { c: 1, gamma: 1.0, ..YFastConfig::default() },
    ];
    for cfg in bad {
        assert!(YFastTrie::new(Width::W64, cfg).is_err(), "{cfg:?}");
    }
}

#[test]
fn figure_levels_and_queries() {
    for order in [BucketOrder::Unsorted, BucketOrder::Sorted] {
        let t = figure_state(order);
        assert_eq!((t.l_top(), t.l_bot()), (1, 3));
        assert_eq!(t.locate(20).rep, Some(20));
        assert_eq!(t.locate(10).rep, Some(0));
        assert_eq!(t.predecessor(22), Some(21));
        assert_eq!(t.predecessor(20), Some(19));
        assert_eq!(t.predecessor(2), None);
        assert_eq!(t.predecessor(16), Some(9));
    }
}

#[test]
fn figure_examples() {
    for order in [BucketOrder::Unsorted, BucketOrder::Sorted] {
        let mut t = figure_state(order);
        assert!(t.insert(8));
        let b = t.buckets();
        assert_eq!(b[1].keys, [3, 6]);
        assert_eq!((b[1].rep, b[1].rep_dead), (Some(0), true));
        assert_eq!(b[2].keys, [7, 8, 9]);
        assert_eq!((b[2].rep, b[2].rep_dead), (Some(7), false));
        assert_eq!(t.l_bot(), 3);
        t.validate().unwrap();

        let mut t = figure_state(order);
        assert!(t.remove(21));
        let b = t.buckets();
        assert_eq!(b.len(), 3);
        assert_eq!(b[2].keys, [17, 18, 19, 23]);
        assert_eq!(b[2].rep, Some(17));
        assert_eq!(t.l_bot(), t.l_top());
        assert_eq!(t.l_bot(), 1);
        t.validate().unwrap();
    }
}

#[test]
fn single_and_empty() {
    let mut t = YFastTrie::new(Width::W40, small_config(BucketOrder::Sorted)).unwrap();
    assert_eq!(t.predecessor(5), None);
    assert!(!t.remove(5));
    for k in [50, 40, 30, 20, 10] {
        assert!(t.insert(k));
        t.validate().unwrap();
    }
    assert!(!t.insert(30));
    assert_eq!(t.predecessor(35), Some(30));
    assert_eq!(t.predecessor(9), None);
    for k in [10, 20, 30, 40, 50] {
        assert!(t.remove(k));
        t.validate().unwrap();
    }
    assert!(t.is_empty());
    assert_eq!(t.bucket_count(), 1);
}

fn soak(width: Width, config: YFastConfig, ops: usize, seed: u64, audit_every: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = YFastTrie::new(width, config).unwrap();
    let mut oracle = OracleSet::new(width);
    let max = width.max_key();
    // Clustered keys stress deep trie levels.
    let base = rng.gen_range(0..=max);
    for step in 0..ops {
        let x = match rng.gen_range(0..4) {
            0 if !oracle.is_empty() => *oracle.keys().choose(&mut rng).unwrap(),
            1 => (base ^ rng.gen_range(0..1024)) & max,
            _ => rng.gen_range(0..=max),
        };
        match rng.gen_range(0..10) {
            0..=4 => assert_eq!(t.insert(x), oracle.insert(x), "insert {x}"),
            5..=7 => assert_eq!(t.remove(x), oracle.remove(x), "remove {x}"),
            _ => assert_eq!(t.predecessor(x), oracle.predecessor(x), "pred {x}"),
        }
        if step % audit_every == 0 {
            t.validate().unwrap();
            t.check_sizes().unwrap();
        }
    }
    t.validate().unwrap();
    assert_eq!(t.to_sorted_vec(), oracle.to_sorted_vec());
}

#[test]
fn matches_oracle_small_buckets() {
    let widths = [w5(), Width::new(12).unwrap(), Width::W32, Width::W40, Width::W64];
    for (i, width) in widths.into_iter().enumerate() {
        for order in [BucketOrder::Unsorted, BucketOrder::Sorted] {
            let audit_every = if width.bits() <= 12 { 1 } else { 13 };
            soak(width, small_config(order), 5000, i as u64, audit_every);
        }
    }
}

#[test]
fn matches_oracle_default_buckets() {
    let cfg = YFastConfig { t: 4, ..YFastConfig::default() };
    soak(Width::W64, cfg, 30_000, 9, 97);
}
