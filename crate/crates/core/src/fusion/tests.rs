use super::*;
use crate::api::{OracleSet, PredecessorSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Explicit binary trie used as an independent oracle for `rebuild`.
#[derive(Default)]
struct Trie {
    children: [Option<Box<Trie>>; 2],
}

impl Trie {
    fn build(keys: &[u64], bits: u32) -> Trie {
        let mut root = Trie::default();
        for &k in keys {
            let mut node = &mut root;
            for p in (0..bits).rev() {
                let b = ((k >> p) & 1) as usize;
                node = node.children[b].get_or_insert_with(Box::default);
            }
        }
        root
    }

    fn is_branching(&self) -> bool {
        self.children.iter().all(Option::is_some)
    }

    /// Mask plus per-key (branch, free) rows read off the trie paths.
    fn encode(&self, keys: &[u64], bits: u32) -> (u64, Vec<(u64, u64)>) {
        let mut mask = 0u64;
        let mut stack = vec![(self, bits)];
        while let Some((node, level)) = stack.pop() {
            if level == 0 {
                continue;
            }
            if node.is_branching() {
                mask |= 1 << (level - 1);
            }
            for c in node.children.iter().flatten() {
                stack.push((c, level - 1));
            }
        }
        let rows = keys
            .iter()
            .map(|&k| {
                let (mut branch, mut free) = (0, 0);
                let mut node = self;
                let mut col = mask.count_ones();
                for p in (0..bits).rev() {
                    if mask >> p & 1 == 1 {
                        col -= 1;
                        if node.is_branching() {
                            branch |= ((k >> p) & 1) << col;
                        } else {
                            free |= 1 << col;
                        }
                    }
                    node = node.children[((k >> p) & 1) as usize].as_ref().unwrap();
                }
                (branch, free)
            })
            .collect();
        (mask, rows)
    }
}

fn assert_matches_trie<W: RowWord>(keys: &[u64], bits: u32) {
    let node = FusionNode::<W>::rebuild(keys, RankSearch::Packed).unwrap();
    let (mask, rows) = Trie::build(keys, bits).encode(keys, bits);
    assert_eq!(node.mask(), mask, "keys {keys:?}");
    for (i, &(b, f)) in rows.iter().enumerate() {
        assert_eq!((node.branch_row(i), node.free_row(i)), (b, f), "row {i} of {keys:?}");
    }
    assert_eq!(node.branch_rows() & node.free_rows(), W::ZERO);
}

fn scalar_match<W: RowWord>(node: &FusionNode<W>, x: u64) -> usize {
    let xh = node.compress(x);
    (0..node.len())
        .filter(|&i| (node.branch_row(i) | (node.free_row(i) & xh)) <= xh)
        .count()
}

fn random_keys(rng: &mut ChaCha8Rng, n: usize, max: u64) -> Vec<u64> {
    let mut keys: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys
}

#[test]
fn rebuild_agrees_with_explicit_trie() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let bits = *[5u32, 12, 32, 64].choose(&mut rng).unwrap();
        let max = if bits == 64 { u64::MAX } else { (1 << bits) - 1 };
        let n = rng.gen_range(1..=8);
        let keys = random_keys(&mut rng, n, max);
        assert_matches_trie::<u64>(&keys, bits);
        let n = rng.gen_range(1..=16);
        let keys = random_keys(&mut rng, n, max);
        assert_matches_trie::<Word256>(&keys, bits);
    }
}

#[test]
fn singleton_is_all_dont_care() {
    let node = FusionNode8::rebuild(&[19], RankSearch::Packed).unwrap();
    assert_eq!(node.mask(), 0);
    assert_eq!(node.rank(18), 0);
    assert_eq!(node.rank(19), 1);
    assert_eq!(node.rank(u64::MAX), 1);
}

#[test]
fn exhaustive_five_bit_universe() {
    // All subsets of [0, 32) with at most four keys, every query.
    let mut subsets: Vec<Vec<u64>> = vec![vec![]];
    for x in 0..32u64 {
        let grown: Vec<Vec<u64>> = subsets
            .iter()
            .filter(|s| s.len() < 4)
            .map(|s| {
                let mut t = s.clone();
                t.push(x);
                t
            })
            .collect();
        subsets.extend(grown);
    }
    assert_eq!(subsets.len(), 1 + 32 + 496 + 4960 + 35960);
    for keys in &subsets {
        let narrow = FusionNode8::rebuild(keys, RankSearch::Packed).unwrap();
        let wide = FusionNode16::rebuild(keys, RankSearch::Packed).unwrap();
        let linear = FusionNode8::rebuild(keys, RankSearch::Linear).unwrap();
        for x in 0..32u64 {
            let expected = keys.partition_point(|&k| k <= x);
            assert_eq!(narrow.rank_with(x, 0), expected, "{keys:?} x={x}");
            assert_eq!(narrow.rank_with(x, 1), expected, "{keys:?} x={x}");
            assert_eq!(wide.rank(x), expected);
            assert_eq!(linear.rank(x), expected);
            if !keys.is_empty() {
                assert_eq!(narrow.match_rank(x), scalar_match(&narrow, x));
                assert_eq!(wide.match_rank(x), narrow.match_rank(x));
            }
        }
    }
}

fn incremental_vs_rebuild<W: RowWord>(bits: u32, steps: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max = if bits == 64 { u64::MAX } else { (1 << bits) - 1 };
    let mut node = FusionNode::<W>::new(RankSearch::Packed);
    let mut keys: Vec<u64> = Vec::new();
    for _ in 0..steps {
        let delete = !keys.is_empty() && (node.is_full() || rng.gen_bool(0.45));
        if delete {
            let x = if rng.gen_bool(0.9) {
                *keys.choose(&mut rng).unwrap()
            } else {
                rng.gen_range(0..=max)
            };
            let present = keys.binary_search(&x);
            assert_eq!(node.remove(x), present.is_ok());
            if let Ok(i) = present {
                keys.remove(i);
            }
        } else {
            // Mix far keys with near neighbours so deep unary paths occur.
            let x = match (keys.choose(&mut rng), rng.gen_range(0..3)) {
                (Some(&k), 0) => k ^ (1 << rng.gen_range(0..bits)),
                (Some(&k), 1) => k ^ rng.gen_range(0..16),
                _ => rng.gen_range(0..=max),
            };
            let present = keys.binary_search(&x);
            assert_eq!(node.insert(x).unwrap(), present.is_err());
            if let Err(i) = present {
                keys.insert(i, x);
            }
        }
        assert_eq!(node, FusionNode::<W>::rebuild(&keys, RankSearch::Packed).unwrap());
    }
}

#[test]
fn incremental_updates_stay_canonical() {
    for bits in [5, 32, 40, 64] {
        incremental_vs_rebuild::<u64>(bits, 2000, bits as u64);
        incremental_vs_rebuild::<Word256>(bits, 2000, bits as u64 + 100);
    }
}

#[test]
fn tree_single_node_equals_bare_node() {
    let mut tree = FusionTree8::new(Width::W32, RankSearch::Packed).unwrap();
    let keys = [5u64, 900, 77, 1 << 20, 3, 64, 65];
    for k in keys {
        assert!(tree.insert(k));
    }
    assert_eq!(tree.height(), 1);
    let mut sorted = keys.to_vec();
    sorted.sort_unstable();
    let bare = FusionNode8::rebuild(&sorted, RankSearch::Packed).unwrap();
    for x in [0, 3, 4, 64, 70, 1000, u32::MAX as u64] {
        assert_eq!(tree.predecessor(x), bare.predecessor(x));
    }
    assert!(tree.insert(1));
    assert_eq!(tree.height(), 2);
    tree.check_invariants().unwrap();
}

fn tree_against_oracle<W: RowWord>(width: Width, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tree = FusionTree::<W>::new(width, RankSearch::Packed).unwrap();
    let mut oracle = OracleSet::new(width);
    let max = width.max_key();
    for step in 0..20_000 {
        let x = if oracle.is_empty() || rng.gen_bool(0.5) {
            rng.gen_range(0..=max)
        } else {
            *oracle.keys().choose(&mut rng).unwrap()
        };
        match rng.gen_range(0..10) {
            0..=4 => assert_eq!(tree.insert(x), oracle.insert(x)),
            5..=7 => assert_eq!(tree.remove(x), oracle.remove(x)),
            _ => assert_eq!(tree.predecessor(x), oracle.predecessor(x)),
        }
        if step % 1000 == 0 {
            tree.check_invariants().unwrap();
        }
    }
    assert_eq!(tree.to_sorted_vec(), oracle.to_sorted_vec());
}

#[test]
fn trees_match_oracle() {
    for (i, width) in Width::ALL.into_iter().enumerate() {
        tree_against_oracle::<u64>(width, i as u64);
        tree_against_oracle::<Word256>(width, 10 + i as u64);
    }
}
