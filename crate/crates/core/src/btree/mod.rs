//! In-memory B-tree ordered sets.
//!
//! [`Tree`] is the B-tree engine: split-on-descent insertion and single-pass
//! deletion with preemptive merging and borrowing. It is generic over the
//! node key container so the same engine drives plain B-trees (sorted
//! arrays searched linearly or by binary search) and fusion trees (dynamic
//! fusion nodes, see [`crate::fusion`]).

mod sorted;

use crate::api::{ConfigError, PredecessorSet, Width};

pub use sorted::{NodeSearch, SortedNode};

/// Key storage of a single B-tree node.
pub trait NodeKeys: Sized {
    type Params: Copy;

    fn empty(params: Self::Params, capacity: usize) -> Self;
    fn len(&self) -> usize;
    fn keys(&self) -> &[u64];
    /// Number of keys `<= x`.
    fn rank(&self, x: u64) -> usize;
    fn insert_at(&mut self, i: usize, key: u64);
    fn remove_at(&mut self, i: usize) -> u64;
    /// Moves keys `at..` into a new container.
    fn split_off(&mut self, at: usize) -> Self;
    /// Appends keys larger than every current key.
    fn extend_sorted(&mut self, keys: &[u64]);
    fn heap_bytes(&self) -> usize;

    #[inline]
    fn key(&self, i: usize) -> u64 {
        self.keys()[i]
    }
}

struct Node<K> {
    keys: K,
    children: Vec<Box<Node<K>>>,
}

impl<K: NodeKeys> Node<K> {
    #[inline]
    fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn heap_bytes(&self) -> usize {
        self.keys.heap_bytes()
            + self.children.capacity() * std::mem::size_of::<Box<Node<K>>>()
            + self
                .children
                .iter()
                .map(|c| std::mem::size_of::<Node<K>>() + c.heap_bytes())
                .sum::<usize>()
    }
}

/// A B-tree of maximum degree `degree` (at most `degree` children and
/// `degree - 1` keys per node).
pub struct Tree<K: NodeKeys> {
    width: Width,
    degree: usize,
    params: K::Params,
    root: Box<Node<K>>,
    len: usize,
}

impl<K: NodeKeys> Tree<K> {
    pub(crate) fn with_params(
        width: Width,
        degree: usize,
        params: K::Params,
    ) -> Result<Self, ConfigError> {
        if degree < 4 || !degree.is_multiple_of(2) {
            return Err(ConfigError::invalid(
                "degree",
                format!("must be even and at least 4, got {degree}"),
            ));
        }
        Ok(Tree {
            width,
            degree,
            params,
            root: Box::new(Node {
                keys: K::empty(params, degree - 1),
                children: Vec::new(),
            }),
            len: 0,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    fn max_keys(&self) -> usize {
        self.degree - 1
    }

    /// Minimum degree t; non-root nodes hold between t - 1 and 2t - 1 keys.
    #[inline]
    fn min_degree(&self) -> usize {
        self.degree / 2
    }

    pub fn height(&self) -> usize {
        let mut h = 1;
        let mut node = &self.root;
        while let Some(c) = node.children.first() {
            h += 1;
            node = c;
        }
        h
    }

    fn layout(&self) -> Layout<K::Params> {
        Layout {
            degree: self.degree,
            params: self.params,
        }
    }

    fn insert_key(&mut self, x: u64) -> bool {
        debug_assert!(self.width.contains(x), "key {x} outside {}-bit universe", self.width);
        let layout = self.layout();
        let max = layout.max_keys();
        if self.root.keys.len() == max {
            let mut new_root = layout.new_node::<K>();
            new_root.children.reserve_exact(layout.degree);
            let old = std::mem::replace(&mut self.root, new_root);
            self.root.children.push(old);
            layout.split_child(&mut self.root, 0);
        }
        let mut node: &mut Node<K> = &mut self.root;
        let inserted = loop {
            let r = node.keys.rank(x);
            if r > 0 && node.keys.key(r - 1) == x {
                break false;
            }
            if node.is_leaf() {
                node.keys.insert_at(r, x);
                break true;
            }
            let mut c = r;
            if node.children[c].keys.len() == max {
                layout.split_child(node, c);
                let median = node.keys.key(c);
                if x == median {
                    break false;
                }
                if x > median {
                    c += 1;
                }
            }
            node = &mut node.children[c];
        };
        if inserted {
            self.len += 1;
        }
        inserted
    }

    fn remove_key(&mut self, x: u64) -> bool {
        let layout = self.layout();
        let t = layout.min_degree();
        let mut node: &mut Node<K> = &mut self.root;
        let mut target = x;
        let removed = loop {
            let r = node.keys.rank(target);
            let found = r > 0 && node.keys.key(r - 1) == target;
            if node.is_leaf() {
                if found {
                    node.keys.remove_at(r - 1);
                }
                break found;
            }
            if found {
                let i = r - 1;
                if node.children[i].keys.len() >= t {
                    let pred = max_key(&node.children[i]);
                    node.keys.remove_at(i);
                    node.keys.insert_at(i, pred);
                    target = pred;
                    node = &mut node.children[i];
                } else if node.children[i + 1].keys.len() >= t {
                    let succ = min_key(&node.children[i + 1]);
                    node.keys.remove_at(i);
                    node.keys.insert_at(i, succ);
                    target = succ;
                    node = &mut node.children[i + 1];
                } else {
                    layout.merge_children(node, i);
                    node = &mut node.children[i];
                }
                continue;
            }
            let c = layout.fill_child(node, r);
            node = &mut node.children[c];
        };
        if self.root.keys.len() == 0 && !self.root.is_leaf() {
            self.root = self.root.children.pop().expect("internal root has a child");
        }
        if removed {
            self.len -= 1;
        }
        removed
    }

    fn find_predecessor(&self, x: u64) -> Option<u64> {
        let mut node = &self.root;
        let mut best = None;
        loop {
            let r = node.keys.rank(x);
            if r > 0 {
                let k = node.keys.key(r - 1);
                if k == x {
                    return Some(x);
                }
                best = Some(k);
            }
            if node.is_leaf() {
                return best;
            }
            node = &node.children[r];
        }
    }

    fn collect(node: &Node<K>, out: &mut Vec<u64>) {
        if node.is_leaf() {
            out.extend_from_slice(node.keys.keys());
            return;
        }
        for (i, child) in node.children.iter().enumerate() {
            Self::collect(child, out);
            if i < node.keys.len() {
                out.push(node.keys.key(i));
            }
        }
    }

    /// Verifies ordering, occupancy and uniform leaf depth.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut leaf_depth = None;
        let count = self.check_node(&self.root, true, None, None, 0, &mut leaf_depth)?;
        if count != self.len {
            return Err(format!("tree holds {count} keys, len says {}", self.len));
        }
        Ok(())
    }

    fn check_node(
        &self,
        node: &Node<K>,
        is_root: bool,
        lower: Option<u64>,
        upper: Option<u64>,
        depth: usize,
        leaf_depth: &mut Option<usize>,
    ) -> Result<usize, String> {
        let keys = node.keys.keys();
        if keys.len() > self.max_keys() {
            return Err(format!("node with {} keys exceeds {}", keys.len(), self.max_keys()));
        }
        if !is_root && keys.len() < self.min_degree() - 1 {
            return Err(format!("underfull node with {} keys", keys.len()));
        }
        if keys.windows(2).any(|p| p[0] >= p[1]) {
            return Err("node keys not ascending".into());
        }
        if let (Some(lo), Some(&first)) = (lower, keys.first()) {
            if first <= lo {
                return Err(format!("key {first} not above separator {lo}"));
            }
        }
        if let (Some(hi), Some(&last)) = (upper, keys.last()) {
            if last >= hi {
                return Err(format!("key {last} not below separator {hi}"));
            }
        }
        for (i, &k) in keys.iter().enumerate() {
            if node.keys.rank(k) != i + 1 {
                return Err(format!("node search ranks {k} wrongly"));
            }
        }
        if node.is_leaf() {
            match *leaf_depth {
                None => *leaf_depth = Some(depth),
                Some(d) if d != depth => return Err("leaves at different depths".into()),
                _ => {}
            }
            return Ok(keys.len());
        }
        if node.children.len() != keys.len() + 1 {
            return Err("child count does not match key count".into());
        }
        let mut total = keys.len();
        for (i, child) in node.children.iter().enumerate() {
            let lo = if i == 0 { lower } else { Some(keys[i - 1]) };
            let hi = if i == keys.len() { upper } else { Some(keys[i]) };
            total += self.check_node(child, false, lo, hi, depth + 1, leaf_depth)?;
        }
        Ok(total)
    }
}

#[derive(Clone, Copy)]
struct Layout<P> {
    degree: usize,
    params: P,
}

impl<P: Copy> Layout<P> {
    #[inline]
    fn max_keys(&self) -> usize {
        self.degree - 1
    }

    /// Minimum degree t; non-root nodes hold between t - 1 and 2t - 1 keys.
    #[inline]
    fn min_degree(&self) -> usize {
        self.degree / 2
    }

    fn new_node<K: NodeKeys<Params = P>>(&self) -> Box<Node<K>> {
        Box::new(Node {
            keys: K::empty(self.params, self.max_keys()),
            children: Vec::new(),
        })
    }

    /// Splits the full child `i` of `parent` around its median.
    fn split_child<K: NodeKeys<Params = P>>(&self, parent: &mut Node<K>, i: usize) {
        let t = self.min_degree();
        let child = &mut parent.children[i];
        let upper_keys = child.keys.split_off(t);
        let median = child.keys.remove_at(t - 1);
        let upper_children = if child.is_leaf() {
            Vec::new()
        } else {
            let mut v = Vec::with_capacity(self.degree);
            v.extend(child.children.drain(t..));
            v
        };
        let right = Box::new(Node {
            keys: upper_keys,
            children: upper_children,
        });
        parent.keys.insert_at(i, median);
        parent.children.insert(i + 1, right);
    }

    /// Makes sure child `c` of `node` has at least t keys, borrowing from a
    /// sibling or merging with one. Returns the index of the child that now
    /// covers the former range of child `c`.
    fn fill_child<K: NodeKeys<Params = P>>(&self, node: &mut Node<K>, c: usize) -> usize {
        let t = self.min_degree();
        if node.children[c].keys.len() >= t {
            return c;
        }
        if c > 0 && node.children[c - 1].keys.len() >= t {
            let (left, right) = node.children.split_at_mut(c);
            let (lsib, child) = (&mut left[c - 1], &mut right[0]);
            let sep = node.keys.remove_at(c - 1);
            let borrowed = lsib.keys.remove_at(lsib.keys.len() - 1);
            node.keys.insert_at(c - 1, borrowed);
            child.keys.insert_at(0, sep);
            if let Some(moved) = lsib.children.pop() {
                child.children.insert(0, moved);
            }
            return c;
        }
        if c + 1 < node.children.len() && node.children[c + 1].keys.len() >= t {
            let (left, right) = node.children.split_at_mut(c + 1);
            let (child, rsib) = (&mut left[c], &mut right[0]);
            let sep = node.keys.remove_at(c);
            let borrowed = rsib.keys.remove_at(0);
            node.keys.insert_at(c, borrowed);
            let end = child.keys.len();
            child.keys.insert_at(end, sep);
            if !rsib.is_leaf() {
                child.children.push(rsib.children.remove(0));
            }
            return c;
        }
        let left = if c + 1 < node.children.len() { c } else { c - 1 };
        self.merge_children(node, left);
        left
    }

    /// Merges child `i + 1` and separator `i` into child `i`.
    fn merge_children<K: NodeKeys<Params = P>>(&self, node: &mut Node<K>, i: usize) {
        let sep = node.keys.remove_at(i);
        let right = node.children.remove(i + 1);
        let child = &mut node.children[i];
        let mut moved = Vec::with_capacity(right.keys.len() + 1);
        moved.push(sep);
        moved.extend_from_slice(right.keys.keys());
        child.keys.extend_sorted(&moved);
        let Node { children, .. } = *right;
        child.children.extend(children);
    }
}

fn max_key<K: NodeKeys>(mut node: &Node<K>) -> u64 {
    while let Some(last) = node.children.last() {
        node = last;
    }
    node.keys.key(node.keys.len() - 1)
}

fn min_key<K: NodeKeys>(mut node: &Node<K>) -> u64 {
    while let Some(first) = node.children.first() {
        node = first;
    }
    node.keys.key(0)
}

impl<K: NodeKeys> PredecessorSet for Tree<K> {
    fn insert(&mut self, key: u64) -> bool {
        self.insert_key(key)
    }

    fn remove(&mut self, key: u64) -> bool {
        self.remove_key(key)
    }

    fn predecessor(&self, key: u64) -> Option<u64> {
        self.find_predecessor(key)
    }

    fn len(&self) -> usize {
        self.len
    }

    fn width(&self) -> Width {
        self.width
    }

    fn to_sorted_vec(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.len);
        Self::collect(&self.root, &mut out);
        out
    }

    fn heap_bytes(&self) -> usize {
        std::mem::size_of::<Node<K>>() + self.root.heap_bytes()
    }
}

/// Plain B-tree configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BTreeConfig {
    /// Maximum number of children per node.
    pub degree: usize,
    pub search: NodeSearch,
}

impl Default for BTreeConfig {
    fn default() -> Self {
        BTreeConfig {
            degree: 64,
            search: NodeSearch::Linear,
        }
    }
}

/// B-tree whose nodes are sorted key arrays.
pub type BTree = Tree<SortedNode>;

impl Tree<SortedNode> {
    pub fn new(width: Width, config: BTreeConfig) -> Result<Self, ConfigError> {
        if config.degree > u16::MAX as usize {
            return Err(ConfigError::invalid("degree", "must fit in 16 bits"));
        }
        Self::with_params(width, config.degree, config.search)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::api::OracleSet;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_degree() {
        for degree in [0, 3, 7] {
            let cfg = BTreeConfig {
                degree,
                search: NodeSearch::Linear,
            };
            assert!(BTree::new(Width::W64, cfg).is_err());
        }
    }

    #[test]
    fn small_tree_is_single_node() {
        let mut t = BTree::new(Width::W32, BTreeConfig { degree: 8, search: NodeSearch::Binary }).unwrap();
        for k in [10, 30, 20] {
            assert!(t.insert(k));
        }
        assert_eq!(t.height(), 1);
        assert_eq!(t.predecessor(25), Some(20));
        assert_eq!(t.predecessor(9), None);
        assert!(!t.insert(20));
        t.check_invariants().unwrap();
    }

    #[test]
    fn sequential_then_reverse_delete() {
        for degree in [4, 8, 16] {
            let cfg = BTreeConfig {
                degree,
                search: NodeSearch::Linear,
            };
            let mut t = BTree::new(Width::W64, cfg).unwrap();
            for k in 1..=100_000u64 {
                assert!(t.insert(k));
            }
            t.check_invariants().unwrap();
            for k in (1..=100_000u64).rev() {
                assert!(t.remove(k));
                if k % 9973 == 0 {
                    t.check_invariants().unwrap();
                }
            }
            assert!(t.is_empty());
            assert_eq!(t.height(), 1);
            t.check_invariants().unwrap();
        }
    }

    #[test]
    fn random_ops_against_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for degree in [4, 6, 8, 64] {
            for search in [NodeSearch::Linear, NodeSearch::Binary] {
                let mut t = BTree::new(Width::W32, BTreeConfig { degree, search }).unwrap();
                let mut o = OracleSet::new(Width::W32);
                for step in 0..20_000 {
                    let k = rng.gen_range(0..2_000u64);
                    match rng.gen_range(0..3) {
                        0 => assert_eq!(t.insert(k), o.insert(k)),
                        1 => assert_eq!(t.remove(k), o.remove(k)),
                        _ => assert_eq!(t.predecessor(k), o.predecessor(k)),
                    }
                    if step % 1000 == 0 {
                        t.check_invariants().unwrap();
                    }
                }
                assert_eq!(t.to_sorted_vec(), o.to_sorted_vec());
            }
        }
    }
}
