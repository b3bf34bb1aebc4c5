//! Level search structure: the x-fast trie over bucket representatives.
//!
//! Level `l` holds the trie nodes whose path from the root spells an
//! `l`-bit prefix, keyed by that prefix. Only levels below `l_bot` are
//! materialized; below that every node would be unary, so each node at
//! level `l_bot` stands for exactly one representative.

use super::bucket::{Buckets, MINUS_INF};
use crate::int_map::IntMap;

const LEFT: u8 = 1;
const RIGHT: u8 = 2;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct LssNode {
    /// `LEFT | RIGHT` flags of existing children.
    pub children: u8,
    /// Buckets of the smallest and largest representative in the subtree.
    pub desc_min: u32,
    pub desc_max: u32,
}

#[derive(Debug, Clone)]
pub(crate) struct Lss {
    bits: u32,
    levels: Vec<IntMap<LssNode>>,
    branching: Vec<u32>,
    reps: usize,
    l_top: u32,
    l_bot: u32,
}

impl Lss {
    pub fn new(bits: u32) -> Self {
        Lss {
            bits,
            levels: (0..bits).map(|_| IntMap::new()).collect(),
            branching: vec![0; bits as usize],
            reps: 0,
            l_top: 0,
            l_bot: 0,
        }
    }

    pub fn l_top(&self) -> u32 {
        self.l_top
    }

    pub fn l_bot(&self) -> u32 {
        self.l_bot
    }

    pub fn reps(&self) -> usize {
        self.reps
    }

    #[inline]
    fn prefix(&self, x: u64, level: u32) -> u64 {
        if level == 0 {
            0
        } else {
            x >> (self.bits - level)
        }
    }

    /// Child flag that `x` follows below a node at `level`.
    #[inline]
    fn side(&self, x: u64, level: u32) -> u8 {
        if (x >> (self.bits - 1 - level)) & 1 == 0 {
            LEFT
        } else {
            RIGHT
        }
    }

    /// Length of the longest common prefix of two distinct keys.
    #[inline]
    fn lcp(&self, a: u64, b: u64) -> u32 {
        (a ^ b).leading_zeros() - (64 - self.bits)
    }

    #[inline]
    fn node(&self, x: u64, level: u32) -> Option<&LssNode> {
        self.levels[level as usize].get(self.prefix(x, level))
    }

    fn count(&self, level: u32) -> usize {
        if level < self.l_bot {
            self.levels[level as usize].len()
        } else {
            self.reps
        }
    }

    fn recompute_top(&self) -> u32 {
        let mut top = 0;
        for l in 1..=self.l_bot {
            if l >= 63 || self.count(l) != 1usize << l {
                break;
            }
            top = l;
        }
        top
    }

    /// Bucket whose representative is the largest one `<= x`, or the −∞
    /// bucket.
    pub fn locate(&self, x: u64, buckets: &Buckets) -> u32 {
        match self.reps {
            0 => return MINUS_INF,
            1 => {
                let only = buckets.next(MINUS_INF);
                return if x >= buckets.rep(only) { only } else { MINUS_INF };
            }
            _ => {}
        }
        // Existence along x's path is monotone in the level, and every
        // level up to l_top is complete.
        let (mut lo, mut hi) = (self.l_top.min(self.l_bot - 1), self.l_bot - 1);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.node(x, mid).is_some() {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let v = self.node(x, lo).expect("level l_top is complete");
        let side = self.side(x, lo);
        if v.children & side != 0 {
            // The child sits at level l_bot and holds a single representative.
            let r = if side == LEFT { v.desc_min } else { v.desc_max };
            if x >= buckets.rep(r) {
                r
            } else {
                buckets.prev(r)
            }
        } else if side == RIGHT {
            v.desc_max
        } else {
            buckets.prev(v.desc_min)
        }
    }

    /// Adds the representative of bucket `id`, which is already linked into
    /// the bucket list.
    pub fn insert(&mut self, id: u32, buckets: &Buckets) {
        let r = buckets.rep(id);
        if self.reps == 0 {
            self.reps = 1;
            return;
        }
        let mut depth = 0;
        for n in [buckets.prev(id), buckets.next(id)] {
            if n != MINUS_INF && n != super::bucket::NIL {
                depth = depth.max(self.lcp(r, buckets.rep(n)));
            }
        }
        let new_bot = self.l_bot.max(depth + 1);
        if new_bot > self.l_bot {
            // Existing representatives are alone below the old l_bot.
            for b in buckets.ids().skip(1).filter(|&b| b != id) {
                let rb = buckets.rep(b);
                for l in self.l_bot..new_bot {
                    let (key, side) = (self.prefix(rb, l), self.side(rb, l));
                    let node = LssNode {
                        children: side,
                        desc_min: b,
                        desc_max: b,
                    };
                    self.levels[l as usize].insert(key, node);
                }
            }
            self.l_bot = new_bot;
        }
        for l in 0..self.l_bot {
            let key = self.prefix(r, l);
            let side = self.side(r, l);
            match self.levels[l as usize].get_mut(key) {
                Some(node) => {
                    if node.children & side == 0 {
                        node.children |= side;
                        self.branching[l as usize] += 1;
                    }
                    if r < buckets.rep(node.desc_min) {
                        node.desc_min = id;
                    }
                    if r > buckets.rep(node.desc_max) {
                        node.desc_max = id;
                    }
                }
                None => {
                    let node = LssNode {
                        children: side,
                        desc_min: id,
                        desc_max: id,
                    };
                    self.levels[l as usize].insert(key, node);
                }
            }
        }
        self.reps += 1;
        self.l_top = self.recompute_top();
    }

    /// Removes the representative of bucket `id`, which must still be
    /// linked so its neighbours can take over descendant links.
    pub fn remove(&mut self, id: u32, buckets: &Buckets) {
        let r = buckets.rep(id);
        let (prev, next) = (buckets.prev(id), buckets.next(id));
        let mut child_removed = true;
        for l in (0..self.l_bot).rev() {
            let (key, side) = (self.prefix(r, l), self.side(r, l));
            let map = &mut self.levels[l as usize];
            let node = map.get_mut(key).expect("path of a representative");
            if node.desc_min == id && node.desc_max == id {
                map.remove(key);
                continue;
            }
            if child_removed {
                node.children &= !side;
                self.branching[l as usize] -= 1;
                child_removed = false;
            }
            if node.desc_min == id {
                node.desc_min = next;
            }
            if node.desc_max == id {
                node.desc_max = prev;
            }
        }
        self.reps -= 1;
        while self.l_bot > 0 && self.branching[self.l_bot as usize - 1] == 0 {
            self.levels[self.l_bot as usize - 1].clear();
            self.l_bot -= 1;
        }
        self.l_top = self.recompute_top();
    }

    pub fn heap_bytes(&self) -> usize {
        self.levels.capacity() * std::mem::size_of::<IntMap<LssNode>>()
            + self.branching.capacity() * 4
            + self.levels.iter().map(IntMap::heap_bytes).sum::<usize>()
    }

    /// Compares the maintained state with one computed from scratch.
    pub fn audit(&self, buckets: &Buckets) -> Result<(), String> {
        let reps: Vec<(u32, u64)> = buckets.ids().skip(1).map(|b| (b, buckets.rep(b))).collect();
        if reps.len() != self.reps {
            return Err(format!("{} representatives, trie counts {}", reps.len(), self.reps));
        }
        let deepest = reps
            .windows(2)
            .map(|p| self.lcp(p[0].1, p[1].1))
            .max();
        let l_bot = deepest.map_or(0, |d| d + 1);
        if l_bot != self.l_bot {
            return Err(format!("l_bot {} but expected {l_bot}", self.l_bot));
        }
        let mut expected: Vec<IntMap<LssNode>> = (0..self.bits).map(|_| IntMap::new()).collect();
        for &(b, r) in &reps {
            for l in 0..l_bot {
                let key = self.prefix(r, l);
                let side = self.side(r, l);
                let map = &mut expected[l as usize];
                match map.get_mut(key) {
                    Some(node) => {
                        node.children |= side;
                        node.desc_max = b;
                    }
                    None => {
                        map.insert(
                            key,
                            LssNode {
                                children: side,
                                desc_min: b,
                                desc_max: b,
                            },
                        );
                    }
                }
            }
        }
        for l in 0..self.bits as usize {
            let ours = &self.levels[l];
            if ours.len() != expected[l].len() {
                return Err(format!("level {l}: {} nodes, expected {}", ours.len(), expected[l].len()));
            }
            for (key, node) in expected[l].iter() {
                if ours.get(key) != Some(node) {
                    return Err(format!("level {l} prefix {key:#x}: {:?} != {node:?}", ours.get(key)));
                }
            }
            let branching = expected[l].iter().filter(|(_, n)| n.children == LEFT | RIGHT).count();
            if self.branching[l] as usize != branching {
                return Err(format!("level {l}: branching {} != {branching}", self.branching[l]));
            }
        }
        if self.l_top != self.recompute_top() {
            return Err("stale l_top".into());
        }
        Ok(())
    }
}
