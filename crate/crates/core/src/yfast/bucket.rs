/// Bucket id of the −∞ bucket; it always exists and never joins the trie.
pub(crate) const MINUS_INF: u32 = 0;
pub(crate) const NIL: u32 = u32::MAX;

/// How keys are kept inside a bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BucketOrder {
    /// Appended on insert, searched by linear scan.
    #[default]
    Unsorted,
    /// Kept sorted, searched by binary search.
    Sorted,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Bucket {
    pub rep: u64,
    pub rep_dead: bool,
    pub keys: Vec<u64>,
    pub prev: u32,
    pub next: u32,
}

/// Bucket storage with stable ids and a doubly linked list in key order.
#[derive(Debug, Clone)]
pub(crate) struct Buckets {
    slots: Vec<Bucket>,
    free: Vec<u32>,
    order: BucketOrder,
    /// Key capacity of every bucket, one more than the split threshold.
    capacity: usize,
}

impl Buckets {
    pub fn new(order: BucketOrder, capacity: usize) -> Self {
        Buckets {
            slots: vec![Bucket {
                prev: NIL,
                next: NIL,
                ..Bucket::default()
            }],
            free: Vec::new(),
            order,
            capacity,
        }
    }

    #[inline]
    pub fn get(&self, id: u32) -> &Bucket {
        &self.slots[id as usize]
    }

    #[inline]
    pub fn get_mut(&mut self, id: u32) -> &mut Bucket {
        &mut self.slots[id as usize]
    }

    #[inline]
    pub fn rep(&self, id: u32) -> u64 {
        self.get(id).rep
    }

    #[inline]
    pub fn prev(&self, id: u32) -> u32 {
        self.get(id).prev
    }

    #[inline]
    pub fn next(&self, id: u32) -> u32 {
        self.get(id).next
    }

    /// Allocates a bucket holding `keys` and links it right after `after`.
    pub fn link_after(&mut self, after: u32, rep: u64, keys: Vec<u64>) -> u32 {
        let next = self.next(after);
        let bucket = Bucket {
            rep,
            rep_dead: false,
            keys,
            prev: after,
            next,
        };
        let id = match self.free.pop() {
            Some(id) => {
                self.slots[id as usize] = bucket;
                id
            }
            None => {
                self.slots.push(bucket);
                (self.slots.len() - 1) as u32
            }
        };
        self.get_mut(after).next = id;
        if next != NIL {
            self.get_mut(next).prev = id;
        }
        id
    }

    /// Unlinks and frees `id`, returning its keys.
    pub fn unlink(&mut self, id: u32) -> Vec<u64> {
        debug_assert_ne!(id, MINUS_INF);
        let Bucket {
            keys, prev, next, ..
        } = std::mem::take(self.get_mut(id));
        self.get_mut(prev).next = next;
        if next != NIL {
            self.get_mut(next).prev = prev;
        }
        self.free.push(id);
        keys
    }

    /// Bucket ids in key order, starting with the −∞ bucket.
    pub fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        std::iter::successors(Some(MINUS_INF), move |&id| {
            Some(self.next(id)).filter(|&n| n != NIL)
        })
    }

    pub fn order(&self) -> BucketOrder {
        self.order
    }

    /// Position of `x` in the bucket, if present.
    pub fn find(&self, id: u32, x: u64) -> Option<usize> {
        let keys = &self.get(id).keys;
        match self.order {
            BucketOrder::Unsorted => keys.iter().position(|&k| k == x),
            BucketOrder::Sorted => keys.binary_search(&x).ok(),
        }
    }

    /// Adds `x`; returns false if present.
    pub fn insert_key(&mut self, id: u32, x: u64) -> bool {
        let (order, capacity) = (self.order, self.capacity);
        let keys = &mut self.get_mut(id).keys;
        if keys.capacity() == 0 {
            keys.reserve_exact(capacity);
        }
        match order {
            BucketOrder::Unsorted => {
                if keys.contains(&x) {
                    return false;
                }
                keys.push(x);
            }
            BucketOrder::Sorted => match keys.binary_search(&x) {
                Ok(_) => return false,
                Err(i) => keys.insert(i, x),
            },
        }
        true
    }

    /// Removes `x`; returns false if absent.
    pub fn remove_key(&mut self, id: u32, x: u64) -> bool {
        let Some(i) = self.find(id, x) else {
            return false;
        };
        let order = self.order;
        let keys = &mut self.get_mut(id).keys;
        match order {
            BucketOrder::Unsorted => keys.swap_remove(i),
            BucketOrder::Sorted => keys.remove(i),
        };
        true
    }

    /// Largest key `<= x` in the bucket.
    pub fn local_pred(&self, id: u32, x: u64) -> Option<u64> {
        let keys = &self.get(id).keys;
        match self.order {
            BucketOrder::Unsorted => keys.iter().copied().filter(|&k| k <= x).max(),
            BucketOrder::Sorted => {
                let r = keys.partition_point(|&k| k <= x);
                r.checked_sub(1).map(|i| keys[i])
            }
        }
    }

    pub fn max_key(&self, id: u32) -> Option<u64> {
        let keys = &self.get(id).keys;
        match self.order {
            BucketOrder::Unsorted => keys.iter().copied().max(),
            BucketOrder::Sorted => keys.last().copied(),
        }
    }

    /// Splits off the upper half of bucket `id` as sorted keys. Example: a
    /// bucket {3, 6, 7, 8, 9} keeps {3, 6} and yields {7, 8, 9}.
    pub fn split_upper(&mut self, id: u32) -> Vec<u64> {
        let capacity = self.capacity;
        let keys = &mut self.get_mut(id).keys;
        keys.sort_unstable();
        let mid = keys.len() / 2;
        let mut upper = Vec::with_capacity(capacity.max(keys.len() - mid));
        upper.extend_from_slice(&keys[mid..]);
        keys.truncate(mid);
        keys.shrink_to(capacity);
        upper
    }

    pub fn heap_bytes(&self) -> usize {
        self.slots.capacity() * std::mem::size_of::<Bucket>()
            + self.free.capacity() * 4
            + self
                .slots
                .iter()
                .map(|b| b.keys.capacity() * 8)
                .sum::<usize>()
    }
}
