use crate::word_ops::msb_nonzero;

/// Representation of a bucket's truncated keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StorageKind {
    BitVector,
    List,
}

#[derive(Debug, Clone)]
enum Storage {
    Bits(Box<[u64]>),
    /// Truncated keys of at most 16 bits.
    Short(Vec<u16>),
    Long(Vec<u32>),
}

/// An active bucket: the truncated keys (low `k_b` bits) of the keys whose
/// high bits equal `index`.
#[derive(Debug, Clone)]
pub(crate) struct Bucket {
    pub index: u64,
    pub count: u32,
    pub min_t: u32,
    pub max_t: u32,
    storage: Storage,
}

fn bit_words(k_b: u32) -> usize {
    if k_b <= 6 {
        1
    } else {
        1 << (k_b - 6)
    }
}

/// Grows a list by doubling, never past `limit` elements of capacity.
fn push_bounded<T>(list: &mut Vec<T>, v: T, limit: usize) {
    if list.len() == list.capacity() {
        let room = limit.saturating_sub(list.capacity());
        list.reserve_exact(list.capacity().max(2).min(room.max(1)));
    }
    list.push(v);
}

impl Bucket {
    pub fn new(index: u64, xt: u32, kind: StorageKind, k_b: u32) -> Self {
        let mut bucket = Bucket {
            index,
            count: 0,
            min_t: xt,
            max_t: xt,
            storage: Self::empty_storage(kind, k_b),
        };
        bucket.add(xt, usize::MAX);
        bucket
    }

    fn empty_storage(kind: StorageKind, k_b: u32) -> Storage {
        match kind {
            StorageKind::BitVector => Storage::Bits(vec![0; bit_words(k_b)].into_boxed_slice()),
            StorageKind::List if k_b <= 16 => Storage::Short(Vec::new()),
            StorageKind::List => Storage::Long(Vec::new()),
        }
    }

    pub fn kind(&self) -> StorageKind {
        match self.storage {
            Storage::Bits(_) => StorageKind::BitVector,
            _ => StorageKind::List,
        }
    }

    pub fn contains(&self, xt: u32) -> bool {
        match &self.storage {
            Storage::Bits(words) => words[xt as usize / 64] >> (xt % 64) & 1 == 1,
            Storage::Short(list) => list.contains(&(xt as u16)),
            Storage::Long(list) => list.contains(&xt),
        }
    }

    /// Adds an absent truncated key; lists stay within `list_limit`
    /// elements of capacity.
    pub fn add(&mut self, xt: u32, list_limit: usize) {
        match &mut self.storage {
            Storage::Bits(words) => words[xt as usize / 64] |= 1 << (xt % 64),
            Storage::Short(list) => push_bounded(list, xt as u16, list_limit),
            Storage::Long(list) => push_bounded(list, xt, list_limit),
        }
        self.count += 1;
        self.min_t = self.min_t.min(xt);
        self.max_t = self.max_t.max(xt);
    }

    /// Removes a present truncated key. The cached extremes are rescanned
    /// only when one of them is removed.
    pub fn take(&mut self, xt: u32) {
        match &mut self.storage {
            Storage::Bits(words) => words[xt as usize / 64] &= !(1 << (xt % 64)),
            Storage::Short(list) => {
                let i = list.iter().position(|&k| k == xt as u16).expect("present");
                list.swap_remove(i);
            }
            Storage::Long(list) => {
                let i = list.iter().position(|&k| k == xt).expect("present");
                list.swap_remove(i);
            }
        }
        self.count -= 1;
        if self.count > 0 {
            if xt == self.min_t {
                self.min_t = self.succ(xt).expect("non-empty");
            }
            if xt == self.max_t {
                self.max_t = self.pred(xt).expect("non-empty");
            }
        }
    }

    /// Largest truncated key `<= xt`.
    pub fn pred(&self, xt: u32) -> Option<u32> {
        match &self.storage {
            Storage::Bits(words) => {
                let mut w = xt as usize / 64;
                let shift = 63 - xt % 64;
                let mut word = words[w] << shift >> shift;
                loop {
                    if word != 0 {
                        return Some((w * 64) as u32 + msb_nonzero(word));
                    }
                    if w == 0 {
                        return None;
                    }
                    w -= 1;
                    word = words[w];
                }
            }
            Storage::Short(list) => list.iter().map(|&k| k as u32).filter(|&k| k <= xt).max(),
            Storage::Long(list) => list.iter().copied().filter(|&k| k <= xt).max(),
        }
    }

    /// Smallest truncated key `>= xt`.
    fn succ(&self, xt: u32) -> Option<u32> {
        match &self.storage {
            Storage::Bits(words) => {
                let mut w = xt as usize / 64;
                let mut word = words[w] >> (xt % 64) << (xt % 64);
                loop {
                    if word != 0 {
                        return Some((w * 64) as u32 + word.trailing_zeros());
                    }
                    w += 1;
                    word = *words.get(w)?;
                }
            }
            Storage::Short(list) => list.iter().map(|&k| k as u32).filter(|&k| k >= xt).min(),
            Storage::Long(list) => list.iter().copied().filter(|&k| k >= xt).min(),
        }
    }

    /// Truncated keys in ascending order.
    pub fn keys(&self) -> Vec<u32> {
        let mut out: Vec<u32> = match &self.storage {
            Storage::Bits(words) => {
                let mut out = Vec::with_capacity(self.count as usize);
                for (w, &word) in words.iter().enumerate() {
                    let mut rest = word;
                    while rest != 0 {
                        out.push((w * 64) as u32 + rest.trailing_zeros());
                        rest &= rest - 1;
                    }
                }
                out
            }
            Storage::Short(list) => list.iter().map(|&k| k as u32).collect(),
            Storage::Long(list) => list.clone(),
        };
        out.sort_unstable();
        out
    }

    /// Rebuilds the storage in the other representation.
    pub fn convert(&mut self, kind: StorageKind, k_b: u32) {
        if kind == self.kind() {
            return;
        }
        let keys = self.keys();
        self.storage = Self::empty_storage(kind, k_b);
        match &mut self.storage {
            Storage::Bits(words) => {
                for xt in keys {
                    words[xt as usize / 64] |= 1 << (xt % 64);
                }
            }
            Storage::Short(list) => {
                list.reserve_exact(keys.len());
                list.extend(keys.iter().map(|&k| k as u16));
            }
            Storage::Long(list) => {
                list.reserve_exact(keys.len());
                list.extend(keys);
            }
        }
    }

    /// Heap bytes owned by the storage.
    pub fn heap_bytes(&self) -> usize {
        match &self.storage {
            Storage::Bits(words) => words.len() * 8,
            Storage::Short(list) => list.capacity() * 2,
            Storage::Long(list) => list.capacity() * 4,
        }
    }
}
