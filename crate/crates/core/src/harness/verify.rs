//! Operation-by-operation comparison against the reference set.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::registry::StructureSpec;
use super::HarnessError;
use crate::api::{OracleSet, PredecessorSet, Width};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Insert(u64),
    Remove(u64),
    Predecessor(u64),
    /// Final comparison of size and contents.
    Contents,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Insert(x) => write!(f, "insert({x})"),
            Op::Remove(x) => write!(f, "remove({x})"),
            Op::Predecessor(x) => write!(f, "predecessor({x})"),
            Op::Contents => f.write_str("contents()"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Changed(bool),
    Found(Option<u64>),
    Contents { len: usize, fingerprint: u64 },
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Changed(b) => write!(f, "{b}"),
            Answer::Found(Some(x)) => write!(f, "Some({x})"),
            Answer::Found(None) => f.write_str("None"),
            Answer::Contents { len, fingerprint } => write!(f, "{len} keys (fingerprint {fingerprint:#x})"),
        }
    }
}

pub fn apply(set: &mut dyn PredecessorSet, op: Op) -> Answer {
    match op {
        Op::Insert(x) => Answer::Changed(set.insert(x)),
        Op::Remove(x) => Answer::Changed(set.remove(x)),
        Op::Predecessor(x) => Answer::Found(set.predecessor(x)),
        Op::Contents => Answer::Contents {
            len: set.len(),
            fingerprint: set
                .to_sorted_vec()
                .iter()
                .fold(0u64, |h, &k| (h ^ k).wrapping_mul(0x100_0000_01b3)),
        },
    }
}

/// Seeded operation mix: half inserts, three tenths removes, one fifth
/// queries. Keys are uniform draws, draws near a few hundred fixed centres,
/// or keys used before, so that removes and queries often hit and
/// neighbouring keys share long prefixes.
pub fn random_ops(width: Width, count: usize, seed: u64) -> Vec<Op> {
    random_ops_within(width, width.bits(), count, seed)
}

/// Like [`random_ops`], but every key lies in one window of `2^span` keys
/// at a seeded offset. Narrow windows bound the memory of structures whose
/// size grows with the spread of the keys, such as an array top level over
/// small buckets at 40 bits.
pub fn random_ops_within(width: Width, span: u32, count: usize, seed: u64) -> Vec<Op> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = span.clamp(1, width.bits());
    let max = Width::new(span).unwrap().max_key();
    let offset = if span < width.bits() { rng.gen_range(0..=width.max_key() - max) } else { 0 };
    let centres: Vec<u64> = (0..256).map(|_| rng.gen_range(0..=max)).collect();
    let mut used: Vec<u64> = Vec::new();
    let mut ops = Vec::with_capacity(count);
    for _ in 0..count {
        let x = match rng.gen_range(0..10) {
            0 => offset + rng.gen_range(0..=max),
            1..=4 if !used.is_empty() => used[rng.gen_range(0..used.len())],
            _ => {
                let c = centres[rng.gen_range(0..centres.len())];
                let spread = rng.gen_range(0..=16u32.min(span));
                offset + ((c ^ rng.gen_range(0..1u64 << spread)) & max)
            }
        };
        let op = match rng.gen_range(0..10) {
            0..=4 => {
                used.push(x);
                Op::Insert(x)
            }
            5..=7 => Op::Remove(x),
            _ => Op::Predecessor(x),
        };
        ops.push(op);
    }
    ops
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub structure: String,
    pub width: Width,
    pub seed: u64,
    /// Index of the first operation answered differently.
    pub index: usize,
    pub op: Op,
    pub expected: Answer,
    pub actual: Answer,
    /// Operations of a shortened sequence that still diverges on its last
    /// operation.
    pub minimized: Vec<Op>,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} at w={} seed={} diverged at op #{}: {} returned {}, expected {}",
            self.structure, self.width, self.seed, self.index, self.op, self.actual, self.expected
        )?;
        write!(
            f,
            "minimized prefix: {} of {} ops",
            self.minimized.len(),
            self.index + 1
        )?;
        if self.minimized.len() <= 40 {
            let ops: Vec<String> = self.minimized.iter().map(Op::to_string).collect();
            write!(f, "\n  {}", ops.join(", "))?;
        }
        Ok(())
    }
}

/// Replays `ops`; returns the first index answered differently.
pub fn first_divergence(
    spec: &StructureSpec,
    width: Width,
    ops: &[Op],
) -> Result<Option<(usize, Answer, Answer)>, HarnessError> {
    let mut set = spec.build(width)?;
    let mut oracle = OracleSet::new(width);
    for (i, &op) in ops.iter().enumerate() {
        let expected = apply(&mut oracle, op);
        let actual = apply(set.as_mut(), op);
        if expected != actual {
            return Ok(Some((i, expected, actual)));
        }
    }
    let expected = apply(&mut oracle, Op::Contents);
    let actual = apply(set.as_mut(), Op::Contents);
    Ok((expected != actual).then_some((ops.len(), expected, actual)))
}

/// Greedy chunk removal: drops blocks of operations while the sequence
/// still diverges somewhere, halving the block size down to one. Stops
/// after `budget` replays.
pub fn minimize(spec: &StructureSpec, width: Width, ops: &[Op], budget: usize) -> Vec<Op> {
    let diverges = |candidate: &[Op]| -> Option<usize> {
        first_divergence(spec, width, candidate).ok().flatten().map(|(i, _, _)| i)
    };
    let mut current = ops.to_vec();
    if let Some(i) = diverges(&current) {
        current.truncate(i + 1);
    }
    let mut replays = 0;
    let mut chunk = current.len().div_ceil(2).max(1);
    loop {
        let mut start = 0;
        while start < current.len() && replays < budget {
            let end = (start + chunk).min(current.len());
            let mut candidate = current[..start].to_vec();
            candidate.extend_from_slice(&current[end..]);
            replays += 1;
            match diverges(&candidate) {
                Some(i) => {
                    candidate.truncate(i + 1);
                    current = candidate;
                }
                None => start = end,
            }
        }
        if chunk == 1 || replays >= budget {
            break;
        }
        chunk = chunk.div_ceil(2);
    }
    current
}

/// Replays `count` random operations against the reference set.
pub fn verify(spec: &StructureSpec, width: Width, count: usize, seed: u64) -> Result<Result<(), Box<Divergence>>, HarnessError> {
    verify_within(spec, width, width.bits(), count, seed)
}

/// [`verify`] with keys drawn by [`random_ops_within`].
pub fn verify_within(
    spec: &StructureSpec,
    width: Width,
    span: u32,
    count: usize,
    seed: u64,
) -> Result<Result<(), Box<Divergence>>, HarnessError> {
    let ops = random_ops_within(width, span, count, seed);
    let Some((index, expected, actual)) = first_divergence(spec, width, &ops)? else {
        return Ok(Ok(()));
    };
    let op = ops.get(index).copied().unwrap_or(Op::Contents);
    let minimized = minimize(spec, width, &ops[..(index + 1).min(ops.len())], 2000);
    Ok(Err(Box::new(Divergence {
        structure: spec.to_string(),
        width,
        seed,
        index,
        op,
        expected,
        actual,
        minimized,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::registry::StructureKind;

    /// A set that forgets every key above a threshold once it holds ten.
    struct Faulty(OracleSet);

    impl PredecessorSet for Faulty {
        fn insert(&mut self, key: u64) -> bool {
            if self.0.len() >= 10 && key > 1000 {
                return true;
            }
            self.0.insert(key)
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

    #[test]
    fn ops_are_deterministic() {
        assert_eq!(random_ops(Width::W40, 500, 3), random_ops(Width::W40, 500, 3));
        assert_ne!(random_ops(Width::W40, 500, 3), random_ops(Width::W40, 500, 4));
    }

    #[test]
    fn window_keeps_keys_together() {
        let key = |op: &Op| match *op {
            Op::Insert(x) | Op::Remove(x) | Op::Predecessor(x) => x,
            Op::Contents => unreachable!(),
        };
        let keys: Vec<u64> = random_ops_within(Width::W40, 20, 5000, 9).iter().map(key).collect();
        let lo = *keys.iter().min().unwrap();
        let hi = *keys.iter().max().unwrap();
        assert!(hi - lo < 1 << 20);
        assert!(hi <= Width::W40.max_key());
        assert_eq!(random_ops_within(Width::W32, 32, 100, 1), random_ops(Width::W32, 100, 1));
    }

    #[test]
    fn oracle_verifies_against_itself() {
        let spec = StructureSpec::new(StructureKind::Oracle);
        assert_eq!(verify(&spec, Width::W32, 2000, 1).unwrap(), Ok(()));
    }

    #[test]
    fn divergence_detection_on_faulty_set() {
        let ops = random_ops(Width::W32, 500, 5);
        let mut faulty = Faulty(OracleSet::new(Width::W32));
        let mut oracle = OracleSet::new(Width::W32);
        let first = ops
            .iter()
            .position(|&op| apply(&mut faulty, op) != apply(&mut oracle, op));
        assert!(first.is_some());
    }
}
