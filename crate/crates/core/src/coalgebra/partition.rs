//! Set partitions of `{0, …, n-1}`, enumerated as restricted growth strings.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Default largest `n` that [`set_partitions`] will enumerate.
pub const DEFAULT_PARTITION_CAP: usize = 12;

/// Partitions up to this size are enumerated once and shared.
const CACHED_UP_TO: usize = 10;

/// A partition of `{0, …, n-1}` into nonempty blocks.
///
/// Blocks are sorted by their minimal element and each block is ascending,
/// which fixes the unshuffle permutation used for Koszul signs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    masks: Vec<u32>,
}

impl SetPartition {
    /// Validates and canonicalizes an arbitrary list of blocks.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::MalformedSpace("empty block in partition".into()));
            }
            for &i in block {
                if i >= n || std::mem::replace(&mut seen[i], true) {
                    return Err(Error::MalformedSpace(format!(
                        "index {i} out of range or repeated in partition of {n}"
                    )));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::MalformedSpace("blocks do not cover the set".into()));
        }
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self::from_sorted_blocks(n, blocks))
    }

    fn from_sorted_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Self {
        let masks = blocks
            .iter()
            .map(|b| b.iter().fold(0u32, |m, &i| m | (1 << i)))
            .collect();
        SetPartition { n, blocks, masks }
    }

    fn from_growth_string(rgs: &[usize], block_count: usize) -> Self {
        let mut blocks = vec![Vec::new(); block_count];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        Self::from_sorted_blocks(rgs.len(), blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Bitmask of each block, bit `i` set for element `i`.
    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// True for the partition into singletons.
    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.n
    }

    /// Elements listed block by block; the unshuffle permutation.
    pub fn concatenation(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }
}

/// Lazy enumeration of all partitions of `{0, …, n-1}`.
pub struct SetPartitions {
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[0..=i])
    prefix_max: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        SetPartitions {
            rgs: vec![0; n],
            prefix_max: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let n = self.rgs.len();
        let block_count = if n == 0 { 0 } else { self.prefix_max[n - 1] + 1 };
        let current = SetPartition::from_growth_string(&self.rgs, block_count);

        // advance: bump the last position that can grow, reset the tail
        match (1..n).rev().find(|&i| self.rgs[i] <= self.prefix_max[i - 1]) {
            None => self.done = true,
            Some(i) => {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
            }
        }
        Some(current)
    }
}

/// All partitions of an `n`-element set; exactly `Bell(n)` of them.
pub fn set_partitions(n: usize) -> Result<Vec<SetPartition>> {
    set_partitions_with_cap(n, DEFAULT_PARTITION_CAP)
}

pub fn set_partitions_with_cap(n: usize, cap: usize) -> Result<Vec<SetPartition>> {
    if n > cap {
        return Err(Error::SizeLimit {
            what: "set partition size",
            requested: n,
            cap,
        });
    }
    Ok(partitions_of(n).as_ref().clone())
}

/// Shared partition list used by the composition kernels.
pub(crate) fn partitions_of(n: usize) -> Arc<Vec<SetPartition>> {
    static CACHE: OnceLock<Vec<OnceLock<Arc<Vec<SetPartition>>>>> = OnceLock::new();
    if n > CACHED_UP_TO {
        return Arc::new(SetPartitions::new(n).collect());
    }
    let slots = CACHE.get_or_init(|| (0..=CACHED_UP_TO).map(|_| OnceLock::new()).collect());
    slots[n]
        .get_or_init(|| Arc::new(SetPartitions::new(n).collect()))
        .clone()
}

/// Bell numbers via the Bell triangle; exact for `n ≤ 25`.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_match_bell() {
        assert_eq!(set_partitions(1).unwrap().len(), 1);
        assert_eq!(set_partitions(3).unwrap().len(), 5);
        assert_eq!(set_partitions(4).unwrap().len(), 15);
        for n in 0..=9 {
            let all = set_partitions(n).unwrap();
            assert_eq!(all.len() as u64, bell(n), "n = {n}");
            let distinct: HashSet<_> = all.iter().map(|p| p.blocks().to_vec()).collect();
            assert_eq!(distinct.len(), all.len());
        }
    }

    #[test]
    fn bell_triangle() {
        let want = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597];
        for (n, &b) in want.iter().enumerate() {
            assert_eq!(bell(n), b);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            set_partitions(13),
            Err(Error::SizeLimit {
                requested: 13,
                cap: 12,
                ..
            })
        ));
        assert_eq!(set_partitions_with_cap(5, 5).unwrap().len(), 52);
        assert!(set_partitions_with_cap(6, 5).is_err());
    }

    #[test]
    fn blocks_are_canonical() {
        for p in set_partitions(6).unwrap() {
            let mins: Vec<usize> = p.blocks().iter().map(|b| b[0]).collect();
            assert!(mins.windows(2).all(|w| w[0] < w[1]));
            let mut all = p.concatenation();
            all.sort_unstable();
            assert_eq!(all, (0..6).collect::<Vec<_>>());
            assert!(p.blocks().iter().all(|b| b.windows(2).all(|w| w[0] < w[1])));
        }
    }

    #[test]
    fn from_blocks_validates() {
        let p = SetPartition::from_blocks(4, vec![vec![3, 1], vec![2], vec![0]]).unwrap();
        assert_eq!(p.blocks(), &[vec![0], vec![1, 3], vec![2]]);
        assert!(SetPartition::from_blocks(3, vec![vec![0, 1]]).is_err());
        assert!(SetPartition::from_blocks(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(SetPartition::from_blocks(2, vec![vec![0, 1], vec![]]).is_err());
    }
}
