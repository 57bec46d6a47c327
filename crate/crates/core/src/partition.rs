//! Partitions of the terminal set and the admissible-partition enumerator.

use std::fmt;

use crate::error::{Error, Result};
use crate::subset::{check_m, full_bits, SubsetMask};

/// An ordered partition of `{1, .., m}` into nonempty blocks.
///
/// Blocks are kept sorted by their smallest element, which makes the
/// representation canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    m: usize,
    blocks: Vec<SubsetMask>,
}

impl Partition {
    pub fn new(m: usize, blocks: Vec<SubsetMask>) -> Result<Self> {
        check_m(m)?;
        let mut seen = 0u32;
        for b in &blocks {
            if b.m() != m {
                return Err(Error::InvalidInput(format!(
                    "block {b} is not over m = {m}"
                )));
            }
            if b.is_empty() {
                return Err(Error::InvalidInput("partition has an empty block".into()));
            }
            if seen & b.bits() != 0 {
                return Err(Error::InvalidInput(format!(
                    "block {b} overlaps another block"
                )));
            }
            seen |= b.bits();
        }
        if seen != full_bits(m) {
            return Err(Error::InvalidInput(
                "blocks do not cover every terminal".into(),
            ));
        }
        Ok(Self::canonical(m, blocks))
    }

    /// Builds from 1-based terminal lists, e.g. `[[1, 4], [2, 5], [3, 6]]`.
    pub fn from_terminals(m: usize, blocks: &[&[usize]]) -> Result<Self> {
        let masks = blocks
            .iter()
            .map(|b| SubsetMask::from_terminals(m, b.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(m, masks)
    }

    pub(crate) fn canonical(m: usize, mut blocks: Vec<SubsetMask>) -> Self {
        blocks.sort_by_key(|b| b.bits().trailing_zeros());
        Partition { m, blocks }
    }

    /// The finest partition `({1}, .., {m})`.
    pub fn singletons(m: usize) -> Self {
        let blocks = (0..m)
            .map(|j| SubsetMask::from_bits_unchecked(1 << j, m))
            .collect();
        Partition { m, blocks }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[SubsetMask] {
        &self.blocks
    }

    /// Every block meets `active` and `2 <= k <= |active|`.
    pub fn is_admissible(&self, active: SubsetMask) -> bool {
        let k = self.k();
        k >= 2 && k <= active.len() && self.blocks.iter().all(|b| b.intersects(active))
    }

    /// Terminal lists, 1-based, for reports.
    pub fn to_terminals(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.terminals()).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Streams every partition of `{1, .., m}` into exactly `k` blocks that each
/// meet `active`, in lexicographic order of restricted-growth strings.
///
/// Branches that can no longer give every block an active terminal, or can
/// no longer reach `k` blocks, are cut as soon as they appear.
pub fn enumerate_partitions(m: usize, active: SubsetMask, k: usize) -> Result<PartitionIter> {
    check_m(m)?;
    if active.m() != m {
        return Err(Error::InvalidInput(
            "active set is over a different m".into(),
        ));
    }
    if k < 2 || k > active.len() {
        return Err(Error::InvalidInput(format!(
            "block count k = {k} outside 2..={}",
            active.len()
        )));
    }
    Ok(PartitionIter::new(m, active, k))
}

/// All admissible partitions for every `k` in `2..=|active|`, `k` ascending.
pub fn enumerate_admissible(
    m: usize,
    active: SubsetMask,
) -> Result<impl Iterator<Item = Partition>> {
    check_m(m)?;
    if active.len() < 2 {
        return Err(Error::InvalidInput(
            "active set needs at least two terminals".into(),
        ));
    }
    let iters = (2..=active.len())
        .map(|k| enumerate_partitions(m, active, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(iters.into_iter().flatten())
}

pub struct PartitionIter {
    m: usize,
    k: usize,
    is_active: Vec<bool>,
    /// Active terminals among positions `i..m`.
    active_suffix: Vec<usize>,
    labels: Vec<u8>,
    started: bool,
    done: bool,
}

impl PartitionIter {
    fn new(m: usize, active: SubsetMask, k: usize) -> Self {
        let is_active: Vec<bool> = (1..=m).map(|t| active.contains(t)).collect();
        let mut active_suffix = vec![0; m + 1];
        for i in (0..m).rev() {
            active_suffix[i] = active_suffix[i + 1] + is_active[i] as usize;
        }
        PartitionIter {
            m,
            k,
            is_active,
            active_suffix,
            labels: vec![0; m],
            started: false,
            done: false,
        }
    }

    /// Whether the prefix `labels[..=pos]` can still be completed.
    fn feasible(&self, pos: usize) -> bool {
        let mut used = 0usize;
        let mut has_active = [false; 32];
        for i in 0..=pos {
            let l = self.labels[i] as usize;
            used = used.max(l + 1);
            has_active[l] |= self.is_active[i];
        }
        let remaining = self.m - pos - 1;
        if used + remaining < self.k {
            return false;
        }
        let lacking = (0..used).filter(|&l| !has_active[l]).count() + (self.k - used);
        lacking <= self.active_suffix[pos + 1]
    }

    fn used_before(&self, pos: usize) -> usize {
        self.labels[..pos]
            .iter()
            .map(|&l| l as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Finds the next complete labelling starting at `pos` with labels `>= start`.
    fn advance(&mut self, mut pos: usize, mut start: usize) -> bool {
        loop {
            if pos == self.m {
                return true;
            }
            let max_label = self.used_before(pos).min(self.k - 1);
            let mut placed = false;
            for l in start..=max_label {
                self.labels[pos] = l as u8;
                if self.feasible(pos) {
                    placed = true;
                    break;
                }
            }
            if placed {
                pos += 1;
                start = 0;
            } else {
                if pos == 0 {
                    return false;
                }
                pos -= 1;
                start = self.labels[pos] as usize + 1;
            }
        }
    }

    fn current(&self) -> Partition {
        let mut blocks = vec![0u32; self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            blocks[l as usize] |= 1 << i;
        }
        let blocks = blocks
            .into_iter()
            .map(|b| SubsetMask::from_bits_unchecked(b, self.m))
            .collect();
        Partition { m: self.m, blocks }
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let found = if !self.started {
            self.started = true;
            self.advance(0, 0)
        } else {
            let last = self.m - 1;
            let start = self.labels[last] as usize + 1;
            self.advance(last, start)
        };
        if found {
            Some(self.current())
        } else {
            self.done = true;
            None
        }
    }
}
