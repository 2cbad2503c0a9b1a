//! Set partitions of `{0, …, d-1}`.
//!
//! A [`Partition`] is always stored in canonical form: indices ascending
//! inside each block, blocks ordered by their smallest element. Indices are
//! zero-based in the API; the text encoding (`"1,2|3,4|5"`) is one-based.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{bail, Error, Result};

/// Largest `d` accepted by [`enumerate_partitions`]; `B_14 = 190_899_322`.
pub const ENUMERATION_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    d: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates `blocks` as a partition of `{0, …, d-1}` and returns it in
    /// canonical form.
    pub fn new(blocks: Vec<Vec<usize>>, d: usize) -> Result<Self> {
        if d == 0 {
            bail!(Validation, "dimension must be positive");
        }
        let mut seen = vec![false; d];
        for block in &blocks {
            if block.is_empty() {
                bail!(Validation, "empty block");
            }
            for &j in block {
                if j >= d {
                    bail!(Validation, "index {j} out of range for d = {d}");
                }
                if seen[j] {
                    bail!(Validation, "index {j} appears in more than one block");
                }
                seen[j] = true;
            }
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            bail!(Validation, "index {j} is not covered");
        }
        let mut blocks = blocks;
        for block in &mut blocks {
            block.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { d, blocks })
    }

    /// Groups indices with equal labels. Blocks come out ordered by smallest
    /// member, so the result is canonical for any labelling.
    pub fn from_labels(labels: &[usize]) -> Self {
        assert!(!labels.is_empty(), "labels must be non-empty");
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of_label: Vec<(usize, usize)> = Vec::new();
        for (j, &label) in labels.iter().enumerate() {
            match block_of_label.iter().find(|(l, _)| *l == label) {
                Some(&(_, b)) => blocks[b].push(j),
                None => {
                    block_of_label.push((label, blocks.len()));
                    blocks.push(vec![j]);
                }
            }
        }
        Self {
            d: labels.len(),
            blocks,
        }
    }

    pub fn singletons(d: usize) -> Self {
        assert!(d > 0);
        Self {
            d,
            blocks: (0..d).map(|j| vec![j]).collect(),
        }
    }

    pub fn single_block(d: usize) -> Self {
        assert!(d > 0);
        Self {
            d,
            blocks: vec![(0..d).collect()],
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(Vec::len)
    }

    pub fn is_all_singletons(&self) -> bool {
        self.blocks.len() == self.d
    }

    /// Restricted growth string: `labels()[j]` is the block index of `j`.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.d];
        for (b, block) in self.blocks.iter().enumerate() {
            for &j in block {
                labels[j] = b;
            }
        }
        labels
    }

    /// All partitions obtained by splitting exactly one block into two
    /// non-empty parts. There are `refinement_count()` of them.
    ///
    /// # Panics
    /// If a block has more than 63 elements (the output would not fit in memory anyway).
    pub fn split_block_refinements(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for (b, block) in self.blocks.iter().enumerate() {
            let size = block.len();
            if size < 2 {
                continue;
            }
            assert!(size <= 63, "block of {size} elements has too many splits to list");
            // The part containing block[0] is fixed by leaving bit 0 clear in `mask`.
            let full: u64 = (1 << size) - 1;
            for mask in (2..=full - 1).step_by(2) {
                let (mut with_min, mut rest) = (Vec::new(), Vec::new());
                for (k, &j) in block.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        rest.push(j);
                    } else {
                        with_min.push(j);
                    }
                }
                let mut blocks = Vec::with_capacity(self.blocks.len() + 1);
                blocks.extend(self.blocks[..b].iter().cloned());
                blocks.push(with_min);
                blocks.extend(self.blocks[b + 1..].iter().cloned());
                blocks.push(rest);
                blocks.sort_unstable_by_key(|blk| blk[0]);
                out.push(Partition { d: self.d, blocks });
            }
        }
        out
    }

    /// `sum_i (2^(d_i - 1) - 1)` over block sizes `d_i`, saturating at `u128::MAX`.
    pub fn refinement_count(&self) -> u128 {
        self.block_sizes()
            .map(|s| {
                1u128
                    .checked_shl(s as u32 - 1)
                    .map_or(u128::MAX, |p| p - 1)
            })
            .fold(0u128, u128::saturating_add)
    }

    /// Merges blocks `a` and `b` (indices into `blocks()`).
    pub fn merge(&self, a: usize, b: usize) -> Partition {
        assert!(a != b && a < self.len() && b < self.len());
        let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(self.len() - 1);
        let mut merged = Vec::new();
        for (k, block) in self.blocks.iter().enumerate() {
            if k == a || k == b {
                merged.extend_from_slice(block);
            } else {
                blocks.push(block.clone());
            }
        }
        merged.sort_unstable();
        blocks.push(merged);
        blocks.sort_unstable_by_key(|blk| blk[0]);
        Partition { d: self.d, blocks }
    }
}

/// Text form: one-based indices, `,` inside a block, `|` between blocks.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (b, block) in self.blocks.iter().enumerate() {
            if b > 0 {
                f.write_str("|")?;
            }
            for (k, j) in block.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", j + 1)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut d = 0;
        for part in s.trim().split('|') {
            let mut block = Vec::new();
            for tok in part.split(',') {
                let tok = tok.trim();
                let j: usize = match tok.parse() {
                    Ok(j) if j >= 1 => j,
                    _ => bail!(Validation, "bad index {tok:?} in partition {s:?}"),
                };
                block.push(j - 1);
                d += 1;
            }
            blocks.push(block);
        }
        Partition::new(blocks, d)
    }
}

/// Free-function form of [`Partition::new`].
pub fn canonicalize(blocks: Vec<Vec<usize>>, d: usize) -> Result<Partition> {
    Partition::new(blocks, d)
}

/// Every partition of `{0, …, d-1}`, once each, by restricted growth strings.
pub fn enumerate_partitions(d: usize) -> Result<PartitionIter> {
    if d == 0 {
        bail!(Validation, "dimension must be positive");
    }
    if d > ENUMERATION_CAP {
        bail!(
            Capacity,
            "full enumeration is capped at d = {ENUMERATION_CAP}, got {d}"
        );
    }
    Ok(PartitionIter {
        rgs: vec![0; d],
        prefix_max: vec![0; d],
        done: false,
    })
}

pub struct PartitionIter {
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[0..i]), with prefix_max[0] = 0
    prefix_max: Vec<usize>,
    done: bool,
}

impl PartitionIter {
    fn advance(&mut self) {
        let d = self.rgs.len();
        for i in (1..d).rev() {
            if self.rgs[i] <= self.prefix_max[i] {
                self.rgs[i] += 1;
                let top = self.prefix_max[i].max(self.rgs[i]);
                for k in i + 1..d {
                    self.rgs[k] = 0;
                    self.prefix_max[k] = top;
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let p = Partition::from_labels(&self.rgs);
        self.advance();
        Some(p)
    }
}

/// Occurrence partition of a raw block given row-major as `rows × cols`.
///
/// Columns `j` and `j'` share a block iff the same row attains both column
/// maxima. Ties go to the smallest row index. Any strictly increasing
/// per-column transform leaves the result unchanged.
pub fn occurrence_partition(values: &[f64], rows: usize, cols: usize) -> Result<Partition> {
    if rows == 0 || cols == 0 {
        bail!(Validation, "block must have at least one row and one column");
    }
    if values.len() != rows * cols {
        bail!(
            Validation,
            "expected {} values for a {rows}x{cols} block, got {}",
            rows * cols,
            values.len()
        );
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        bail!(Validation, "non-finite entry {v}");
    }
    let mut best = values[..cols].to_vec();
    let mut argmax = vec![0usize; cols];
    for (i, row) in values.chunks_exact(cols).enumerate().skip(1) {
        for (j, &v) in row.iter().enumerate() {
            if v > best[j] {
                best[j] = v;
                argmax[j] = i;
            }
        }
    }
    Ok(Partition::from_labels(&argmax))
}

impl From<Partition> for String {
    fn from(p: Partition) -> String {
        alloc::format!("{p}")
    }
}
