use crate::error::{Error, Result};

/// Subsets of a ground set, encoded little-endian over the element order.
pub type Mask = u32;

/// Default ground-set cap; can be raised to `HARD_CAP` via `MATROID_CAP`.
pub const DEFAULT_CAP: usize = 20;
/// Absolute cap on ground-set size: masks must fit in 24 bits.
pub const HARD_CAP: usize = 24;

pub fn ground_cap() -> usize {
    match std::env::var("MATROID_CAP") {
        Ok(v) => v
            .parse::<usize>()
            .map(|c| c.min(HARD_CAP))
            .unwrap_or(DEFAULT_CAP),
        Err(_) => DEFAULT_CAP,
    }
}

/// An ordered set of distinct element labels. The bit order of every mask
/// in the crate is the element order fixed here at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.len() > ground_cap() {
            return Err(Error::Capacity(format!(
                "{} elements exceeds ground-set cap {}",
                labels.len(),
                ground_cap()
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            for b in labels.iter().skip(i + 1) {
                if a == b {
                    return Err(Error::Invalid(format!("duplicate element label {a:?}")));
                }
            }
        }
        Ok(GroundSet { labels })
    }

    /// Ground set `0..n` labeled `e0, e1, ...`.
    pub fn numbered(n: usize, prefix: &str) -> Result<Self> {
        Self::new((0..n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn full_mask(&self) -> Mask {
        mask_full(self.labels.len())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mask_of(&self, labels: &[impl AsRef<str>]) -> Result<Mask> {
        let mut m = 0;
        for l in labels {
            let i = self
                .index_of(l.as_ref())
                .ok_or_else(|| Error::Domain(format!("unknown element {:?}", l.as_ref())))?;
            m |= 1 << i;
        }
        Ok(m)
    }

    /// Members of `mask`, sorted lexicographically by label (report order).
    pub fn labels_of(&self, mask: Mask) -> Vec<String> {
        let mut v: Vec<String> = bits(mask).map(|i| self.labels[i].clone()).collect();
        v.sort();
        v
    }

    /// Sorted comma-joined label key for a subset (rank-table JSON keys).
    pub fn subset_key(&self, mask: Mask) -> String {
        self.labels_of(mask).join(",")
    }

    pub fn check_subset(&self, mask: Mask) -> Result<()> {
        if mask & !self.full_mask() != 0 {
            return Err(Error::Domain(format!(
                "mask {mask:#b} is not a subset of a {}-element ground set",
                self.len()
            )));
        }
        Ok(())
    }
}

pub fn mask_full(n: usize) -> Mask {
    if n == 0 {
        0
    } else {
        (1u32 << n) - 1
    }
}

pub fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

pub fn popcount(mask: Mask) -> u32 {
    mask.count_ones()
}

/// All subsets of `of`, in ascending numeric order (so ∅ first, `of` last).
pub fn subsets_of(of: Mask) -> SubsetIter {
    SubsetIter {
        of,
        cur: 0,
        done: false,
    }
}

pub struct SubsetIter {
    of: Mask,
    cur: Mask,
    done: bool,
}

impl Iterator for SubsetIter {
    type Item = Mask;

    fn next(&mut self) -> Option<Mask> {
        if self.done {
            return None;
        }
        let out = self.cur;
        if self.cur == self.of {
            self.done = true;
        } else {
            // Standard subset-stepping trick within a fixed superset.
            self.cur = (self.cur.wrapping_sub(self.of)) & self.of;
        }
        Some(out)
    }
}
