//! Set partitions of the subsystem indices into exactly k blocks.
//!
//! Partitions are enumerated as restricted-growth strings a_0 … a_{n-1}
//! (a_0 = 0, a_i ≤ 1 + max(a_0 … a_{i-1})) in lexicographic order, which
//! yields each partition exactly once with blocks ordered by their minimal
//! element.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A division of {0..n−1} into disjoint, nonempty, sorted blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Build from per-element block labels; labels are canonicalized by
    /// first occurrence.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidPartition("empty label list".into()));
        }
        let mut relabel: Vec<Option<usize>> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            if relabel.len() <= l {
                relabel.resize(l + 1, None);
            }
            let b = *relabel[l].get_or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(i);
        }
        Ok(Self { n: labels.len(), blocks })
    }

    /// Build from explicit blocks, validating that they partition {0..n−1}.
    pub fn from_blocks(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= n {
                    return Err(Error::InvalidPartition(format!("index {i} >= n={n}")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("index {i} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {missing} not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block label of every element (the restricted-growth string).
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                labels[i] = b;
            }
        }
        labels
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (b, block) in self.blocks.iter().enumerate() {
            if b > 0 {
                f.write_str("|")?;
            }
            for (i, x) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        f.write_str("}")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses the `{0|1,2}` rendering; n is taken as the number of indices.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::InvalidPartition(format!("'{s}' is not of the form {{..|..}}")))?;
        let blocks = inner
            .split('|')
            .map(|block| {
                block
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::InvalidPartition(format!("bad index '{x}' in '{s}'")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = blocks.iter().map(Vec::len).sum();
        Self::from_blocks(n, blocks)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_block_count(n: usize, k: usize) -> Result<()> {
    if k < 2 || k > n {
        Err(Error::BlockCountOutOfRange { k, n })
    } else {
        Ok(())
    }
}

/// Lexicographic stream of restricted-growth strings with exactly k values.
#[derive(Clone, Debug)]
pub struct Partitions {
    k: usize,
    labels: Vec<usize>,
    done: bool,
}

impl Partitions {
    fn new(n: usize, k: usize) -> Self {
        // Smallest string: zeros followed by 1, 2, …, k−1.
        let mut labels = vec![0; n];
        for (slot, value) in labels[n - (k - 1)..].iter_mut().zip(1..) {
            *slot = value;
        }
        Self { k, labels, done: false }
    }

    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        let k = self.k;
        for i in (1..n).rev() {
            let prefix_max = *self.labels[..i].iter().max().expect("i >= 1");
            let ceiling = (prefix_max + 1).min(k - 1);
            let remaining = n - 1 - i;
            for value in self.labels[i] + 1..=ceiling {
                let reached = prefix_max.max(value);
                if remaining + reached >= k - 1 {
                    self.labels[i] = value;
                    let fresh = k - 1 - reached;
                    for slot in &mut self.labels[i + 1..n - fresh] {
                        *slot = 0;
                    }
                    for (slot, v) in self.labels[n - fresh..].iter_mut().zip(reached + 1..) {
                        *slot = v;
                    }
                    return true;
                }
            }
        }
        false
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let current = Partition::from_labels(&self.labels).expect("nonempty labels");
        self.done = !self.advance();
        Some(current)
    }
}

/// All partitions of {0..n−1} into exactly k nonempty blocks, in canonical
/// order. Requires 2 ≤ k ≤ n.
pub fn enumerate_partitions(n: usize, k: usize) -> Result<Partitions> {
    check_block_count(n, k)?;
    Ok(Partitions::new(n, k))
}

/// Stirling number of the second kind S(n, k), by the recurrence
/// S(n,k) = k·S(n−1,k) + S(n−1,k−1). Requires 2 ≤ k ≤ n.
pub fn count_partitions(n: usize, k: usize) -> Result<u64> {
    check_block_count(n, k)?;
    let overflow = || Error::CountOverflow { n, k };
    // row[j] = S(m, j) for the current m
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            let carried = (j as u64).checked_mul(row[j]).ok_or_else(overflow)?;
            row[j] = carried.checked_add(row[j - 1]).ok_or_else(overflow)?;
        }
        row[0] = 0;
    }
    Ok(row[k])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(n: usize, k: usize) -> Vec<String> {
        enumerate_partitions(n, k).unwrap().map(|p| p.to_string()).collect()
    }

    #[test]
    fn three_into_two() {
        let mut got = render(3, 2);
        got.sort();
        assert_eq!(got, vec!["{0,1|2}", "{0,2|1}", "{0|1,2}"]);
    }

    #[test]
    fn singletons() {
        assert_eq!(render(3, 3), vec!["{0|1|2}"]);
        assert_eq!(render(5, 5).len(), 1);
    }

    #[test]
    fn four_into_two_has_seven() {
        assert_eq!(render(4, 2).len(), 7);
    }

    #[test]
    fn counts() {
        assert_eq!(count_partitions(3, 3).unwrap(), 1);
        assert_eq!(count_partitions(3, 2).unwrap(), 3);
        assert_eq!(count_partitions(5, 3).unwrap(), 25);
        assert_eq!(count_partitions(10, 5).unwrap(), 42_525);
    }

    #[test]
    fn block_count_out_of_range() {
        assert!(matches!(enumerate_partitions(3, 1), Err(Error::BlockCountOutOfRange { k: 1, n: 3 })));
        assert!(enumerate_partitions(3, 4).is_err());
        assert!(count_partitions(2, 1).is_err());
    }

    #[test]
    fn order_is_lexicographic_in_labels() {
        let labels: Vec<Vec<usize>> = enumerate_partitions(5, 3).unwrap().map(|p| p.labels()).collect();
        assert!(labels.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(labels[0], vec![0, 0, 0, 1, 2]);
    }

    #[test]
    fn parse_roundtrip_and_errors() {
        let p: Partition = "{0|1,2}".parse().unwrap();
        assert_eq!(p.blocks(), &[vec![0], vec![1, 2]]);
        assert_eq!(p.to_string(), "{0|1,2}");
        assert!("{0|0,1}".parse::<Partition>().is_err());
        assert!("{0|2}".parse::<Partition>().is_err());
        assert!("0|1".parse::<Partition>().is_err());
        // blocks are reordered canonically
        assert_eq!("{1,2|0}".parse::<Partition>().unwrap(), p);
    }
}
