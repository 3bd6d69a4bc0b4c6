use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Partition> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not decreasing")));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn largest(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    /// `(size, count)` pairs, largest size first: the form `(r^{l_r}, .., 1^{l_1})`.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((s, c)) if *s == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Number of parts equal to `size`.
    pub fn count_of(&self, size: usize) -> usize {
        self.0.iter().filter(|&&p| p == size).count()
    }

    /// Index of the `copy`-th (0-based) part equal to `size`.
    pub fn index_of(&self, size: usize, copy: usize) -> Option<usize> {
        self.0.iter().enumerate().filter(|(_, &p)| p == size).nth(copy).map(|(i, _)| i)
    }

    pub fn conjugate(&self) -> Partition {
        let n = self.largest();
        Partition((1..=n).map(|t| self.0.iter().filter(|&&p| p >= t).count()).collect())
    }

    /// All partitions of `n`, in reverse lexicographic order (`(n)` first).
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut vec![], &mut out);
        out
    }

    pub fn parse(s: &str) -> Result<Partition> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::InvalidPartition(String::from(s))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn counts_and_views() {
        let sizes: Vec<usize> = (0..8).map(|n| Partition::all(n).len()).collect();
        assert_eq!(sizes, [1, 1, 2, 3, 5, 7, 11, 15]);
        let l = Partition::new(vec![5, 3, 3, 2]).unwrap();
        assert_eq!(l.multiplicities(), vec![(5, 1), (3, 2), (2, 1)]);
        assert_eq!(l.conjugate().parts(), &[4, 4, 3, 1, 1]);
        assert_eq!(l.index_of(3, 1), Some(2));
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(Partition::parse("4,2").unwrap().to_string(), "4,2");
    }
}
