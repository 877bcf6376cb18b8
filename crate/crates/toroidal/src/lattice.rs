//! Points of the grading lattice Z^rank and window enumeration.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::Scalar;

/// A point of the grading lattice. The length is fixed by the ambient
/// configuration (`n + 1` for the full algebra, `n` for degree-zero slices).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn new(entries: Vec<i64>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(rank: usize) -> Self {
        MultiIndex(vec![0; rank])
    }

    /// The canonical basis vector e_i.
    pub fn unit(rank: usize, i: usize) -> Self {
        assert!(i < rank);
        let mut v = vec![0; rank];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Largest index with a nonzero entry, if any.
    pub fn last_nonzero(&self) -> Option<usize> {
        self.0.iter().rposition(|&x| x != 0)
    }

    pub fn scaled(&self, c: i64) -> Self {
        MultiIndex(self.0.iter().map(|&x| x * c).collect())
    }

    /// Rational dot product against a coefficient vector of equal rank.
    pub fn dot(&self, coeffs: &[Scalar]) -> Scalar {
        assert_eq!(self.rank(), coeffs.len());
        self.0
            .iter()
            .zip(coeffs)
            .map(|(&k, c)| Scalar::from_int(k) * c)
            .sum()
    }

    pub fn norm1(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn check_rank(&self, rank: usize) -> Result<(), Error> {
        if self.rank() == rank {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: rank,
                got: self.rank(),
            })
        }
    }

    /// Drops the first coordinate, e.g. to pass from Z^{n+1} to the Z^n slice.
    pub fn tail(&self) -> MultiIndex {
        MultiIndex(self.0[1..].to_vec())
    }

    /// Prepends a leading coordinate.
    pub fn with_head(&self, head: i64) -> MultiIndex {
        let mut v = Vec::with_capacity(self.rank() + 1);
        v.push(head);
        v.extend_from_slice(&self.0);
        MultiIndex(v)
    }
}

impl Index<usize> for MultiIndex {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        assert_eq!(self.rank(), rhs.rank(), "lattice rank mismatch");
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &MultiIndex {
    type Output = MultiIndex;
    fn sub(self, rhs: &MultiIndex) -> MultiIndex {
        assert_eq!(self.rank(), rhs.rank(), "lattice rank mismatch");
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &MultiIndex {
    type Output = MultiIndex;
    fn neg(self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Iterates over all lattice points of the box [-radius, radius]^rank in
/// lexicographic order.
pub fn window(rank: usize, radius: i64) -> impl Iterator<Item = MultiIndex> {
    assert!(radius >= 0);
    let side = (2 * radius + 1) as u64;
    let total = side.checked_pow(rank as u32).expect("window too large");
    (0..total).map(move |mut idx| {
        let mut v = vec![0i64; rank];
        for slot in v.iter_mut().rev() {
            *slot = (idx % side) as i64 - radius;
            idx /= side;
        }
        MultiIndex(v)
    })
}

/// Same as [`window`] but with the origin removed.
pub fn punctured_window(rank: usize, radius: i64) -> impl Iterator<Item = MultiIndex> {
    window(rank, radius).filter(|m| !m.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_counts() {
        assert_eq!(window(2, 1).count(), 9);
        assert_eq!(window(2, 3).count(), 49);
        assert_eq!(punctured_window(3, 1).count(), 26);
    }

    #[test]
    fn window_is_sorted_lexicographically() {
        let pts: Vec<_> = window(2, 2).collect();
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
    }

    #[test]
    fn last_nonzero_picks_highest_index() {
        assert_eq!(MultiIndex::new(vec![4, 6]).last_nonzero(), Some(1));
        assert_eq!(MultiIndex::new(vec![4, 0]).last_nonzero(), Some(0));
        assert_eq!(MultiIndex::zero(3).last_nonzero(), None);
    }
}
