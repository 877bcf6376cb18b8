//! Weight tables: the output currency of every analysis.
//!
//! A table maps lattice offsets to exact multiplicities or ranks, relative
//! to a rational base point, and serializes to TSV and JSON with a fixed
//! row order (lexicographic offsets).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::lattice::MultiIndex;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightTable {
    /// Base point of the weight coset; the weight of row `r` is `alpha + r`.
    pub alpha: Vec<Scalar>,
    rows: BTreeMap<MultiIndex, u64>,
}

impl WeightTable {
    pub fn new(alpha: Vec<Scalar>) -> Self {
        WeightTable {
            alpha,
            rows: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, offset: MultiIndex, value: u64) {
        assert_eq!(offset.rank(), self.alpha.len());
        self.rows.insert(offset, value);
    }

    pub fn get(&self, offset: &MultiIndex) -> Option<u64> {
        self.rows.get(offset).copied()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&MultiIndex, u64)> {
        self.rows.iter().map(|(k, &v)| (k, v))
    }

    /// The actual weight of a row, `alpha + r`.
    pub fn weight_at(&self, offset: &MultiIndex) -> Vec<Scalar> {
        self.alpha
            .iter()
            .zip(offset.entries())
            .map(|(a, &ri)| a.clone() + Scalar::from_int(ri))
            .collect()
    }

    /// Offsets with nonzero value.
    pub fn support(&self) -> impl Iterator<Item = &MultiIndex> {
        self.rows.iter().filter(|(_, &v)| v > 0).map(|(k, _)| k)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("offset\tweight\tdim\n");
        for (r, v) in self.rows() {
            let weight = self
                .weight_at(r)
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let offset = r
                .entries()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(out, "{offset}\t{weight}\t{v}");
        }
        out
    }
}

/// How the support sits inside the captured window.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum SupportPattern {
    /// Every window point carries a nonzero space: a full coset.
    FullCoset,
    /// Everything except the single point of weight zero.
    PuncturedAtZero,
    /// Only the zero weight (trivial module shape).
    OnlyZero,
    /// Anything else.
    Irregular,
}

/// Window-level support diagnostics for a weight table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupportReport {
    pub support_count: usize,
    pub window_count: usize,
    pub min_dim: u64,
    pub max_dim: u64,
    /// True when all nonzero rows share one dimension.
    pub uniform: bool,
    pub pattern: SupportPattern,
}

/// Summarizes support, extremal dimensions and the coset pattern of a table.
pub fn support_and_bound(table: &WeightTable) -> SupportReport {
    let window_count = table.len();
    let support: Vec<&MultiIndex> = table.support().collect();
    let dims: Vec<u64> = table.rows().map(|(_, v)| v).filter(|&v| v > 0).collect();
    let min_dim = dims.iter().copied().min().unwrap_or(0);
    let max_dim = dims.iter().copied().max().unwrap_or(0);
    // the point of weight zero, if it is a lattice point of the window
    let zero_offset: Option<MultiIndex> = {
        let all_integral = table.alpha.iter().all(Scalar::is_integer);
        all_integral.then(|| {
            MultiIndex::new(table.alpha.iter().map(|a| -a.to_i64().unwrap()).collect())
        })
    };
    let holes: Vec<MultiIndex> = table
        .rows()
        .filter(|(_, v)| *v == 0)
        .map(|(k, _)| k.clone())
        .collect();
    let pattern = if holes.is_empty() && !support.is_empty() {
        SupportPattern::FullCoset
    } else if support.is_empty() {
        SupportPattern::Irregular
    } else if support.len() == 1 && Some(support[0]) == zero_offset.as_ref() {
        SupportPattern::OnlyZero
    } else if holes.len() == 1 && Some(&holes[0]) == zero_offset.as_ref() {
        SupportPattern::PuncturedAtZero
    } else {
        SupportPattern::Irregular
    };
    SupportReport {
        support_count: support.len(),
        window_count,
        min_dim,
        max_dim,
        uniform: min_dim == max_dim,
        pattern,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::window;

    #[test]
    fn tsv_shape_and_order() {
        let mut t = WeightTable::new(vec![Scalar::ratio(1, 2), Scalar::zero()]);
        for r in window(2, 1) {
            t.insert(r, 3);
        }
        let tsv = t.to_tsv();
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[1], "-1,-1\t-1/2,-1\t3");
    }

    #[test]
    fn punctured_pattern() {
        let mut t = WeightTable::new(vec![Scalar::zero()]);
        for r in window(1, 2) {
            let v = u64::from(!r.is_zero());
            t.insert(r, v);
        }
        let rep = support_and_bound(&t);
        assert_eq!(rep.pattern, SupportPattern::PuncturedAtZero);
        assert!(rep.uniform);
    }

    #[test]
    fn full_coset_pattern_with_fractional_base() {
        let mut t = WeightTable::new(vec![Scalar::ratio(1, 3)]);
        for r in window(1, 2) {
            t.insert(r, 5);
        }
        let rep = support_and_bound(&t);
        assert_eq!(rep.pattern, SupportPattern::FullCoset);
        assert_eq!((rep.min_dim, rep.max_dim), (5, 5));
    }
}
