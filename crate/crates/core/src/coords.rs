//! Tricluster coordinates: three sorted index subsets over genes, conditions and times.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the three tensor axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Gene,
    Condition,
    Time,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Gene, Axis::Condition, Axis::Time];

    pub fn index(self) -> usize {
        match self {
            Axis::Gene => 0,
            Axis::Condition => 1,
            Axis::Time => 2,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Gene => "gene",
            Axis::Condition => "condition",
            Axis::Time => "time",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoordsError {
    #[error("{axis} subset is empty")]
    Empty { axis: Axis },
    #[error("{axis} index {index} out of bounds for axis of length {len}")]
    OutOfBounds { axis: Axis, index: usize, len: usize },
    #[error("{axis} subset has {size} element(s), at least {min} required")]
    TooSmall { axis: Axis, size: usize, min: usize },
}

/// A tricluster `G × C × T`. Index lists are kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriclusterCoords {
    pub genes: Vec<usize>,
    pub conditions: Vec<usize>,
    pub times: Vec<usize>,
}

fn normalized(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

impl TriclusterCoords {
    /// Builds coords from arbitrary index lists; they are sorted and deduplicated.
    pub fn new(genes: Vec<usize>, conditions: Vec<usize>, times: Vec<usize>) -> Self {
        TriclusterCoords { genes: normalized(genes), conditions: normalized(conditions), times: normalized(times) }
    }

    /// Coords spanning a whole tensor of the given shape.
    pub fn full(shape: [usize; 3]) -> Self {
        TriclusterCoords {
            genes: (0..shape[0]).collect(),
            conditions: (0..shape[1]).collect(),
            times: (0..shape[2]).collect(),
        }
    }

    pub fn axis(&self, axis: Axis) -> &[usize] {
        match axis {
            Axis::Gene => &self.genes,
            Axis::Condition => &self.conditions,
            Axis::Time => &self.times,
        }
    }

    /// `(G_l, C_l, T_l)`.
    pub fn sizes(&self) -> [usize; 3] {
        [self.genes.len(), self.conditions.len(), self.times.len()]
    }

    pub fn volume(&self) -> usize {
        self.sizes().iter().product()
    }

    /// Re-establishes the sorted/deduplicated representation after direct field edits.
    pub fn canonicalize(&mut self) {
        self.genes = normalized(std::mem::take(&mut self.genes));
        self.conditions = normalized(std::mem::take(&mut self.conditions));
        self.times = normalized(std::mem::take(&mut self.times));
    }

    /// Checks non-emptiness and bounds against a tensor shape.
    pub fn validate(&self, shape: [usize; 3]) -> Result<(), CoordsError> {
        for axis in Axis::ALL {
            let idx = self.axis(axis);
            let len = shape[axis.index()];
            if idx.is_empty() {
                return Err(CoordsError::Empty { axis });
            }
            if let Some(&index) = idx.iter().find(|&&i| i >= len) {
                return Err(CoordsError::OutOfBounds { axis, index, len });
            }
        }
        Ok(())
    }

    /// Requires at least `min` indices on every axis.
    pub fn require_min_size(&self, min: usize) -> Result<(), CoordsError> {
        for axis in Axis::ALL {
            let size = self.axis(axis).len();
            if size < min {
                return Err(CoordsError::TooSmall { axis, size, min });
            }
        }
        Ok(())
    }

    pub fn contains(&self, g: usize, c: usize, t: usize) -> bool {
        self.genes.binary_search(&g).is_ok()
            && self.conditions.binary_search(&c).is_ok()
            && self.times.binary_search(&t).is_ok()
    }

    /// Number of cells shared by the two Cartesian products.
    pub fn intersection_volume(&self, other: &TriclusterCoords) -> usize {
        Axis::ALL.iter().map(|&a| sorted_intersection_len(self.axis(a), other.axis(a))).product()
    }

    /// Whether the two cell sets share at least one cell.
    pub fn overlaps(&self, other: &TriclusterCoords) -> bool {
        self.intersection_volume(other) > 0
    }

    /// 3D Jaccard index `|A ∩ B| / |A ∪ B|` over cell sets.
    pub fn jaccard(&self, other: &TriclusterCoords) -> f64 {
        let inter = self.intersection_volume(other);
        let union = self.volume() + other.volume() - inter;
        if union == 0 {
            0.0
        } else {
            inter as f64 / union as f64
        }
    }

    pub fn axis_set(&self, axis: Axis) -> BTreeSet<usize> {
        self.axis(axis).iter().copied().collect()
    }
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
