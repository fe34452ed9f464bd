//! Archive of accepted triclusters and the per-axis coverage they induce.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coords::{Axis, TriclusterCoords};
use crate::quality::FitnessBreakdown;

/// Union of the gene, condition and time indices used by archived triclusters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub genes: BTreeSet<usize>,
    pub conditions: BTreeSet<usize>,
    pub times: BTreeSet<usize>,
}

impl Coverage {
    pub fn axis(&self, axis: Axis) -> &BTreeSet<usize> {
        match axis {
            Axis::Gene => &self.genes,
            Axis::Condition => &self.conditions,
            Axis::Time => &self.times,
        }
    }

    fn absorb(&mut self, coords: &TriclusterCoords) {
        self.genes.extend(coords.genes.iter().copied());
        self.conditions.extend(coords.conditions.iter().copied());
        self.times.extend(coords.times.iter().copied());
    }

    /// Indices of `coords` on `axis` not yet covered (the CDN count).
    pub fn unseen(&self, coords: &TriclusterCoords, axis: Axis) -> usize {
        let used = self.axis(axis);
        coords.axis(axis).iter().filter(|i| !used.contains(i)).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry<T> {
    pub coords: TriclusterCoords,
    pub breakdown: FitnessBreakdown<T>,
}

/// Ordered list of discovered triclusters.
///
/// The LSL acceptance threshold is applied by the caller
/// ([`crate::engine::run_triea`]) before [`Archive::push`].
#[derive(Debug, Clone, PartialEq)]
pub struct Archive<T> {
    entries: Vec<ArchiveEntry<T>>,
    coverage: Coverage,
}

impl<T> Default for Archive<T> {
    fn default() -> Self {
        Archive { entries: Vec::new(), coverage: Coverage::default() }
    }
}

impl<T> Archive<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, coords: TriclusterCoords, breakdown: FitnessBreakdown<T>) {
        self.coverage.absorb(&coords);
        self.entries.push(ArchiveEntry { coords, breakdown });
    }

    pub fn entries(&self) -> &[ArchiveEntry<T>] {
        &self.entries
    }

    pub fn coverage(&self) -> &Coverage {
        &self.coverage
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
