use std::fmt;
use std::str::FromStr;

use crate::coords::{Axis, TriclusterCoords};

use super::EngineError;

/// Binary membership mask of length `X + Y + Z`: genes, then conditions, then times.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chromosome {
    bits: Vec<bool>,
    dims: [usize; 3],
}

impl Chromosome {
    pub fn empty(dims: [usize; 3]) -> Self {
        Chromosome { bits: vec![false; dims.iter().sum()], dims }
    }

    pub fn from_bits(bits: Vec<bool>, dims: [usize; 3]) -> Result<Self, EngineError> {
        let expected: usize = dims.iter().sum();
        if bits.len() != expected {
            return Err(EngineError::LengthMismatch { expected, found: bits.len() });
        }
        Ok(Chromosome { bits, dims })
    }

    /// Encodes coords; indices must be within `dims`.
    pub fn encode(coords: &TriclusterCoords, dims: [usize; 3]) -> Result<Self, EngineError> {
        coords.validate(dims).map_err(|e| EngineError::Encode(e.to_string()))?;
        let mut c = Self::empty(dims);
        for axis in Axis::ALL {
            let seg = c.segment_mut(axis);
            for &i in coords.axis(axis) {
                seg[i] = true;
            }
        }
        Ok(c)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    fn range(&self, axis: Axis) -> std::ops::Range<usize> {
        let [x, y, _] = self.dims;
        let start = match axis {
            Axis::Gene => 0,
            Axis::Condition => x,
            Axis::Time => x + y,
        };
        start..start + self.dims[axis.index()]
    }

    pub fn segment(&self, axis: Axis) -> &[bool] {
        let r = self.range(axis);
        &self.bits[r]
    }

    pub fn segment_mut(&mut self, axis: Axis) -> &mut [bool] {
        let r = self.range(axis);
        &mut self.bits[r]
    }

    pub fn set_count(&self, axis: Axis) -> usize {
        self.segment(axis).iter().filter(|&&b| b).count()
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn hamming(&self, other: &Chromosome) -> usize {
        self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count()
    }

    /// Set-bit positions per segment, sorted. Fails when a segment has fewer
    /// than two set bits.
    pub fn decode(&self) -> Result<TriclusterCoords, EngineError> {
        let idx = |axis: Axis| -> Result<Vec<usize>, EngineError> {
            let v: Vec<usize> = self.segment(axis).iter().enumerate().filter_map(|(i, &b)| b.then_some(i)).collect();
            if v.len() < 2 {
                return Err(EngineError::SegmentTooSmall { axis, set: v.len() });
            }
            Ok(v)
        };
        Ok(TriclusterCoords { genes: idx(Axis::Gene)?, conditions: idx(Axis::Condition)?, times: idx(Axis::Time)? })
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, axis) in Axis::ALL.iter().enumerate() {
            if n > 0 {
                f.write_str("|")?;
            }
            for &b in self.segment(*axis) {
                f.write_str(if b { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

/// Parses the `genes|conditions|times` bit-string form, e.g. `10110|10001|11001`.
impl FromStr for Chromosome {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split('|').collect();
        if parts.len() != 3 {
            return Err(EngineError::Parse(format!("expected three `|`-separated segments in {s:?}")));
        }
        let mut bits = Vec::new();
        let mut dims = [0; 3];
        for (k, p) in parts.iter().enumerate() {
            dims[k] = p.len();
            for ch in p.chars() {
                bits.push(match ch {
                    '0' => false,
                    '1' => true,
                    other => return Err(EngineError::Parse(format!("invalid bit {other:?}"))),
                });
            }
        }
        Chromosome::from_bits(bits, dims)
    }
}
