//! Dense expression tensor indexed `(gene, condition, time)` plus the
//! preprocessing steps applied before mining: per-column min–max
//! normalization and seeded imputation of missing cells.

use std::collections::HashSet;

use ndarray::{Array3, Axis as NdAxis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coords::TriclusterCoords;
use crate::num::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("tensor axis {axis} has length 0")]
    EmptyAxis { axis: &'static str },
    #[error("{axis} labels have length {labels}, values have {values}")]
    LabelMismatch { axis: &'static str, labels: usize, values: usize },
    #[error("duplicate {axis} label {label:?}")]
    DuplicateLabel { axis: &'static str, label: String },
    #[error("missing mask shape {mask:?} does not match values shape {values:?}")]
    MaskShape { mask: [usize; 3], values: [usize; 3] },
}

/// Expression values with axis labels and a provenance mask of cells that
/// were absent in the source.
///
/// Missing cells hold `NaN` until [`ExpressionTensor::impute_missing`] fills them.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpressionTensor<T> {
    values: Array3<T>,
    gene_ids: Vec<String>,
    condition_ids: Vec<String>,
    time_labels: Vec<String>,
    missing: Array3<bool>,
}

fn check_labels(axis: &'static str, labels: &[String], len: usize) -> Result<(), TensorError> {
    if len == 0 {
        return Err(TensorError::EmptyAxis { axis });
    }
    if labels.len() != len {
        return Err(TensorError::LabelMismatch { axis, labels: labels.len(), values: len });
    }
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(TensorError::DuplicateLabel { axis, label: l.clone() });
        }
    }
    Ok(())
}

impl<T: Scalar> ExpressionTensor<T> {
    pub fn new(
        values: Array3<T>,
        gene_ids: Vec<String>,
        condition_ids: Vec<String>,
        time_labels: Vec<String>,
        missing: Array3<bool>,
    ) -> Result<Self, TensorError> {
        let (g, c, t) = values.dim();
        check_labels("gene", &gene_ids, g)?;
        check_labels("condition", &condition_ids, c)?;
        check_labels("time", &time_labels, t)?;
        if missing.dim() != values.dim() {
            let (mg, mc, mt) = missing.dim();
            return Err(TensorError::MaskShape { mask: [mg, mc, mt], values: [g, c, t] });
        }
        Ok(ExpressionTensor { values, gene_ids, condition_ids, time_labels, missing })
    }

    /// Wraps a complete array with generated labels `g0.., c0.., 0..`.
    pub fn from_values(values: Array3<T>) -> Result<Self, TensorError> {
        let (g, c, t) = values.dim();
        let missing = Array3::from_elem((g, c, t), false);
        Self::new(
            values,
            (0..g).map(|i| format!("g{i}")).collect(),
            (0..c).map(|i| format!("c{i}")).collect(),
            (0..t).map(|i| i.to_string()).collect(),
            missing,
        )
    }

    /// `[genes, conditions, times]`.
    pub fn shape(&self) -> [usize; 3] {
        let (g, c, t) = self.values.dim();
        [g, c, t]
    }

    #[inline]
    pub fn get(&self, g: usize, c: usize, t: usize) -> T {
        self.values[[g, c, t]]
    }

    pub fn values(&self) -> &Array3<T> {
        &self.values
    }

    pub fn missing_mask(&self) -> &Array3<bool> {
        &self.missing
    }

    pub fn is_missing(&self, g: usize, c: usize, t: usize) -> bool {
        self.missing[[g, c, t]]
    }

    pub fn missing_count(&self) -> usize {
        self.missing.iter().filter(|&&m| m).count()
    }

    pub fn gene_ids(&self) -> &[String] {
        &self.gene_ids
    }

    pub fn condition_ids(&self) -> &[String] {
        &self.condition_ids
    }

    pub fn time_labels(&self) -> &[String] {
        &self.time_labels
    }

    /// Dense copy of the cells selected by `coords`, shaped `(G_l, C_l, T_l)`.
    ///
    /// Coords must already be validated against [`Self::shape`].
    pub fn subtensor(&self, coords: &TriclusterCoords) -> Array3<T> {
        let [gl, cl, tl] = coords.sizes();
        let mut out = Array3::from_elem((gl, cl, tl), T::zero());
        for (i, &g) in coords.genes.iter().enumerate() {
            for (j, &c) in coords.conditions.iter().enumerate() {
                for (k, &t) in coords.times.iter().enumerate() {
                    out[[i, j, k]] = self.values[[g, c, t]];
                }
            }
        }
        out
    }

    /// Keeps only the first `n` genes in file order.
    pub fn take_genes(&self, n: usize) -> Result<Self, TensorError> {
        let n = n.min(self.shape()[0]);
        let values = self.values.slice(ndarray::s![..n, .., ..]).to_owned();
        let missing = self.missing.slice(ndarray::s![..n, .., ..]).to_owned();
        Self::new(values, self.gene_ids[..n].to_vec(), self.condition_ids.clone(), self.time_labels.clone(), missing)
    }

    /// Applies `f` to every present value; missing cells are left alone.
    pub fn map_present(&self, mut f: impl FnMut(T) -> T) -> Self {
        let mut out = self.clone();
        ndarray::Zip::from(&mut out.values).and(&self.missing).for_each(|v, &m| {
            if !m {
                *v = f(*v);
            }
        });
        out
    }

    /// Min–max normalization where a column is every gene's value at one
    /// `(condition, time)` pair. Missing cells neither contribute to the
    /// column range nor get rewritten. Flat columns map to 0.
    pub fn normalize_minmax(&self) -> Self {
        let mut out = self.clone();
        let [_, nc, nt] = self.shape();
        for c in 0..nc {
            for t in 0..nt {
                let col = self.values.index_axis(NdAxis(1), c);
                let col = col.index_axis(NdAxis(1), t);
                let miss = self.missing.index_axis(NdAxis(1), c);
                let miss = miss.index_axis(NdAxis(1), t);
                let mut lo = T::infinity();
                let mut hi = T::neg_infinity();
                for (&v, &m) in col.iter().zip(miss.iter()) {
                    if !m {
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                }
                let range = hi - lo;
                for (g, &m) in miss.iter().enumerate() {
                    if m {
                        continue;
                    }
                    let v = &mut out.values[[g, c, t]];
                    *v = if range > T::zero() {
                        // clamp guards the last ulp of rounding in (v - lo) / range
                        ((*v - lo) / range).max(T::zero()).min(T::one())
                    } else {
                        T::zero()
                    };
                }
            }
        }
        out
    }

    /// Fills every missing cell with a uniform draw in `[0, 1)`.
    ///
    /// Cells are visited in row-major `(g, c, t)` order so the result depends
    /// only on the seed and the mask. The mask itself is preserved.
    pub fn impute_missing(&self, seed: u64) -> Self {
        let mut out = self.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ndarray::Zip::from(&mut out.values).and(&self.missing).for_each(|v, &m| {
            if m {
                *v = T::lit(rng.random::<f64>());
            }
        });
        out
    }
}
