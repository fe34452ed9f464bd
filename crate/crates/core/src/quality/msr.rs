//! Three-dimensional mean squared residue.

use ndarray::{Array1, Array2, Array3, Axis as NdAxis};

use super::{prepare, QualityError};
use crate::coords::TriclusterCoords;
use crate::num::Scalar;
use crate::tensor::ExpressionTensor;

/// The seven marginal mean families of a subtensor, indexed by position
/// within the coords (not by dataset index).
#[derive(Debug, Clone, PartialEq)]
pub struct MeansDecomposition<T> {
    /// Per time, mean over genes × conditions.
    pub m_gc_t: Array1<T>,
    /// Per condition, mean over genes × times.
    pub m_gt_c: Array1<T>,
    /// Per gene, mean over conditions × times.
    pub m_ct_g: Array1<T>,
    /// Per (condition, time), mean over genes.
    pub m_g_ct: Array2<T>,
    /// Per (gene, time), mean over conditions.
    pub m_c_gt: Array2<T>,
    /// Per (gene, condition), mean over times.
    pub m_t_gc: Array2<T>,
    /// Grand mean.
    pub m_gct: T,
}

/// Subtensor shifted by its grand mean, with the means of the shifted data.
/// Residuals are shift invariant, so working on centered values loses nothing
/// and keeps the arithmetic well conditioned.
pub(crate) struct Centered<T> {
    pub values: Array3<T>,
    pub means: MeansDecomposition<T>,
    pub shift: T,
}

fn mean_over<T: Scalar>(a: &Array3<T>, axes: &[usize]) -> ndarray::ArrayD<T> {
    let mut out = a.clone().into_dyn();
    let mut count = 1usize;
    // highest axis first so the remaining indices stay valid
    let mut sorted = axes.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    for ax in sorted {
        count *= out.len_of(NdAxis(ax));
        out = out.sum_axis(NdAxis(ax));
    }
    let n = T::from_count(count);
    out.mapv_inplace(|v| v / n);
    out
}

pub(crate) fn center<T: Scalar>(sub: &Array3<T>) -> Centered<T> {
    let n = T::from_count(sub.len());
    let shift = sub.iter().copied().sum::<T>() / n;
    let values = sub.mapv(|v| v - shift);
    let d1 = |a: ndarray::ArrayD<T>| a.into_dimensionality::<ndarray::Ix1>().expect("1-d mean");
    let d2 = |a: ndarray::ArrayD<T>| a.into_dimensionality::<ndarray::Ix2>().expect("2-d mean");
    let means = MeansDecomposition {
        m_gc_t: d1(mean_over(&values, &[0, 1])),
        m_gt_c: d1(mean_over(&values, &[0, 2])),
        m_ct_g: d1(mean_over(&values, &[1, 2])),
        m_g_ct: d2(mean_over(&values, &[0])),
        m_c_gt: d2(mean_over(&values, &[1])),
        m_t_gc: d2(mean_over(&values, &[2])),
        m_gct: values.iter().copied().sum::<T>() / n,
    };
    Centered { values, means, shift }
}

impl<T: Scalar> MeansDecomposition<T> {
    /// Computes all mean families of `coords` in `tensor`.
    pub fn compute(tensor: &ExpressionTensor<T>, coords: &TriclusterCoords) -> Result<Self, QualityError> {
        prepare(tensor, coords, 1)?;
        let Centered { means, shift, .. } = center(&tensor.subtensor(coords));
        Ok(means.shifted(shift))
    }

    fn shifted(mut self, s: T) -> Self {
        self.m_gc_t.mapv_inplace(|v| v + s);
        self.m_gt_c.mapv_inplace(|v| v + s);
        self.m_ct_g.mapv_inplace(|v| v + s);
        self.m_g_ct.mapv_inplace(|v| v + s);
        self.m_c_gt.mapv_inplace(|v| v + s);
        self.m_t_gc.mapv_inplace(|v| v + s);
        self.m_gct += s;
        self
    }

    /// Residual of the cell at positions `(i, j, k)` with value `x`.
    #[inline]
    pub fn residual_at(&self, x: T, i: usize, j: usize, k: usize) -> T {
        x + self.m_gc_t[k] + self.m_gt_c[j] + self.m_ct_g[i]
            - self.m_g_ct[[j, k]]
            - self.m_c_gt[[i, k]]
            - self.m_t_gc[[i, j]]
            - self.m_gct
    }
}

pub(crate) fn msr_of_centered<T: Scalar>(c: &Centered<T>) -> T {
    let mut acc = T::zero();
    for ((i, j, k), &x) in c.values.indexed_iter() {
        let r = c.means.residual_at(x, i, j, k);
        acc += r * r;
    }
    acc / T::from_count(c.values.len())
}

/// Residual `R_gct` for the dataset cell `(g, c, t)`, which must belong to `coords`.
pub fn residual<T: Scalar>(
    tensor: &ExpressionTensor<T>,
    coords: &TriclusterCoords,
    g: usize,
    c: usize,
    t: usize,
) -> Result<T, QualityError> {
    prepare(tensor, coords, 1)?;
    let outside = || QualityError::CellOutsideCoords { g, c, t };
    let i = coords.genes.binary_search(&g).map_err(|_| outside())?;
    let j = coords.conditions.binary_search(&c).map_err(|_| outside())?;
    let k = coords.times.binary_search(&t).map_err(|_| outside())?;
    let centered = center(&tensor.subtensor(coords));
    Ok(centered.means.residual_at(centered.values[[i, j, k]], i, j, k))
}

/// Mean of squared residuals over every cell of `coords`.
pub fn msr3d<T: Scalar>(tensor: &ExpressionTensor<T>, coords: &TriclusterCoords) -> Result<T, QualityError> {
    prepare(tensor, coords, 1)?;
    Ok(msr_of_centered(&center(&tensor.subtensor(coords))))
}
