//! Tricluster quality measures and the composite fitness
//! `F = MSR + LSL − Weights − Distinction` (lower is better).

mod lsl;
mod msr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::archive::{Archive, Coverage};
use crate::coords::{Axis, CoordsError, TriclusterCoords};
use crate::num::Scalar;
use crate::tensor::ExpressionTensor;

pub use lsl::{lsl, mean_pairwise_distance, view_slopes, LeastSquaresAccumulator, SlopeMode, View, ViewSlopes};
pub use msr::{msr3d, residual, MeansDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QualityError {
    #[error(transparent)]
    Coords(#[from] CoordsError),
    #[error("cell (gene {g}, condition {c}, time {t}) is not part of the tricluster")]
    CellOutsideCoords { g: usize, c: usize, t: usize },
    #[error("{view} view has a regression with all x-coordinates equal")]
    DegenerateRegression { view: View },
}

/// Bounds check plus a minimum subset size on every axis.
pub(crate) fn prepare<T: Scalar>(
    tensor: &ExpressionTensor<T>,
    coords: &TriclusterCoords,
    min_size: usize,
) -> Result<(), QualityError> {
    coords.validate(tensor.shape())?;
    coords.require_min_size(min_size)?;
    Ok(())
}

/// Size rewards `w_*` and novelty rewards `wd_*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityWeights<T> {
    pub w_g: T,
    pub w_c: T,
    pub w_t: T,
    pub wd_g: T,
    pub wd_c: T,
    pub wd_t: T,
}

impl<T: Scalar> QualityWeights<T> {
    pub fn uniform(size: T, distinction: T) -> Self {
        QualityWeights { w_g: size, w_c: size, w_t: size, wd_g: distinction, wd_c: distinction, wd_t: distinction }
    }

    pub fn zero() -> Self {
        Self::uniform(T::zero(), T::zero())
    }

    pub fn validate(&self) -> Result<(), String> {
        let all = [
            ("w_g", self.w_g),
            ("w_c", self.w_c),
            ("w_t", self.w_t),
            ("wd_g", self.wd_g),
            ("wd_c", self.wd_c),
            ("wd_t", self.wd_t),
        ];
        for (name, v) in all {
            if !v.is_finite() || v < T::zero() {
                return Err(format!("weight {name} = {v} must be finite and non-negative"));
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Default for QualityWeights<T> {
    /// 0.1 for every size and distinction weight.
    fn default() -> Self {
        Self::uniform(T::lit(0.1), T::lit(0.1))
    }
}

/// The four fitness components and their combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessBreakdown<T> {
    pub msr: T,
    pub lsl: T,
    #[serde(rename = "weights")]
    pub weights_term: T,
    #[serde(rename = "distinction")]
    pub distinction_term: T,
    pub f: T,
}

impl<T: Scalar> FitnessBreakdown<T> {
    /// Combines components as `((msr + lsl) - weights) - distinction`.
    pub fn compose(msr: T, lsl: T, weights_term: T, distinction_term: T) -> Self {
        FitnessBreakdown { msr, lsl, weights_term, distinction_term, f: msr + lsl - weights_term - distinction_term }
    }

    /// Whether `f` equals the recombined components bit for bit.
    pub fn is_consistent(&self) -> bool {
        let f = self.msr + self.lsl - self.weights_term - self.distinction_term;
        // f32 and f64 both widen to f64 exactly
        f.as_f64().to_bits() == self.f.as_f64().to_bits()
    }
}

/// `G_l·w_g + C_l·w_c + T_l·w_t`.
pub fn weights_term<T: Scalar>(coords: &TriclusterCoords, w: &QualityWeights<T>) -> T {
    let [g, c, t] = coords.sizes();
    T::from_count(g) * w.w_g + T::from_count(c) * w.w_c + T::from_count(t) * w.w_t
}

/// Fraction of each axis of `coords` unseen in `coverage`, weighted by `wd_*`.
pub fn distinction_for_coverage<T: Scalar>(coords: &TriclusterCoords, coverage: &Coverage, w: &QualityWeights<T>) -> T {
    let frac = |axis: Axis| {
        let size = coords.axis(axis).len();
        if size == 0 {
            T::zero()
        } else {
            T::from_count(coverage.unseen(coords, axis)) / T::from_count(size)
        }
    };
    frac(Axis::Gene) * w.wd_g + frac(Axis::Condition) * w.wd_c + frac(Axis::Time) * w.wd_t
}

/// Novelty of `coords` relative to every tricluster already archived.
pub fn distinction_term<T: Scalar>(coords: &TriclusterCoords, archive: &Archive<T>, w: &QualityWeights<T>) -> T {
    distinction_for_coverage(coords, archive.coverage(), w)
}

/// Full fitness breakdown of one candidate.
pub fn fitness<T: Scalar>(
    tensor: &ExpressionTensor<T>,
    coords: &TriclusterCoords,
    w: &QualityWeights<T>,
    archive: &Archive<T>,
    mode: SlopeMode,
) -> Result<FitnessBreakdown<T>, QualityError> {
    FitnessContext::new(tensor, *w, archive, mode).evaluate(coords)
}

/// Everything needed to score candidates during one GA run: a shared tensor,
/// fixed weights and a frozen archive snapshot.
#[derive(Debug, Clone, Copy)]
pub struct FitnessContext<'a, T> {
    pub tensor: &'a ExpressionTensor<T>,
    pub weights: QualityWeights<T>,
    pub archive: &'a Archive<T>,
    pub mode: SlopeMode,
}

impl<'a, T: Scalar> FitnessContext<'a, T> {
    pub fn new(
        tensor: &'a ExpressionTensor<T>,
        weights: QualityWeights<T>,
        archive: &'a Archive<T>,
        mode: SlopeMode,
    ) -> Self {
        FitnessContext { tensor, weights, archive, mode }
    }

    pub fn evaluate(&self, coords: &TriclusterCoords) -> Result<FitnessBreakdown<T>, QualityError> {
        prepare(self.tensor, coords, 2)?;
        let centered = msr::center(&self.tensor.subtensor(coords));
        let msr = msr::msr_of_centered(&centered);
        let lsl = lsl::lsl_of_subtensor(&centered.values, self.mode)?;
        Ok(FitnessBreakdown::compose(
            msr,
            lsl,
            weights_term(coords, &self.weights),
            distinction_term(coords, self.archive, &self.weights),
        ))
    }
}
