//! Least-squares-line coherence: slopes of regression lines fitted in three
//! 2D views of a tricluster, compared pairwise within each view.
//!
//! | view      | one slope per | x axis    | pooled over |
//! |-----------|---------------|-----------|-------------|
//! | time      | time point    | gene      | conditions  |
//! | condition | condition     | gene      | times       |
//! | gene      | condition     | time      | genes       |
//!
//! x-coordinates are 0-based positions within the sorted coords subset.
//! Slopes do not depend on a constant shift of y, so values are centered on
//! the subtensor mean before accumulation.

use std::fmt;
use std::str::FromStr;

use ndarray::Array3;
use serde::{Deserialize, Serialize};

use super::msr::center;
use super::{prepare, QualityError};
use crate::coords::TriclusterCoords;
use crate::num::Scalar;
use crate::tensor::ExpressionTensor;

/// How a view's slope is computed from its accumulated sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SlopeMode {
    /// Literal slope formula whose `n`, `Σx` and `Σx²` run over the x axis only
    /// while `Σxy` and `Σy` also run over the pooled axis. Equals the sum of
    /// the per-series OLS slopes.
    #[serde(rename = "paper-literal")]
    PaperLiteral,
    /// Ordinary least squares over the full pooled point set.
    #[default]
    #[serde(rename = "ols")]
    Ols,
}

impl fmt::Display for SlopeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlopeMode::PaperLiteral => "paper-literal",
            SlopeMode::Ols => "ols",
        })
    }
}

impl FromStr for SlopeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper-literal" => Ok(SlopeMode::PaperLiteral),
            "ols" => Ok(SlopeMode::Ols),
            other => Err(format!("unknown slope mode {other:?} (expected paper-literal or ols)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum View {
    Time,
    Condition,
    Gene,
}

impl View {
    pub const ALL: [View; 3] = [View::Time, View::Condition, View::Gene];

    /// `(series axis, x axis, pooled axis)` as subtensor axis numbers.
    fn axes(self) -> (usize, usize, usize) {
        match self {
            View::Time => (2, 0, 1),
            View::Condition => (1, 0, 2),
            View::Gene => (1, 2, 0),
        }
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            View::Time => "time",
            View::Condition => "condition",
            View::Gene => "gene",
        })
    }
}

/// Running sums for a straight-line fit `y = a + b·x`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LeastSquaresAccumulator<T> {
    pub sum_x: T,
    pub sum_xx: T,
    pub sum_xy: T,
    pub sum_y: T,
    pub n_points: usize,
}

impl<T: Scalar> LeastSquaresAccumulator<T> {
    pub fn new() -> Self {
        LeastSquaresAccumulator {
            sum_x: T::zero(),
            sum_xx: T::zero(),
            sum_xy: T::zero(),
            sum_y: T::zero(),
            n_points: 0,
        }
    }

    #[inline]
    pub fn push(&mut self, x: T, y: T) {
        self.sum_x += x;
        self.sum_xx += x * x;
        self.sum_xy += x * y;
        self.sum_y += y;
        self.n_points += 1;
    }

    /// `(n·Σxy − Σx·Σy) / (n·Σxx − (Σx)²)`, or `None` when the denominator
    /// is not positive (all x equal, or fewer than two points).
    pub fn slope(&self) -> Option<T> {
        let n = T::from_count(self.n_points);
        let den = n * self.sum_xx - self.sum_x * self.sum_x;
        if self.n_points < 2 || den.is_nan() || den <= T::zero() {
            return None;
        }
        Some((n * self.sum_xy - self.sum_x * self.sum_y) / den)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewSlopes<T> {
    pub view: View,
    pub slopes: Vec<T>,
}

pub(crate) fn slopes_of_subtensor<T: Scalar>(
    sub: &Array3<T>,
    view: View,
    mode: SlopeMode,
) -> Result<ViewSlopes<T>, QualityError> {
    let (series_ax, x_ax, pool_ax) = view.axes();
    let dims = sub.shape();
    let (ns, nx, np) = (dims[series_ax], dims[x_ax], dims[pool_ax]);
    let mut slopes = Vec::with_capacity(ns);
    let mut idx = [0usize; 3];
    for s in 0..ns {
        idx[series_ax] = s;
        let mut acc = LeastSquaresAccumulator::new();
        for xi in 0..nx {
            idx[x_ax] = xi;
            let x = T::from_count(xi);
            match mode {
                SlopeMode::Ols => {
                    for p in 0..np {
                        idx[pool_ax] = p;
                        acc.push(x, sub[idx]);
                    }
                }
                SlopeMode::PaperLiteral => {
                    // x sums count each x position once; y sums run over the pool
                    acc.sum_x += x;
                    acc.sum_xx += x * x;
                    acc.n_points += 1;
                    for p in 0..np {
                        idx[pool_ax] = p;
                        let y = sub[idx];
                        acc.sum_xy += x * y;
                        acc.sum_y += y;
                    }
                }
            }
        }
        slopes.push(acc.slope().ok_or(QualityError::DegenerateRegression { view })?);
    }
    Ok(ViewSlopes { view, slopes })
}

/// One regression slope per coordinate of the view's series axis.
pub fn view_slopes<T: Scalar>(
    tensor: &ExpressionTensor<T>,
    coords: &TriclusterCoords,
    view: View,
    mode: SlopeMode,
) -> Result<ViewSlopes<T>, QualityError> {
    prepare(tensor, coords, 1)?;
    slopes_of_subtensor(&center(&tensor.subtensor(coords)).values, view, mode)
}

/// Mean absolute difference over ordered pairs `i ≠ j`.
pub fn mean_pairwise_distance<T: Scalar>(slopes: &[T]) -> T {
    let n = slopes.len();
    if n < 2 {
        return T::zero();
    }
    let mut acc = T::zero();
    for i in 0..n {
        for j in i + 1..n {
            acc += (slopes[i] - slopes[j]).abs();
        }
    }
    // each unordered pair appears twice among ordered pairs
    (acc + acc) / T::from_count(n * (n - 1))
}

pub(crate) fn lsl_of_subtensor<T: Scalar>(sub: &Array3<T>, mode: SlopeMode) -> Result<T, QualityError> {
    let mut total = T::zero();
    for view in View::ALL {
        total += mean_pairwise_distance(&slopes_of_subtensor(sub, view, mode)?.slopes);
    }
    Ok(total / T::lit(3.0))
}

/// `(T_r + C_r + G_r) / 3`. Every axis of `coords` needs at least two indices.
pub fn lsl<T: Scalar>(
    tensor: &ExpressionTensor<T>,
    coords: &TriclusterCoords,
    mode: SlopeMode,
) -> Result<T, QualityError> {
    prepare(tensor, coords, 2)?;
    lsl_of_subtensor(&center(&tensor.subtensor(coords)).values, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{Axis, CoordsError};

    fn tensor(f: impl Fn(usize, usize, usize) -> f64, shape: (usize, usize, usize)) -> ExpressionTensor<f64> {
        ExpressionTensor::from_values(Array3::from_shape_fn(shape, |(g, c, t)| f(g, c, t))).unwrap()
    }

    #[test]
    fn accumulator_exact_line() {
        let mut acc = LeastSquaresAccumulator::new();
        for x in 0..5 {
            acc.push(x as f64, 3.0 * x as f64 - 1.0);
        }
        assert!((acc.slope().unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn accumulator_degenerate() {
        let mut acc = LeastSquaresAccumulator::<f64>::new();
        acc.push(1.0, 2.0);
        assert_eq!(acc.slope(), None);
        acc.push(1.0, 3.0);
        assert_eq!(acc.slope(), None);
    }

    #[test]
    fn constant_subtensor_flat_in_both_modes() {
        let t = tensor(|_, _, _| 0.4, (3, 3, 3));
        let c = TriclusterCoords::full([3, 3, 3]);
        for mode in [SlopeMode::Ols, SlopeMode::PaperLiteral] {
            for view in View::ALL {
                let s = view_slopes(&t, &c, view, mode).unwrap();
                assert!(s.slopes.iter().all(|v| v.abs() < 1e-12), "{view} {mode}");
            }
            assert!(lsl(&t, &c, mode).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn linear_in_gene_gives_slope_two() {
        let t = tensor(|g, _, _| 2.0 * g as f64, (4, 3, 3));
        let c = TriclusterCoords::full([4, 3, 3]);
        let s = view_slopes(&t, &c, View::Time, SlopeMode::Ols).unwrap();
        assert_eq!(s.slopes.len(), 3);
        assert!(s.slopes.iter().all(|v| (v - 2.0).abs() < 1e-12));
        assert!(lsl(&t, &c, SlopeMode::Ols).unwrap().abs() < 1e-12);
        // the literal form adds up one slope per pooled condition
        let lit = view_slopes(&t, &c, View::Time, SlopeMode::PaperLiteral).unwrap();
        assert!(lit.slopes.iter().all(|v| (v - 6.0).abs() < 1e-12));
    }

    #[test]
    fn positions_not_dataset_indices() {
        let t = tensor(|g, _, _| 2.0 * g as f64, (9, 2, 2));
        // genes 0, 4, 8 have values 0, 8, 16: slope 8 per position
        let c = TriclusterCoords::new(vec![0, 4, 8], vec![0, 1], vec![0, 1]);
        let s = view_slopes(&t, &c, View::Condition, SlopeMode::Ols).unwrap();
        assert!(s.slopes.iter().all(|v| (v - 8.0).abs() < 1e-12));
    }

    #[test]
    fn view_lengths() {
        let t = tensor(|g, c, t| (g + c * t) as f64, (4, 3, 5));
        let c = TriclusterCoords::new(vec![0, 1, 2, 3], vec![0, 2], vec![0, 1, 4]);
        let n = |v| view_slopes(&t, &c, v, SlopeMode::Ols).unwrap().slopes.len();
        assert_eq!(n(View::Time), 3);
        assert_eq!(n(View::Condition), 2);
        assert_eq!(n(View::Gene), 2);
    }

    #[test]
    fn lsl_requires_two_per_axis() {
        let t = tensor(|g, _, _| g as f64, (3, 3, 3));
        let c = TriclusterCoords::new(vec![0, 1], vec![0, 1], vec![0]);
        assert_eq!(
            lsl(&t, &c, SlopeMode::Ols).unwrap_err(),
            QualityError::Coords(CoordsError::TooSmall { axis: Axis::Time, size: 1, min: 2 })
        );
    }

    #[test]
    fn single_gene_view_is_degenerate() {
        let t = tensor(|g, _, _| g as f64, (3, 3, 3));
        let c = TriclusterCoords::new(vec![1], vec![0, 1], vec![0, 1]);
        assert_eq!(
            view_slopes(&t, &c, View::Time, SlopeMode::Ols).unwrap_err(),
            QualityError::DegenerateRegression { view: View::Time }
        );
        assert!(view_slopes(&t, &c, View::Gene, SlopeMode::Ols).is_ok());
    }

    #[test]
    fn pairwise_distance_small_case() {
        // ordered pairs of {0, 1, 3}: 2 * (1 + 3 + 2) / 6 = 2
        assert!((mean_pairwise_distance::<f64>(&[0.0, 1.0, 3.0]) - 2.0).abs() < 1e-15);
        assert_eq!(mean_pairwise_distance::<f64>(&[1.0]), 0.0);
    }

    #[test]
    fn slope_mode_parse_roundtrip() {
        for m in [SlopeMode::Ols, SlopeMode::PaperLiteral] {
            assert_eq!(m.to_string().parse::<SlopeMode>().unwrap(), m);
        }
        assert!("bogus".parse::<SlopeMode>().is_err());
    }
}
