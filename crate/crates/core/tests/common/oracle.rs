//! Slow, direct reimplementations used to cross-check the optimized code,
//! plus random input generators shared by the integration suites.
#![allow(dead_code)]

use ndarray::Array3;
use rand::Rng;
use triea::{SlopeMode, Tensor, TriclusterCoords};

fn sub(t: &Tensor, c: &TriclusterCoords) -> Array3<f64> {
    Array3::from_shape_fn((c.genes.len(), c.conditions.len(), c.times.len()), |(i, j, k)| {
        t.get(c.genes[i], c.conditions[j], c.times[k])
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut n) = (0.0, 0usize);
    for x in xs {
        s += x;
        n += 1;
    }
    s / n as f64
}

/// Residual of one cell by recomputing every marginal mean from scratch:
/// `x − x̄_{gc·} − x̄_{g·t} − x̄_{·ct} + x̄_{g··} + x̄_{·c·} + x̄_{··t} − x̄_{···}`.
pub fn naive_residual(x: &Array3<f64>, i: usize, j: usize, k: usize) -> f64 {
    let (g, c, t) = x.dim();
    let over_t = mean((0..t).map(|kk| x[[i, j, kk]]));
    let over_c = mean((0..c).map(|jj| x[[i, jj, k]]));
    let over_g = mean((0..g).map(|ii| x[[ii, j, k]]));
    let gene_only = mean((0..c).flat_map(|jj| (0..t).map(move |kk| (jj, kk))).map(|(jj, kk)| x[[i, jj, kk]]));
    let cond_only = mean((0..g).flat_map(|ii| (0..t).map(move |kk| (ii, kk))).map(|(ii, kk)| x[[ii, j, kk]]));
    let time_only = mean((0..g).flat_map(|ii| (0..c).map(move |jj| (ii, jj))).map(|(ii, jj)| x[[ii, jj, k]]));
    let all = mean(x.iter().copied());
    x[[i, j, k]] - over_t - over_c - over_g + gene_only + cond_only + time_only - all
}

pub fn naive_msr(t: &Tensor, c: &TriclusterCoords) -> f64 {
    let x = sub(t, c);
    let (g, cc, tt) = x.dim();
    let mut acc = 0.0;
    for i in 0..g {
        for j in 0..cc {
            for k in 0..tt {
                acc += naive_residual(&x, i, j, k).powi(2);
            }
        }
    }
    acc / (g * cc * tt) as f64
}

/// Two-pass OLS slope of a point cloud.
pub fn ols_slope(points: &[(f64, f64)]) -> f64 {
    let xb = mean(points.iter().map(|p| p.0));
    let yb = mean(points.iter().map(|p| p.1));
    let num: f64 = points.iter().map(|&(x, y)| (x - xb) * (y - yb)).sum();
    let den: f64 = points.iter().map(|&(x, _)| (x - xb).powi(2)).sum();
    num / den
}

/// Slopes of one view. `series`, `x` and `pool` name subtensor axes
/// (0 gene, 1 condition, 2 time). Pooled OLS fits one line to every point of
/// a series; the literal mode adds up the slopes of each pooled line.
fn oracle_view(x: &Array3<f64>, series: usize, xa: usize, pool: usize, mode: SlopeMode) -> Vec<f64> {
    let d = x.shape();
    (0..d[series])
        .map(|s| {
            let line = |p: usize| -> Vec<(f64, f64)> {
                (0..d[xa])
                    .map(|xi| {
                        let mut idx = [0; 3];
                        idx[series] = s;
                        idx[xa] = xi;
                        idx[pool] = p;
                        (xi as f64, x[idx])
                    })
                    .collect()
            };
            match mode {
                SlopeMode::Ols => ols_slope(&(0..d[pool]).flat_map(line).collect::<Vec<_>>()),
                SlopeMode::PaperLiteral => (0..d[pool]).map(|p| ols_slope(&line(p))).sum(),
            }
        })
        .collect()
}

fn ordered_pair_mean(s: &[f64]) -> f64 {
    let n = s.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += (s[i] - s[j]).abs();
            }
        }
    }
    acc / (n * (n - 1)) as f64
}

pub fn naive_lsl(t: &Tensor, c: &TriclusterCoords, mode: SlopeMode) -> f64 {
    let x = sub(t, c);
    let m = mean(x.iter().copied());
    let x = x.mapv(|v| v - m);
    let time = ordered_pair_mean(&oracle_view(&x, 2, 0, 1, mode));
    let cond = ordered_pair_mean(&oracle_view(&x, 1, 0, 2, mode));
    let gene = ordered_pair_mean(&oracle_view(&x, 1, 2, 0, mode));
    (time + cond + gene) / 3.0
}

pub fn random_tensor<R: Rng>(shape: [usize; 3], rng: &mut R) -> Tensor {
    Tensor::from_values(Array3::from_shape_fn((shape[0], shape[1], shape[2]), |_| rng.random::<f64>())).unwrap()
}

fn random_subset<R: Rng>(n: usize, min: usize, rng: &mut R) -> Vec<usize> {
    let k = rng.random_range(min.min(n)..=n);
    let mut v = rand::seq::index::sample(rng, n, k).into_vec();
    v.sort_unstable();
    v
}

/// Random coordinates with at least `min` indices on every axis.
pub fn random_coords<R: Rng>(shape: [usize; 3], min: usize, rng: &mut R) -> TriclusterCoords {
    TriclusterCoords::new(
        random_subset(shape[0], min, rng),
        random_subset(shape[1], min, rng),
        random_subset(shape[2], min, rng),
    )
}

/// Random coordinates with exactly the given axis sizes.
pub fn random_coords_sized<R: Rng>(shape: [usize; 3], sizes: [usize; 3], rng: &mut R) -> TriclusterCoords {
    let pick = |n: usize, k: usize, rng: &mut R| rand::seq::index::sample(rng, n, k).into_vec();
    let g = pick(shape[0], sizes[0], rng);
    let c = pick(shape[1], sizes[1], rng);
    let t = pick(shape[2], sizes[2], rng);
    TriclusterCoords::new(g, c, t)
}

/// `|a − b| ≤ tol · max(|a|, |b|)`.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}
