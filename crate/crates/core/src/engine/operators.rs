//! Genetic operators. Every function takes the run's generator explicitly so
//! a whole run replays from one seed.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::Rng;

use crate::archive::Coverage;
use crate::coords::Axis;
use crate::num::{cmp_nan_last, Scalar};

use super::chromosome::Chromosome;

/// Random initial population that avoids reusing indices.
///
/// Each segment gets a size drawn uniformly from `[2, axis length]`. Indices
/// are taken first from those unused by both `coverage` and the individuals
/// initialized so far; once that pool runs dry the remainder is drawn
/// uniformly from the other indices.
pub fn init_population<R: Rng + ?Sized>(
    dims: [usize; 3],
    population_size: usize,
    coverage: &Coverage,
    rng: &mut R,
) -> Vec<Chromosome> {
    let mut used: [BTreeSet<usize>; 3] = [coverage.genes.clone(), coverage.conditions.clone(), coverage.times.clone()];
    let mut population = Vec::with_capacity(population_size);
    for _ in 0..population_size {
        let mut chrom = Chromosome::empty(dims);
        for axis in Axis::ALL {
            let n = dims[axis.index()];
            let used_axis = &mut used[axis.index()];
            let k = if n >= 2 { rng.random_range(2..=n) } else { n };
            let (fresh, stale): (Vec<usize>, Vec<usize>) = (0..n).partition(|i| !used_axis.contains(i));
            let mut chosen: Vec<usize> = if fresh.len() >= k {
                sample(rng, fresh.len(), k).into_iter().map(|i| fresh[i]).collect()
            } else {
                let extra = k - fresh.len();
                let mut v = fresh;
                v.extend(sample(rng, stale.len(), extra).into_iter().map(|i| stale[i]));
                v
            };
            chosen.sort_unstable();
            let seg = chrom.segment_mut(axis);
            for &i in &chosen {
                seg[i] = true;
            }
            used_axis.extend(chosen);
        }
        population.push(repair(chrom, rng));
    }
    population
}

/// Binary tournament: two distinct individuals, lower fitness wins, ties go
/// to the lower index. Returns the winner's index.
pub fn tournament_select<T: Scalar, R: Rng + ?Sized>(fitnesses: &[T], rng: &mut R) -> usize {
    let n = fitnesses.len();
    assert!(n > 0, "tournament over an empty population");
    if n == 1 {
        return 0;
    }
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    tournament_winner(fitnesses, a, b)
}

pub(crate) fn tournament_winner<T: Scalar>(fitnesses: &[T], a: usize, b: usize) -> usize {
    match cmp_nan_last(fitnesses[a], fitnesses[b]) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => a.min(b),
    }
}

/// Swaps segment tails at the given crosspoints. A `None` crosspoint leaves
/// that segment as it is in each parent.
pub fn crossover_at(p1: &Chromosome, p2: &Chromosome, points: [Option<usize>; 3]) -> (Chromosome, Chromosome) {
    assert_eq!(p1.dims(), p2.dims(), "crossover parents of different shape");
    let mut o1 = p1.clone();
    let mut o2 = p2.clone();
    for axis in Axis::ALL {
        if let Some(cp) = points[axis.index()] {
            let s1 = o1.segment_mut(axis);
            let s2 = o2.segment_mut(axis);
            s1[cp..].swap_with_slice(&mut s2[cp..]);
        }
    }
    (o1, o2)
}

/// Single-point crossover applied to each segment independently, with
/// probability `p_c`. Offspring are not repaired.
pub fn crossover<R: Rng + ?Sized>(p1: &Chromosome, p2: &Chromosome, p_c: f64, rng: &mut R) -> (Chromosome, Chromosome) {
    if !rng.random_bool(p_c) {
        return (p1.clone(), p2.clone());
    }
    let dims = p1.dims();
    let mut points = [None; 3];
    for axis in Axis::ALL {
        let len = dims[axis.index()];
        if len >= 2 {
            points[axis.index()] = Some(rng.random_range(1..len));
        }
    }
    crossover_at(p1, p2, points)
}

/// With probability `p_m`, flips exactly one uniformly chosen bit.
pub fn mutate<R: Rng + ?Sized>(mut chrom: Chromosome, p_m: f64, rng: &mut R) -> Chromosome {
    if rng.random_bool(p_m) && !chrom.is_empty() {
        let i = rng.random_range(0..chrom.len());
        chrom.flip(i);
    }
    chrom
}

/// Tops up any segment with fewer than two set bits by switching on
/// uniformly chosen unset bits. Other bits are untouched.
pub fn repair<R: Rng + ?Sized>(mut chrom: Chromosome, rng: &mut R) -> Chromosome {
    for axis in Axis::ALL {
        let seg = chrom.segment_mut(axis);
        let target = 2.min(seg.len());
        let mut set = seg.iter().filter(|&&b| b).count();
        while set < target {
            let unset: Vec<usize> = seg.iter().enumerate().filter_map(|(i, &b)| (!b).then_some(i)).collect();
            let pick = unset[rng.random_range(0..unset.len())];
            seg[pick] = true;
            set += 1;
        }
    }
    chrom
}
