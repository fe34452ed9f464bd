//! The evolutionary search: one elitist GA run per tricluster, repeated with
//! a growing archive (sequential covering).

mod chromosome;
mod config;
mod operators;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::archive::{Archive, ArchiveEntry};
use crate::coords::Axis;
use crate::num::{cmp_nan_last, Scalar};
use crate::quality::{FitnessBreakdown, FitnessContext, QualityError};
use crate::tensor::ExpressionTensor;

pub use chromosome::Chromosome;
pub use config::GaConfig;
pub use operators::{crossover, crossover_at, init_population, mutate, repair, tournament_select};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{axis} axis has length {len}; triclustering needs at least 2")]
    TensorTooSmall { axis: Axis, len: usize },
    #[error("{axis} segment has {set} set bit(s); repair before decoding")]
    SegmentTooSmall { axis: Axis, set: usize },
    #[error("chromosome length {found} does not match expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("cannot encode coords: {0}")]
    Encode(String),
    #[error("cannot parse chromosome: {0}")]
    Parse(String),
    #[error(transparent)]
    Quality(#[from] QualityError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord<T> {
    pub generation: usize,
    pub best_f: T,
    pub mean_f: T,
    pub best: FitnessBreakdown<T>,
}

/// Per-generation convergence record of one GA run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GenerationTrace<T> {
    pub records: Vec<GenerationRecord<T>>,
}

impl<T: Scalar> GenerationTrace<T> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Whether best fitness never increases from one generation to the next.
    pub fn is_non_increasing(&self) -> bool {
        self.records.windows(2).all(|w| w[1].best_f <= w[0].best_f)
    }
}

/// Outcome of one GA run: its best-ever individual and the trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TriclusterRun<T> {
    pub best: ArchiveEntry<T>,
    pub trace: GenerationTrace<T>,
    /// Whether `best` passed the LSL threshold and entered the archive.
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriEaOutcome<T> {
    pub archive: Archive<T>,
    pub runs: Vec<TriclusterRun<T>>,
}

fn check_tensor<T: Scalar>(tensor: &ExpressionTensor<T>) -> Result<(), EngineError> {
    for axis in Axis::ALL {
        let len = tensor.shape()[axis.index()];
        if len < 2 {
            return Err(EngineError::TensorTooSmall { axis, len });
        }
    }
    Ok(())
}

fn evaluate_all<T: Scalar>(
    ctx: &FitnessContext<'_, T>,
    population: &[Chromosome],
) -> Result<Vec<FitnessBreakdown<T>>, EngineError> {
    // collect keeps population order, so results do not depend on scheduling
    population.par_iter().map(|c| Ok(ctx.evaluate(&c.decode()?)?)).collect()
}

fn argmin<T: Scalar>(fits: &[FitnessBreakdown<T>]) -> usize {
    let mut best = 0;
    for (i, b) in fits.iter().enumerate().skip(1) {
        if cmp_nan_last(b.f, fits[best].f).is_lt() {
            best = i;
        }
    }
    best
}

fn record<T: Scalar>(
    generation: usize,
    best: &FitnessBreakdown<T>,
    fits: &[FitnessBreakdown<T>],
) -> GenerationRecord<T> {
    let mean = fits.iter().map(|b| b.f).sum::<T>() / T::from_count(fits.len());
    GenerationRecord { generation, best_f: best.f, mean_f: mean, best: *best }
}

/// Evolves a population against a frozen archive and returns the best
/// individual ever evaluated.
///
/// Generation 0 is the initial population; each of the remaining
/// `generations - 1` steps keeps the `elite_count` best individuals and
/// fills the rest by tournament selection, crossover, mutation and repair.
/// The trace has exactly `generations` records.
pub fn evolve_one_tricluster<T: Scalar, R: Rng + ?Sized>(
    tensor: &ExpressionTensor<T>,
    config: &GaConfig<T>,
    archive: &Archive<T>,
    rng: &mut R,
) -> Result<(ArchiveEntry<T>, GenerationTrace<T>), EngineError> {
    config.validate()?;
    check_tensor(tensor)?;
    let ctx = FitnessContext::new(tensor, config.quality_weights, archive, config.slope_mode);

    let mut population = init_population(tensor.shape(), config.population_size, archive.coverage(), rng);
    let mut fits = evaluate_all(&ctx, &population)?;
    let i = argmin(&fits);
    let mut best = (population[i].clone(), fits[i]);
    let mut trace = GenerationTrace { records: vec![record(0, &best.1, &fits)] };

    for generation in 1..config.generations {
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| cmp_nan_last(fits[a].f, fits[b].f).then(a.cmp(&b)));
        let f_values: Vec<T> = fits.iter().map(|b| b.f).collect();

        let mut next: Vec<Chromosome> = Vec::with_capacity(config.population_size);
        let mut next_fits: Vec<FitnessBreakdown<T>> = Vec::with_capacity(config.population_size);
        for &e in order.iter().take(config.elite_count) {
            next.push(population[e].clone());
            next_fits.push(fits[e]);
        }

        let mut offspring = Vec::with_capacity(config.population_size - next.len());
        while next.len() + offspring.len() < config.population_size {
            let a = tournament_select(&f_values, rng);
            let b = tournament_select(&f_values, rng);
            let (o1, o2) = crossover(&population[a], &population[b], config.p_crossover, rng);
            let o1 = repair(mutate(o1, config.p_mutation, rng), rng);
            let o2 = repair(mutate(o2, config.p_mutation, rng), rng);
            offspring.push(o1);
            if next.len() + offspring.len() < config.population_size {
                offspring.push(o2);
            }
        }
        next_fits.extend(evaluate_all(&ctx, &offspring)?);
        next.extend(offspring);
        population = next;
        fits = next_fits;

        let i = argmin(&fits);
        if cmp_nan_last(fits[i].f, best.1.f).is_lt() {
            best = (population[i].clone(), fits[i]);
        }
        trace.records.push(record(generation, &best.1, &fits));
    }

    let coords = best.0.decode()?;
    Ok((ArchiveEntry { coords, breakdown: best.1 }, trace))
}

/// Sequential covering: `n_triclusters` GA runs, each archiving its best
/// individual when that individual's LSL is strictly below `delta`.
/// A rejected run still counts towards `n_triclusters`.
pub fn run_triea<T: Scalar, R: Rng + ?Sized>(
    tensor: &ExpressionTensor<T>,
    config: &GaConfig<T>,
    rng: &mut R,
) -> Result<TriEaOutcome<T>, EngineError> {
    config.validate()?;
    check_tensor(tensor)?;
    let mut archive = Archive::new();
    let mut runs = Vec::with_capacity(config.n_triclusters);
    for _ in 0..config.n_triclusters {
        let (best, trace) = evolve_one_tricluster(tensor, config, &archive, rng)?;
        let accepted = best.breakdown.lsl < config.delta;
        if accepted {
            archive.push(best.coords.clone(), best.breakdown);
        }
        runs.push(TriclusterRun { best, trace, accepted });
    }
    Ok(TriEaOutcome { archive, runs })
}

/// [`run_triea`] driven by a generator seeded from `config.seed`.
pub fn run_triea_seeded<T: Scalar>(
    tensor: &ExpressionTensor<T>,
    config: &GaConfig<T>,
) -> Result<TriEaOutcome<T>, EngineError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    run_triea(tensor, config, &mut rng)
}
