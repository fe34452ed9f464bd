use serde::{Deserialize, Serialize};

use crate::num::Scalar;
use crate::quality::{QualityWeights, SlopeMode};

use super::EngineError;

/// GA parameters. [`Default`] reproduces the reference setting: population 20,
/// 100 generations, crossover 0.95, mutation 0.5, all weights 0.1,
/// LSL threshold 1050 and 20 triclusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig<T> {
    pub population_size: usize,
    /// Evaluated generations per tricluster, counting the initial population.
    pub generations: usize,
    pub p_crossover: f64,
    /// Probability that an individual gets exactly one bit flipped.
    pub p_mutation: f64,
    pub quality_weights: QualityWeights<T>,
    /// A run's best individual is archived only when its LSL is strictly below this.
    pub delta: T,
    pub n_triclusters: usize,
    pub slope_mode: SlopeMode,
    pub seed: u64,
    pub elite_count: usize,
}

impl<T: Scalar> Default for GaConfig<T> {
    fn default() -> Self {
        GaConfig {
            population_size: 20,
            generations: 100,
            p_crossover: 0.95,
            p_mutation: 0.50,
            quality_weights: QualityWeights::default(),
            delta: T::lit(1050.0),
            n_triclusters: 20,
            slope_mode: SlopeMode::Ols,
            seed: 0,
            elite_count: 1,
        }
    }
}

impl<T: Scalar> GaConfig<T> {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |m: String| Err(EngineError::InvalidConfig(m));
        for (name, p) in [("p_crossover", self.p_crossover), ("p_mutation", self.p_mutation)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} must lie in [0, 1]"));
            }
        }
        for (name, n) in [
            ("population_size", self.population_size),
            ("generations", self.generations),
            ("n_triclusters", self.n_triclusters),
            ("elite_count", self.elite_count),
        ] {
            if n == 0 {
                return bad(format!("{name} must be at least 1"));
            }
        }
        if self.elite_count > self.population_size {
            return bad(format!("elite_count {} exceeds population_size {}", self.elite_count, self.population_size));
        }
        if self.delta.is_nan() || self.delta < T::zero() {
            return bad(format!("delta {} must be non-negative", self.delta));
        }
        self.quality_weights.validate().map_err(EngineError::InvalidConfig)
    }
}
