//! Synthetic expression tensors with planted triclusters of known position.

use ndarray::Array3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coords::{CoordsError, TriclusterCoords};
use crate::num::Scalar;
use crate::tensor::{ExpressionTensor, TensorError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pattern {
    /// One value for every cell.
    Constant,
    /// `base + a_g + b_c + d_t`.
    Additive,
    /// `base * a_g * b_c * d_t`.
    Multiplicative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Background {
    /// Uniform on `[0, 1)`.
    #[default]
    Uniform01,
    /// Standard normal.
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedTricluster {
    pub coords: TriclusterCoords,
    pub pattern: Pattern,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub dims: [usize; 3],
    #[serde(default)]
    pub planted: Vec<PlantedTricluster>,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub background: Background,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SyntheticError {
    #[error("invalid synthetic spec: {0}")]
    Invalid(String),
    #[error("planted tricluster {index}: {source}")]
    Coords { index: usize, source: CoordsError },
    #[error("planted triclusters {first} and {second} overlap")]
    Overlap { first: usize, second: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), SyntheticError> {
        if self.dims.contains(&0) {
            return Err(SyntheticError::Invalid(format!("dims {:?} must all be positive", self.dims)));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(SyntheticError::Invalid(format!(
                "noise_sigma {} must be finite and non-negative",
                self.noise_sigma
            )));
        }
        for (index, p) in self.planted.iter().enumerate() {
            let mut canonical = p.coords.clone();
            canonical.canonicalize();
            if canonical != p.coords {
                return Err(SyntheticError::Invalid(format!(
                    "planted tricluster {index} indices must be sorted and unique"
                )));
            }
            p.coords.validate(self.dims).map_err(|source| SyntheticError::Coords { index, source })?;
        }
        for i in 0..self.planted.len() {
            for j in i + 1..self.planted.len() {
                if self.planted[i].coords.overlaps(&self.planted[j].coords) {
                    return Err(SyntheticError::Overlap { first: i, second: j });
                }
            }
        }
        Ok(())
    }
}

/// Builds the tensor described by `spec` and returns it with the planted coords.
///
/// Offsets for additive patterns are drawn from `[-0.1, 0.1)` around a base in
/// `[0.3, 0.7)`, and multiplicative factors from `[0.9, 1.1)`, so noise-free
/// planted values stay inside `[0, 1]` alongside a uniform background.
pub fn generate_synthetic<T: Scalar>(
    spec: &SyntheticSpec,
) -> Result<(ExpressionTensor<T>, Vec<TriclusterCoords>), SyntheticError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let [ng, nc, nt] = spec.dims;

    let mut values: Array3<f64> = match spec.background {
        Background::Uniform01 => Array3::from_shape_simple_fn((ng, nc, nt), || rng.random::<f64>()),
        Background::Gaussian => Array3::from_shape_simple_fn((ng, nc, nt), || StandardNormal.sample(&mut rng)),
    };

    let noise = Normal::new(0.0, spec.noise_sigma).map_err(|e| SyntheticError::Invalid(e.to_string()))?;
    for p in &spec.planted {
        let c = &p.coords;
        match p.pattern {
            Pattern::Constant => {
                let v = rng.random_range(0.2..0.8);
                fill(&mut values, c, |_, _, _| v);
            }
            Pattern::Additive => {
                let base = rng.random_range(0.3..0.7);
                let a: Vec<f64> = (0..c.genes.len()).map(|_| rng.random_range(-0.1..0.1)).collect();
                let b: Vec<f64> = (0..c.conditions.len()).map(|_| rng.random_range(-0.1..0.1)).collect();
                let d: Vec<f64> = (0..c.times.len()).map(|_| rng.random_range(-0.1..0.1)).collect();
                fill(&mut values, c, |i, j, k| base + a[i] + b[j] + d[k]);
            }
            Pattern::Multiplicative => {
                let base = rng.random_range(0.3..0.7);
                let a: Vec<f64> = (0..c.genes.len()).map(|_| rng.random_range(0.9..1.1)).collect();
                let b: Vec<f64> = (0..c.conditions.len()).map(|_| rng.random_range(0.9..1.1)).collect();
                let d: Vec<f64> = (0..c.times.len()).map(|_| rng.random_range(0.9..1.1)).collect();
                fill(&mut values, c, |i, j, k| base * a[i] * b[j] * d[k]);
            }
        }
        if spec.noise_sigma > 0.0 {
            for &g in &c.genes {
                for &cc in &c.conditions {
                    for &t in &c.times {
                        values[[g, cc, t]] += noise.sample(&mut rng);
                    }
                }
            }
        }
    }

    let tensor = ExpressionTensor::from_values(values.mapv(T::lit))?;
    Ok((tensor, spec.planted.iter().map(|p| p.coords.clone()).collect()))
}

fn fill(values: &mut Array3<f64>, c: &TriclusterCoords, f: impl Fn(usize, usize, usize) -> f64) {
    for (i, &g) in c.genes.iter().enumerate() {
        for (j, &cc) in c.conditions.iter().enumerate() {
            for (k, &t) in c.times.iter().enumerate() {
                values[[g, cc, t]] = f(i, j, k);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(planted: Vec<PlantedTricluster>) -> SyntheticSpec {
        SyntheticSpec { dims: [6, 4, 4], planted, noise_sigma: 0.0, background: Background::Uniform01, seed: 3 }
    }

    fn plant(g: Vec<usize>, c: Vec<usize>, t: Vec<usize>, pattern: Pattern) -> PlantedTricluster {
        PlantedTricluster { coords: TriclusterCoords::new(g, c, t), pattern }
    }

    #[test]
    fn constant_region_is_flat() {
        let s = spec(vec![plant(vec![1, 2], vec![0, 3], vec![1, 2], Pattern::Constant)]);
        let (t, truth) = generate_synthetic::<f64>(&s).unwrap();
        assert_eq!(truth, vec![s.planted[0].coords.clone()]);
        let v = t.get(1, 0, 1);
        for &g in &[1, 2] {
            for &c in &[0, 3] {
                for &tt in &[1, 2] {
                    assert_eq!(t.get(g, c, tt), v);
                }
            }
        }
    }

    #[test]
    fn overlapping_plants_rejected() {
        let s = spec(vec![
            plant(vec![0, 1], vec![0, 1], vec![0, 1], Pattern::Constant),
            plant(vec![1, 2], vec![1, 2], vec![1, 2], Pattern::Additive),
        ]);
        assert_eq!(generate_synthetic::<f64>(&s).unwrap_err(), SyntheticError::Overlap { first: 0, second: 1 });
    }

    #[test]
    fn disjoint_on_one_axis_is_not_overlap() {
        let s = spec(vec![
            plant(vec![0, 1], vec![0, 1], vec![0, 1], Pattern::Constant),
            plant(vec![0, 1], vec![0, 1], vec![2, 3], Pattern::Multiplicative),
        ]);
        assert!(generate_synthetic::<f64>(&s).is_ok());
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut s = spec(vec![]);
        s.noise_sigma = -1.0;
        assert!(matches!(generate_synthetic::<f64>(&s), Err(SyntheticError::Invalid(_))));
        let s = spec(vec![plant(vec![0, 9], vec![0], vec![0], Pattern::Constant)]);
        assert!(matches!(generate_synthetic::<f64>(&s), Err(SyntheticError::Coords { index: 0, .. })));
        let mut s = spec(vec![]);
        s.dims = [0, 1, 1];
        assert!(matches!(generate_synthetic::<f64>(&s), Err(SyntheticError::Invalid(_))));
    }

    #[test]
    fn deterministic_under_seed() {
        let s = spec(vec![plant(vec![0, 1, 2], vec![1, 2], vec![0, 3], Pattern::Additive)]);
        let mut noisy = s.clone();
        noisy.noise_sigma = 0.05;
        let (a, _) = generate_synthetic::<f64>(&noisy).unwrap();
        let (b, _) = generate_synthetic::<f64>(&noisy).unwrap();
        assert_eq!(a, b);
        let mut other = noisy.clone();
        other.seed = 4;
        assert_ne!(generate_synthetic::<f64>(&other).unwrap().0, a);
    }

    #[test]
    fn spec_json_shape() {
        let json = r#"{"dims":[4,3,3],"planted":[{"coords":{"genes":[0,1],"conditions":[0,1],"times":[0,1]},"pattern":"constant"}],"noise_sigma":0.0,"background":"uniform01","seed":1}"#;
        let s: SyntheticSpec = serde_json::from_str(json).unwrap();
        assert_eq!(s.planted[0].pattern, Pattern::Constant);
        assert_eq!(s.dims, [4, 3, 3]);
    }
}
