//! Evolutionary triclustering of gene × condition × time expression tensors.
//!
//! Candidates are scored by `F = MSR + LSL − Weights − Distinction`, where
//! MSR is the three-dimensional mean squared residue, LSL compares slopes of
//! least-squares lines across three views of the tricluster, Weights rewards
//! size and Distinction rewards coordinates not used by earlier discoveries.
//! A binary-encoded GA minimizes `F`; repeating it against a growing archive
//! yields a set of triclusters.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the usual double-precision instantiation.
//!
//! ```
//! use triea::{generate_synthetic, run_triea_seeded, Config, SyntheticSpec, Tensor};
//!
//! let spec: SyntheticSpec = serde_json::from_str(r#"{"dims":[12,3,4],"seed":1}"#).unwrap();
//! let (tensor, _) = generate_synthetic::<f64>(&spec).unwrap();
//! let tensor: Tensor = tensor.normalize_minmax();
//! let config = Config { population_size: 6, generations: 5, n_triclusters: 2, ..Config::default() };
//! let outcome = run_triea_seeded(&tensor, &config).unwrap();
//! assert_eq!(outcome.runs.len(), 2);
//! ```

pub mod archive;
pub mod coords;
pub mod engine;
pub mod io;
pub mod num;
pub mod quality;
pub mod synthetic;
pub mod tensor;

pub use archive::{Archive, ArchiveEntry, Coverage};
pub use coords::{Axis, CoordsError, TriclusterCoords};
pub use engine::{
    evolve_one_tricluster, run_triea, run_triea_seeded, Chromosome, EngineError, GaConfig, GenerationRecord,
    GenerationTrace, TriEaOutcome, TriclusterRun,
};
pub use io::{export_csv, load_dataset, read_csv, write_csv, DatasetDescriptor, LoadError};
pub use num::Scalar;
pub use quality::{
    distinction_term, fitness, lsl, msr3d, residual, view_slopes, weights_term, FitnessBreakdown, FitnessContext,
    LeastSquaresAccumulator, MeansDecomposition, QualityError, QualityWeights, SlopeMode, View, ViewSlopes,
};
pub use synthetic::{generate_synthetic, Background, Pattern, PlantedTricluster, SyntheticError, SyntheticSpec};
pub use tensor::{ExpressionTensor, TensorError};

pub type Tensor = ExpressionTensor<f64>;
pub type TensorF32 = ExpressionTensor<f32>;
pub type Config = GaConfig<f64>;
pub type Weights = QualityWeights<f64>;
pub type Breakdown = FitnessBreakdown<f64>;
pub type TriclusterArchive = Archive<f64>;
pub type Outcome = TriEaOutcome<f64>;
