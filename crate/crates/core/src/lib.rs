//! Orthogonal non-negative matrix factorization with constant-factor
//! approximation guarantees.
//!
//! * [`factorize_single`] finds `M ≈ A·W` with non-negative factors and
//!   orthogonal rows of `W`, through weighted k-means on the normalized
//!   columns of `M`.
//! * [`factorize_double`] additionally makes the columns of `A` orthogonal;
//!   [`factorize_double_large_k`] is its variant with inner dimension
//!   `min(m, n)`.
//! * [`bcc_cluster`] uses the latter for bipartite correlation clustering.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the type
//! aliases below fix it to `f64`.

pub mod bcc;
pub mod double;
pub mod error;
pub mod io;
pub mod kmeans;
pub mod matrix;
pub mod metrics;
pub mod oracle;
pub mod rng;
pub mod scalar;
pub mod single;
pub mod sweep;
pub mod synth;

pub use bcc::{
    bcc_cluster, disagreements, parse_edge_list, round_block, BipartiteLabeling, Clustering,
};
pub use double::{factorize_double, factorize_double_large_k};
pub use error::{OnmfError, Result};
pub use kmeans::{weighted_kmeans, KMeansConfig, KMeansSolution};
pub use matrix::{CompactW, DenseMatrix, NonNegMatrix, WeightedPointSet};
pub use metrics::{non_orthogonality, planted_stat, reconstruction_error, recovery_error, rsfe};
pub use rng::SeededRng;
pub use scalar::Scalar;
pub use single::{factorize_single, OnmfSolution};
pub use sweep::{factorize, run_sweep, FactorMode, SweepConfig, SweepRow};
pub use synth::{gen_planted, PlantedInstance, PlantedMode};

pub type Matrix = DenseMatrix<f64>;
pub type MatrixF32 = DenseMatrix<f32>;
pub type NonNeg = NonNegMatrix<f64>;
pub type Factorization = OnmfSolution<f64>;
pub type FactorizationF32 = OnmfSolution<f32>;
pub type Planted = PlantedInstance<f64>;
pub type KMeansFit = KMeansSolution<f64>;
