use thiserror::Error;

use crate::partition::Partition;

/// Errors produced by the numerical and combinatorial routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("partition {partition} has more than {rank} parts")]
    RankExceeded { partition: Partition, rank: usize },

    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("rank {rank} exceeds the configured cap {cap}")]
    RankCapExceeded { rank: usize, cap: usize },

    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch { left: String, right: String },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("gamma pole at z = {z}: factor {factor} evaluates Gamma at a non-positive integer")]
    GammaPole { z: String, factor: usize },

    #[error("zero Pochhammer factor for partition {partition}")]
    PochhammerZero { partition: Partition },

    #[error("moment functional has a pole: (mu+nu)_lambda = 0 at lambda = {partition}")]
    MomentPole { partition: Partition },

    #[error("series did not converge within {max_degree} degrees (last block magnitude {last_block:e})")]
    NonConvergence { max_degree: usize, last_block: f64 },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid dimensions: {0}")]
    Dimension(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("ball sampler acceptance rate {rate:e} below threshold {threshold:e}")]
    LowAcceptance { rate: f64, threshold: f64 },

    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),

    #[error("bound violated: |J| = {value} > {bound} at spectrum {witness:?}")]
    BoundViolation { value: f64, bound: f64, witness: Vec<f64> },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
