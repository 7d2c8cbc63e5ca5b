//! Error type shared across the crate.

use thiserror::Error;

/// Which side of the discrepancy bracket failed to produce a sign change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketSide {
    /// Residual at the smallest grid eta still exceeds the target
    /// `c_m * delta`: the data cannot be fit that well within the grid.
    ResidualAboveTargetAtEtaMin,
    /// Residual at the largest grid eta is below the target: the grid's
    /// upper end is too small for the requested discrepancy level.
    ResidualBelowTargetAtEtaMax,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("infeasible point: {0}")]
    Infeasible(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero pivot at row {row}: system is singular or indefinite")]
    ZeroPivot { row: usize },

    #[error("ellipticity violated: {0}")]
    EllipticityViolated(String),

    #[error("no real solution: exact data {g_exact} >= eps_scale/4 = {fold}")]
    NoRealSolution { g_exact: f64, fold: f64 },

    #[error("source representer undefined: derivative vanishes at the exact solution")]
    VanishingDerivative,

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),

    #[error("factorization failed: matrix not positive definite")]
    NotPositiveDefinite,

    #[error("discrepancy bracketing failed ({side:?}): residual range [{res_min:.3e}, {res_max:.3e}] does not cross target {target:.3e}")]
    DiscrepancyBracket {
        side: BracketSide,
        res_min: f64,
        res_max: f64,
        target: f64,
    },

    #[error("all eta-grid solves failed")]
    AllSolvesFailed,

    #[error("all residuals on the grid are zero: data exactly attainable, rule undefined")]
    AllResidualsZero,

    #[error("vanishing denominator in bilinear representation at component {index}")]
    VanishingDenominator { index: usize },

    #[error("rate study needs at least {needed} usable noise levels, got {got}")]
    TooFewLevels { needed: usize, got: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
