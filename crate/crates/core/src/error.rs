use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series constant term must be exactly 1, got {0}")]
    NonUnitConstantTerm(Complex64),

    #[error("point {0} lies outside the open unit disk")]
    OutsideDisk(Complex64),

    #[error("invalid operator order {0}: the Ruscheweyh order must exceed -1")]
    InvalidOrder(f64),

    #[error("beta must be non-zero")]
    ZeroBeta,

    #[error("function is not normalized: f(0) = {value}, f'(0) = {derivative}")]
    NotNormalized {
        value: Complex64,
        derivative: Complex64,
    },

    #[error("branch of the power is ambiguous near {0}: base came within the branch guard of 0")]
    BranchAmbiguity(Complex64),

    #[error("denominator vanishes at {0}")]
    SingularPoint(Complex64),

    #[error("time derivative of the chain vanishes at z = {z}, t = {t}")]
    DegenerateDenominator { z: Complex64, t: f64 },

    #[error("sampled circle passes within the image guard of {0}")]
    OnBoundaryValue(Complex64),

    #[error("adaptive quadrature did not reach tolerance (estimated error {0:e})")]
    QuadratureFailed(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
