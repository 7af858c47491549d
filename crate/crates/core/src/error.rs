use thiserror::Error;

/// Errors raised by the geometry, curve and admissibility routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("point is not on the wave manifold (residual {residual:e})")]
    NotOnManifold { residual: f64 },

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("the sonic' surface is the line Y = -2c at z = 0; t is not determined")]
    ZAxisDegenerate,

    #[error("missing side point: {0}")]
    MissingSidePoint(String),

    #[error("curve passes through the secondary bifurcation (l + 2c = {offset:e})")]
    SecondaryBifurcation { offset: f64 },

    #[error("arc extraction is defined for plain Hugoniot curves only")]
    PrimeCurve,

    #[error("quadratic has no real roots")]
    NoRealRoots,

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
