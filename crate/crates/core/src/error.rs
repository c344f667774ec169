use thiserror::Error;

/// Errors surfaced by the geometry and evolution routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("tangent vectors are based at different points")]
    MismatchedBasePoints,

    #[error("degenerate surface jet: EG - F^2 = {det:e} is not positive")]
    DegenerateJet { det: f64 },

    #[error("shape operator has complex eigenvalues (discriminant {disc:e})")]
    ComplexEigenvalues { disc: f64 },

    #[error("rotational Killing coefficients require {need}")]
    RotationalIncompatible { need: &'static str },

    #[error("isometry map requires {need}")]
    IsometryIncompatible { need: &'static str },

    #[error("translator ansatz violated: {0}")]
    TranslatorAnsatz(&'static str),

    #[error("conserved quantity requires lambda1 + lambda2 = 0 and lambda2 != 0")]
    ConservedUnavailable,

    #[error("grid too small: {ny} x {nz} (need at least 3 x 3)")]
    GridTooSmall { ny: usize, nz: usize },

    #[error("too few nodes: have {got}, need at least {need}")]
    TooFewNodes { need: usize, got: usize },

    #[error("time step {dt:e} violates CFL bound {dt_max:e}")]
    CflViolation { dt: f64, dt_max: f64 },

    #[error("cumulative arclength is not strictly increasing at node {index}")]
    NonMonotoneArclength { index: usize },

    #[error("non-finite {what} at node {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("invalid integrator options: {0}")]
    InvalidOptions(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
