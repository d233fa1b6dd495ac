use thiserror::Error;

/// Errors raised by the ruin toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuinError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("moment of order {0} is not available")]
    MomentUnavailable(usize),
    #[error("Laplace transform not available for a moments-only claim model")]
    TransformUnavailable,
    #[error("argument outside the transform domain: {0}")]
    DomainError(String),
    #[error("claim distribution has no rational Laplace transform")]
    NotRational,
    #[error("no root found before the continuation boundary")]
    NoRoot,
    #[error("operation not supported: {0}")]
    NotSupported(String),
    #[error("method requires an unperturbed model (sigma = 0)")]
    PerturbedNotSupported,
    #[error("method requires a perturbed model (sigma > 0)")]
    NotPerturbed,
    #[error("singular linear system (relative pivot {0:.3e})")]
    SingularSystem(f64),
    #[error("inconsistent constraints: {0}")]
    InconsistentConstraints(String),
    #[error("pole with nonnegative real part at {0}")]
    UnstablePole(String),
    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),
    #[error("rational function has a pole at s = 0")]
    PoleAtZero,
    #[error("moments are not Stieltjes-feasible: {0}")]
    InfeasibleMoments(String),
    #[error("order search exceeded the cap of {0}")]
    OrderCap(usize),
    #[error("negative weight {0:.3e} in discrete measure")]
    NegativeWeight(f64),
    #[error("criterion not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid subgenerator: {0}")]
    InvalidSubgenerator(String),
    #[error("Talbot contour evaluation failed at node {0}")]
    ContourFailure(usize),
    #[error("no equilibrium sampler for this claim model")]
    SamplerUnavailable,
}

pub type Result<T> = std::result::Result<T, RuinError>;
