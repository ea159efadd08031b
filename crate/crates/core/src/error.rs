use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("coefficients do not describe a state (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotAState { min_eigenvalue: f64 },
    #[error("channel is not trace preserving (defect {defect:.3e})")]
    NotTracePreserving { defect: f64 },
    #[error("channel is not completely positive (minimum Choi eigenvalue {min_eigenvalue:.3e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },
    #[error("expected 1 to 4 Kraus operators, got {0}")]
    KrausCount(usize),
    #[error("parameter out of domain: {0}")]
    DomainError(String),
    #[error("measurement outcome has probability {probability:.3e}")]
    ZeroProbabilityOutcome { probability: f64 },
    #[error("reduced state is pure; SLOCC normalisation is undefined")]
    ProductStateDegenerate,
    #[error("ellipsoid of dimension {dim} is not a needle")]
    NotANeedle { dim: usize },
    #[error("state is not an X-state (largest off-X entry {max_off_x:.3e})")]
    NotXState { max_off_x: f64 },
    #[error("Pauli coefficient matrix has rank {rank}, expected 2")]
    NotANeedleState { rank: usize },
    #[error("needle decomposition failed: {0}")]
    DecompositionInfeasible(String),
}
