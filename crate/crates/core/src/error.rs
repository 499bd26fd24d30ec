use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("resolvent (jωI - A) is singular at ω = {omega}")]
    SingularResolvent { omega: f64 },

    #[error("{which} is not Hurwitz (max real part of spectrum = {max_real:e})")]
    NotHurwitz { which: &'static str, max_real: f64 },

    #[error("reduction stage {stage} failed: {source}")]
    Stage {
        stage: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("H-infinity iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("eigenvalue computation failed for {0}")]
    Eigen(&'static str),

    #[error("singular value computation failed")]
    Svd,

    #[error("invalid projection: {0}")]
    InvalidProjection(String),

    #[error("projection has no complement (r = n); the reduction error is identically zero")]
    EmptyComplement,

    #[error("state matrix is not symmetric (relative asymmetry {0:e})")]
    Asymmetric(f64),

    #[error("{what} is ill-conditioned (condition number {cond:e})")]
    IllConditioned { what: &'static str, cond: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("edge {edge} has nonpositive weight {weight}")]
    NonPositiveWeight { edge: usize, weight: f64 },

    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("partition is not strongly interface-invariant: {0}")]
    InterfaceViolation(String),

    #[error("need {needed} usable candidate edges but only {available} survived interface filtering")]
    InsufficientCandidates { needed: usize, available: usize },

    #[error("search space too large: {count} partitions exceeds the limit of {limit}")]
    TooLarge { count: String, limit: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("infeasible: {0}")]
    Infeasible(String),
}

impl Error {
    /// True for the instability family (state matrix or a reduced stage not Hurwitz).
    pub fn is_instability(&self) -> bool {
        match self {
            Error::NotHurwitz { .. } => true,
            Error::Stage { source, .. } => source.is_instability(),
            _ => false,
        }
    }
}
