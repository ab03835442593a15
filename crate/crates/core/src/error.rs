use thiserror::Error;

/// Errors raised by the numerical and exact layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("stencil of radius {radius} around {point:?} leaves the chart domain")]
    StencilOutOfDomain { point: [f64; 4], radius: f64 },

    #[error("reference form is degenerate (det = {det})")]
    DegenerateReference { det: f64 },

    #[error("form is not positive definite at {locus:?} (smallest eigenvalue {min_eigenvalue})")]
    NonPositiveForm { locus: [f64; 4], min_eigenvalue: f64 },

    #[error("potential is singular at the origin of its chart")]
    OriginSingular,

    #[error("Gibbons-Hawking centers {0} and {1} coincide")]
    CenterCollision(usize, usize),

    #[error("Gibbons-Hawking centers are not collinear; only axial configurations are supported")]
    NonCollinearCenters,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),

    #[error("fit is ill-conditioned: {0}")]
    FitIllConditioned(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("right-hand side has nonzero mean {mean:e} on a closed factor")]
    IncompatibleRhs { mean: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("iterate left the ball: norm {norm:e} > radius {radius:e}")]
    LeftBall { norm: f64, radius: f64 },

    #[error("maximum number of iterations ({0}) reached")]
    MaxIterations(usize),

    #[error("positivity lost at {locus:?}")]
    PositivityLost { locus: [f64; 4] },

    #[error("integrand tail decays too slowly for the Green operator")]
    NonIntegrable,

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("fixed locus of a group element has positive dimension")]
    NonDiscreteFixedSet,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
