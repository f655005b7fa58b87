use num_complex::Complex64;

use crate::band::ModelKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid band model: {0}")]
    InvalidModel(String),

    #[error("analytic continuation is not available for {0:?} models")]
    ContinuationUnavailable(ModelKind),

    #[error("frequency {w} lies within the guard radius of a branch point")]
    BranchPoint { w: Complex64 },

    /// Real frequency inside the band without a side hint.
    #[error("frequency {0} lies on the branch cut; a side (above/below) is required")]
    OnCut(f64),

    #[error("sheet {sheet} is not defined for {kind:?} models")]
    InvalidSheet { sheet: i32, kind: ModelKind },

    #[error("sheet {sheet} is ambiguous on the real axis outside the band at {w}")]
    SheetAmbiguous { sheet: i32, w: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// The pole quadratic degenerates at delta0 = 1/2; the linearized
    /// equation has at most one finite root.
    #[error("pole quadratic degenerates at delta0 = 1/2 (linear root: {linear_root:?})")]
    DegenerateQuadratic { linear_root: Option<f64> },

    #[error("residues of second-order poles are not supported")]
    SecondOrderPole,

    #[error("quadrature did not reach tolerance: estimate {estimate}, error {error:e}")]
    Accuracy { estimate: Complex64, error: f64 },

    #[error("insufficient data: found {found} local maxima, need at least {needed}")]
    InsufficientData { found: usize, needed: usize },

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
