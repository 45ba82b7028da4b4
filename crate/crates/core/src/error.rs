use thiserror::Error;

use crate::rootsplit::RootSet;

pub type Result<T> = std::result::Result<T, PencilError>;

/// Every failure the library can report.
///
/// The variants fall into three families that the CLI maps onto exit codes:
/// bad input (`Input`), structural failures of the problem itself
/// (`WrongRootCount`, `Structural`, `LopatinskiiDegenerate`), and numerical
/// indeterminacy (everything else).
#[derive(Debug, Error)]
pub enum PencilError {
    #[error("input error: {0}")]
    Input(String),

    #[error("wrong root count: expected {expected} roots in the upper half-plane, found {found}")]
    WrongRootCount { expected: usize, found: usize },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("ill-conditioned root finding: backward error {backward_error:.3e} exceeds {tol:.3e}")]
    IllConditioned {
        backward_error: f64,
        tol: f64,
        partial: Box<RootSet>,
    },

    #[error("roots within {}{imag_tol:.3e} of the real axis: {detail}", if *relative { "relative " } else { "" })]
    NearRealRoot {
        imag_tol: f64,
        relative: bool,
        detail: String,
    },

    #[error("Lopatinskii degenerate: boundary system singular ({detail})")]
    LopatinskiiDegenerate { detail: String },

    #[error("boundary system condition number {condition:.3e} exceeds {limit:.1e}")]
    Conditioning { condition: f64, limit: f64 },

    #[error("root group matching ambiguous: {0}")]
    MatchingAmbiguity(String),

    #[error("quadrature diagnostic: {0}")]
    Quadrature(String),

    #[error("symbol guard violated: {0}")]
    Guard(String),

    #[error("at ξ′ = {node:?}: {source}")]
    AtNode {
        node: Vec<f64>,
        source: Box<PencilError>,
    },
}

impl PencilError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        PencilError::Input(msg.into())
    }

    /// True for failures caused by the problem data rather than by numerics.
    pub fn is_structural(&self) -> bool {
        if let PencilError::AtNode { source, .. } = self {
            return source.is_structural();
        }
        matches!(
            self,
            PencilError::WrongRootCount { .. }
                | PencilError::Structural(_)
                | PencilError::LopatinskiiDegenerate { .. }
        )
    }
}
