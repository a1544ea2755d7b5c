//! Exact polynomial exterior calculus over jet-space variables.
//!
//! This is the symbolic oracle of the crate: every differential-form
//! identity the numeric modules rely on is verified here in exact rational
//! (or Gaussian-rational) arithmetic, canonical form on canonical form.

pub mod form;
pub mod harmonics;
pub mod identities;
pub mod jet;
pub mod poly;
pub mod scalar;
pub mod sexpr;
pub mod upsilon;
pub mod vars;

pub use form::{CompiledForm, PolyForm, PolyMap};
pub use poly::Poly;
pub use scalar::{Rat, Scalar};
pub use vars::{SpaceKind, Var, VarSpace};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExtError {
    #[error("operands live on different variable spaces")]
    SpaceMismatch,
    #[error("polynomial degree {degree} exceeds the space cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("expected {expected} components, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("expected a form of degree {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("operation requires a base form (differentials among dx only)")]
    NotBaseForm,
    #[error("polynomial is not harmonic: {0}")]
    NotHarmonic(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl ExtError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ExtError::SpaceMismatch => "ext_space_mismatch",
            ExtError::DegreeCap { .. } => "ext_degree_cap",
            ExtError::ArityMismatch { .. } => "ext_arity_mismatch",
            ExtError::DegreeMismatch { .. } => "ext_degree_mismatch",
            ExtError::NotBaseForm => "ext_not_base_form",
            ExtError::NotHarmonic(_) => "ext_not_harmonic",
            ExtError::Parse(_) => "ext_parse",
        }
    }
}
