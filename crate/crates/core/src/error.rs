use thiserror::Error;

use crate::kernel::{Kind, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: expected {expected:?}, found {found:?}")]
    DomainMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("kind mismatch: {left:?} vs {right:?}")]
    KindMismatch { left: Kind, right: Kind },
    #[error("codomain mismatch")]
    CodMismatch,
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("object of size {size} does not factor with left size {left}")]
    BadSplit { size: usize, left: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operation not available for {0:?} kernels")]
    UnsupportedKind(Kind),
    #[error("invalid kernel: {0}")]
    Invalid(Violation),
    #[error("not absolutely continuous: element {0:?} is outside the support")]
    NotAbsolutelyContinuous(String),
    #[error("support is empty")]
    EmptySupport,
    #[error("square does not commute")]
    NotCommutative,
    #[error("factorization through the support failed: {0}")]
    FactorizationFailed(String),
    #[error("morphism is not deterministic")]
    NotDeterministic,
    #[error("morphisms are not almost surely equal")]
    NotAse,
    #[error("element {0:?} is not in the support")]
    NotInSupport(String),
    #[error("not a morphism of the support completion: element {0:?} escapes the target support")]
    NotMember(String),
    #[error("cell mismatch")]
    CellMismatch,
    #[error("not an endomorphism")]
    NotEndo,
    #[error("not an idempotent")]
    NotIdempotent,
    #[error("idempotent is not balanced")]
    NotBalanced,
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("enumeration of {candidates} candidates exceeds the bound {bound}")]
    SizeLimitExceeded { candidates: u128, bound: u128 },
    #[error("not a splitting: {0}")]
    NotASplitting(String),
    #[error("not an envelope morphism: {0}")]
    NotHom(String),
    #[error("parameter objects differ")]
    ParamMismatch,
    #[error("not a conditional: {0}")]
    NotAConditional(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
