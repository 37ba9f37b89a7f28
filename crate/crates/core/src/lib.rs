//! Exact finite models of Markov categories.
//!
//! Three models share one code path: stochastic matrices over the
//! nonnegative rationals, signed matrices with unit column sums, and
//! multivalued functions (boolean matrices with nonempty columns). On top of
//! the kernel algebra sit decision procedures for almost-sure equality and
//! absolute continuity, supports and split supports, the free support
//! completion, the idempotent taxonomy with Blackwell splitting, the
//! Karoubi and Blackwell envelopes, the input-output relation functor,
//! parametric morphisms and conditionals.

pub mod asrel;
pub mod completion;
pub mod document;
pub mod envelope;
pub mod error;
pub mod fixtures;
pub mod functors;
pub mod idempotent;
pub mod kernel;
pub mod object;
pub mod random;
pub mod scalar;
pub mod split;
pub mod structure;
pub mod support;

pub use error::{Error, Result};
pub use kernel::{
    chain, compose, is_deterministic, is_deterministic_by_copy, kernel_equal, marginalize, tensor,
    validate, Kernel, Kind, Side, Violation, Weight,
};
pub use object::FinObject;
pub use scalar::{parse_scalar, Scalar};
