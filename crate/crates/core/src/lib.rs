//! Finite-field incidence geometry laboratory.

pub mod error;
pub mod field;
pub mod poly;
pub mod seed;
pub mod composition;
pub mod curves;
pub mod expansion;
pub mod graph;
pub mod incidence;
pub mod linalg;

pub use error::{Error, Result};
pub use field::{extend, make_field, Embedding, Extension, FieldCtx, FieldElement, FieldSpec};
pub use poly::{KernelTable, MultiPoly, SymmetricKernel, UniPoly};
