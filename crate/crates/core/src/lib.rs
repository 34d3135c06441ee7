//! Finite non-abelian groups, their non-commuting graphs, and Laplacian
//! spectra computed by three mutually independent routes: closed-form
//! predictions per family, the centralizer-partition structure of AC-groups,
//! and a numeric eigensolver whose rounded output is certified by exact
//! integer rank computations.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! FamilySpec -> FiniteGroup -> SimpleGraph -> Spectrum (x3) -> VerificationReport
//! ```
//!
//! See the `predict` module for the batch verifier that drives the whole
//! catalog and cross-checks every route.

pub mod catalog;
pub mod field;
pub mod graph;
pub mod group;
pub mod predict;
pub mod spectra;

pub use num_rational::Rational64;

pub use catalog::{CatalogError, ExtraspecialKind, FamilySpec};
pub use field::{FieldElement, FieldError, FieldSpec};
pub use graph::{CliqueUnion, GraphError, SimpleGraph};
pub use group::{CentralizerPartition, FiniteGroup, GroupError, SmallFamily, DEFAULT_ORDER_CAP};
pub use predict::{
    default_grid, run_catalog_verification, ConsequenceRecord, VerificationCaps,
    VerificationReport,
};
pub use spectra::{IntegerMatrix, NumericSpectrum, Spectrum, SpectraError};
