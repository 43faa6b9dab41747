//! Finite sections of truncated Toeplitz operators on model spaces of
//! Blaschke products.
//!
//! Start with the [`guide`] module (the rendered mdbook lives in `book/`):
//! it walks the objects in dependency order, and every code block in it is a
//! doc-test of this crate. The short version: [`blaschke`] builds inner
//! functions from zeros given in gap/phase form, [`model_space`] compresses
//! Toeplitz operators to their model spaces by two independent routes,
//! [`widom`] verifies the product formula those compressions satisfy, and
//! [`fsd`] diagnoses the resulting finite-section sequences (stability,
//! spectral approximation, kernel detection). The [`cli`] module exposes the
//! whole pipeline as JSON-configured experiments with CSV artifacts.

pub mod blaschke;
pub mod cli;
pub mod error;
pub mod fsd;
pub mod guide;
pub mod hardy;
pub mod jet;
pub mod linalg;
pub mod model_space;
pub mod widom;

pub use error::{Error, Result};
