//! The user guide, compiled from the mdbook sources in `book/src/`.
//!
//! Each chapter is included verbatim as module documentation, so every code
//! block in the rendered book is also a doc-test of this crate: the guide
//! cannot drift from the API it describes without failing `cargo test`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/symbols.md")]
pub mod symbols {}

#[doc = include_str!("../../../book/src/blaschke.md")]
pub mod blaschke_products {}

#[doc = include_str!("../../../book/src/model-spaces.md")]
pub mod model_spaces {}

#[doc = include_str!("../../../book/src/product-formula.md")]
pub mod product_formula {}

#[doc = include_str!("../../../book/src/finite-sections.md")]
pub mod finite_sections {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod command_line {}
