//! The guide's chapters, included verbatim so `cargo test` compiles and
//! runs every code snippet in the book as a doc-test. One module per
//! chapter keeps failures attributable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/games.md")]
pub mod games {}

#[doc = include_str!("../../../book/src/strategies.md")]
pub mod strategies {}

#[doc = include_str!("../../../book/src/evaluation.md")]
pub mod evaluation {}

#[doc = include_str!("../../../book/src/parity.md")]
pub mod parity_functions {}

#[doc = include_str!("../../../book/src/search.md")]
pub mod searching {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
