//! hatlab — hat-guessing games as executable mathematics.
//!
//! The library models hat games ⟨A, K, V, I⟩ (prisoners, colors, visibility,
//! innings), constructs the classical guessing strategies as executable
//! predictors, verifies their guarantees exhaustively or on seeded samples,
//! and decides predictor existence on small instances by backtracking
//! search over strategy tables.
//!
//! Start with [`game::Game`] and [`strategy::run_predictor`]; the guide in
//! `book/` walks through every concept with runnable examples (the same
//! snippets compile as doc-tests here).

pub mod color;
pub mod error;
pub mod evaluate;
pub mod game;
pub mod parity;
mod sample;
pub mod search;
pub mod strategy;
pub mod theorem;

mod book;

pub use color::{Color, ColorSpace};
pub use error::{HatError, Result};
pub use game::{Coloring, Game, PartialColoring, Population, Prisoner, PrisonerSet};
pub use strategy::{Predictor, Strategy};
