//! Primitivity, simplicity and filling indexes of elements of free groups.
//!
//! Words and cyclic words live in [`words`]; labelled graphs, folding and
//! covers in [`graphs`]; Whitehead's algorithm in [`whitehead`]; the index
//! computations in [`index`]; the blocking, forcing and witness words in
//! [`blockers`]; random non-backtracking words in [`randomwalk`].

pub mod acceptance;
pub mod blockers;
pub mod error;
pub mod factor;
pub mod graphs;
pub mod index;
pub mod randomwalk;
pub mod whitehead;
pub mod words;

pub use error::{Error, Result};
pub use graphs::{AGraph, Edge, EdgeId, EdgePath, SpanningData};
pub use index::{Bounded, Budget};
pub use words::{CyclicWord, Letter, Word, WordStats};
