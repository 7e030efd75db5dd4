//! Contextual word representations from co-occurrence statistics.
//!
//! The pipeline: tokenize a corpus and build a frequency-filtered vocabulary
//! (`corpus`), count window co-occurrences and normalize them into a sparse
//! symmetric matrix (`cooccurrence`), compose contextual embeddings as
//! co-occurrence-weighted sums of pretrained base vectors (`embedding`),
//! compare them under a cosine/dot-product blend (`similarity`), and score
//! the four contextual-understanding task families (`eval`) with the usual
//! ranking metrics (`metrics`). The `cli` module wires everything into one
//! binary.

pub mod cli;
pub mod cooccurrence;
pub mod corpus;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod metrics;
pub mod similarity;
mod util;

pub use error::{Error, Result};
