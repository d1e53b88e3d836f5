//! Finite models of duoidally enriched Freyd categories.
//!
//! Every structure here is represented by finite (or lazily indexed) carriers
//! so that coherence laws can be checked element by element and failures come
//! back as concrete counterexamples.

pub mod cli;
pub mod duoidal;
pub mod enrich;
pub mod finset;
pub mod freyd;
pub mod mcat;
pub mod report;
pub mod resources;
pub mod sepmonoid;
pub mod vfreyd;

pub use finset::{Elem, FinFn, FinSet};
pub use report::{LawReport, LawStatus};
