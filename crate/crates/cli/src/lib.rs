//! Command-line support for plausikit: model and relation files, seeded model
//! generation, exhaustive small-model enumeration, the property suites and
//! the counterexample corpus.

pub mod corpus;
pub mod exhaustive;
pub mod generate;
pub mod io;
pub mod sample;
pub mod suites;
