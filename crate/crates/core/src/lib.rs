//! Finite epistemic plausibility models: evaluation of knowledge, conditional
//! belief, safe belief and strict plausibility, public announcement and
//! radical upgrade, reduction of dynamic formulas, and bisimulation checking.

pub mod bisim;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod reference;
pub mod semantics;
pub mod syntax;
pub mod translate;

pub use error::{Error, Result};
pub use model::{Model, ModelDoc, Relation, StateSet, Violation};
pub use syntax::{parse, Formula, Fragment, Op};
