//! Probability-weighted average running time for propositional sentence
//! processors.
//!
//! The crate provides exact-rational machinery for expected running time
//! over an enumerated input space ([`measure`]), two instrumented
//! algorithms with closed-form abstract costs ([`engines`]), the sentence
//! representation they run on ([`formula`]), and closed-form counting and
//! bound verifiers ([`analytic`]).

pub mod analytic;
pub mod engines;
pub mod formula;
pub mod measure;
pub mod spaces;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

pub use formula::{
    enumerate_formulas, stratify_min_layers, ConnectiveTable, EnumLimit, Formula, FormulaError,
    ModelSet, Token,
};
