//! Cyclic and non-well-founded sequent proofs for the Grzegorczyk modal
//! logic: proof checking, proof search, syntactic cut elimination and
//! Lyndon interpolation.

pub mod calculus;
pub mod corpus;
pub mod interpolation;
pub mod proofs;
pub mod prover;
pub mod syntax;
pub mod transforms;

pub use syntax::{Formula, FormulaKind, Multiset, PolaritySets, Sequent};
