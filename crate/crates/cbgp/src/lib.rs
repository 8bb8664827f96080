//! Code-building genetic programming over a Hindley-Milner typed
//! expression language.
//!
//! Linear genomes compile into type-safe ASTs through a stack-based
//! procedure backed by unification; compiled programs are evaluated by a
//! native tree-walking interpreter and evolved with lexicase selection
//! and UMAD variation against 17 programming-by-example benchmark
//! problems built around generic data structures, higher-order functions
//! and polymorphic signatures.

pub mod compiler;
pub mod evolve;
pub mod genome;
pub mod interp;
pub mod problems;
pub mod runner;
pub mod sampling;
pub mod stdlib;
pub mod typesys;
