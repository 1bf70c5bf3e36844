//! Decision procedures for an unquantified Boolean set-theoretic language
//! extended with a choice symbol `c(..)`, together with a toolkit for finite
//! choice functions (axiom checking, rationalizability, and extension of
//! partial choices to total ones under several consistency axioms).
//!
//! Module map:
//! - [`syntax`]: AST, parser, printer for the input language.
//! - [`normalize`]: choice-flat form, completion, propositional skeleton.
//! - [`choice`]: finite choice functions, axioms, Euler diagrams,
//!   rationalizability.
//! - [`lifting`]: extending partial choices to total ones under the
//!   contraction axiom, the expansion axiom, or both.
//! - [`places`]: the certificate search underlying the solver.
//! - [`solver`]: satisfiability under four semantics for the choice symbol.
//! - [`oracle`]: brute-force reference implementations used for testing.
//! - [`gen`]: seeded random instance generators for stress testing.

pub mod choice;
pub mod gen;
pub mod lifting;
pub mod normalize;
pub mod oracle;
pub mod places;
pub mod sets;
pub mod solver;
pub mod syntax;

pub use sets::{ElemSet, Universe};
