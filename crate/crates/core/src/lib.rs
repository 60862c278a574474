//! Bounded analysis of the free-algebra functor of a finitary equational
//! theory.
//!
//! The crate decides equations boundedly ([`engine`]), materializes free
//! algebras up to a size bound ([`free`]), checks weak pullback
//! preservation on concrete finite diagrams ([`finset`]), computes the
//! derivative of a theory ([`derivative`]) and searches for Mal'cev style
//! terms ([`malcev`]). Every bounded answer is a three-valued [`Verdict`].

pub mod cli;
pub mod derivative;
pub mod engine;
pub mod enumerate;
pub mod finset;
pub mod free;
pub mod malcev;
pub mod parse;
pub mod report;
pub mod term;

pub use engine::{Budget, Engine, EqVerdict, Unknown, Verdict};
pub use enumerate::enumerate_terms;
pub use parse::{parse_equation, parse_term, parse_term_list, parse_theory, ParseError};
pub use term::{Equation, Name, Signature, Substitution, Term, TermOrder, Theory, VarOccurrence};
