//! First-order fragment toolkit.
//!
//! Sentences are parsed into [`Formula`] values, brought into
//! [`StandardForm`], classified into decidable fragments and transformed
//! between them. Finite structures give the semantics used to check every
//! transformation.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classify;
pub mod display;
pub mod examples;
pub mod ground;
pub mod interpolate;
pub mod model;
pub mod monadic;
pub mod names;
pub mod normal;
pub mod parser;
pub mod resolution;
pub mod sat;
pub mod shrink;
pub mod subst;
pub mod syntax;
pub mod transform;

pub use normal::{Block, NormalFormError, NormalFormMode, StandardForm};
pub use parser::{parse, ParseError};
pub use subst::{apply_substitution, Substitution};
pub use syntax::{Formula, Literal, Quantifier, Term};
