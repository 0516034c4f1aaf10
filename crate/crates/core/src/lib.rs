//! Finitely presented controlled spaces.
//!
//! A controlled space is a space with a distinguished family of paths closed under trivial
//! loops at endpoints, concatenation and surjective increasing reparametrisation. Here the
//! spaces are 1-complexes (graphs with kinded edges) and their products, and paths are
//! piecewise monotone with exact rational breakpoints.

pub mod carrier;
pub mod error;
pub mod kind;
pub mod path;
pub mod rat;
pub mod space;
pub mod track;

pub use error::{Error, Result};
pub use rat::Rat;
pub mod membership;
pub mod corpus;
pub mod oracle;
pub mod cells;
pub mod classify;
pub mod reach;
pub mod construct;
pub mod validate;
pub mod json;
pub mod cli;
