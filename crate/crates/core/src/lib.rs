//! λI-terms, System F derivations and I-type classification.

pub mod gen;
pub mod inhabitants;
mod json;
pub mod polarity;
pub mod reduction;
pub mod selftest;
pub mod syntax;
pub mod typing;
pub mod witness;

pub use syntax::{parse_term, parse_type, print_term, print_type, ConstTag, Term, TypeExpr};
