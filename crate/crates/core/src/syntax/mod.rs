//! Terms, types, their concrete syntax and the standard constructions.

mod builders;
mod parse;
mod print;
mod term;
mod types;

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

pub use builders::*;
pub use parse::{parse_term, parse_type, ParseError};
pub use print::{print_term, print_type};
pub use term::{ConstTag, Path, Term};
pub use types::TypeExpr;

/// Name hint carried by a binder. It never takes part in equality, ordering
/// or hashing, which makes derived equality on terms and types α-equivalence.
#[derive(Clone, Debug)]
pub struct Binder(pub String);

impl PartialEq for Binder {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Binder {}

impl Hash for Binder {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl PartialOrd for Binder {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Binder {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("term contains U/V constants; expected a plain λ-term")]
    NotPlain,
}

pub fn free_vars(t: &Term) -> std::collections::BTreeSet<String> {
    t.free_vars()
}

pub fn free_type_vars(a: &TypeExpr) -> std::collections::BTreeSet<String> {
    a.free_type_vars()
}

/// `u[v/x]`, capture-avoiding.
pub fn subst_term(u: &Term, v: &Term, x: &str) -> Term {
    u.subst(v, x)
}

/// `a[g/x]`, capture-avoiding.
pub fn subst_type(a: &TypeExpr, g: &TypeExpr, x: &str) -> TypeExpr {
    a.subst(g, x)
}

pub fn is_lambda_i(t: &Term) -> Result<bool, SyntaxError> {
    t.is_lambda_i()
}

/// Picks the first name of `base`, `base1`, `base2`, ... not rejected by `taken`.
pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken(n))
        .expect("infinite supply of names")
}
