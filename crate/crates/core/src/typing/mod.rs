//! System F derivations restricted to proper instantiations, bounded
//! derivation search, η-long expansion and the simple system S.

pub mod build;
mod derivation;
pub(crate) mod search;
mod simple;

use std::ops::ControlFlow;

pub use derivation::{
    check_derivation, classify_forall_elims, context_key, elim_variant, is_valid, key_term,
    uses_forall_elim, Context, Derivation, DerivationError, Judgment, RuleTag,
};
pub use simple::{check_simple, infer_simple};

use search::Mode;

use crate::syntax::{Path, Term, TypeExpr};

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SearchBudget {
    /// Largest connective count of a type used to instantiate a quantifier.
    pub max_instantiation_size: usize,
    /// Largest nesting of goals.
    pub max_depth: usize,
    /// Elimination shapes tried per head variable at one goal.
    pub max_candidates_per_node: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_instantiation_size: 8, max_depth: 200, max_candidates_per_node: 256 }
    }
}

impl SearchBudget {
    pub fn with_inst_size(n: usize) -> Self {
        SearchBudget { max_instantiation_size: n, ..Self::default() }
    }

    pub fn doubled(&self) -> Self {
        SearchBudget {
            max_instantiation_size: self.max_instantiation_size * 2,
            max_depth: self.max_depth * 2,
            max_candidates_per_node: self.max_candidates_per_node * 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Box<Derivation>),
    /// The bounded search space was exhausted.
    NotFound,
    /// The budget cut candidates off and none of the rest succeeded.
    Unknown,
}

impl SearchOutcome {
    pub fn derivation(self) -> Option<Derivation> {
        match self {
            SearchOutcome::Found(d) => Some(*d),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TypingError {
    #[error("term is not typable within the search budget")]
    Untypable,
    #[error("no subterm at path {0:?}")]
    BadPath(Path),
}

/// Searches `ctx ⊢ t : a` for a β-normal `t`. Terms that are not β-normal
/// are never found.
pub fn search_f_derivation(ctx: &Context, t: &Term, a: &TypeExpr, budget: &SearchBudget) -> SearchOutcome {
    let mut found = None;
    let truncated = for_each_derivation(ctx, t, a, budget, &mut |d| {
        found = Some(d.clone());
        ControlFlow::Break(())
    });
    match found {
        Some(d) => SearchOutcome::Found(Box::new(d)),
        None if truncated => SearchOutcome::Unknown,
        None => SearchOutcome::NotFound,
    }
}

/// Calls `f` on derivations of `ctx ⊢ t : a` in search order until it breaks.
/// Returns whether the budget truncated the search.
pub fn for_each_derivation(
    ctx: &Context,
    t: &Term,
    a: &TypeExpr,
    budget: &SearchBudget,
    f: &mut dyn FnMut(&Derivation) -> ControlFlow<()>,
) -> bool {
    search::run(ctx, Some(t), a, 0, budget, Mode::Check, &mut |d| f(&d))
}

/// Calls `f` on derivations of η-long β-normal terms `ctx ⊢ t : a` with
/// `size(t) <= size_bound`, until it breaks. The same term may come with
/// several derivations. Returns whether the budget truncated the search.
pub fn generate_long_terms(
    ctx: &Context,
    a: &TypeExpr,
    size_bound: usize,
    budget: &SearchBudget,
    f: &mut dyn FnMut(&Derivation) -> ControlFlow<()>,
) -> bool {
    search::run(ctx, None, a, size_bound, budget, Mode::Generate, &mut |d| f(&d))
}

/// η-expands the β-normal `t` along a derivation of `ctx ⊢ t : a` so that
/// every application spine ends at an atomic type.
pub fn eta_expand(t: &Term, ctx: &Context, a: &TypeExpr, budget: &SearchBudget) -> Result<Term, TypingError> {
    let mut cur = t.clone();
    for _ in 0..16 {
        let mut next = None;
        search::run(ctx, Some(&cur), a, 0, budget, Mode::Expand, &mut |d| {
            next = Some(d.subject().clone());
            ControlFlow::Break(())
        });
        let next = next.ok_or(TypingError::Untypable)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Ok(cur)
}

/// Grafts `v` at `hole` verbatim: free variables of `v` named like an
/// enclosing binder on the path become bound by it.
pub fn replace_in_context_hole(big: &Term, hole: &[usize], v: &Term) -> Result<Term, TypingError> {
    let mut binders = Vec::new();
    let mut cur = big;
    for &step in hole {
        cur = match (cur, step) {
            (Term::App(f, _), 0) => f,
            (Term::App(_, a), 1) => a,
            (Term::Lam(b, body), 0) => {
                binders.push(b.0.clone());
                body
            }
            _ => return Err(TypingError::BadPath(hole.to_vec())),
        };
    }
    let captured = capture(v, &binders, 0);
    big.replace_at(hole, captured).ok_or_else(|| TypingError::BadPath(hole.to_vec()))
}

/// Binds each free `Var(n)` to the innermost binder in `outer` named `n`.
fn capture(v: &Term, outer: &[String], depth: usize) -> Term {
    match v {
        Term::Var(n) => match outer.iter().rev().position(|b| b == n) {
            Some(i) => Term::Bound(depth + i),
            None => v.clone(),
        },
        Term::Bound(i) if *i >= depth => Term::Bound(i + outer.len()),
        Term::Bound(_) | Term::Const(_) => v.clone(),
        Term::App(f, a) => Term::app(capture(f, outer, depth), capture(a, outer, depth)),
        Term::Lam(b, body) => Term::Lam(b.clone(), Box::new(capture(body, outer, depth + 1))),
    }
}

#[cfg(test)]
mod tests;
