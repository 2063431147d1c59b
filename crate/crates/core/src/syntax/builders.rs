//! Standard terms and types: numerals, tuples, booleans, conjunctions, `G°`.

use super::{fresh_name, Term, TypeExpr};

/// Binder names tried, in order, by tuple and conjunction sugar.
const TUPLE_NAMES: &[&str] = &["x", "y", "z", "w", "p", "q"];
const CONJ_NAMES: &[&str] = &["X", "Y", "Z", "W", "P", "Q"];

fn first_fresh(seq: &[&str], taken: impl Fn(&str) -> bool) -> String {
    seq.iter()
        .find(|n| !taken(n))
        .map(|n| n.to_string())
        .unwrap_or_else(|| fresh_name(seq[0], taken))
}

/// `id = λx x`.
pub fn id() -> Term {
    Term::lam("x", Term::var("x"))
}

/// `0 = λxλy y`.
pub fn zero() -> Term {
    Term::lams(["x", "y"], Term::var("y"))
}

/// `1 = λxλy x`.
pub fn one() -> Term {
    Term::lams(["x", "y"], Term::var("x"))
}

/// Church numeral `λxλf (f)...(f)x` with `n` applications of `f`.
pub fn church(n: usize) -> Term {
    let body = (0..n).fold(Term::var("x"), |acc, _| Term::app(Term::var("f"), acc));
    Term::lams(["x", "f"], body)
}

/// λI numeral: `λxλf (((x)id)id)f` for zero, the Church numeral otherwise.
pub fn ibar(n: usize) -> Term {
    if n == 0 {
        Term::lams(
            ["x", "f"],
            Term::apps(Term::var("x"), [id(), id(), Term::var("f")]),
        )
    } else {
        church(n)
    }
}

/// `<t1, ..., tn> = λx (x)t1...tn`, `x` not free in any component.
/// Panics on an empty sequence.
pub fn tuple(ts: &[Term]) -> Term {
    assert!(!ts.is_empty(), "tuple of no components");
    let name = first_fresh(TUPLE_NAMES, |n| ts.iter().any(|t| t.has_free_var(n)));
    Term::lam(name.clone(), Term::apps(Term::var(name), ts.iter().cloned()))
}

/// `Id = ∀X{X → X}`.
pub fn id_type() -> TypeExpr {
    let x = TypeExpr::var("X");
    TypeExpr::forall("X", TypeExpr::arrow(x.clone(), x))
}

/// `Bool = ∀X{X → (X → X)}`.
pub fn bool_type() -> TypeExpr {
    let x = TypeExpr::var("X");
    TypeExpr::forall("X", TypeExpr::arrows([x.clone(), x.clone()], x))
}

/// `Ent = ∀X{X → [(X → X) → X]}`.
pub fn ent_type() -> TypeExpr {
    let x = TypeExpr::var("X");
    TypeExpr::forall(
        "X",
        TypeExpr::arrows([x.clone(), TypeExpr::arrow(x.clone(), x.clone())], x),
    )
}

/// `A1 ∧ ... ∧ An = ∀X{(A1, ..., An → X) → X}`, `X` not free in any `Ai`.
/// Panics on an empty sequence.
pub fn conj(parts: &[TypeExpr]) -> TypeExpr {
    assert!(!parts.is_empty(), "conjunction of no types");
    let name = first_fresh(CONJ_NAMES, |n| parts.iter().any(|a| a.has_free_var(n)));
    let x = TypeExpr::var(name.clone());
    TypeExpr::forall(
        name,
        TypeExpr::arrow(TypeExpr::arrows(parts.iter().cloned(), x.clone()), x),
    )
}

/// `G° = O → (G ∧ O)`.
pub fn circ(g: &TypeExpr) -> TypeExpr {
    TypeExpr::arrow(TypeExpr::O, conj(&[g.clone(), TypeExpr::O]))
}
