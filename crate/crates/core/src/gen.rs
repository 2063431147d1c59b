//! Random terms and types for property checks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::polarity::is_proper;
use crate::reduction::is_e_good;
use crate::syntax::{Term, TypeExpr};

const BINDERS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
const TYPE_VARS: [&str; 3] = ["X", "Y", "Z"];

/// A term of roughly `size` nodes whose free variables come from `free`.
pub fn term<R: Rng>(rng: &mut R, size: usize, free: &[&str]) -> Term {
    let mut scope: Vec<String> = free.iter().map(|s| s.to_string()).collect();
    plain(rng, size.max(1), &mut scope)
}

fn plain<R: Rng>(rng: &mut R, size: usize, scope: &mut Vec<String>) -> Term {
    if size <= 1 || (scope.is_empty() && size <= 2) {
        return match scope.choose(rng) {
            Some(x) => Term::var(x.clone()),
            None => Term::lam("x", Term::var("x")),
        };
    }
    if scope.is_empty() || rng.gen_bool(0.35) {
        let x = BINDERS[scope.len() % BINDERS.len()].to_string();
        scope.push(x.clone());
        let body = plain(rng, size - 1, scope);
        scope.pop();
        Term::lam(x, body)
    } else {
        let left = rng.gen_range(1..size.max(3) - 1);
        let f = plain(rng, left, scope);
        let a = plain(rng, (size - 1).saturating_sub(left).max(1), scope);
        Term::app(f, a)
    }
}

/// A λI-term: every abstraction binds a variable free in its body.
pub fn lambda_i_term<R: Rng>(rng: &mut R, size: usize, free: &[&str]) -> Term {
    let mut scope: Vec<String> = free.iter().map(|s| s.to_string()).collect();
    relevant(rng, size.max(1), &mut scope)
}

fn relevant<R: Rng>(rng: &mut R, size: usize, scope: &mut Vec<String>) -> Term {
    if size <= 1 && !scope.is_empty() {
        return Term::var(scope.choose(rng).unwrap().clone());
    }
    if scope.is_empty() || size <= 2 || rng.gen_bool(0.35) {
        let x = BINDERS[scope.len() % BINDERS.len()].to_string();
        scope.push(x.clone());
        let mut body = relevant(rng, size.saturating_sub(1).max(1), scope);
        scope.pop();
        if !body.has_free_var(&x) {
            body = if rng.gen_bool(0.5) {
                Term::app(body, Term::var(x.clone()))
            } else {
                Term::app(Term::var(x.clone()), body)
            };
        }
        Term::lam(x, body)
    } else {
        let left = rng.gen_range(1..size - 1).max(1);
        let f = relevant(rng, left, scope);
        let a = relevant(rng, size - 1 - left, scope);
        Term::app(f, a)
    }
}

/// A type of at most `size` arrows and quantifiers over `X, Y, Z`.
pub fn type_expr<R: Rng>(rng: &mut R, size: usize, quantifiers: bool) -> TypeExpr {
    if size == 0 {
        return TypeExpr::var(*TYPE_VARS.choose(rng).unwrap());
    }
    if quantifiers && rng.gen_bool(0.25) {
        let x = *TYPE_VARS.choose(rng).unwrap();
        let body = type_expr(rng, size - 1, quantifiers);
        return TypeExpr::forall(x, body);
    }
    let left = rng.gen_range(0..size);
    TypeExpr::arrow(type_expr(rng, left, quantifiers), type_expr(rng, size - 1 - left, quantifiers))
}

/// A closed proper type with at least one quantifier.
pub fn closed_proper_type<R: Rng>(rng: &mut R, size: usize) -> TypeExpr {
    loop {
        let mut t = type_expr(rng, size.max(1) - 1, true);
        for x in t.free_type_vars() {
            t = TypeExpr::forall(x, t);
        }
        if is_proper(&t) && t.quantifier_count() > 0 && t.size() <= size.max(1) {
            return t;
        }
    }
}

/// A λ_UV-term that is E-good for `E = {e1, e2}`, with annotations drawn
/// from small types.
pub fn e_good_term<R: Rng>(rng: &mut R, size: usize) -> (Term, BTreeSet<String>) {
    let e: BTreeSet<String> = ["e1", "e2"].iter().map(|s| s.to_string()).collect();
    loop {
        let mut scope: Vec<String> = vec!["e1".into(), "e2".into(), "a".into()];
        let t = uv(rng, size.max(2), &mut scope, 0);
        if is_e_good(&t, &e) {
            return (t, e);
        }
    }
}

fn annotation<R: Rng>(rng: &mut R) -> (TypeExpr, &'static str) {
    let n = rng.gen_range(0..3);
    let a = type_expr(rng, n, false);
    (a, if rng.gen_bool(0.7) { "X" } else { "Y" })
}

fn uv<R: Rng>(rng: &mut R, size: usize, scope: &mut Vec<String>, lams: usize) -> Term {
    if size <= 1 {
        return Term::var(scope.choose(rng).unwrap().clone());
    }
    match rng.gen_range(0..10) {
        0..=2 => {
            let x = BINDERS[lams % BINDERS.len()].to_string();
            scope.push(x.clone());
            let body = uv(rng, size - 1, scope, lams + 1);
            scope.pop();
            Term::lam(x, body)
        }
        3..=5 => {
            // a spine headed by an E variable; its arguments are passive
            let head = Term::var(if rng.gen_bool(0.5) { "e1" } else { "e2" });
            let n = rng.gen_range(1..=2);
            let per = (size - 1) / n;
            let args: Vec<Term> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        let (a, x) = annotation(rng);
                        let w = uv(rng, per.max(2) - 1, scope, lams);
                        let ux = Term::app(Term::u_const(a, x), w);
                        if rng.gen_bool(0.3) {
                            let y = BINDERS[lams % BINDERS.len()].to_string();
                            Term::lam(y, ux)
                        } else {
                            ux
                        }
                    } else {
                        uv(rng, per.max(1), scope, lams)
                    }
                })
                .collect();
            Term::apps(head, args)
        }
        6 => {
            let (a, x) = annotation(rng);
            let head = Term::var(if rng.gen_bool(0.5) { "e1" } else { "e2" });
            let arg = Term::app(head, uv(rng, (size - 2).max(1), scope, lams));
            Term::app(Term::v_const(a, x), arg)
        }
        _ => {
            let left = rng.gen_range(1..size).max(1);
            let f = uv(rng, left, scope, lams);
            let a = uv(rng, (size - left).max(1), scope, lams);
            Term::app(f, a)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generators_meet_their_contracts() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            assert!(lambda_i_term(&mut rng, 12, &["a"]).is_lambda_i().unwrap());
            let t = closed_proper_type(&mut rng, 8);
            assert!(t.free_type_vars().is_empty() && is_proper(&t) && t.size() <= 8);
            let (g, e) = e_good_term(&mut rng, 10);
            assert!(is_e_good(&g, &e));
        }
    }
}
