//! ∀-positive and ∀-negative types, properness and quantifier erasure.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::syntax::{fresh_name, Path, TypeExpr};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarityReport {
    pub in_pos: bool,
    pub in_neg: bool,
    /// Quantifiers at negative positions.
    pub negative_quantifier_paths: Vec<Path>,
    /// Quantifiers whose variable does not occur in their scope.
    pub improper_quantifier_paths: Vec<Path>,
}

impl PolarityReport {
    /// A quantifier keeping the type out of ∀⁺, if any.
    pub fn obstruction(&self) -> Option<&Path> {
        self.negative_quantifier_paths.first().or(self.improper_quantifier_paths.first())
    }
}

/// Membership in ∀⁺ and ∀⁻ (`O` counts as a variable).
pub fn polarity(a: &TypeExpr) -> PolarityReport {
    let mut neg = Vec::new();
    let mut improper = Vec::new();
    collect(a, true, &mut Vec::new(), &mut neg, &mut improper);
    PolarityReport { in_pos: in_pos(a), in_neg: in_neg(a), negative_quantifier_paths: neg, improper_quantifier_paths: improper }
}

fn in_pos(a: &TypeExpr) -> bool {
    match a {
        TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => true,
        TypeExpr::Arrow(b, c) => in_neg(b) && in_pos(c),
        TypeExpr::Forall(_, b) => b.uses_bound(0) && in_pos(b),
    }
}

fn in_neg(a: &TypeExpr) -> bool {
    match a {
        TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => true,
        TypeExpr::Arrow(b, c) => in_pos(b) && in_neg(c),
        TypeExpr::Forall(..) => false,
    }
}

fn collect(a: &TypeExpr, positive: bool, path: &mut Path, neg: &mut Vec<Path>, improper: &mut Vec<Path>) {
    match a {
        TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => {}
        TypeExpr::Arrow(b, c) => {
            path.push(0);
            collect(b, !positive, path, neg, improper);
            path.pop();
            path.push(1);
            collect(c, positive, path, neg, improper);
            path.pop();
        }
        TypeExpr::Forall(_, b) => {
            if !positive {
                neg.push(path.clone());
            }
            if !b.uses_bound(0) {
                improper.push(path.clone());
            }
            path.push(0);
            collect(b, positive, path, neg, improper);
            path.pop();
        }
    }
}

/// Every quantifier binds a variable free in its body.
pub fn is_proper(a: &TypeExpr) -> bool {
    match a {
        TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => true,
        TypeExpr::Arrow(b, c) => is_proper(b) && is_proper(c),
        TypeExpr::Forall(_, b) => b.uses_bound(0) && is_proper(b),
    }
}

/// Renames the bound variables apart (keeping their names when possible),
/// then drops every quantifier.
pub fn erase_quantifiers(a: &TypeExpr) -> TypeExpr {
    let mut used: BTreeSet<String> = a.free_type_vars();
    used.insert("O".into());
    erase(a, &mut Vec::new(), &mut used)
}

fn erase(a: &TypeExpr, env: &mut Vec<String>, used: &mut BTreeSet<String>) -> TypeExpr {
    match a {
        TypeExpr::Var(_) | TypeExpr::O => a.clone(),
        TypeExpr::Bound(i) => match env.len().checked_sub(i + 1) {
            Some(k) => TypeExpr::Var(env[k].clone()),
            None => a.clone(),
        },
        TypeExpr::Arrow(b, c) => TypeExpr::arrow(erase(b, env, used), erase(c, env, used)),
        TypeExpr::Forall(h, b) => {
            let name = fresh_name(&h.0, |n| used.contains(n));
            used.insert(name.clone());
            env.push(name);
            let r = erase(b, env, used);
            env.pop();
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{bool_type, id_type, parse_type};

    fn ty(s: &str) -> TypeExpr {
        parse_type(s).unwrap()
    }

    #[test]
    fn examples() {
        assert!(polarity(&id_type()).in_pos);
        let e = polarity(&ty("forall X. (forall Y. (Id -> Y)) -> Id"));
        assert!(!e.in_pos);
        assert_eq!(e.negative_quantifier_paths, vec![vec![0, 0]]);
        assert_eq!(e.improper_quantifier_paths, vec![Path::new()]);
        let x = polarity(&ty("X"));
        assert!(x.in_pos && x.in_neg);
        assert!(!polarity(&id_type()).in_neg);
    }

    #[test]
    fn properness() {
        assert!(is_proper(&id_type()));
        assert!(is_proper(&bool_type()));
        assert!(!is_proper(&ty("forall X. (X -> X) -> X -> forall Z. X")));
    }

    #[test]
    fn erasure() {
        assert_eq!(erase_quantifiers(&id_type()), ty("X -> X"));
        assert_eq!(erase_quantifiers(&bool_type()), ty("X -> X -> X"));
        let t = ty("forall X. ((forall Y. ((Y -> forall Z. ((X -> Y -> Z) -> Z)) -> X) -> X) -> X) -> X -> X");
        assert_eq!(
            erase_quantifiers(&t),
            ty("((((Y -> (X -> Y -> Z) -> Z) -> X) -> X) -> X) -> X -> X")
        );
        // bound variables are renamed apart
        assert_eq!(erase_quantifiers(&ty("(forall X. X) -> forall X. X")), ty("X -> X1"));
    }
}
