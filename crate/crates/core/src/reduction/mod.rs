//! β/η normalization, head reduction, the λ_UV-calculus, the `N` measure,
//! the hat translation and E-activity analysis.

mod activity;
mod engine;

pub use activity::{
    e_inactive_variable_occurrences, e_inactive_subterms, e_passive_subterms, is_e_good, is_good,
    OccurrenceSet,
};
pub use engine::{contract_at, redex_paths, Rules};

use engine::{eta_contract, has_eta_redex, Reducer};
use serde::Serialize;

use crate::syntax::{ConstTag, Term};
use crate::witness::{build_i_prime, build_j_prime};

/// Fuel used when the caller does not choose one.
pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionOutcome {
    #[serde(serialize_with = "crate::json::ser_term")]
    pub result: Term,
    pub steps: usize,
    /// Fuel ran out before a normal form was reached.
    pub exhausted: bool,
}

fn run(t: &Term, rules: Rules, fuel: usize) -> ReductionOutcome {
    let mut r = Reducer::new(rules, fuel);
    let result = r.normalize(t.clone());
    ReductionOutcome { result, steps: r.steps, exhausted: r.exhausted }
}

pub fn beta_normalize(t: &Term, fuel: usize) -> ReductionOutcome {
    run(t, Rules::BETA, fuel)
}

pub fn eta_normalize(t: &Term) -> ReductionOutcome {
    let (result, steps) = eta_contract(t);
    ReductionOutcome { result, steps, exhausted: false }
}

/// β-normalizes, then η-contracts to a fixpoint.
pub fn beta_eta_normalize(t: &Term, fuel: usize) -> ReductionOutcome {
    let b = beta_normalize(t, fuel);
    if b.exhausted {
        return b;
    }
    let (result, eta_steps) = eta_contract(&b.result);
    ReductionOutcome { result, steps: b.steps + eta_steps, exhausted: false }
}

/// Head reduction. `exhausted == false` means the term is solvable: a head
/// normal form was reached within `fuel` steps.
pub fn head_reduce(t: &Term, fuel: usize) -> ReductionOutcome {
    let mut r = Reducer::new(Rules::BETA, fuel);
    let result = r.head_normalize(t.clone());
    ReductionOutcome { result, steps: r.steps, exhausted: r.exhausted }
}

pub fn is_beta_normal(t: &Term) -> bool {
    redex_paths(t, Rules::BETA).is_empty()
}

pub fn is_beta_eta_normal(t: &Term) -> bool {
    is_beta_normal(t) && !has_eta_redex(t)
}

/// One leftmost-outermost step of the λ_UV-calculus (β, ↪u, ↪v).
pub fn uv_step(t: &Term) -> Option<Term> {
    let path = redex_paths(t, Rules::UV).into_iter().next()?;
    contract_at(t, &path, Rules::UV)
}

pub fn uv_normalize(t: &Term, fuel: usize) -> ReductionOutcome {
    run(t, Rules::UV, fuel)
}

/// `N(x) = 0`, `N((u)v) = N(u) + N(v)`, `N(λx u) = N(u)`,
/// `N(U_{A,X}) = N(V_{A,X}) = L(A)` with `L` counting connectives.
pub fn measure_n(t: &Term) -> usize {
    match t {
        Term::Var(_) | Term::Bound(_) => 0,
        Term::Const(ConstTag::U(a, _) | ConstTag::V(a, _)) => a.size(),
        Term::Const(_) => 0,
        Term::App(f, a) => measure_n(f) + measure_n(a),
        Term::Lam(_, b) => measure_n(b),
    }
}

/// Replaces `U_{A,X}` by `I'_{A,X}` and `V_{A,X}` by `J'_{A,X}`; the result
/// mentions the opaque constants `@U` and `@V` instead.
pub fn hat(t: &Term) -> Term {
    t.replace_consts(&|c| match c {
        ConstTag::U(a, x) => Some(build_i_prime(a, x)),
        ConstTag::V(a, x) => Some(build_j_prime(a, x)),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::syntax::{parse_term, Term, TypeExpr};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn beta_one_step() {
        let r = beta_normalize(&t("(\\x. x) y"), DEFAULT_FUEL);
        assert_eq!(r.result, t("y"));
        assert_eq!(r.steps, 1);
        assert!(!r.exhausted);
    }

    #[test]
    fn omega_exhausts_fuel() {
        let r = beta_normalize(&t("(\\x. x x) (\\x. x x)"), 50);
        assert!(r.exhausted);
        assert!(head_reduce(&t("(\\x. x x) (\\x. x x)"), 50).exhausted);
        assert!(!head_reduce(&t("\\y. y ((\\x. x x) (\\x. x x))"), 50).exhausted);
    }

    #[test]
    fn normal_order_discards_divergent_argument() {
        let r = beta_normalize(&t("(\\x y. y) ((\\x. x x) (\\x. x x))"), 100);
        assert_eq!(r.result, t("\\y. y"));
    }

    #[test]
    fn eta() {
        assert_eq!(eta_normalize(&t("\\x. f x")).result, t("f"));
        assert_eq!(eta_normalize(&t("\\x. x x")).result, t("\\x. x x"));
        assert_eq!(beta_eta_normalize(&t("\\x y. (\\z. z) x y"), 10).result, t("\\x. x"));
        assert!(is_beta_eta_normal(&t("\\x. x")));
        assert!(!is_beta_eta_normal(&t("\\x. f x")));
        assert!(!is_beta_normal(&t("(\\x. x) y")));
    }

    #[test]
    fn uv_rules() {
        assert_eq!(uv_step(&t("U[Y, X] z")), Some(t("z")));
        assert_eq!(uv_step(&t("V[O, X] z")), Some(t("z")));
        assert_eq!(uv_step(&t("U[X, X] z")), None);
        assert_eq!(uv_step(&t("U[Y -> X, X] z")), Some(t("\\y. U[X, X] (z (V[Y, X] y))")));
        assert_eq!(uv_step(&t("V[Y -> X, X] z")), Some(t("\\y. V[X, X] (z (U[Y, X] y))")));
        // the body keeps its loose bound variable
        let body = TypeExpr::arrow(TypeExpr::Bound(0), TypeExpr::var("X"));
        assert_eq!(
            uv_step(&t("U[forall Y. Y -> X, X] z")),
            Some(Term::app(Term::u_const(body, "X"), Term::var("z")))
        );
        let r = uv_normalize(&t("U[Y -> Y, X] z"), 100);
        assert_eq!(r.result, t("\\y. z y"));
    }

    #[test]
    fn measure() {
        assert_eq!(measure_n(&t("U[X -> X, X]")), 1);
        assert_eq!(measure_n(&t("U[Y, X] (V[Y, X] z)")), 0);
        assert_eq!(measure_n(&t("\\x. U[forall Y. Y -> X, X] (x V[X -> X -> X, X])")), 4);
    }

    #[test]
    fn hat_translation() {
        assert_eq!(hat(&t("U[X, X]")), t("@U"));
        assert_eq!(hat(&t("V[Y, X] z")), t("(\\x. x) z"));
        assert_eq!(hat(&t("U[X -> X, X]")), t("\\x y. @U (x (@V y))"));
    }

    #[test]
    fn inactive_occurrences() {
        let u = t("y (\\x. x x)");
        let occ = e_inactive_variable_occurrences(&u, &set(&["y"]));
        let expect: OccurrenceSet = [vec![0], vec![1, 0, 0], vec![1, 0, 1]].into();
        assert_eq!(occ, expect);
        assert!(e_inactive_variable_occurrences(&u, &set(&[])).is_empty());
        // x is only activated through y
        let v = t("\\x. x y");
        assert_eq!(e_inactive_variable_occurrences(&v, &set(&["y"])), [vec![0, 1]].into());
    }

    #[test]
    fn inactive_and_passive_subterms() {
        let u = t("y (\\x. x z) w");
        let e = set(&["y"]);
        let inactive = e_inactive_subterms(&u, &e);
        assert!(inactive.contains(&vec![]));
        assert!(inactive.contains(&vec![0]));
        assert!(inactive.contains(&vec![0, 0]));
        assert!(inactive.contains(&vec![0, 1, 0]));
        let passive = e_passive_subterms(&u, &e);
        assert!(passive.contains(&vec![0, 1]));
        assert!(passive.contains(&vec![0, 1, 0]));
        assert!(passive.contains(&vec![1]));
        assert!(!passive.contains(&vec![]));
    }

    #[test]
    fn good_terms() {
        assert!(!is_e_good(&t("\\x. V[Y, X] (x y)"), &set(&["y"])));
        assert!(is_e_good(&t("y (\\x. U[Y, X] x)"), &set(&["y"])));
        assert!(is_e_good(&t("y (\\x. V[Y, X] x)"), &set(&["y"])));
        // U applied to two arguments
        assert!(!is_e_good(&t("y (\\x. U[Y, X] x x)"), &set(&["y"])));
        // bare U
        assert!(!is_e_good(&t("y U[Y, X]"), &set(&["y"])));
        assert!(is_good(&t("y (\\x. U[Y, X] x)")));
        assert!(is_good(&t("\\x. x")));
    }
}
