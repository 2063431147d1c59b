//! The terms `I'`, `J'`, `I`, `J`, their typings, and extraction of a λK
//! inhabitant from a derivation eliminating a quantifier at a head variable.

use std::ops::ControlFlow;

use serde_json::{json, Value};

use crate::reduction::{beta_normalize, is_beta_normal, DEFAULT_FUEL};
use crate::syntax::{bool_type, circ, id, one, print_term, tuple, ConstTag, Path, Term, TypeExpr};
use crate::typing::build::{arrow_e, ax, forall_e, forall_i, fresh_type_var, lam};
use crate::typing::{
    check_derivation, classify_forall_elims, for_each_derivation, search_f_derivation, Context, Derivation,
    Judgment, RuleTag, SearchBudget,
};

fn build(a: &TypeExpr, x: &str, positive: bool) -> Term {
    match a {
        TypeExpr::Var(y) if y == x => Term::opaque(if positive { "U" } else { "V" }),
        TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => id(),
        TypeExpr::Arrow(b, c) => {
            let inner = Term::app(build(b, x, !positive), Term::var("y"));
            let body = Term::app(build(c, x, positive), Term::app(Term::var("x"), inner));
            Term::lams(["x", "y"], body)
        }
        TypeExpr::Forall(_, b) => Term::lam("x", Term::app(build(b, x, positive), Term::var("x"))),
    }
}

/// `I'_{A,X}`, over the opaque constants `@U` and `@V`.
pub fn build_i_prime(a: &TypeExpr, x: &str) -> Term {
    build(a, x, true)
}

/// `J'_{A,X}`, over the opaque constants `@U` and `@V`.
pub fn build_j_prime(a: &TypeExpr, x: &str) -> Term {
    build(a, x, false)
}

/// `U = λxλd <x, α>`.
pub fn u_term() -> Term {
    Term::lams(["x", "d"], tuple(&[Term::var("x"), Term::alpha()]))
}

/// `V = λx (x)α K1`.
pub fn v_term() -> Term {
    Term::lam("x", Term::apps(Term::var("x"), [Term::alpha(), one()]))
}

fn concrete(t: &Term) -> Term {
    t.replace_consts(&|c| match c {
        ConstTag::Opaque(n) if n == "U" => Some(u_term()),
        ConstTag::Opaque(n) if n == "V" => Some(v_term()),
        _ => None,
    })
}

pub fn build_i(a: &TypeExpr, x: &str) -> Term {
    concrete(&build_i_prime(a, x))
}

pub fn build_j(a: &TypeExpr, x: &str) -> Term {
    concrete(&build_j_prime(a, x))
}

/// `Γ ⊢ I_{A,X} : A[G/X] → A[G°/X]` (`positive`) or
/// `Γ ⊢ J_{A,X} : A[G°/X] → A[G/X]`, by induction on the proper type `A`.
/// `Γ` must declare `alpha : O`.
pub fn ij_derivation(ctx: &Context, a: &TypeExpr, x: &str, g: &TypeExpr, positive: bool) -> Derivation {
    let gc = circ(g);
    let (from, to) = if positive { (g, &gc) } else { (&gc, g) };
    match a {
        TypeExpr::Var(y) if y == x => {
            if positive {
                // λx:G. λd:O. λy:(G → O → Z). (y)x alpha
                lam(ctx, "x", g.clone(), |c1, xv| {
                    lam(c1, "d", TypeExpr::O, |c2, _| {
                        let z = fresh_type_var(c2, &[g], "Z");
                        let zt = TypeExpr::var(z.clone());
                        let body = lam(c2, "y", TypeExpr::arrows([g.clone(), TypeExpr::O], zt), |c3, yv| {
                            arrow_e(arrow_e(ax(c3, yv), ax(c3, xv)), ax(c3, "alpha"))
                        });
                        forall_i(body, &z)
                    })
                })
            } else {
                // λx:G°. ((x)alpha)K1 with the pair eliminated at G
                lam(ctx, "x", gc.clone(), |c1, xv| {
                    let pair = forall_e(arrow_e(ax(c1, xv), ax(c1, "alpha")), g.clone());
                    let k1 = lam(c1, "x", g.clone(), |c2, a1| lam(c2, "y", TypeExpr::O, |c3, _| ax(c3, a1)));
                    arrow_e(pair, k1)
                })
            }
        }
        TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => lam(ctx, "x", a.clone(), ax),
        TypeExpr::Arrow(b, c) => {
            let dom = a.subst(from, x);
            let bdom = b.subst(to, x);
            lam(ctx, "x", dom, |c1, xv| {
                lam(c1, "y", bdom, |c2, yv| {
                    let inner = arrow_e(ij_derivation(c2, b, x, g, !positive), ax(c2, yv));
                    arrow_e(ij_derivation(c2, c, x, g, positive), arrow_e(ax(c2, xv), inner))
                })
            })
        }
        TypeExpr::Forall(h, b) => lam(ctx, "x", a.subst(from, x), |c1, xv| {
            let z = fresh_type_var(c1, &[a, g, &TypeExpr::var(x)], &h.0);
            let zt = TypeExpr::var(z.clone());
            let body = b.open(&zt);
            let app = arrow_e(ij_derivation(c1, &body, x, g, positive), forall_e(ax(c1, xv), zt));
            forall_i(app, &z)
        }),
    }
}

/// Builds and checks `α:O ⊢ I_{A,X} : ∀Y{A[Y/X] → A[Y°/X]}` and
/// `α:O ⊢ J_{A,X} : ∀Y{A[Y°/X] → A[Y/X]}` for a proper `A`.
pub fn check_ij_typing(a: &TypeExpr, x: &str) -> bool {
    ij_typings(a, x).is_some()
}

/// The two checked derivations of [`check_ij_typing`].
pub fn ij_typings(a: &TypeExpr, x: &str) -> Option<(Derivation, Derivation)> {
    if !crate::polarity::is_proper(a) {
        return None;
    }
    let ctx: Context = [("alpha".to_string(), TypeExpr::O)].into();
    let y = fresh_type_var(&ctx, &[a, &TypeExpr::var(x)], "Y");
    let yt = TypeExpr::var(y.clone());
    let di = forall_i(ij_derivation(&ctx, a, x, &yt, true), &y);
    let dj = forall_i(ij_derivation(&ctx, a, x, &yt, false), &y);
    let ti = TypeExpr::forall(&y, TypeExpr::arrow(a.subst(&yt, x), a.subst(&circ(&yt), x)));
    let tj = TypeExpr::forall(&y, TypeExpr::arrow(a.subst(&circ(&yt), x), a.subst(&yt, x)));
    let ok = |d: &Derivation, t: &Term, ty: &TypeExpr| check_derivation(d).is_ok() && d.subject() == t && d.ty() == ty;
    (ok(&di, &build_i(a, x), &ti) && ok(&dj, &build_j(a, x), &tj)).then_some((di, dj))
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("node {0:?} is not a head-variable quantifier elimination")]
    NotHeadElimination(Path),
    #[error("instantiated quantifier at {0:?} is improper")]
    Improper(Path),
    #[error("no derivation found for the rewritten term")]
    NoDerivation,
}

/// Adds `alpha : O` to every context.
fn with_alpha(d: &Derivation) -> Derivation {
    let mut context = d.context().clone();
    context.entry("alpha".into()).or_insert(TypeExpr::O);
    Derivation {
        conclusion: Judgment { context, subject: d.subject().clone(), ty: d.ty().clone() },
        rule: d.rule.clone(),
        premises: d.premises.iter().map(with_alpha).collect(),
    }
}

/// Recomputes the subject of a node from its premises.
fn resubject(mut d: Derivation) -> Derivation {
    d.conclusion.subject = match &d.rule {
        RuleTag::Ax => d.conclusion.subject,
        RuleTag::ArrowE => Term::app(d.premises[0].subject().clone(), d.premises[1].subject().clone()),
        RuleTag::ArrowI => {
            let p = &d.premises[0];
            let x = p.context().keys().find(|k| !d.conclusion.context.contains_key(*k)).expect("discharged variable");
            Term::lam(x.clone(), p.subject().clone())
        }
        RuleTag::ForallI { .. } | RuleTag::ForallE { .. } => d.premises[0].subject().clone(),
    };
    if let RuleTag::ForallE { variant, .. } = &mut d.rule {
        *variant = crate::typing::elim_variant(&d.conclusion.subject);
    }
    d
}

fn replace_node(d: &Derivation, path: &[usize], new: Derivation) -> Derivation {
    match path.split_first() {
        None => new,
        Some((&i, rest)) => {
            let mut d = d.clone();
            d.premises[i] = replace_node(&d.premises[i], rest, new);
            resubject(d)
        }
    }
}

/// Re-instantiates the head elimination at `node` with `G°`, wraps its
/// subject in `J_{A,X}` and returns the β-normal rewritten term with a
/// checked derivation in the context extended by `alpha : O`, together with
/// the explicit derivation of the wrapped (not yet normal) term.
pub fn rewrite_forall_e2(
    d: &Derivation,
    node: &[usize],
    budget: &SearchBudget,
) -> Result<(Term, Derivation, Derivation), WitnessError> {
    let bad = || WitnessError::NotHeadElimination(node.to_vec());
    let n = d.at_path(node).ok_or_else(bad)?;
    let RuleTag::ForallE { variant: 2, instantiated_with: g } = &n.rule else {
        return Err(bad());
    };
    let premise = with_alpha(&n.premises[0]);
    let TypeExpr::Forall(h, body) = premise.ty().clone() else {
        return Err(bad());
    };
    if !body.uses_bound(0) {
        return Err(WitnessError::Improper(node.to_vec()));
    }
    let ctx = premise.context().clone();
    let x = fresh_type_var(&ctx, &[&premise.ty().clone(), g], &h.0);
    let a = body.open(&TypeExpr::var(x.clone()));
    let lifted = forall_e(premise, circ(g));
    let wrapped_node = arrow_e(ij_derivation(&ctx, &a, &x, g, false), lifted);
    let wrapped = replace_node(&with_alpha(d), node, wrapped_node);
    debug_assert!(check_derivation(&wrapped).is_ok());
    let rewritten = beta_normalize(wrapped.subject(), DEFAULT_FUEL).result;
    let after = search_f_derivation(wrapped.context(), &rewritten, wrapped.ty(), budget)
        .derivation()
        .ok_or(WitnessError::NoDerivation)?;
    Ok((rewritten, after, wrapped))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTrace {
    pub original: Term,
    /// Contains `alpha`.
    pub rewritten: Term,
    /// `rewritten` with `alpha` replaced by `K1`.
    pub final_term: Term,
    /// Derivations of `original` and of `rewritten`.
    pub derivations: (Derivation, Derivation),
    /// Derivation of the `J`-wrapped term before normalization.
    pub wrapped: Derivation,
    /// Derivation of `final_term` at the target type.
    pub final_derivation: Derivation,
    pub used_node: Path,
}

impl WitnessTrace {
    pub fn to_json(&self) -> Value {
        json!({
            "original": print_term(&self.original),
            "rewritten": print_term(&self.rewritten),
            "final": print_term(&self.final_term),
            "used_node": self.used_node,
            "derivations": {
                "before": self.derivations.0.to_json(),
                "after": self.derivations.1.to_json(),
                "wrapped": self.wrapped.to_json(),
                "final": self.final_derivation.to_json(),
            },
        })
    }
}

/// `Γ ⊢ K1 : Bool`.
fn k1_bool(ctx: &Context) -> Derivation {
    let x = fresh_type_var(ctx, &[], "X");
    let xt = TypeExpr::var(x.clone());
    let d = lam(ctx, "x", xt.clone(), |c1, a| lam(c1, "y", xt.clone(), |c2, _| ax(c2, a)));
    forall_i(d, &x)
}

/// Replaces `alpha : O` by `K1 : Bool` throughout a derivation whose
/// conclusion does not mention `O`.
fn discharge_alpha(d: &Derivation) -> Derivation {
    let mut context = d.context().clone();
    context.remove("alpha");
    let context: Context = context.into_iter().map(|(k, v)| (k, v.subst_o(&bool_type()))).collect();
    if d.rule == RuleTag::Ax && d.subject() == &Term::alpha() {
        return k1_bool(&context);
    }
    let premises: Vec<Derivation> = d.premises.iter().map(discharge_alpha).collect();
    let rule = match &d.rule {
        RuleTag::ForallE { variant, instantiated_with } => {
            RuleTag::ForallE { variant: *variant, instantiated_with: instantiated_with.subst_o(&bool_type()) }
        }
        r => r.clone(),
    };
    let subject = d.subject().replace_consts(&|c| (*c == ConstTag::Alpha).then(one));
    Derivation::new(context, subject, d.ty().subst_o(&bool_type()), rule, premises)
}

/// Attempts to rewrite derivations of `⊢ t : D` into a λK inhabitant of `D`.
/// Head eliminations are tried outermost first; at most `max_derivations`
/// derivations of `t` are examined.
pub fn k_witness(dty: &TypeExpr, t: &Term, budget: &SearchBudget) -> Option<WitnessTrace> {
    let mut result = None;
    let mut seen = 0;
    for_each_derivation(&Context::new(), t, dty, budget, &mut |d| {
        seen += 1;
        let mut nodes: Vec<Path> =
            classify_forall_elims(d).into_iter().filter(|(_, v)| *v == 2).map(|(p, _)| p).collect();
        nodes.sort_by_key(|p| p.len());
        for node in nodes {
            if let Some(trace) = try_node(d, &node, dty, budget) {
                result = Some(trace);
                return ControlFlow::Break(());
            }
        }
        if seen >= 32 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    result
}

fn try_node(d: &Derivation, node: &Path, dty: &TypeExpr, budget: &SearchBudget) -> Option<WitnessTrace> {
    let (rewritten, after, wrapped) = rewrite_forall_e2(d, node, budget).ok()?;
    if !rewritten.contains_alpha() || check_derivation(&after).is_err() {
        return None;
    }
    let final_term = rewritten.replace_consts(&|c| (*c == ConstTag::Alpha).then(one));
    if !final_term.is_closed() || !is_beta_normal(&final_term) || final_term.vacuous_binder().is_none() {
        return None;
    }
    let mut final_derivation = discharge_alpha(&after);
    if check_derivation(&final_derivation).is_err() || final_derivation.ty() != dty {
        final_derivation = search_f_derivation(&Context::new(), &final_term, dty, budget).derivation()?;
    }
    Some(WitnessTrace {
        original: d.subject().clone(),
        rewritten,
        final_term,
        derivations: (d.clone(), after),
        wrapped,
        final_derivation,
        used_node: node.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{id_type, parse_term, parse_type};

    fn ty(s: &str) -> TypeExpr {
        parse_type(s).unwrap()
    }

    #[test]
    fn primed_terms() {
        assert_eq!(build_i_prime(&ty("Y"), "X"), id());
        assert_eq!(build_i_prime(&ty("X"), "X"), Term::opaque("U"));
        assert_eq!(build_j_prime(&ty("X"), "X"), Term::opaque("V"));
        assert_eq!(build_i_prime(&ty("X -> X"), "X"), parse_term("\\x y. @U (x (@V y))").unwrap());
    }

    #[test]
    fn concrete_terms() {
        assert_eq!(build_i(&ty("X"), "X"), parse_term("\\x d. <x, alpha>").unwrap());
        assert_eq!(build_j(&ty("X"), "X"), parse_term("\\x. x alpha K1").unwrap());
        assert_eq!(build_i(&ty("Y"), "X"), id());
    }

    #[test]
    fn ij_typings_hand_cases() {
        for a in ["X", "Y", "X -> X", "forall Y. (Y -> X) -> Y", "(X -> Y) -> X"] {
            assert!(check_ij_typing(&ty(a), "X"), "{a}");
        }
        let (di, _) = ij_typings(&ty("X"), "X").unwrap();
        assert_eq!(di.ty(), &ty("forall Y. Y -> O -> forall Z. (Y -> O -> Z) -> Z"));
    }

    #[test]
    fn witnesses_for_e_and_f() {
        let e = ty("forall X. (forall Y. (Id -> Y)) -> Id");
        let f = ty("forall X. (forall Y. (Y -> Id)) -> Id");
        for d in [e, f] {
            let t = parse_term("\\x. x id").unwrap();
            let trace = k_witness(&d, &t, &SearchBudget::default()).expect("witness");
            assert!(trace.rewritten.contains_alpha());
            assert!(!trace.final_term.is_lambda_i().unwrap());
            check_derivation(&trace.derivations.0).unwrap();
            check_derivation(&trace.derivations.1).unwrap();
            check_derivation(&trace.wrapped).unwrap();
            check_derivation(&trace.final_derivation).unwrap();
            assert_eq!(trace.final_derivation.ty(), &d);
        }
        assert!(k_witness(&id_type(), &id(), &SearchBudget::default()).is_none());
    }
}
