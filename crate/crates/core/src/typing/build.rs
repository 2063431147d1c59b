//! Rule-by-rule derivation constructors. They compute conclusions from their
//! premises and panic when a premise has the wrong shape; results should
//! still go through `check_derivation`.

use super::derivation::{elim_variant, Context, Derivation, RuleTag};
use crate::syntax::{fresh_name, Term, TypeExpr};

/// `Γ ⊢ x : Γ(x)`; `key` may also be `alpha` or `@n`.
pub fn ax(ctx: &Context, key: &str) -> Derivation {
    let ty = ctx.get(key).unwrap_or_else(|| panic!("{key} is not in the context")).clone();
    Derivation::new(ctx.clone(), super::derivation::key_term(key), ty, RuleTag::Ax, vec![])
}

/// Context extended with `x : a`.
pub fn extend(ctx: &Context, x: &str, a: TypeExpr) -> Context {
    let mut c = ctx.clone();
    c.insert(x.to_string(), a);
    c
}

/// Term variable based on `base` not declared in `ctx`.
pub fn fresh_var(ctx: &Context, base: &str) -> String {
    fresh_name(base, |n| ctx.contains_key(n) || matches!(n, "alpha" | "id" | "K0" | "K1" | "U" | "V"))
}

/// Type variable based on `base` free in neither `ctx` nor `avoid`.
pub fn fresh_type_var(ctx: &Context, avoid: &[&TypeExpr], base: &str) -> String {
    fresh_name(base, |n| {
        n == "O" || ctx.values().chain(avoid.iter().copied()).any(|a| a.has_free_var(n))
    })
}

/// `(→i)` discharging `x : dom` from the premise context.
pub fn arrow_i(ctx: &Context, x: &str, dom: TypeExpr, premise: Derivation) -> Derivation {
    let subject = Term::lam(x, premise.subject().clone());
    let ty = TypeExpr::arrow(dom, premise.ty().clone());
    Derivation::new(ctx.clone(), subject, ty, RuleTag::ArrowI, vec![premise])
}

pub fn arrow_e(fun: Derivation, arg: Derivation) -> Derivation {
    let TypeExpr::Arrow(_, cod) = fun.ty() else {
        panic!("function premise must have an arrow type")
    };
    let ty = (**cod).clone();
    let subject = Term::app(fun.subject().clone(), arg.subject().clone());
    Derivation::new(fun.context().clone(), subject, ty, RuleTag::ArrowE, vec![fun, arg])
}

pub fn forall_i(premise: Derivation, eigen: &str) -> Derivation {
    let ty = TypeExpr::forall(eigen, premise.ty().clone());
    let rule = RuleTag::ForallI { eigen: eigen.to_string() };
    Derivation::new(premise.context().clone(), premise.subject().clone(), ty, rule, vec![premise])
}

pub fn forall_e(premise: Derivation, with: TypeExpr) -> Derivation {
    let ty = premise.ty().instantiate(&with).expect("premise must have a quantified type");
    let rule = RuleTag::ForallE { variant: elim_variant(premise.subject()), instantiated_with: with };
    Derivation::new(premise.context().clone(), premise.subject().clone(), ty, rule, vec![premise])
}

/// `Γ ⊢ λx t : a → b` where `body` builds the premise in the extended context.
pub fn lam(ctx: &Context, base: &str, dom: TypeExpr, body: impl FnOnce(&Context, &str) -> Derivation) -> Derivation {
    let x = fresh_var(ctx, base);
    let inner = extend(ctx, &x, dom.clone());
    let p = body(&inner, &x);
    arrow_i(ctx, &x, dom, p)
}

/// Adds `x : a` to every context of `d`.
pub fn weaken(d: &Derivation, x: &str, a: &TypeExpr) -> Derivation {
    Derivation {
        conclusion: super::derivation::Judgment {
            context: extend(d.context(), x, a.clone()),
            subject: d.subject().clone(),
            ty: d.ty().clone(),
        },
        rule: d.rule.clone(),
        premises: d.premises.iter().map(|p| weaken(p, x, a)).collect(),
    }
}

/// Term variable declared in no context of any of `ds`.
pub fn fresh_var_in(ds: &[&Derivation], base: &str) -> String {
    let mut keys = Context::new();
    for d in ds {
        d.visit(&mut |_, n| keys.extend(n.context().iter().map(|(k, v)| (k.clone(), v.clone()))));
    }
    fresh_var(&keys, base)
}

/// `Γ ⊢ λaλb a : a → b → a` (the term `K1`), or `λaλb b : a → b → b` (`K0`).
pub fn projection(ctx: &Context, a: &TypeExpr, b: &TypeExpr, first: bool) -> Derivation {
    lam(ctx, "x", a.clone(), |c1, x| {
        lam(c1, "y", b.clone(), |c2, y| ax(c2, if first { x } else { y }))
    })
}

/// From `Γ ⊢ u : A` and `Γ ⊢ v : B`, `Γ ⊢ <u, v> : A ∧ B`.
pub fn pair(du: &Derivation, dv: &Derivation) -> Derivation {
    let ctx = du.context().clone();
    let (a, b) = (du.ty().clone(), dv.ty().clone());
    let z = fresh_type_var(&ctx, &[&a, &b], "Z");
    let zt = TypeExpr::var(z.clone());
    let y = fresh_var_in(&[du, dv], "y");
    let dom = TypeExpr::arrows([a, b], zt);
    let body = arrow_e(
        arrow_e(ax(&extend(&ctx, &y, dom.clone()), &y), weaken(du, &y, &dom)),
        weaken(dv, &y, &dom),
    );
    forall_i(arrow_i(&ctx, &y, dom, body), &z)
}

/// From `Γ ⊢ t : A ∧ B`, `Γ ⊢ (t)K1 : A` (`first`) or `Γ ⊢ (t)K0 : B`.
pub fn project(dt: &Derivation, first: bool) -> Derivation {
    let (parts, _) = match dt.ty() {
        TypeExpr::Forall(_, body) => body.split_arrows(),
        _ => panic!("premise must have a conjunction type"),
    };
    let (a, b) = match parts[0].split_arrows() {
        (ab, _) if ab.len() == 2 => (ab[0].clone(), ab[1].clone()),
        _ => panic!("premise must have a binary conjunction type"),
    };
    let target = if first { a.clone() } else { b.clone() };
    let inst = forall_e(dt.clone(), target);
    arrow_e(inst, projection(dt.context(), &a, &b, first))
}
