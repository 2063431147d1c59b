use super::*;
use crate::syntax::{bool_type, church, ent_type, id, id_type, one, parse_term, parse_type, print_term};

fn t(s: &str) -> Term {
    parse_term(s).unwrap()
}

fn ty(s: &str) -> TypeExpr {
    parse_type(s).unwrap()
}

fn found(t: &Term, a: &TypeExpr) -> Derivation {
    let d = search_f_derivation(&Context::new(), t, a, &SearchBudget::default())
        .derivation()
        .unwrap_or_else(|| panic!("no derivation for {}", print_term(t)));
    check_derivation(&d).unwrap();
    d
}

const E: &str = "forall X. (forall Y. (Id -> Y)) -> Id";
const T43: &str = "forall X. ((forall Y. ((Y -> forall Z. ((X -> Y -> Z) -> Z)) -> X) -> X) -> X) -> X -> X";
const T43_TERM: &str = "\\x y. x (\\z. x (\\u. z (\\v w. w (u (\\d. <y, v>)) v)))";

#[test]
fn identity_and_numerals() {
    let d = found(&id(), &id_type());
    assert!(!uses_forall_elim(&d));
    assert!(classify_forall_elims(&d).is_empty());
    for n in 0..3 {
        found(&church(n), &ent_type());
    }
    assert!(!uses_forall_elim(&found(&one(), &bool_type())));
}

#[test]
fn e_derivation_has_one_head_elimination() {
    let d = found(&t("\\x. x id"), &ty(E));
    assert!(uses_forall_elim(&d));
    let elims = classify_forall_elims(&d);
    assert_eq!(elims.iter().filter(|(_, v)| *v == 2).count(), 1, "{elims:?}");
}

#[test]
fn untypable_terms() {
    let r = search_f_derivation(&Context::new(), &t("\\x. x x"), &id_type(), &SearchBudget::default());
    assert_eq!(r, SearchOutcome::NotFound);
    let r = search_f_derivation(&Context::new(), &one(), &id_type(), &SearchBudget::default());
    assert_eq!(r, SearchOutcome::NotFound);
}

#[test]
fn counterexample_term_is_not_f_typable() {
    let r = search_f_derivation(&Context::new(), &t(T43_TERM), &ty(T43), &SearchBudget::with_inst_size(8));
    assert_eq!(r, SearchOutcome::NotFound);
}

#[test]
fn bad_axiom_and_generalization() {
    let ctx: Context = [("x".to_string(), ty("A"))].into();
    let ax = Derivation::new(ctx.clone(), t("x"), ty("B"), RuleTag::Ax, vec![]);
    assert!(check_derivation(&ax).is_err());
    let good = Derivation::new(ctx.clone(), t("x"), ty("A"), RuleTag::Ax, vec![]);
    check_derivation(&good).unwrap();
    let gen = Derivation::new(
        ctx,
        t("x"),
        ty("forall A. A"),
        RuleTag::ForallI { eigen: "A".into() },
        vec![good],
    );
    let err = check_derivation(&gen).unwrap_err();
    assert_eq!(err.path, Vec::<usize>::new());
}

#[test]
fn error_reports_path() {
    let mut d = found(&id(), &id_type());
    d.premises[0].premises[0].conclusion.ty = ty("Q");
    assert_eq!(check_derivation(&d).unwrap_err().path, vec![0]);
}

#[test]
fn expansion() {
    let ctx: Context = [("x".to_string(), id_type())].into();
    let e = eta_expand(&t("x"), &ctx, &ty("X -> X"), &SearchBudget::default()).unwrap();
    assert_eq!(e, t("\\y. x y"));
    assert_eq!(eta_expand(&id(), &Context::new(), &id_type(), &SearchBudget::default()).unwrap(), id());
    let s = crate::syntax::parse_type(
        "((((Y -> (X -> Y -> Z) -> Z) -> X) -> X) -> X) -> X -> X",
    )
    .unwrap();
    let tt = t(T43_TERM);
    assert!(check_simple(&Context::new(), &tt, &s));
    assert_eq!(eta_expand(&tt, &Context::new(), &s, &SearchBudget::default()).unwrap(), tt);
}

#[test]
fn simple_system() {
    assert_eq!(infer_simple(&id()).unwrap().1, ty("X -> X"));
    assert!(infer_simple(&t("\\x. x x")).is_none());
    let (ctx, a) = infer_simple(&t("f x")).unwrap();
    assert_eq!(a, ty("X"));
    assert_eq!(ctx["f"], ty("Y -> X"));
    assert!(!check_simple(&Context::new(), &id(), &ty("X -> Y")));
}

#[test]
fn context_hole() {
    let big = t("\\x. z");
    assert_eq!(replace_in_context_hole(&big, &[0], &t("x")).unwrap(), t("\\x. x"));
    assert_eq!(replace_in_context_hole(&big, &[], &t("x")).unwrap(), t("x"));
    assert!(replace_in_context_hole(&big, &[1], &t("x")).is_err());
}

#[test]
fn generation_of_numerals() {
    let mut terms = std::collections::BTreeSet::new();
    generate_long_terms(&Context::new(), &ent_type(), 9, &SearchBudget::default(), &mut |d| {
        check_derivation(d).unwrap();
        terms.insert(d.subject().clone());
        ControlFlow::Continue(())
    });
    let expect: std::collections::BTreeSet<Term> = (0..4).map(church).collect();
    assert_eq!(terms, expect);
}
