mod common;

use std::collections::BTreeSet;

use itypes::gen;
use itypes::inhabitants::{enumerate, enumerate_inhabitants};
use itypes::polarity::{erase_quantifiers, is_proper, polarity};
use itypes::reduction::{
    beta_eta_normalize, beta_normalize, contract_at, hat, is_e_good, measure_n, redex_paths, uv_step, Rules,
};
use itypes::syntax::{conj, Term, TypeExpr};
use itypes::typing::build::{ax, pair, project};
use itypes::typing::{check_derivation, check_simple, infer_simple, search_f_derivation, Context, SearchBudget};
use itypes::witness::check_ij_typing;
use itypes::ConstTag;
use proptest::prelude::*;

use common::{count_long_terms, polarity_oracle, rng, seeds};

fn uv_only() -> Rules {
    Rules { beta: false, uv: true }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn lambda_i_and_free_variables_survive_beta_eta(seed in seeds()) {
        let t = gen::lambda_i_term(&mut rng(seed), 16, &["a", "b"]);
        let out = beta_eta_normalize(&t, 2_000);
        prop_assume!(!out.exhausted);
        prop_assert_eq!(out.result.is_lambda_i(), Ok(true));
        prop_assert_eq!(out.result.free_vars(), t.free_vars());
    }

    #[test]
    fn uv_steps_decrease_the_measure(seed in seeds()) {
        let (t, _) = gen::e_good_term(&mut rng(seed), 14);
        for p in redex_paths(&t, uv_only()) {
            let next = contract_at(&t, &p, uv_only()).unwrap();
            let atomic = matches!(
                t.at_path(&p),
                Some(Term::App(c, _)) if matches!(&**c, Term::Const(ConstTag::U(a, _) | ConstTag::V(a, _)) if a.is_atom())
            );
            if atomic {
                prop_assert_eq!(measure_n(&next), measure_n(&t));
                prop_assert!(next.size() < t.size());
            } else {
                prop_assert!(measure_n(&next) < measure_n(&t));
            }
        }
    }

    #[test]
    fn uv_reduction_keeps_terms_good(seed in seeds()) {
        let (mut t, e) = gen::e_good_term(&mut rng(seed), 14);
        for _ in 0..60 {
            let Some(next) = uv_step(&t) else { break };
            prop_assert!(is_e_good(&next, &e), "{} -> {}", t, next);
            t = next;
        }
    }

    #[test]
    fn hat_commutes_with_substitution(seed in seeds()) {
        let mut r = rng(seed);
        let (u, _) = gen::e_good_term(&mut r, 12);
        let (v, _) = gen::e_good_term(&mut r, 6);
        prop_assert_eq!(hat(&u.subst(&v, "a")), hat(&u).subst(&hat(&v), "a"));
    }

    #[test]
    fn hat_simulates_each_step(seed in seeds()) {
        let (t, _) = gen::e_good_term(&mut rng(seed), 12);
        for p in redex_paths(&t, Rules::UV) {
            let next = contract_at(&t, &p, Rules::UV).unwrap();
            let a = beta_normalize(&hat(&t), 5_000);
            let b = beta_normalize(&hat(&next), 5_000);
            if a.exhausted || b.exhausted {
                continue;
            }
            prop_assert_eq!(a.result, b.result);
        }
    }

    #[test]
    fn reduction_preserves_types(seed in seeds()) {
        let mut r = rng(seed);
        let (t, (ctx, a)) = loop {
            let t = gen::term(&mut r, 10, &["a", "b"]);
            if let Some(typed) = infer_simple(&t) {
                break (t, typed);
            }
        };
        let out = beta_normalize(&t, 2_000);
        prop_assert!(!out.exhausted);
        prop_assert!(check_simple(&ctx, &out.result, &a));
        let d = search_f_derivation(&ctx, &out.result, &a, &SearchBudget::default()).derivation();
        prop_assert!(d.is_some(), "{} : {}", out.result, a);
        prop_assert!(check_derivation(&d.unwrap()).is_ok());
    }

    #[test]
    fn polarity_matches_sign_count(seed in seeds()) {
        let a = gen::type_expr(&mut rng(seed), 8, true);
        let p = polarity(&a);
        prop_assert_eq!((p.in_pos, p.in_neg), polarity_oracle(&a));
        prop_assert_eq!(p.negative_quantifier_paths.is_empty() && p.improper_quantifier_paths.is_empty(), p.in_pos);
    }

    #[test]
    fn pairs_and_projections_type_check(seed in seeds()) {
        let mut r = rng(seed);
        let a = gen::type_expr(&mut r, 4, true);
        let b = gen::type_expr(&mut r, 4, true);
        prop_assume!(is_proper(&a) && is_proper(&b));
        let ctx: Context = [("a".to_string(), a.clone()), ("b".to_string(), b.clone())].into_iter().collect();
        let p = pair(&ax(&ctx, "a"), &ax(&ctx, "b"));
        prop_assert!(check_derivation(&p).is_ok());
        prop_assert_eq!(p.ty(), &conj(&[a.clone(), b.clone()]));
        for (first, want) in [(true, "a"), (false, "b")] {
            let d = project(&p, first);
            prop_assert!(check_derivation(&d).is_ok());
            prop_assert_eq!(d.ty(), if first { &a } else { &b });
            prop_assert_eq!(beta_eta_normalize(d.subject(), 1_000).result, Term::var(want));
        }
    }

    #[test]
    fn positive_inhabitants_type_in_the_simple_system(seed in seeds()) {
        let d = gen::closed_proper_type(&mut rng(seed), 7);
        prop_assume!(polarity(&d).in_pos);
        let erased = erase_quantifiers(&d);
        for (t, der) in enumerate_inhabitants(&d, 10, &SearchBudget::default()) {
            prop_assert!(check_derivation(&der).is_ok());
            prop_assert!(check_simple(&Context::new(), &t, &erased), "{} : {}", t, erased);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enumeration_counts_match_the_simple_enumerator(seed in seeds()) {
        let a = gen::type_expr(&mut rng(seed), 5, false);
        let bound = 11;
        let found = enumerate(&a, bound, &SearchBudget::default(), false);
        let expected: u64 = count_long_terms(&[], &a, bound).iter().sum();
        prop_assert!(!found.truncated);
        prop_assert_eq!(found.inhabitants.len() as u64, expected, "{}", a);
    }

    #[test]
    fn larger_bounds_keep_inhabitants(seed in seeds()) {
        let d = gen::closed_proper_type(&mut rng(seed), 6);
        let b = SearchBudget::default();
        let small: BTreeSet<Term> = enumerate_inhabitants(&d, 8, &b).into_iter().map(|p| p.0).collect();
        let large: BTreeSet<Term> = enumerate_inhabitants(&d, 11, &b).into_iter().map(|p| p.0).collect();
        prop_assert!(small.is_subset(&large), "{}", d);
    }

    #[test]
    fn inhabitants_recheck_at_their_type(seed in seeds()) {
        let d = gen::closed_proper_type(&mut rng(seed), 7);
        for (t, der) in enumerate_inhabitants(&d, 10, &SearchBudget::default()) {
            prop_assert!(check_derivation(&der).is_ok());
            prop_assert_eq!(der.ty(), &d);
            prop_assert_eq!(&beta_eta_normalize(der.subject(), 1_000).result, &t);
            if der.subject() != &t {
                // only η-contraction can lose the type
                prop_assert!(!search_f_derivation(&Context::new(), &t, &d, &SearchBudget::default()).is_found());
            }
        }
    }

    #[test]
    fn i_and_j_type_for_proper_types(seed in seeds()) {
        let a: TypeExpr = gen::type_expr(&mut rng(seed), 6, true);
        prop_assume!(is_proper(&a));
        prop_assert!(check_ij_typing(&a, "X"), "{}", a);
    }
}
