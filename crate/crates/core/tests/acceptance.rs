mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itypes::inhabitants::{
    build_binf, build_bn, build_ti, build_tij, classify_itype, classify_with, enumerate_inhabitants, sweep_small_types,
    itype_shape, Order, Verdict,
};
use itypes::polarity::{erase_quantifiers, polarity};
use itypes::reduction::{beta_eta_normalize, DEFAULT_FUEL};
use itypes::selftest::{run_golden, run_selftest, SelftestConfig, GOLDENS};
use itypes::syntax::{bool_type, church, ent_type, id, id_type, one, zero};
use itypes::typing::{check_derivation, check_simple, search_f_derivation, Context, SearchBudget, SearchOutcome};
use itypes::witness::{check_ij_typing, k_witness};
use itypes::{gen, parse_term, parse_type, print_term, print_type, Term, TypeExpr};

type Check = Result<String, String>;
type Criterion = (usize, &'static str, fn() -> Check);

const E: &str = "forall X. (forall Y. (Id -> Y)) -> Id";
const F: &str = "forall X. (forall Y. (Y -> Id)) -> Id";
const T43: &str = "forall X. ((forall Y. ((Y -> forall Z. ((X -> Y -> Z) -> Z)) -> X) -> X) -> X) -> X -> X";
const T43_TERM: &str = "\\x y. x (\\z. x (\\u. z (\\v w. w (u (\\d. <y, v>)) v)))";
const T43_STAR: &str = "((((Y -> (X -> Y -> Z) -> Z) -> X) -> X) -> X) -> X -> X";

fn ty(s: &str) -> TypeExpr {
    parse_type(s).unwrap()
}

fn tm(s: &str) -> Term {
    parse_term(s).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("{what} took {:?}", start.elapsed()))
}

fn set(ts: impl IntoIterator<Item = Term>) -> BTreeSet<Term> {
    ts.into_iter().collect()
}

fn inhabitants(d: &TypeExpr, bound: usize) -> BTreeSet<Term> {
    set(enumerate_inhabitants(d, bound, &SearchBudget::default()).into_iter().map(|p| p.0))
}

fn nf(t: &Term) -> Term {
    beta_eta_normalize(t, DEFAULT_FUEL).result
}

fn inhabitant_goldens() -> Check {
    let cases: [(&str, TypeExpr, BTreeSet<Term>); 3] = [
        ("Id", id_type(), set([id()])),
        ("Bool", bool_type(), set([zero(), one()])),
        // #n has size 3 + 2n in η-long form
        ("Ent", ent_type(), set((0..=10).map(|n| nf(&church(n))))),
    ];
    for (name, d, want) in cases {
        let start = Instant::now();
        let got = inhabitants(&d, 24);
        within(start, Duration::from_secs(10), name)?;
        ensure(got == want, || format!("Λ({name}) = {:?}", got.iter().map(print_term).collect::<Vec<_>>()))?;
    }
    Ok("Id, Bool, Ent at bound 24".into())
}

fn worked_examples() -> Check {
    let start = Instant::now();
    let b = SearchBudget::default();
    for (name, d, k) in [("E", ty(E), tm("\\x. x id K0")), ("F", ty(F), tm("\\x. x <K0, id>"))] {
        let r = classify_itype(&d, 15, &b);
        ensure(matches!(r.verdict, Verdict::NotIType { .. }), || format!("{name}: {}", r.verdict.name()))?;
        let ks: BTreeSet<Term> = r.inhabitants.iter().filter(|i| !i.is_lambda_i).map(|i| nf(&i.term)).collect();
        ensure(ks.contains(&nf(&k)), || format!("{name}: {} not among the λK inhabitants", print_term(&k)))?;
        let trace = k_witness(&d, &tm("\\x. x id"), &b).ok_or(format!("{name}: no witness from λx(x)id"))?;
        for der in [&trace.derivations.0, &trace.derivations.1, &trace.wrapped, &trace.final_derivation] {
            check_derivation(der).map_err(|e| format!("{name}: {e}"))?;
        }
        ensure(trace.final_term.vacuous_binder().is_some(), || format!("{name}: witness is λI"))?;
    }
    within(start, Duration::from_secs(30), "E/F")?;
    Ok(format!("E and F not I-types, witnesses checked ({:?})", start.elapsed()))
}

fn ij_suite() -> Check {
    let start = Instant::now();
    let mut rng = common::rng(310);
    let mut types = vec![ty("X"), ty("Y"), ty("X -> X")];
    while types.len() < 53 {
        let a = gen::type_expr(&mut rng, 8, true);
        if itypes::polarity::is_proper(&a) && a.size() <= 8 {
            types.push(a);
        }
    }
    for a in &types {
        ensure(check_ij_typing(a, "X"), || format!("I/J typing fails for {}", print_type(a)))?;
    }
    within(start, Duration::from_secs(60), "I/J suite")?;
    Ok(format!("{} types ({:?})", types.len(), start.elapsed()))
}

fn polarity_consistency() -> Check {
    let start = Instant::now();
    let b = SearchBudget::default();
    let mut rng = common::rng(320);
    let (mut demonstrable, mut lambda_k, mut witnessed, mut itypes) = (0, 0, 0, 0);
    let mut corpus = vec![ty(E), ty(F)];
    corpus.extend((0..198).map(|_| gen::closed_proper_type(&mut rng, 8)));
    for d in corpus {
        let r = classify_with(&d, 12, &b, true);
        let has_k = r.inhabitants.iter().any(|i| !i.is_lambda_i);
        demonstrable += usize::from(!r.inhabitants.is_empty());
        lambda_k += usize::from(has_k);
        ensure(!(has_k && r.is_itype()), || format!("{} has a λK inhabitant yet is an I-type", print_type(&d)))?;
        if let Verdict::NotITypeByPolarity { .. } = r.verdict {
            return Err(format!("{}: λI inhabitants outside ∀⁺ but no witness", print_type(&d)));
        }
        if let Some(cert) = &r.certificate {
            witnessed += 1;
            check_derivation(&cert.final_derivation).map_err(|e| e.to_string())?;
        }
        if r.is_itype() {
            itypes += 1;
            for i in &r.inhabitants {
                ensure(k_witness(&d, &i.term, &b).is_none(), || format!("{} is an I-type with a witness", print_type(&d)))?;
            }
        }
    }
    Ok(format!(
        "200 types, {demonstrable} demonstrable, {lambda_k} with λK inhabitants, {witnessed} witnessed, {itypes} I-types, 0 violations ({:?})",
        start.elapsed()
    ))
}

fn orders() -> Check {
    let start = Instant::now();
    let b = SearchBudget::default();
    let b2 = classify_itype(&build_bn(2), 40, &b);
    ensure(b2.is_itype() && b2.order == Order::Exact(2), || format!("B_2: {} {:?}", b2.verdict.name(), b2.order))?;
    let got = set(b2.inhabitants.iter().map(|i| i.term.clone()));
    ensure(got == set([build_ti(2, 1), build_ti(2, 2)]), || "B_2 inhabitants differ from T_1, T_2".into())?;
    let b3 = classify_itype(&build_bn(3), 48, &b);
    ensure(b3.is_itype() && b3.order == Order::Exact(3), || format!("B_3: {} {:?}", b3.verdict.name(), b3.order))?;
    let tij: BTreeSet<Term> = (0..12).flat_map(|i| (0..12).map(move |j| build_tij(i, j))).collect();
    let small = inhabitants(&build_binf(), 20);
    let large = inhabitants(&build_binf(), 28);
    ensure(small.len() < large.len() && small.is_subset(&large), || "B_∞ sets do not grow".into())?;
    for t in &large {
        ensure(t.vacuous_binder().is_none() && tij.contains(t), || format!("B_∞ inhabitant {}", print_term(t)))?;
    }
    within(start, Duration::from_secs(120), "orders")?;
    Ok(format!("B_2 = 2, B_3 = 3, B_∞ {} -> {} ({:?})", small.len(), large.len(), start.elapsed()))
}

fn sweeps() -> Check {
    let start = Instant::now();
    let b = SearchBudget::default();
    let one = sweep_small_types(1, 9, 24, &b);
    let ones: Vec<&TypeExpr> = one.iter().filter(|e| e.report.is_itype()).map(|e| &e.report.ty).collect();
    ensure(ones == vec![&id_type()], || format!("one-quantifier I-types: {ones:?}"))?;
    let two = sweep_small_types(2, 9, 24, &b);
    for e in one.iter().chain(&two).filter(|e| e.report.is_itype()) {
        ensure(e.report.inhabitants.len() <= 1, || format!("{} has several inhabitants", print_type(&e.report.ty)))?;
    }
    for e in two.iter().filter(|e| e.report.is_itype()) {
        ensure(itype_shape(&e.report.ty).is_some(), || format!("{} matches no shape", print_type(&e.report.ty)))?;
    }
    for line in GOLDENS.lines().filter(|l| l.contains("\"kind\":\"sweep\"")) {
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        run_golden(&v, &b).map_err(|e| format!("{}: {e}", v["name"]))?;
    }
    within(start, Duration::from_secs(600), "sweeps")?;
    let count = two.iter().filter(|e| e.report.is_itype()).count();
    Ok(format!("{} + {} types, {count} two-quantifier I-types, fixtures match ({:?})", one.len(), two.len(), start.elapsed()))
}

fn erasure() -> Check {
    let start = Instant::now();
    let b = SearchBudget::default();
    let mut rng = common::rng(420);
    let mut pairs = 0;
    let mut corpus: Vec<TypeExpr> = vec![id_type(), bool_type(), ent_type(), build_bn(2), build_binf()];
    while corpus.len() < 80 {
        let d = gen::closed_proper_type(&mut rng, 8);
        if polarity(&d).in_pos {
            corpus.push(d);
        }
    }
    for d in &corpus {
        let erased = erase_quantifiers(d);
        for (t, _) in enumerate_inhabitants(d, 12, &b) {
            pairs += 1;
            ensure(check_simple(&Context::new(), &t, &erased), || format!("{} : {} fails in S", print_term(&t), print_type(&erased)))?;
        }
    }
    let t = tm(T43_TERM);
    ensure(check_simple(&Context::new(), &t, &ty(T43_STAR)), || "t does not type in S at T*".into())?;
    let out = search_f_derivation(&Context::new(), &t, &ty(T43), &SearchBudget::with_inst_size(8));
    ensure(out == SearchOutcome::NotFound, || format!("search on t : T gave {out:?}"))?;
    within(start, Duration::from_secs(60), "erasure")?;
    Ok(format!("{pairs} pairs typed in S; t : T* in S, t : T not found ({:?})", start.elapsed()))
}

fn property_suites() -> Check {
    let start = Instant::now();
    let config = SelftestConfig { cases: 500, filter: Some(String::new()), ..SelftestConfig::default() };
    let results = run_selftest("", &config);
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| format!("{}: {}", r.name, r.detail)).collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    Ok(format!("{} suites x 500 cases ({:?})", results.len(), start.elapsed()))
}

fn quantitative(results: &[(usize, Check)]) -> Check {
    let id = classify_itype(&id_type(), 24, &SearchBudget::default());
    ensure(id.order == Order::Exact(1), || format!("Id order {:?}", id.order))?;
    for (n, r) in results {
        if [1, 5, 6].contains(n) {
            r.as_ref().map_err(|e| format!("criterion {n}: {e}"))?;
        }
    }
    Ok("Id = 1, B_2 = 2, B_3 = 3, B_∞ infinite, sweep I-types unique".into())
}

fn main() -> ExitCode {
    let checks: [Criterion; 8] = [
        (1, "inhabitant goldens", inhabitant_goldens),
        (2, "worked examples E and F", worked_examples),
        (3, "I/J typing", ij_suite),
        (4, "λI inhabitants outside ∀⁺", polarity_consistency),
        (5, "orders of B_2, B_3, B_∞", orders),
        (6, "small-type sweeps", sweeps),
        (7, "erasure and the counterexample", erasure),
        (8, "property suites", property_suites),
    ];
    let mut results = Vec::new();
    let mut ok = true;
    for (n, name, f) in checks {
        let r = f();
        report(n, name, &r);
        ok &= r.is_ok();
        results.push((n, r));
    }
    let r = quantitative(&results);
    report(9, "quantitative results", &r);
    ok &= r.is_ok();
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn report(n: usize, name: &str, r: &Check) {
    match r {
        Ok(detail) => println!("criterion {n} PASS  {name}: {detail}"),
        Err(e) => println!("criterion {n} FAIL  {name}: {e}"),
    }
}
