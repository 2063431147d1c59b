//! Goldens and seeded property checks runnable from the command line.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use crate::inhabitants::{classify_itype, enumerate_inhabitants, sweep_small_types, Order};
use crate::polarity::{erase_quantifiers, is_proper, polarity};
use crate::reduction::{
    beta_eta_normalize, beta_normalize, contract_at, hat, is_e_good, measure_n, redex_paths, uv_step, Rules,
    DEFAULT_FUEL,
};
use crate::syntax::{parse_term, parse_type, print_term, print_type, ConstTag, Term, TypeExpr};
use crate::typing::{check_derivation, check_simple, infer_simple, search_f_derivation, Context, SearchBudget, SearchOutcome};
use crate::witness::{check_ij_typing, k_witness};
use crate::gen;

/// The committed goldens, one JSON object per line.
pub const GOLDENS: &str = include_str!("../goldens/goldens.jsonl");

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "passed": self.passed, "detail": self.detail, "ms": self.elapsed.as_millis() as u64 })
    }
}

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    /// Random cases per property check.
    pub cases: usize,
    pub seed: u64,
    /// Only checks whose name contains this string.
    pub filter: Option<String>,
    pub budget: SearchBudget,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { cases: 100, seed: 2024, filter: None, budget: SearchBudget::default() }
    }
}

type Property = fn(&mut StdRng, usize, &SearchBudget) -> Result<(), String>;

/// Named property checks.
pub const PROPERTIES: [(&str, Property); 9] = [
    ("lambda-i-preservation", prop_lambda_i_preservation),
    ("n-measure-decrease", prop_n_measure),
    ("e-good-preservation", prop_e_good_preservation),
    ("hat-substitution", prop_hat_substitution),
    ("hat-simulation", prop_hat_simulation),
    ("subject-reduction", prop_subject_reduction),
    ("ij-typing", prop_ij_typing),
    ("erasure-typing", prop_erasure_typing),
    ("witness-consistency", prop_witness_consistency),
];

/// Runs every golden of `goldens` (JSON lines) and every property check
/// whose name passes the filter.
pub fn run_selftest(goldens: &str, config: &SelftestConfig) -> Vec<CheckResult> {
    let keep = |name: &str| config.filter.as_deref().is_none_or(|f| name.contains(f));
    let mut out = Vec::new();
    for (i, line) in goldens.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let start = Instant::now();
        let (name, result) = match serde_json::from_str::<Value>(line) {
            Ok(v) => {
                let name = v["name"].as_str().map(String::from).unwrap_or_else(|| format!("golden-line-{}", i + 1));
                if !keep(&name) {
                    continue;
                }
                (name, run_golden(&v, &config.budget))
            }
            Err(e) => (format!("golden-line-{}", i + 1), Err(format!("malformed golden: {e}"))),
        };
        out.push(finish(name, result, start));
    }
    for (name, prop) in PROPERTIES {
        if !keep(name) {
            continue;
        }
        let start = Instant::now();
        let mut rng = StdRng::seed_from_u64(config.seed);
        out.push(finish(name.to_string(), prop(&mut rng, config.cases, &config.budget), start));
    }
    out
}

fn finish(name: String, result: Result<(), String>, start: Instant) -> CheckResult {
    let (passed, detail) = match result {
        Ok(()) => (true, String::new()),
        Err(e) => (false, e),
    };
    CheckResult { name, passed, detail, elapsed: start.elapsed() }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a str, String> {
    v[key].as_str().ok_or_else(|| format!("missing string field `{key}`"))
}

fn ty(v: &Value, key: &str) -> Result<TypeExpr, String> {
    parse_type(field(v, key)?).map_err(|e| e.to_string())
}

fn term(v: &Value, key: &str) -> Result<Term, String> {
    parse_term(field(v, key)?).map_err(|e| e.to_string())
}

fn terms(v: &Value, key: &str) -> Result<BTreeSet<Term>, String> {
    v[key]
        .as_array()
        .ok_or_else(|| format!("missing array field `{key}`"))?
        .iter()
        .map(|s| parse_term(s.as_str().unwrap_or_default()).map_err(|e| e.to_string()))
        .map(|t| t.map(|t| beta_eta_normalize(&t, DEFAULT_FUEL).result))
        .collect()
}

fn bound(v: &Value, key: &str, default: usize) -> usize {
    v[key].as_u64().map_or(default, |n| n as usize)
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn expect_set(what: &str, got: BTreeSet<Term>, want: BTreeSet<Term>) -> Result<(), String> {
    let show = |ts: &BTreeSet<Term>| ts.iter().map(print_term).collect::<Vec<_>>();
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {:?}, expected {:?}", show(&got), show(&want)))
    }
}

/// Evaluates one golden record.
pub fn run_golden(v: &Value, budget: &SearchBudget) -> Result<(), String> {
    match field(v, "kind")? {
        "normalize" => {
            let nf = beta_eta_normalize(&term(v, "term")?, DEFAULT_FUEL).result;
            let want = beta_eta_normalize(&term(v, "expect")?, DEFAULT_FUEL).result;
            expect_eq("normal form", print_term(&nf), print_term(&want))
        }
        "inhabitants" => {
            let got: BTreeSet<Term> =
                enumerate_inhabitants(&ty(v, "type")?, bound(v, "bound", 24), budget).into_iter().map(|p| p.0).collect();
            expect_set("inhabitants", got, terms(v, "expect")?)
        }
        "classify" => {
            let r = classify_itype(&ty(v, "type")?, bound(v, "bound", 24), budget);
            expect_eq("verdict", r.verdict.name(), field(v, "verdict")?)?;
            if let Some(n) = v["order"].as_u64() {
                expect_eq("order", r.order.clone(), Order::Exact(n as usize))?;
            }
            if v["inhabitants"].is_array() {
                let got: BTreeSet<Term> = r.inhabitants.iter().map(|i| i.term.clone()).collect();
                expect_set("inhabitants", got, terms(v, "inhabitants")?)?;
            }
            if v["lambda_k_includes"].is_array() {
                let got: BTreeSet<Term> = r
                    .inhabitants
                    .iter()
                    .filter(|i| !i.is_lambda_i)
                    .map(|i| beta_eta_normalize(&i.term, DEFAULT_FUEL).result)
                    .collect();
                for t in terms(v, "lambda_k_includes")? {
                    let nf = beta_eta_normalize(&t, DEFAULT_FUEL).result;
                    if !got.contains(&nf) {
                        return Err(format!("λK inhabitant {} not enumerated", print_term(&t)));
                    }
                }
            }
            Ok(())
        }
        "typecheck" => {
            let b = SearchBudget { max_instantiation_size: bound(v, "inst_size", budget.max_instantiation_size), ..budget.clone() };
            let out = search_f_derivation(&Context::new(), &term(v, "term")?, &ty(v, "type")?, &b);
            let got = match &out {
                SearchOutcome::Found(d) => {
                    check_derivation(d).map_err(|e| e.to_string())?;
                    "found"
                }
                SearchOutcome::NotFound => "not-found",
                SearchOutcome::Unknown => "unknown",
            };
            expect_eq("outcome", got, field(v, "expect")?)
        }
        "simple" => {
            let ok = check_simple(&Context::new(), &term(v, "term")?, &ty(v, "type")?);
            expect_eq("simple typing", ok, v["expect"].as_bool().unwrap_or(true))
        }
        "polarity" => {
            let p = polarity(&ty(v, "type")?);
            expect_eq("in ∀⁺", p.in_pos, v["in_pos"].as_bool().unwrap_or_default())
        }
        "erase" => expect_eq("erasure", erase_quantifiers(&ty(v, "type")?), ty(v, "expect")?),
        "witness" => {
            let trace = k_witness(&ty(v, "type")?, &term(v, "term")?, budget).ok_or("no λK witness")?;
            let d = &trace.derivations;
            for der in [&d.0, &d.1, &trace.wrapped, &trace.final_derivation] {
                check_derivation(der).map_err(|e| e.to_string())?;
            }
            if trace.final_term.vacuous_binder().is_none() {
                return Err(format!("witness {} is a λI-term", print_term(&trace.final_term)));
            }
            Ok(())
        }
        "ij" => expect_eq("I/J typing", check_ij_typing(&ty(v, "type")?, field(v, "var")?), true),
        "sweep" => {
            let q = bound(v, "quantifiers", 1);
            let entries = sweep_small_types(q, bound(v, "type_bound", 9), bound(v, "term_bound", 24), budget);
            if let Some(bad) = entries.iter().find(|e| !e.consistent) {
                return Err(format!("unexpected I-type {}", print_type(&bad.report.ty)));
            }
            let got: Vec<String> =
                entries.iter().filter(|e| e.report.is_itype()).map(|e| print_type(&e.report.ty)).collect();
            let want: Vec<String> = v["itypes"]
                .as_array()
                .ok_or("missing array field `itypes`")?
                .iter()
                .map(|s| s.as_str().unwrap_or_default().to_string())
                .collect();
            expect_eq("types checked", entries.len(), bound(v, "types", entries.len()))?;
            expect_eq("I-types", got, want)
        }
        other => Err(format!("unknown golden kind `{other}`")),
    }
}

fn prop_lambda_i_preservation(rng: &mut StdRng, cases: usize, _: &SearchBudget) -> Result<(), String> {
    for _ in 0..cases {
        let t = gen::lambda_i_term(rng, 14, &["a", "b"]);
        let out = beta_eta_normalize(&t, 2_000);
        if out.exhausted {
            continue;
        }
        if out.result.is_lambda_i() != Ok(true) || out.result.free_vars() != t.free_vars() {
            return Err(format!("{} normalizes to {}", print_term(&t), print_term(&out.result)));
        }
    }
    Ok(())
}

fn uv_only() -> Rules {
    Rules { beta: false, uv: true }
}

fn prop_n_measure(rng: &mut StdRng, cases: usize, _: &SearchBudget) -> Result<(), String> {
    for _ in 0..cases {
        let (t, _) = gen::e_good_term(rng, 12);
        for p in redex_paths(&t, uv_only()) {
            let next = contract_at(&t, &p, uv_only()).ok_or("redex did not contract")?;
            let atomic = matches!(
                t.at_path(&p),
                Some(Term::App(c, _)) if matches!(&**c, Term::Const(ConstTag::U(a, _) | ConstTag::V(a, _)) if a.is_atom())
            );
            let (n0, n1) = (measure_n(&t), measure_n(&next));
            let ok = if atomic { n1 == n0 && next.size() < t.size() } else { n1 < n0 };
            if !ok {
                return Err(format!("N does not decrease: {} to {}", print_term(&t), print_term(&next)));
            }
        }
    }
    Ok(())
}

fn prop_e_good_preservation(rng: &mut StdRng, cases: usize, _: &SearchBudget) -> Result<(), String> {
    for _ in 0..cases {
        let (mut t, e) = gen::e_good_term(rng, 12);
        for _ in 0..50 {
            let Some(next) = uv_step(&t) else { break };
            if !is_e_good(&next, &e) {
                return Err(format!("{} steps to the non-good {}", print_term(&t), print_term(&next)));
            }
            t = next;
        }
    }
    Ok(())
}

fn prop_hat_substitution(rng: &mut StdRng, cases: usize, _: &SearchBudget) -> Result<(), String> {
    for _ in 0..cases {
        let (u, _) = gen::e_good_term(rng, 10);
        let (v, _) = gen::e_good_term(rng, 6);
        let lhs = hat(&u.subst(&v, "a"));
        let rhs = hat(&u).subst(&hat(&v), "a");
        if lhs != rhs {
            return Err(format!("hat and substitution disagree on {} [{} / a]", print_term(&u), print_term(&v)));
        }
    }
    Ok(())
}

fn prop_hat_simulation(rng: &mut StdRng, cases: usize, _: &SearchBudget) -> Result<(), String> {
    for _ in 0..cases {
        let (t, _) = gen::e_good_term(rng, 10);
        for p in redex_paths(&t, Rules::UV) {
            let next = contract_at(&t, &p, Rules::UV).ok_or("redex did not contract")?;
            let (a, b) = (beta_normalize(&hat(&t), 5_000), beta_normalize(&hat(&next), 5_000));
            if a.exhausted || b.exhausted {
                continue;
            }
            if a.result != b.result {
                return Err(format!("hat images of {} and {} differ", print_term(&t), print_term(&next)));
            }
        }
    }
    Ok(())
}

fn prop_subject_reduction(rng: &mut StdRng, cases: usize, budget: &SearchBudget) -> Result<(), String> {
    let mut typed = 0;
    for _ in 0..cases * 20 {
        if typed >= cases {
            break;
        }
        let t = gen::term(rng, 10, &["a", "b"]);
        let Some((ctx, a)) = infer_simple(&t) else { continue };
        let out = beta_normalize(&t, 2_000);
        if out.exhausted {
            continue;
        }
        typed += 1;
        if !check_simple(&ctx, &out.result, &a) {
            return Err(format!("{} loses type {} after reduction", print_term(&t), print_type(&a)));
        }
        match search_f_derivation(&ctx, &out.result, &a, budget) {
            SearchOutcome::Found(d) => check_derivation(&d).map_err(|e| e.to_string())?,
            _ => return Err(format!("no F derivation of {} : {}", print_term(&out.result), print_type(&a))),
        }
    }
    Ok(())
}

fn prop_ij_typing(rng: &mut StdRng, cases: usize, _: &SearchBudget) -> Result<(), String> {
    for _ in 0..cases {
        let a = gen::type_expr(rng, 6, true);
        if !is_proper(&a) {
            continue;
        }
        if !check_ij_typing(&a, "X") {
            return Err(format!("I/J typing fails for {}", print_type(&a)));
        }
    }
    Ok(())
}

fn prop_erasure_typing(rng: &mut StdRng, cases: usize, budget: &SearchBudget) -> Result<(), String> {
    for _ in 0..cases {
        let d = gen::closed_proper_type(rng, 7);
        if !polarity(&d).in_pos {
            continue;
        }
        let erased = erase_quantifiers(&d);
        for (t, _) in enumerate_inhabitants(&d, 10, budget) {
            if !check_simple(&Context::new(), &t, &erased) {
                return Err(format!("{} : {} but not {} in S", print_term(&t), print_type(&d), print_type(&erased)));
            }
        }
    }
    Ok(())
}

fn prop_witness_consistency(rng: &mut StdRng, cases: usize, budget: &SearchBudget) -> Result<(), String> {
    for _ in 0..cases {
        let d = gen::closed_proper_type(rng, 7);
        let r = classify_itype(&d, 12, budget);
        let has_k = r.inhabitants.iter().any(|i| !i.is_lambda_i);
        if has_k && r.is_itype() {
            return Err(format!("{} has a λK inhabitant but is reported an I-type", print_type(&d)));
        }
        if r.is_itype() {
            if let Some(i) = r.inhabitants.iter().find_map(|i| k_witness(&d, &i.term, budget)) {
                return Err(format!("{} reported an I-type yet {} is a witness", print_type(&d), print_term(&i.final_term)));
            }
        }
    }
    Ok(())
}
