//! Closed βη-normal inhabitants up to a size bound, I-type classification,
//! the families `B_n`, `B_∞` and their inhabitants, and small-type sweeps.

mod simple;
mod sweep;

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use serde_json::{json, Value};

pub use simple::simple_inhabited;
pub use sweep::{canonical_type, small_types, sweep_small_types, itype_shape, SweepEntry, ESCALATION, NON_POSITIVE_BOUND};

use crate::polarity::polarity;
use crate::reduction::{beta_eta_normalize, eta_normalize, DEFAULT_FUEL};
use crate::syntax::{conj, print_term, print_type, tuple, Path, Term, TypeExpr};
use crate::typing::{generate_long_terms, search_f_derivation, Context, Derivation, SearchBudget};
use crate::witness::{k_witness, WitnessTrace};

/// Bounds `b` and `b - STABILITY_WINDOW` with equal inhabitant sets make the
/// order exact.
pub const STABILITY_WINDOW: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inhabitant {
    /// βη-normal form.
    pub term: Term,
    /// Derivation of `term` when it is typable, otherwise of its η-long form.
    pub derivation: Derivation,
    pub is_lambda_i: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    /// Canonical order: size, then printed form.
    pub inhabitants: Vec<Inhabitant>,
    /// The search budget cut part of the space.
    pub truncated: bool,
}

/// η-long inhabitants of size at most `size_bound`, η-contracted and
/// deduplicated. With `stop_at_lambda_k` the search ends at the first λK
/// inhabitant.
pub fn enumerate(d: &TypeExpr, size_bound: usize, budget: &SearchBudget, stop_at_lambda_k: bool) -> Enumeration {
    let mut found: BTreeMap<(usize, String), (Term, Derivation)> = BTreeMap::new();
    let truncated = generate_long_terms(&Context::new(), d, size_bound, budget, &mut |der| {
        let nf = eta_normalize(der.subject()).result;
        let lambda_k = nf.vacuous_binder().is_some();
        found.entry((nf.size(), print_term(&nf))).or_insert_with(|| (nf, der.clone()));
        if stop_at_lambda_k && lambda_k {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let inhabitants = found
        .into_values()
        .map(|(term, long)| {
            // prefer a derivation of the normal form itself
            let derivation = if &term == long.subject() {
                long
            } else {
                search_f_derivation(&Context::new(), &term, d, budget).derivation().unwrap_or(long)
            };
            let is_lambda_i = term.vacuous_binder().is_none();
            Inhabitant { term, derivation, is_lambda_i }
        })
        .collect();
    Enumeration { inhabitants, truncated }
}

/// `Λ(D)` up to the bound, as (term, derivation) pairs.
pub fn enumerate_inhabitants(d: &TypeExpr, size_bound: usize, budget: &SearchBudget) -> Vec<(Term, Derivation)> {
    enumerate(d, size_bound, budget, false)
        .inhabitants
        .into_iter()
        .map(|i| (i.term, i.derivation))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Exact(usize),
    AtLeast(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NotIType { witness: Term },
    ITypeUpToBound,
    NotITypeByPolarity { obstruction: Path },
    NotDemonstrableUpToBound,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::NotIType { .. } => "NotIType",
            Verdict::ITypeUpToBound => "ITypeUpToBound",
            Verdict::NotITypeByPolarity { .. } => "NotITypeByPolarity",
            Verdict::NotDemonstrableUpToBound => "NotDemonstrableUpToBound",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub ty: TypeExpr,
    pub bound: usize,
    pub inhabitants: Vec<Inhabitant>,
    /// `Some(true)` once an inhabitant is known; `None` means unknown.
    pub demonstrable: Option<bool>,
    pub order: Order,
    pub verdict: Verdict,
    pub truncated: bool,
    /// A λK inhabitant extracted from a λI one, when the type is not ∀⁺.
    pub certificate: Option<WitnessTrace>,
}

impl ClassificationReport {
    pub fn is_itype(&self) -> bool {
        self.verdict == Verdict::ITypeUpToBound
    }

    pub fn to_json(&self) -> Value {
        let order = match self.order {
            Order::Exact(n) => json!(n),
            Order::AtLeast(n) => json!(format!(">={n}")),
        };
        let mut verdict = json!({ "kind": self.verdict.name() });
        match &self.verdict {
            Verdict::NotIType { witness } => verdict["witness"] = json!(print_term(witness)),
            Verdict::NotITypeByPolarity { obstruction } => verdict["obstruction"] = json!(obstruction),
            _ => {}
        }
        json!({
            "type": print_type(&self.ty),
            "bound": self.bound,
            "demonstrable": match self.demonstrable { Some(b) => json!(b), None => json!("unknown") },
            "order": order,
            "verdict": verdict,
            "truncated": self.truncated,
            "inhabitants": self.inhabitants.iter().map(|i| json!({
                "term": print_term(&i.term),
                "is_lambda_i": i.is_lambda_i,
                "derivation": i.derivation.to_json(),
            })).collect::<Vec<_>>(),
            "certificate": self.certificate.as_ref().map(WitnessTrace::to_json),
        })
    }
}

/// Classifies `d` from its inhabitants up to `size_bound`.
pub fn classify_itype(d: &TypeExpr, size_bound: usize, budget: &SearchBudget) -> ClassificationReport {
    classify_with(d, size_bound, budget, false)
}

/// As [`classify_itype`]; `quick` stops at the first λK inhabitant and skips
/// the stability check, reporting a lower bound for the order.
pub fn classify_with(d: &TypeExpr, size_bound: usize, budget: &SearchBudget, quick: bool) -> ClassificationReport {
    let en = enumerate(d, size_bound, budget, quick);
    let demonstrable = (!en.inhabitants.is_empty()).then_some(true);
    let mut certificate = None;
    let verdict = if let Some(k) = en.inhabitants.iter().find(|i| !i.is_lambda_i) {
        Verdict::NotIType { witness: k.term.clone() }
    } else if demonstrable.is_none() {
        Verdict::NotDemonstrableUpToBound
    } else {
        let pol = polarity(d);
        if pol.in_pos {
            Verdict::ITypeUpToBound
        } else {
            certificate = en.inhabitants.iter().find_map(|i| k_witness(d, &i.term, budget));
            match &certificate {
                Some(trace) => Verdict::NotIType { witness: trace.final_term.clone() },
                None => Verdict::NotITypeByPolarity { obstruction: pol.obstruction().cloned().unwrap_or_default() },
            }
        }
    };
    let count = en.inhabitants.len();
    let order = if quick || size_bound < STABILITY_WINDOW {
        Order::AtLeast(count)
    } else {
        let smaller = enumerate(d, size_bound - STABILITY_WINDOW, budget, false);
        let same = smaller.inhabitants.iter().map(|i| &i.term).eq(en.inhabitants.iter().map(|i| &i.term));
        if same && !en.truncated {
            Order::Exact(count)
        } else {
            Order::AtLeast(count)
        }
    };
    ClassificationReport {
        ty: d.clone(),
        bound: size_bound,
        inhabitants: en.inhabitants,
        demonstrable,
        order,
        verdict,
        truncated: en.truncated,
        certificate,
    }
}

fn vars(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// `B_n = ∀X∀Y1...∀Yn {(Y1 → X), ..., (Yn → X) → [Y1, ..., Yn → (X ∧ Y1 ∧ ... ∧ Yn)] ∧ (Y1 → X) ∧ ... ∧ (Yn → X)}`.
/// Panics unless `n >= 2`.
pub fn build_bn(n: usize) -> TypeExpr {
    assert!(n >= 2, "B_n needs n >= 2");
    let x = TypeExpr::var("X");
    let ys: Vec<TypeExpr> = vars("Y", n).into_iter().map(TypeExpr::Var).collect();
    let maps: Vec<TypeExpr> = ys.iter().map(|y| TypeExpr::arrow(y.clone(), x.clone())).collect();
    let mut all = vec![x.clone()];
    all.extend(ys.iter().cloned());
    let first = TypeExpr::arrows(ys.iter().cloned(), conj(&all));
    let mut parts = vec![first];
    parts.extend(maps.iter().cloned());
    let body = TypeExpr::arrows(maps, conj(&parts));
    let mut names = vec!["X".to_string()];
    names.extend(vars("Y", n));
    TypeExpr::foralls(names, body)
}

/// `T_i = λx1...λxn <λy1...λyn <(xi)yi, y1, ..., yn>, x1, ..., xn>`.
/// Panics unless `1 <= i <= n`.
pub fn build_ti(n: usize, i: usize) -> Term {
    assert!((1..=n).contains(&i), "T_i needs 1 <= i <= n");
    let xs = vars("x", n);
    let ys = vars("y", n);
    let mut inner = vec![Term::app(Term::var(&xs[i - 1]), Term::var(&ys[i - 1]))];
    inner.extend(ys.iter().map(Term::var));
    let first = Term::lams(ys.clone(), tuple(&inner));
    let mut outer = vec![first];
    outer.extend(xs.iter().map(Term::var));
    Term::lams(xs, tuple(&outer))
}

/// `B_∞ = ∀X∀Y {(X → Y), (Y → X) → [(X → Y) ∧ (Y → X)]}`.
pub fn build_binf() -> TypeExpr {
    let (x, y) = (TypeExpr::var("X"), TypeExpr::var("Y"));
    let xy = TypeExpr::arrow(x.clone(), y.clone());
    let yx = TypeExpr::arrow(y, x);
    TypeExpr::foralls(["X", "Y"], TypeExpr::arrows([xy.clone(), yx.clone()], conj(&[xy, yx])))
}

/// βη-normal form of `λu (a)(b)...(a)(b)(a)u` with `(a)(b)` repeated `n` times.
fn iterate(a: &str, b: &str, n: usize) -> Term {
    let mut body = Term::app(Term::var(a), Term::var("u"));
    for _ in 0..n {
        body = Term::app(Term::var(a), Term::app(Term::var(b), body));
    }
    beta_eta_normalize(&Term::lam("u", body), DEFAULT_FUEL).result
}

/// `T_{i,j} = λxλy <λu[(x)(y)]^i (x)u, λu[(y)(x)]^j (y)u>`.
pub fn build_tij(i: usize, j: usize) -> Term {
    Term::lams(["x", "y"], tuple(&[iterate("x", "y", i), iterate("y", "x", j)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{bool_type, church, id, id_type, one, parse_term, zero};

    fn terms(d: &TypeExpr, bound: usize) -> Vec<Term> {
        enumerate_inhabitants(d, bound, &SearchBudget::default()).into_iter().map(|p| p.0).collect()
    }

    #[test]
    fn small_goldens() {
        assert_eq!(terms(&id_type(), 24), vec![id()]);
        let mut b = terms(&bool_type(), 24);
        b.sort();
        let mut expect = vec![zero(), one()];
        expect.sort();
        assert_eq!(b, expect);
    }

    #[test]
    fn family_terms() {
        assert_eq!(build_tij(0, 0), parse_term("\\x y. <x, y>").unwrap());
        assert_eq!(build_tij(1, 0), parse_term("\\x y. <\\u. x (y (x u)), y>").unwrap());
        assert!(build_ti(2, 1).is_lambda_i().unwrap());
        let d = search_f_derivation(&Context::new(), &build_tij(1, 2), &build_binf(), &SearchBudget::default());
        assert!(d.is_found());
        for i in 1..=2 {
            assert!(search_f_derivation(&Context::new(), &build_ti(2, i), &build_bn(2), &SearchBudget::default()).is_found());
        }
    }

    #[test]
    fn classification_of_id_and_ent() {
        let r = classify_itype(&id_type(), 24, &SearchBudget::default());
        assert_eq!(r.verdict, Verdict::ITypeUpToBound);
        assert_eq!(r.order, Order::Exact(1));
        let e = classify_itype(&crate::syntax::ent_type(), 12, &SearchBudget::default());
        assert!(matches!(e.verdict, Verdict::NotIType { .. }));
        assert_eq!(e.inhabitants.len(), 5);
        assert_eq!(e.inhabitants[0].term, church(0));
    }
}
