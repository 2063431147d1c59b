use std::collections::{BTreeSet, HashMap};

use serde_json::{json, Value};

use super::{classify_with, simple_inhabited, ClassificationReport, Order, Verdict};
use crate::polarity::polarity;
use crate::syntax::{print_type, Binder, TypeExpr};
use crate::typing::SearchBudget;

const NAMES: [&str; 4] = ["X", "Y", "Z", "W"];

/// Closed proper types with exactly `quantifiers` quantifiers and at most
/// `max_size` arrows and quantifiers, one per canonical class, sorted.
pub fn small_types(quantifiers: usize, max_size: usize) -> Vec<TypeExpr> {
    let mut memo = HashMap::new();
    let mut out = BTreeSet::new();
    for k in 0..=max_size {
        for t in gen(k, 0, quantifiers, &mut memo) {
            out.insert(canonical_type(&t));
        }
    }
    out.into_iter().collect()
}

/// Types of size exactly `k` with `depth` binders in scope and exactly `r`
/// proper quantifiers.
fn gen(k: usize, depth: usize, r: usize, memo: &mut HashMap<(usize, usize, usize), Vec<TypeExpr>>) -> Vec<TypeExpr> {
    if let Some(v) = memo.get(&(k, depth, r)) {
        return v.clone();
    }
    let mut v = Vec::new();
    if k == 0 {
        if r == 0 {
            v.extend((0..depth).map(TypeExpr::Bound));
        }
    } else {
        for a in 0..k {
            for r1 in 0..=r {
                let left = gen(a, depth, r1, memo);
                if left.is_empty() {
                    continue;
                }
                let right = gen(k - 1 - a, depth, r - r1, memo);
                for l in &left {
                    for rt in &right {
                        v.push(TypeExpr::arrow(l.clone(), rt.clone()));
                    }
                }
            }
        }
        if r > 0 && depth < NAMES.len() {
            for body in gen(k - 1, depth + 1, r - 1, memo) {
                if body.uses_bound(0) {
                    v.push(TypeExpr::Forall(Binder(NAMES[depth].into()), Box::new(body)));
                }
            }
        }
    }
    memo.insert((k, depth, r), v.clone());
    v
}

/// Representative of `a` up to α, `A → ∀Y B ≅ ∀Y (A → B)`, the order of the
/// arguments of each arrow chain and the order of adjacent quantifiers.
pub fn canonical_type(a: &TypeExpr) -> TypeExpr {
    sorted(&hoist(a))
}

fn hoist(a: &TypeExpr) -> TypeExpr {
    match a {
        TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => a.clone(),
        TypeExpr::Forall(h, b) => TypeExpr::Forall(h.clone(), Box::new(hoist(b))),
        TypeExpr::Arrow(dom, cod) => {
            let dom = hoist(dom);
            match hoist(cod) {
                TypeExpr::Forall(h, body) => {
                    TypeExpr::Forall(h, Box::new(hoist(&TypeExpr::arrow(shift(&dom, 0), *body))))
                }
                cod => TypeExpr::arrow(dom, cod),
            }
        }
    }
}

fn shift(a: &TypeExpr, cutoff: usize) -> TypeExpr {
    match a {
        TypeExpr::Bound(i) if *i >= cutoff => TypeExpr::Bound(i + 1),
        TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => a.clone(),
        TypeExpr::Arrow(b, c) => TypeExpr::arrow(shift(b, cutoff), shift(c, cutoff)),
        TypeExpr::Forall(h, b) => TypeExpr::Forall(h.clone(), Box::new(shift(b, cutoff + 1))),
    }
}

fn sorted(a: &TypeExpr) -> TypeExpr {
    match a {
        TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => a.clone(),
        TypeExpr::Arrow(..) => {
            let (args, target) = a.split_arrows();
            let mut args: Vec<TypeExpr> = args.into_iter().map(sorted).collect();
            args.sort();
            TypeExpr::arrows(args, sorted(target))
        }
        TypeExpr::Forall(h, body) => {
            let direct = TypeExpr::Forall(h.clone(), Box::new(sorted(body)));
            match &**body {
                TypeExpr::Forall(h2, inner) => {
                    let swapped = TypeExpr::Forall(h2.clone(), Box::new(swap01(inner, 0)));
                    direct.min(TypeExpr::Forall(h.clone(), Box::new(sorted(&swapped))))
                }
                _ => direct,
            }
        }
    }
}

fn swap01(a: &TypeExpr, depth: usize) -> TypeExpr {
    match a {
        TypeExpr::Bound(i) if *i == depth => TypeExpr::Bound(depth + 1),
        TypeExpr::Bound(i) if *i == depth + 1 => TypeExpr::Bound(depth),
        TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => a.clone(),
        TypeExpr::Arrow(b, c) => TypeExpr::arrow(swap01(b, depth), swap01(c, depth)),
        TypeExpr::Forall(h, b) => TypeExpr::Forall(h.clone(), Box::new(swap01(b, depth + 1))),
    }
}

fn x() -> TypeExpr {
    TypeExpr::var("X")
}

fn y() -> TypeExpr {
    TypeExpr::var("Y")
}

fn yy() -> TypeExpr {
    TypeExpr::arrow(y(), y())
}

/// The listed two-quantifier I-type shape `a` belongs to, if any (`1 <= n <= 8`).
pub fn itype_shape(a: &TypeExpr) -> Option<String> {
    let c = canonical_type(a);
    let same = |t: TypeExpr| canonical_type(&t) == c;
    if same(TypeExpr::forall("X", TypeExpr::arrows([TypeExpr::arrow(TypeExpr::forall("Y", yy()), x())], x()))) {
        return Some("forall X {(forall Y (Y -> Y) -> X) -> X}".into());
    }
    for n in 1..=8 {
        let s1 = TypeExpr::arrow(TypeExpr::arrows(vec![yy(); n], x()), x());
        if same(TypeExpr::foralls(["X", "Y"], s1)) {
            return Some(format!("forall X,Y {{[(Y -> Y)^{n} -> X] -> X}}"));
        }
        let yn = TypeExpr::arrows(vec![y(); n], x());
        if same(TypeExpr::foralls(["X", "Y"], TypeExpr::arrows([y(), yn.clone()], x()))) {
            return Some(format!("forall X,Y {{Y, (Y^{n} -> X) -> X}}"));
        }
        if same(TypeExpr::foralls(["X", "Y"], TypeExpr::arrows([yn, y()], x()))) {
            return Some(format!("forall X,Y {{(Y^{n} -> X), Y -> X}}"));
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub report: ClassificationReport,
    pub shape: Option<String>,
    /// I-types match one of the known shapes for this quantifier count and
    /// have at most one inhabitant.
    pub consistent: bool,
}

impl SweepEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "type": print_type(&self.report.ty),
            "verdict": self.report.verdict.name(),
            "inhabitants": self.report.inhabitants.len(),
            "shape": self.shape,
            "consistent": self.consistent,
        })
    }
}

/// Term-size bound for types outside ∀⁺, which are never I-types.
pub const NON_POSITIVE_BOUND: usize = 12;

/// Extra term size tried, in steps of the stability window, before accepting
/// an I-type verdict.
pub const ESCALATION: usize = 24;

/// Classifies every type of [`small_types`] in canonical type order. Types in
/// ∀⁺ are enumerated up to `term_bound`, and I-type verdicts are re-run at
/// larger bounds up to `term_bound + ESCALATION`.
pub fn sweep_small_types(max_quantifiers: usize, type_bound: usize, term_bound: usize, budget: &SearchBudget) -> Vec<SweepEntry> {
    small_types(max_quantifiers, type_bound)
        .into_iter()
        .map(|d| {
            let report = classify_small(&d, term_bound, budget);
            let shape = if report.is_itype() && max_quantifiers == 2 { itype_shape(&d) } else { None };
            let expected = match max_quantifiers {
                1 => d == crate::syntax::id_type(),
                2 => shape.is_some(),
                _ => true,
            };
            let consistent = !report.is_itype() || (expected && report.inhabitants.len() <= 1);
            SweepEntry { report, shape, consistent }
        })
        .collect()
}

fn classify_small(d: &TypeExpr, term_bound: usize, budget: &SearchBudget) -> ClassificationReport {
    if !polarity(d).in_pos {
        return classify_with(d, term_bound.min(NON_POSITIVE_BOUND), budget, true);
    }
    if !simple_inhabited(d) {
        return ClassificationReport {
            ty: d.clone(),
            bound: term_bound,
            inhabitants: vec![],
            demonstrable: Some(false),
            order: Order::Exact(0),
            verdict: Verdict::NotDemonstrableUpToBound,
            truncated: false,
            certificate: None,
        };
    }
    let mut bound = term_bound;
    loop {
        let report = classify_with(d, bound, budget, true);
        if !report.is_itype() || bound >= term_bound + ESCALATION {
            return report;
        }
        bound += super::STABILITY_WINDOW;
    }
}
