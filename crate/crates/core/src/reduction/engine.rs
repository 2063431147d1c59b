use crate::syntax::{ConstTag, Path, Term, TypeExpr};

/// Which redexes a reducer may contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rules {
    pub beta: bool,
    pub uv: bool,
}

impl Rules {
    pub const BETA: Rules = Rules { beta: true, uv: false };
    pub const UV: Rules = Rules { beta: true, uv: true };
}

/// Terms larger than this are treated as divergent.
const SIZE_CAP: usize = 2_000_000;

/// Unfolding of `(U_{A,X})t` or `(V_{A,X})t`, if a rule applies.
pub(crate) fn uv_unfold(c: &ConstTag, arg: &Term) -> Option<Term> {
    let (annot, x, is_u) = match c {
        ConstTag::U(a, x) => (a, x, true),
        ConstTag::V(a, x) => (a, x, false),
        _ => return None,
    };
    let same = |a: &TypeExpr, x: &str| -> Term {
        if is_u {
            Term::u_const(a.clone(), x)
        } else {
            Term::v_const(a.clone(), x)
        }
    };
    let dual = |a: &TypeExpr, x: &str| -> Term {
        if is_u {
            Term::v_const(a.clone(), x)
        } else {
            Term::u_const(a.clone(), x)
        }
    };
    match annot {
        TypeExpr::Var(y) if y == x => None,
        TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => Some(arg.clone()),
        TypeExpr::Arrow(b, c) => {
            // λy (K_{C,X})(t)(K'_{B,X})y
            let inner = Term::app(arg.shift(1, 0), Term::app(dual(b, x), Term::Bound(0)));
            Some(Term::Lam(
                crate::syntax::Binder("y".into()),
                Box::new(Term::app(same(c, x), inner)),
            ))
        }
        TypeExpr::Forall(_, b) => Some(Term::app(same(b, x), arg.clone())),
    }
}

/// Contracts the redex at the root of `t`, if it is one under `rules`.
pub(crate) fn contract_root(t: &Term, rules: Rules) -> Option<Term> {
    let Term::App(f, a) = t else { return None };
    match f.as_ref() {
        Term::Lam(_, body) if rules.beta => Some(body.instantiate(a)),
        Term::Const(c) if rules.uv => uv_unfold(c, a),
        _ => None,
    }
}

pub(crate) fn is_redex(t: &Term, rules: Rules) -> bool {
    let Term::App(f, a) = t else { return false };
    match f.as_ref() {
        Term::Lam(..) => rules.beta,
        Term::Const(c) => rules.uv && uv_unfold(c, a).is_some(),
        _ => false,
    }
}

/// All redex positions in leftmost-outermost (pre-)order.
pub fn redex_paths(t: &Term, rules: Rules) -> Vec<Path> {
    fn go(t: &Term, rules: Rules, path: &mut Path, out: &mut Vec<Path>) {
        if is_redex(t, rules) {
            out.push(path.clone());
        }
        match t {
            Term::App(f, a) => {
                path.push(0);
                go(f, rules, path, out);
                path.pop();
                path.push(1);
                go(a, rules, path, out);
                path.pop();
            }
            Term::Lam(_, b) => {
                path.push(0);
                go(b, rules, path, out);
                path.pop();
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(t, rules, &mut Vec::new(), &mut out);
    out
}

/// Contracts the redex at `path`.
pub fn contract_at(t: &Term, path: &[usize], rules: Rules) -> Option<Term> {
    let sub = t.at_path(path)?;
    let reduct = contract_root(sub, rules)?;
    t.replace_at(path, reduct)
}

/// Normal-order reducer with a step budget.
pub(crate) struct Reducer {
    pub rules: Rules,
    pub fuel: usize,
    pub steps: usize,
    pub exhausted: bool,
}

impl Reducer {
    pub fn new(rules: Rules, fuel: usize) -> Self {
        Reducer { rules, fuel, steps: 0, exhausted: false }
    }

    fn tick(&mut self, t: &Term) -> bool {
        if self.exhausted {
            return false;
        }
        if self.steps >= self.fuel || t.size() > SIZE_CAP {
            self.exhausted = true;
            return false;
        }
        self.steps += 1;
        true
    }

    /// Contracts head redexes (not under abstractions) until none remains.
    pub fn whnf(&mut self, mut t: Term) -> Term {
        loop {
            let (head, args) = {
                let (h, a) = t.spine();
                (h.clone(), a.into_iter().cloned().collect::<Vec<_>>())
            };
            if args.is_empty() {
                return t;
            }
            let first = Term::app(head, args[0].clone());
            if !is_redex(&first, self.rules) || !self.tick(&t) {
                return t;
            }
            let reduct = contract_root(&first, self.rules).expect("checked redex");
            t = Term::apps(reduct, args.into_iter().skip(1));
        }
    }

    /// Leftmost-outermost normalization.
    pub fn normalize(&mut self, t: Term) -> Term {
        let t = self.whnf(t);
        if self.exhausted {
            return t;
        }
        match t {
            Term::Lam(b, body) => Term::Lam(b, Box::new(self.normalize(*body))),
            other => {
                let (head, args) = other.spine();
                let head = head.clone();
                let args: Vec<Term> = args.into_iter().cloned().collect();
                let mut out = Vec::with_capacity(args.len());
                for a in args {
                    if self.exhausted {
                        out.push(a);
                    } else {
                        out.push(self.normalize(a));
                    }
                }
                Term::apps(head, out)
            }
        }
    }

    /// Head reduction: contracts the head redex under leading abstractions.
    pub fn head_normalize(&mut self, t: Term) -> Term {
        match t {
            Term::Lam(b, body) => Term::Lam(b, Box::new(self.head_normalize(*body))),
            other => {
                let r = self.whnf(other);
                if !self.exhausted && matches!(r, Term::Lam(..)) {
                    self.head_normalize(r)
                } else {
                    r
                }
            }
        }
    }
}

/// One η-contraction pass, bottom-up; returns the η-normal form and the step count.
pub(crate) fn eta_contract(t: &Term) -> (Term, usize) {
    match t {
        Term::Var(_) | Term::Bound(_) | Term::Const(_) => (t.clone(), 0),
        Term::App(f, a) => {
            let (f2, n1) = eta_contract(f);
            let (a2, n2) = eta_contract(a);
            (Term::app(f2, a2), n1 + n2)
        }
        Term::Lam(b, body) => {
            let (body2, n) = eta_contract(body);
            if let Term::App(f, a) = &body2 {
                if matches!(a.as_ref(), Term::Bound(0)) && !f.uses_bound(0) {
                    return (f.shift(-1, 0), n + 1);
                }
            }
            (Term::Lam(b.clone(), Box::new(body2)), n)
        }
    }
}

pub(crate) fn has_eta_redex(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Bound(_) | Term::Const(_) => false,
        Term::App(f, a) => has_eta_redex(f) || has_eta_redex(a),
        Term::Lam(_, body) => {
            if let Term::App(f, a) = body.as_ref() {
                if matches!(a.as_ref(), Term::Bound(0)) && !f.uses_bound(0) {
                    return true;
                }
            }
            has_eta_redex(body)
        }
    }
}
