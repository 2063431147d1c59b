//! The simple system S: `(ax)`, `(→i)`, `(→e)` only, by first-order unification.

use std::collections::BTreeMap;

use super::derivation::{context_key, Context};
use crate::syntax::{fresh_name, Term, TypeExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
enum STy {
    Meta(usize),
    Rigid(String),
    Arrow(Box<STy>, Box<STy>),
}

#[derive(Default)]
struct Unifier {
    subst: Vec<Option<STy>>,
}

impl Unifier {
    fn fresh(&mut self) -> STy {
        self.subst.push(None);
        STy::Meta(self.subst.len() - 1)
    }

    fn resolve(&self, t: &STy) -> STy {
        match t {
            STy::Meta(m) => match &self.subst[*m] {
                Some(v) => self.resolve(v),
                None => t.clone(),
            },
            STy::Rigid(_) => t.clone(),
            STy::Arrow(a, b) => STy::Arrow(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
        }
    }

    fn occurs(&self, m: usize, t: &STy) -> bool {
        match self.resolve(t) {
            STy::Meta(n) => n == m,
            STy::Rigid(_) => false,
            STy::Arrow(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
        }
    }

    fn unify(&mut self, a: &STy, b: &STy) -> bool {
        match (self.resolve(a), self.resolve(b)) {
            (STy::Meta(m), STy::Meta(n)) if m == n => true,
            (STy::Meta(m), t) | (t, STy::Meta(m)) => {
                if self.occurs(m, &t) {
                    return false;
                }
                self.subst[m] = Some(t);
                true
            }
            (STy::Rigid(x), STy::Rigid(y)) => x == y,
            (STy::Arrow(a1, b1), STy::Arrow(a2, b2)) => self.unify(&a1, &a2) && self.unify(&b1, &b2),
            _ => false,
        }
    }

    /// Types `t` with the free variables typed by `env`; binders get fresh metas.
    fn infer(&mut self, t: &Term, env: &mut BTreeMap<String, STy>, bound: &mut Vec<STy>) -> Option<STy> {
        match t {
            Term::Bound(i) => bound.get(bound.len().checked_sub(i + 1)?).cloned(),
            Term::Var(_) | Term::Const(_) => {
                let key = context_key(t)?;
                if let Some(ty) = env.get(&key) {
                    return Some(ty.clone());
                }
                let m = self.fresh();
                env.insert(key, m.clone());
                Some(m)
            }
            Term::Lam(_, body) => {
                let dom = self.fresh();
                bound.push(dom.clone());
                let cod = self.infer(body, env, bound);
                bound.pop();
                Some(STy::Arrow(Box::new(dom), Box::new(cod?)))
            }
            Term::App(f, a) => {
                let tf = self.infer(f, env, bound)?;
                let ta = self.infer(a, env, bound)?;
                let r = self.fresh();
                self.unify(&tf, &STy::Arrow(Box::new(ta), Box::new(r.clone()))).then_some(r)
            }
        }
    }
}

fn from_simple(a: &TypeExpr) -> Option<STy> {
    match a {
        TypeExpr::Var(x) => Some(STy::Rigid(x.clone())),
        TypeExpr::O => Some(STy::Rigid("O".into())),
        TypeExpr::Arrow(a, b) => Some(STy::Arrow(Box::new(from_simple(a)?), Box::new(from_simple(b)?))),
        TypeExpr::Bound(_) | TypeExpr::Forall(..) => None,
    }
}

const NAMES: &[&str] = &["X", "Y", "Z", "U", "V", "W"];

struct Namer {
    names: BTreeMap<usize, String>,
}

impl Namer {
    fn name(&mut self, t: &STy) -> TypeExpr {
        match t {
            STy::Rigid(x) if x == "O" => TypeExpr::O,
            STy::Rigid(x) => TypeExpr::Var(x.clone()),
            STy::Arrow(a, b) => TypeExpr::arrow(self.name(a), self.name(b)),
            STy::Meta(m) => {
                if let Some(n) = self.names.get(m) {
                    return TypeExpr::var(n.clone());
                }
                let k = self.names.len();
                let n = match NAMES.get(k) {
                    Some(n) => n.to_string(),
                    None => fresh_name(NAMES[k % NAMES.len()], |c| self.names.values().any(|v| v == c)),
                };
                self.names.insert(*m, n.clone());
                TypeExpr::var(n)
            }
        }
    }
}

/// Principal typing: a context for the free variables and a type, with type
/// variables named in order of first occurrence (type first, then context).
/// `None` for U/V constants, occurs-check failures and clashes.
pub fn infer_simple(t: &Term) -> Option<(Context, TypeExpr)> {
    if !t.is_plain() {
        return None;
    }
    let mut u = Unifier::default();
    let mut env = BTreeMap::new();
    let ty = u.infer(t, &mut env, &mut Vec::new())?;
    let mut namer = Namer { names: BTreeMap::new() };
    let ty = namer.name(&u.resolve(&ty));
    let ctx = env.iter().map(|(k, v)| (k.clone(), namer.name(&u.resolve(v)))).collect();
    Some((ctx, ty))
}

/// `ctx ⊢_S t : a`, the type variables of `ctx` and `a` being fixed.
pub fn check_simple(ctx: &Context, t: &Term, a: &TypeExpr) -> bool {
    if !t.is_plain() {
        return false;
    }
    let mut env = BTreeMap::new();
    for (k, v) in ctx {
        match from_simple(v) {
            Some(s) => {
                env.insert(k.clone(), s);
            }
            None => return false,
        }
    }
    let Some(target) = from_simple(a) else { return false };
    let mut u = Unifier::default();
    let before: Vec<String> = env.keys().cloned().collect();
    let Some(ty) = u.infer(t, &mut env, &mut Vec::new()) else {
        return false;
    };
    // a free variable missing from the context is untypable
    env.len() == before.len() && u.unify(&ty, &target)
}
