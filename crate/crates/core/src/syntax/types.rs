//! System F types in locally nameless form.
//!
//! Free type variables carry their names; variables bound by a quantifier are
//! de Bruijn indices counted from the innermost enclosing `Forall`. The binder
//! keeps its source name only as a printing hint, so derived equality is
//! α-equivalence.

use std::collections::BTreeSet;

use super::Binder;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeExpr {
    /// Free type variable.
    Var(String),
    /// Variable bound by an enclosing quantifier (de Bruijn index).
    Bound(usize),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
    Forall(Binder, Box<TypeExpr>),
    /// The fixed type constant `O`.
    O,
}

impl TypeExpr {
    pub fn var(name: impl Into<String>) -> Self {
        TypeExpr::Var(name.into())
    }

    pub fn arrow(dom: TypeExpr, cod: TypeExpr) -> Self {
        TypeExpr::Arrow(Box::new(dom), Box::new(cod))
    }

    /// `A1, ..., An -> B`.
    pub fn arrows(args: impl IntoIterator<Item = TypeExpr>, target: TypeExpr) -> Self {
        let args: Vec<_> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(target, |acc, a| TypeExpr::arrow(a, acc))
    }

    /// Quantifies the free variable `name` of `body`.
    pub fn forall(name: impl Into<String>, body: TypeExpr) -> Self {
        let name = name.into();
        let closed = body.close(&name);
        TypeExpr::Forall(Binder(name), Box::new(closed))
    }

    pub fn foralls<S: Into<String>>(names: impl IntoIterator<Item = S>, body: TypeExpr) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        names
            .into_iter()
            .rev()
            .fold(body, |acc, n| TypeExpr::forall(n, acc))
    }

    /// Abstracts the free variable `name` into `Bound(0)` of a new (implicit) binder.
    pub fn close(&self, name: &str) -> TypeExpr {
        self.close_at(name, 0)
    }

    fn close_at(&self, name: &str, depth: usize) -> TypeExpr {
        match self {
            TypeExpr::Var(n) if n == name => TypeExpr::Bound(depth),
            TypeExpr::Var(_) | TypeExpr::O => self.clone(),
            TypeExpr::Bound(i) => {
                if *i >= depth {
                    TypeExpr::Bound(i + 1)
                } else {
                    TypeExpr::Bound(*i)
                }
            }
            TypeExpr::Arrow(a, b) => {
                TypeExpr::arrow(a.close_at(name, depth), b.close_at(name, depth))
            }
            TypeExpr::Forall(h, b) => {
                TypeExpr::Forall(h.clone(), Box::new(b.close_at(name, depth + 1)))
            }
        }
    }

    /// Instantiates the outermost loose index of a quantifier body with `with`.
    /// `with` must be locally closed.
    pub fn open(&self, with: &TypeExpr) -> TypeExpr {
        self.open_at(with, 0)
    }

    fn open_at(&self, with: &TypeExpr, depth: usize) -> TypeExpr {
        match self {
            TypeExpr::Bound(i) if *i == depth => with.clone(),
            TypeExpr::Bound(i) if *i > depth => TypeExpr::Bound(i - 1),
            TypeExpr::Bound(_) | TypeExpr::Var(_) | TypeExpr::O => self.clone(),
            TypeExpr::Arrow(a, b) => {
                TypeExpr::arrow(a.open_at(with, depth), b.open_at(with, depth))
            }
            TypeExpr::Forall(h, b) => {
                TypeExpr::Forall(h.clone(), Box::new(b.open_at(with, depth + 1)))
            }
        }
    }

    /// If `self` is `forall X. B`, returns `B[with/X]`.
    pub fn instantiate(&self, with: &TypeExpr) -> Option<TypeExpr> {
        match self {
            TypeExpr::Forall(_, body) => Some(body.open(with)),
            _ => None,
        }
    }

    /// Capture-free substitution `self[g/x]` of a free variable.
    pub fn subst(&self, g: &TypeExpr, x: &str) -> TypeExpr {
        match self {
            TypeExpr::Var(n) if n == x => g.clone(),
            TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => self.clone(),
            TypeExpr::Arrow(a, b) => TypeExpr::arrow(a.subst(g, x), b.subst(g, x)),
            TypeExpr::Forall(h, b) => TypeExpr::Forall(h.clone(), Box::new(b.subst(g, x))),
        }
    }

    /// Replaces every `O` by `g`.
    pub fn subst_o(&self, g: &TypeExpr) -> TypeExpr {
        match self {
            TypeExpr::O => g.clone(),
            TypeExpr::Var(_) | TypeExpr::Bound(_) => self.clone(),
            TypeExpr::Arrow(a, b) => TypeExpr::arrow(a.subst_o(g), b.subst_o(g)),
            TypeExpr::Forall(h, b) => TypeExpr::Forall(h.clone(), Box::new(b.subst_o(g))),
        }
    }

    pub fn free_type_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            TypeExpr::Var(n) => {
                out.insert(n.clone());
            }
            TypeExpr::Bound(_) | TypeExpr::O => {}
            TypeExpr::Arrow(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            TypeExpr::Forall(_, b) => b.collect_free(out),
        }
    }

    pub fn has_free_var(&self, x: &str) -> bool {
        match self {
            TypeExpr::Var(n) => n == x,
            TypeExpr::Bound(_) | TypeExpr::O => false,
            TypeExpr::Arrow(a, b) => a.has_free_var(x) || b.has_free_var(x),
            TypeExpr::Forall(_, b) => b.has_free_var(x),
        }
    }

    /// Whether `Bound(depth)` occurs, i.e. the binder `depth` levels up is used.
    pub fn uses_bound(&self, depth: usize) -> bool {
        match self {
            TypeExpr::Bound(i) => *i == depth,
            TypeExpr::Var(_) | TypeExpr::O => false,
            TypeExpr::Arrow(a, b) => a.uses_bound(depth) || b.uses_bound(depth),
            TypeExpr::Forall(_, b) => b.uses_bound(depth + 1),
        }
    }

    /// No index escapes its binders.
    pub fn is_locally_closed(&self) -> bool {
        self.max_loose(0).is_none()
    }

    fn max_loose(&self, depth: usize) -> Option<usize> {
        match self {
            TypeExpr::Bound(i) if *i >= depth => Some(i - depth),
            TypeExpr::Bound(_) | TypeExpr::Var(_) | TypeExpr::O => None,
            TypeExpr::Arrow(a, b) => match (a.max_loose(depth), b.max_loose(depth)) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
            TypeExpr::Forall(_, b) => b.max_loose(depth + 1),
        }
    }

    /// Number of connectives (arrows and quantifiers).
    pub fn size(&self) -> usize {
        match self {
            TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => 0,
            TypeExpr::Arrow(a, b) => 1 + a.size() + b.size(),
            TypeExpr::Forall(_, b) => 1 + b.size(),
        }
    }

    pub fn quantifier_count(&self) -> usize {
        match self {
            TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O => 0,
            TypeExpr::Arrow(a, b) => a.quantifier_count() + b.quantifier_count(),
            TypeExpr::Forall(_, b) => 1 + b.quantifier_count(),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.quantifier_count() == 0
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, TypeExpr::Var(_) | TypeExpr::Bound(_) | TypeExpr::O)
    }

    /// Splits `A1 -> ... -> An -> B` (B not an arrow) into `([A1..An], B)`.
    pub fn split_arrows(&self) -> (Vec<&TypeExpr>, &TypeExpr) {
        let mut args = Vec::new();
        let mut cur = self;
        while let TypeExpr::Arrow(a, b) = cur {
            args.push(a.as_ref());
            cur = b;
        }
        (args, cur)
    }

    /// Addresses a subtree: `0`/`1` select the domain/codomain of an arrow,
    /// `0` the body of a quantifier.
    pub fn at_path(&self, path: &[usize]) -> Option<&TypeExpr> {
        let mut cur = self;
        for &step in path {
            cur = match (cur, step) {
                (TypeExpr::Arrow(a, _), 0) => a,
                (TypeExpr::Arrow(_, b), 1) => b,
                (TypeExpr::Forall(_, b), 0) => b,
                _ => return None,
            };
        }
        Some(cur)
    }
}
