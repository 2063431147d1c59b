//! Untyped λ-terms with the constants of the λ_UV-calculus.
//!
//! Bound variables are de Bruijn indices; free variables keep their names.
//! The same representation serves plain λ-terms and λ_UV-terms.

use std::collections::BTreeSet;

use super::{Binder, SyntaxError, TypeExpr};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstTag {
    /// The constant `α`, typed `O` by the witness construction.
    Alpha,
    /// `U_{A,X}`.
    U(TypeExpr, String),
    /// `V_{A,X}`.
    V(TypeExpr, String),
    /// Inert placeholder constant.
    Opaque(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Bound(usize),
    App(Box<Term>, Box<Term>),
    Lam(Binder, Box<Term>),
    Const(ConstTag),
}

/// Position of a subterm: `0` is the function (or a λ body), `1` the argument.
pub type Path = Vec<usize>;

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn app(f: Term, a: Term) -> Self {
        Term::App(Box::new(f), Box::new(a))
    }

    /// `(f)a1...an`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Self {
        args.into_iter().fold(f, Term::app)
    }

    /// `λname. body`, binding the free occurrences of `name` in `body`.
    pub fn lam(name: impl Into<String>, body: Term) -> Self {
        let name = name.into();
        let closed = body.close(&name);
        Term::Lam(Binder(name), Box::new(closed))
    }

    pub fn lams<S: Into<String>>(names: impl IntoIterator<Item = S>, body: Term) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.into_iter().rev().fold(body, |acc, n| Term::lam(n, acc))
    }

    pub fn alpha() -> Self {
        Term::Const(ConstTag::Alpha)
    }

    pub fn opaque(name: impl Into<String>) -> Self {
        Term::Const(ConstTag::Opaque(name.into()))
    }

    pub fn u_const(a: TypeExpr, x: impl Into<String>) -> Self {
        Term::Const(ConstTag::U(a, x.into()))
    }

    pub fn v_const(a: TypeExpr, x: impl Into<String>) -> Self {
        Term::Const(ConstTag::V(a, x.into()))
    }

    /// Turns free `name` into the index of a new outermost binder.
    pub fn close(&self, name: &str) -> Term {
        self.close_at(name, 0)
    }

    fn close_at(&self, name: &str, depth: usize) -> Term {
        match self {
            Term::Var(n) if n == name => Term::Bound(depth),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::Bound(i) => Term::Bound(if *i >= depth { i + 1 } else { *i }),
            Term::App(f, a) => Term::app(f.close_at(name, depth), a.close_at(name, depth)),
            Term::Lam(b, body) => Term::Lam(b.clone(), Box::new(body.close_at(name, depth + 1))),
        }
    }

    /// Adds `d` to every index `>= cutoff`.
    pub fn shift(&self, d: isize, cutoff: usize) -> Term {
        match self {
            Term::Bound(i) if *i >= cutoff => Term::Bound((*i as isize + d) as usize),
            Term::Bound(_) | Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, a) => Term::app(f.shift(d, cutoff), a.shift(d, cutoff)),
            Term::Lam(b, body) => Term::Lam(b.clone(), Box::new(body.shift(d, cutoff + 1))),
        }
    }

    /// β-contraction of a λ body with `arg`: `body[arg/0]`, lowering the other loose indices.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.subst_index(0, arg)
    }

    fn subst_index(&self, depth: usize, arg: &Term) -> Term {
        match self {
            Term::Bound(i) if *i == depth => arg.shift(depth as isize, 0),
            Term::Bound(i) if *i > depth => Term::Bound(i - 1),
            Term::Bound(_) | Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, a) => Term::app(f.subst_index(depth, arg), a.subst_index(depth, arg)),
            Term::Lam(b, body) => Term::Lam(b.clone(), Box::new(body.subst_index(depth + 1, arg))),
        }
    }

    /// Opens a λ body with a free variable.
    pub fn open(&self, name: &str) -> Term {
        self.instantiate(&Term::Var(name.to_string()))
    }

    /// Capture-avoiding substitution `self[v/x]` of a free variable.
    pub fn subst(&self, v: &Term, x: &str) -> Term {
        self.subst_at(v, x, 0)
    }

    fn subst_at(&self, v: &Term, x: &str, depth: usize) -> Term {
        match self {
            Term::Var(n) if n == x => v.shift(depth as isize, 0),
            Term::Var(_) | Term::Bound(_) | Term::Const(_) => self.clone(),
            Term::App(f, a) => Term::app(f.subst_at(v, x, depth), a.subst_at(v, x, depth)),
            Term::Lam(b, body) => Term::Lam(b.clone(), Box::new(body.subst_at(v, x, depth + 1))),
        }
    }

    /// Replaces constants for which `f` returns a term. Replacements must be closed.
    pub fn replace_consts(&self, f: &dyn Fn(&ConstTag) -> Option<Term>) -> Term {
        match self {
            Term::Const(c) => f(c).unwrap_or_else(|| self.clone()),
            Term::Var(_) | Term::Bound(_) => self.clone(),
            Term::App(g, a) => Term::app(g.replace_consts(f), a.replace_consts(f)),
            Term::Lam(b, body) => Term::Lam(b.clone(), Box::new(body.replace_consts(f))),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(n) => {
                out.insert(n.clone());
            }
            Term::Bound(_) | Term::Const(_) => {}
            Term::App(f, a) => {
                f.collect_free(out);
                a.collect_free(out);
            }
            Term::Lam(_, b) => b.collect_free(out),
        }
    }

    pub fn has_free_var(&self, x: &str) -> bool {
        match self {
            Term::Var(n) => n == x,
            Term::Bound(_) | Term::Const(_) => false,
            Term::App(f, a) => f.has_free_var(x) || a.has_free_var(x),
            Term::Lam(_, b) => b.has_free_var(x),
        }
    }

    /// Whether index `depth` (relative to this node) occurs.
    pub fn uses_bound(&self, depth: usize) -> bool {
        match self {
            Term::Bound(i) => *i == depth,
            Term::Var(_) | Term::Const(_) => false,
            Term::App(f, a) => f.uses_bound(depth) || a.uses_bound(depth),
            Term::Lam(_, b) => b.uses_bound(depth + 1),
        }
    }

    pub fn is_locally_closed(&self) -> bool {
        fn go(t: &Term, depth: usize) -> bool {
            match t {
                Term::Bound(i) => *i < depth,
                Term::Var(_) | Term::Const(_) => true,
                Term::App(f, a) => go(f, depth) && go(a, depth),
                Term::Lam(_, b) => go(b, depth + 1),
            }
        }
        go(self, 0)
    }

    pub fn is_closed(&self) -> bool {
        self.is_locally_closed() && self.free_vars().is_empty()
    }

    /// Number of nodes (variables, constants, applications, abstractions).
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Bound(_) | Term::Const(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, b) => 1 + b.size(),
        }
    }

    pub fn contains_const(&self, pred: &dyn Fn(&ConstTag) -> bool) -> bool {
        match self {
            Term::Const(c) => pred(c),
            Term::Var(_) | Term::Bound(_) => false,
            Term::App(f, a) => f.contains_const(pred) || a.contains_const(pred),
            Term::Lam(_, b) => b.contains_const(pred),
        }
    }

    pub fn contains_alpha(&self) -> bool {
        self.contains_const(&|c| matches!(c, ConstTag::Alpha))
    }

    /// No `U_{A,X}`/`V_{A,X}` constants.
    pub fn is_plain(&self) -> bool {
        !self.contains_const(&|c| matches!(c, ConstTag::U(..) | ConstTag::V(..)))
    }

    /// Every abstraction binds a variable that occurs in its body.
    /// Constants count as non-variables.
    pub fn is_lambda_i(&self) -> Result<bool, SyntaxError> {
        if !self.is_plain() {
            return Err(SyntaxError::NotPlain);
        }
        Ok(self.vacuous_binder().is_none())
    }

    /// Path of the first abstraction whose variable does not occur in its body.
    pub fn vacuous_binder(&self) -> Option<Path> {
        fn go(t: &Term, path: &mut Path) -> Option<Path> {
            match t {
                Term::Var(_) | Term::Bound(_) | Term::Const(_) => None,
                Term::App(f, a) => {
                    path.push(0);
                    if let Some(p) = go(f, path) {
                        return Some(p);
                    }
                    path.pop();
                    path.push(1);
                    let r = go(a, path);
                    path.pop();
                    r
                }
                Term::Lam(_, b) => {
                    if !b.uses_bound(0) {
                        return Some(path.clone());
                    }
                    path.push(0);
                    let r = go(b, path);
                    path.pop();
                    r
                }
            }
        }
        go(self, &mut Vec::new())
    }

    /// Head and arguments of an application spine `(h)a1...an`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Strips leading abstractions, returning their binders and the body.
    pub fn strip_lams(&self) -> (Vec<&Binder>, &Term) {
        let mut bs = Vec::new();
        let mut cur = self;
        while let Term::Lam(b, body) = cur {
            bs.push(b);
            cur = body;
        }
        (bs, cur)
    }

    pub fn at_path(&self, path: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &step in path {
            cur = match (cur, step) {
                (Term::App(f, _), 0) => f,
                (Term::App(_, a), 1) => a,
                (Term::Lam(_, b), 0) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Replaces the subterm at `path` verbatim (indices are not adjusted).
    pub fn replace_at(&self, path: &[usize], new: Term) -> Option<Term> {
        let Some((&step, rest)) = path.split_first() else {
            return Some(new);
        };
        match (self, step) {
            (Term::App(f, a), 0) => Some(Term::app(f.replace_at(rest, new)?, (**a).clone())),
            (Term::App(f, a), 1) => Some(Term::app((**f).clone(), a.replace_at(rest, new)?)),
            (Term::Lam(b, body), 0) => Some(Term::Lam(b.clone(), Box::new(body.replace_at(rest, new)?))),
            _ => None,
        }
    }
}
