//! Bounded derivation search with unification variables.
//!
//! One engine serves three purposes: checking a given β-normal term, checking
//! while η-expanding it, and generating η-long normal terms by size. The
//! search is written in continuation-passing style over a trail of meta
//! assignments, so every branch can be undone on backtracking.
//!
//! Unknown instantiations of a `(∀e)` are unification variables. A variable
//! created while `k` eigenvariables are in scope may only be solved with types
//! mentioning the first `k` of them.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::rc::Rc;

use super::derivation::{elim_variant, key_term, Context, Derivation, RuleTag};
use super::SearchBudget;
use crate::syntax::{fresh_name, Binder, Term, TypeExpr};

pub(crate) type Flow = ControlFlow<()>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum MTy {
    Var(String),
    Bound(usize),
    Meta(usize),
    Arrow(Rc<MTy>, Rc<MTy>),
    Forall(String, Rc<MTy>),
    O,
}

impl MTy {
    fn from_type(a: &TypeExpr) -> MTy {
        match a {
            TypeExpr::Var(x) => MTy::Var(x.clone()),
            TypeExpr::Bound(i) => MTy::Bound(*i),
            TypeExpr::O => MTy::O,
            TypeExpr::Arrow(a, b) => MTy::arrow(MTy::from_type(a), MTy::from_type(b)),
            TypeExpr::Forall(h, b) => MTy::Forall(h.0.clone(), Rc::new(MTy::from_type(b))),
        }
    }

    fn arrow(a: MTy, b: MTy) -> MTy {
        MTy::Arrow(Rc::new(a), Rc::new(b))
    }

    fn open(&self, with: &MTy) -> MTy {
        self.open_at(with, 0)
    }

    fn open_at(&self, with: &MTy, depth: usize) -> MTy {
        match self {
            MTy::Bound(i) if *i == depth => with.clone(),
            MTy::Bound(i) if *i > depth => MTy::Bound(i - 1),
            MTy::Bound(_) | MTy::Var(_) | MTy::Meta(_) | MTy::O => self.clone(),
            MTy::Arrow(a, b) => MTy::arrow(a.open_at(with, depth), b.open_at(with, depth)),
            MTy::Forall(h, b) => MTy::Forall(h.clone(), Rc::new(b.open_at(with, depth + 1))),
        }
    }

    fn uses_bound(&self, depth: usize) -> bool {
        match self {
            MTy::Bound(i) => *i == depth,
            MTy::Var(_) | MTy::Meta(_) | MTy::O => false,
            MTy::Arrow(a, b) => a.uses_bound(depth) || b.uses_bound(depth),
            MTy::Forall(_, b) => b.uses_bound(depth + 1),
        }
    }
}

/// Partial derivation over unresolved types.
enum Md {
    Ax { key: String, ty: MTy },
    Lam { var: String, dom: MTy, ty: MTy, body: Rc<Md> },
    App { ty: MTy, fun: Rc<Md>, arg: Rc<Md> },
    ForallI { eigen: String, ty: MTy, premise: Rc<Md> },
    ForallE { inst: MTy, ty: MTy, premise: Rc<Md> },
}

#[derive(Clone)]
enum Elim {
    Inst(MTy, MTy),
    Arg(MTy, MTy),
}

struct MetaVar {
    level: usize,
    inst: bool,
    val: Option<MTy>,
}

enum Undo {
    Val(usize),
    Level(usize, usize),
}

type Ctx = Vec<(String, MTy)>;
type Cont<'a> = &'a mut dyn FnMut(&mut Engine, Rc<Md>, usize) -> Flow;

const GEN_NAMES: &[&str] = &["x", "y", "z", "u", "v", "w"];

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    Check,
    Expand,
    Generate,
}

pub(crate) struct Engine {
    metas: Vec<MetaVar>,
    trail: Vec<Undo>,
    eigens: Vec<String>,
    rigid: BTreeSet<String>,
    taken_terms: BTreeSet<String>,
    budget: SearchBudget,
    mode: Mode,
    pub truncated: bool,
}

impl Engine {
    fn snapshot(&self) -> (usize, usize) {
        (self.trail.len(), self.metas.len())
    }

    fn restore(&mut self, (t, m): (usize, usize)) {
        while self.trail.len() > t {
            match self.trail.pop().expect("nonempty trail") {
                Undo::Val(i) => self.metas[i].val = None,
                Undo::Level(i, l) => self.metas[i].level = l,
            }
        }
        self.metas.truncate(m);
    }

    fn new_meta(&mut self, level: usize, inst: bool) -> MTy {
        self.metas.push(MetaVar { level, inst, val: None });
        MTy::Meta(self.metas.len() - 1)
    }

    fn set(&mut self, m: usize, v: MTy) {
        self.metas[m].val = Some(v);
        self.trail.push(Undo::Val(m));
    }

    fn resolve(&self, t: &MTy) -> MTy {
        let mut cur = t.clone();
        while let MTy::Meta(m) = cur {
            match &self.metas[m].val {
                Some(v) => cur = v.clone(),
                None => break,
            }
        }
        cur
    }

    fn to_type(&self, t: &MTy) -> TypeExpr {
        match self.resolve(t) {
            MTy::Var(x) => TypeExpr::Var(x),
            MTy::Bound(i) => TypeExpr::Bound(i),
            MTy::Meta(_) | MTy::O => TypeExpr::O,
            MTy::Arrow(a, b) => TypeExpr::arrow(self.to_type(&a), self.to_type(&b)),
            MTy::Forall(h, b) => TypeExpr::Forall(Binder(h), Box::new(self.to_type(&b))),
        }
    }

    /// Connective count with unresolved variables counting zero.
    fn msize(&self, t: &MTy) -> usize {
        match self.resolve(t) {
            MTy::Arrow(a, b) => 1 + self.msize(&a) + self.msize(&b),
            MTy::Forall(_, b) => 1 + self.msize(&b),
            _ => 0,
        }
    }

    /// Occurs, scope and escape checks for `?m := t`; lowers levels inside `t`.
    fn admissible(&mut self, m: usize, t: &MTy, local: usize) -> bool {
        match self.resolve(t) {
            MTy::Meta(n) => {
                if n == m {
                    return false;
                }
                let (lm, ln) = (self.metas[m].level, self.metas[n].level);
                if ln > lm {
                    self.metas[n].level = lm;
                    self.trail.push(Undo::Level(n, ln));
                }
                true
            }
            MTy::Var(x) => match self.eigens.iter().position(|e| *e == x) {
                Some(i) => i < self.metas[m].level,
                None => true,
            },
            MTy::Bound(i) => i < local,
            MTy::O => true,
            MTy::Arrow(a, b) => self.admissible(m, &a, local) && self.admissible(m, &b, local),
            MTy::Forall(_, b) => self.admissible(m, &b, local + 1),
        }
    }

    fn assign(&mut self, m: usize, t: &MTy) -> bool {
        if !self.admissible(m, t, 0) {
            return false;
        }
        self.set(m, t.clone());
        if self.metas[m].inst && self.msize(t) > self.budget.max_instantiation_size {
            self.truncated = true;
            return false;
        }
        true
    }

    /// Callers undo partial effects with `restore` when this fails.
    fn unify(&mut self, a: &MTy, b: &MTy) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (MTy::Meta(m), MTy::Meta(n)) if m == n => true,
            (MTy::Meta(m), _) => self.assign(*m, &b),
            (_, MTy::Meta(n)) => self.assign(*n, &a),
            (MTy::Var(x), MTy::Var(y)) => x == y,
            (MTy::Bound(i), MTy::Bound(j)) => i == j,
            (MTy::O, MTy::O) => true,
            (MTy::Arrow(a1, b1), MTy::Arrow(a2, b2)) => self.unify(a1, a2) && self.unify(b1, b2),
            (MTy::Forall(_, b1), MTy::Forall(_, b2)) => self.unify(b1, b2),
            _ => false,
        }
    }

    fn fresh_var(&self, ctx: &Ctx, hint: Option<&str>) -> String {
        let taken = |n: &str| {
            self.taken_terms.contains(n) || ctx.iter().any(|(k, _)| k == n) || is_reserved(n)
        };
        match hint {
            Some(h) => fresh_name(h, taken),
            None => GEN_NAMES
                .iter()
                .find(|n| !taken(n))
                .map(|n| n.to_string())
                .unwrap_or_else(|| fresh_name("x", taken)),
        }
    }

    fn solve(&mut self, ctx: &Ctx, term: Option<&Term>, goal: &MTy, size: usize, depth: usize, k: Cont) -> Flow {
        if depth > self.budget.max_depth {
            self.truncated = true;
            return ControlFlow::Continue(());
        }
        if term.is_none() && size == 0 {
            return ControlFlow::Continue(());
        }
        let g = self.resolve(goal);
        let is_lam = matches!(term, Some(Term::Lam(..)));
        match &g {
            MTy::Forall(hint, body) => {
                self.forall_intro(ctx, term, hint, body, &g, size, depth, k)?;
                let direct = match term {
                    Some(_) => !is_lam,
                    None => !body.uses_bound(0),
                };
                if direct {
                    self.spine(ctx, term, &g, size, depth, k)?;
                }
                ControlFlow::Continue(())
            }
            MTy::Arrow(a, b) => match term {
                Some(Term::Lam(h, body)) => self.lam_intro(ctx, Some(body), Some(&h.0), a, b, &g, size, depth, k),
                None => self.lam_intro(ctx, None, None, a, b, &g, size, depth, k),
                Some(t) if self.mode == Mode::Expand => {
                    let body = Term::app(t.shift(1, 0), Term::Bound(0));
                    self.lam_intro(ctx, Some(&body), Some("y"), a, b, &g, size, depth, k)
                }
                Some(_) => self.spine(ctx, term, &g, size, depth, k),
            },
            MTy::Meta(m) => {
                if !is_lam {
                    self.spine(ctx, term, &g, size, depth, k)?;
                }
                if is_lam || term.is_none() {
                    let snap = self.snapshot();
                    let level = self.metas[*m].level;
                    let (a, b) = (self.new_meta(level, false), self.new_meta(level, false));
                    self.set(*m, MTy::arrow(a.clone(), b.clone()));
                    let body = match term {
                        Some(Term::Lam(h, body)) => Some((body.as_ref(), h.0.as_str())),
                        _ => None,
                    };
                    let r = self.lam_intro(
                        ctx,
                        body.map(|p| p.0),
                        body.map(|p| p.1),
                        &a,
                        &b,
                        &self.resolve(&g),
                        size,
                        depth,
                        k,
                    );
                    self.restore(snap);
                    r?;
                }
                ControlFlow::Continue(())
            }
            _ => self.spine(ctx, term, &g, size, depth, k),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn lam_intro(
        &mut self,
        ctx: &Ctx,
        body: Option<&Term>,
        hint: Option<&str>,
        dom: &MTy,
        cod: &MTy,
        goal: &MTy,
        size: usize,
        depth: usize,
        k: Cont,
    ) -> Flow {
        if body.is_none() && size < 2 {
            return ControlFlow::Continue(());
        }
        let var = self.fresh_var(ctx, hint);
        let mut ctx2 = ctx.clone();
        ctx2.push((var.clone(), dom.clone()));
        let opened = body.map(|b| b.open(&var));
        let (dom, goal) = (dom.clone(), goal.clone());
        self.solve(&ctx2, opened.as_ref(), cod, size.saturating_sub(1), depth + 1, &mut |e, md, used| {
            let node = Md::Lam { var: var.clone(), dom: dom.clone(), ty: goal.clone(), body: md };
            k(e, Rc::new(node), used + 1)
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn forall_intro(
        &mut self,
        ctx: &Ctx,
        term: Option<&Term>,
        hint: &str,
        body: &MTy,
        goal: &MTy,
        size: usize,
        depth: usize,
        k: Cont,
    ) -> Flow {
        let eigen = fresh_name(hint, |n| {
            self.eigens.iter().any(|e| e == n) || self.rigid.contains(n) || n == "O"
        });
        self.eigens.push(eigen.clone());
        let inner = body.open(&MTy::Var(eigen.clone()));
        let goal = goal.clone();
        let r = self.solve(ctx, term, &inner, size, depth + 1, &mut |e, md, used| {
            let saved = e.eigens.pop().expect("eigenvariable in scope");
            let node = Md::ForallI { eigen: saved.clone(), ty: goal.clone(), premise: md };
            let r = k(e, Rc::new(node), used);
            e.eigens.push(saved);
            r
        });
        self.eigens.pop();
        r
    }

    fn spine(&mut self, ctx: &Ctx, term: Option<&Term>, goal: &MTy, size: usize, depth: usize, k: Cont) -> Flow {
        let mut count = 0;
        match term {
            Some(t) => {
                let (head, args) = t.spine();
                let Some(key) = super::derivation::context_key(head) else {
                    return ControlFlow::Continue(());
                };
                let Some((_, ty)) = ctx.iter().rev().find(|(n, _)| *n == key) else {
                    return ControlFlow::Continue(());
                };
                let ty = ty.clone();
                self.shapes(ctx, &key, &ty, ty.clone(), &mut Vec::new(), Some(&args), goal, size, depth, &mut count, k)
            }
            None => {
                for (key, ty) in ctx.clone().iter().rev() {
                    count = 0;
                    self.shapes(ctx, key, ty, ty.clone(), &mut Vec::new(), None, goal, size, depth, &mut count, k)?;
                }
                ControlFlow::Continue(())
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn shapes(
        &mut self,
        ctx: &Ctx,
        key: &str,
        head_ty: &MTy,
        cur: MTy,
        elims: &mut Vec<Elim>,
        args: Option<&[&Term]>,
        goal: &MTy,
        size: usize,
        depth: usize,
        count: &mut usize,
        k: Cont,
    ) -> Flow {
        let nargs = elims.iter().filter(|e| matches!(e, Elim::Arg(..))).count();
        if args.is_none_or(|a| a.len() == nargs) {
            *count += 1;
            if *count > self.budget.max_candidates_per_node {
                self.truncated = true;
                return ControlFlow::Continue(());
            }
            let snap = self.snapshot();
            let r = if self.unify(&cur, goal) {
                let doms: Vec<MTy> = elims
                    .iter()
                    .filter_map(|e| match e {
                        Elim::Arg(d, _) => Some(d.clone()),
                        _ => None,
                    })
                    .collect();
                let spine = SpineShape { key: key.to_string(), head_ty: head_ty.clone(), elims: elims.clone(), doms };
                self.fill_args(ctx, &spine, args, Vec::new(), 1 + nargs, size, depth, k)
            } else {
                ControlFlow::Continue(())
            };
            self.restore(snap);
            r?;
        }
        let more = match args {
            Some(a) => nargs < a.len(),
            None => 2 * (nargs + 1) < size,
        };
        match self.resolve(&cur) {
            MTy::Forall(_, body) if body.uses_bound(0) => {
                let snap = self.snapshot();
                let m = self.new_meta(self.eigens.len(), true);
                let next = body.open(&m);
                elims.push(Elim::Inst(m, next.clone()));
                let r = self.shapes(ctx, key, head_ty, next, elims, args, goal, size, depth, count, k);
                elims.pop();
                self.restore(snap);
                r
            }
            MTy::Arrow(a, b) if more => {
                elims.push(Elim::Arg((*a).clone(), (*b).clone()));
                let r = self.shapes(ctx, key, head_ty, (*b).clone(), elims, args, goal, size, depth, count, k);
                elims.pop();
                r
            }
            MTy::Meta(m) if more => {
                let snap = self.snapshot();
                let level = self.metas[m].level;
                let (a, b) = (self.new_meta(level, false), self.new_meta(level, false));
                self.set(m, MTy::arrow(a.clone(), b.clone()));
                elims.push(Elim::Arg(a, b.clone()));
                let r = self.shapes(ctx, key, head_ty, b, elims, args, goal, size, depth, count, k);
                elims.pop();
                self.restore(snap);
                r
            }
            _ => ControlFlow::Continue(()),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn fill_args(
        &mut self,
        ctx: &Ctx,
        spine: &SpineShape,
        args: Option<&[&Term]>,
        done: Vec<Rc<Md>>,
        used: usize,
        size: usize,
        depth: usize,
        k: Cont,
    ) -> Flow {
        let j = done.len();
        if j == spine.doms.len() {
            let mut md = Rc::new(Md::Ax { key: spine.key.clone(), ty: spine.head_ty.clone() });
            let mut next_arg = done.into_iter();
            for e in &spine.elims {
                md = Rc::new(match e {
                    Elim::Inst(inst, ty) => Md::ForallE { inst: inst.clone(), ty: ty.clone(), premise: md },
                    Elim::Arg(_, ty) => Md::App {
                        ty: ty.clone(),
                        fun: md,
                        arg: next_arg.next().expect("one derivation per argument"),
                    },
                });
            }
            return k(self, md, used);
        }
        let rest = spine.doms.len() - j - 1;
        let avail = size.saturating_sub(used + rest);
        let dom = spine.doms[j].clone();
        self.solve(ctx, args.map(|a| a[j]), &dom, avail, depth + 1, &mut |e, md, u| {
            let mut done = done.clone();
            done.push(md);
            e.fill_args(ctx, spine, args, done, used + u, size, depth, k)
        })
    }

    fn to_derivation(&self, md: &Md, ctx: &Context) -> Derivation {
        match md {
            Md::Ax { key, ty } => Derivation::new(ctx.clone(), key_term(key), self.to_type(ty), RuleTag::Ax, vec![]),
            Md::Lam { var, dom, ty, body } => {
                let mut inner = ctx.clone();
                inner.insert(var.clone(), self.to_type(dom));
                let p = self.to_derivation(body, &inner);
                let subject = Term::lam(var.clone(), p.subject().clone());
                Derivation::new(ctx.clone(), subject, self.to_type(ty), RuleTag::ArrowI, vec![p])
            }
            Md::App { ty, fun, arg } => {
                let f = self.to_derivation(fun, ctx);
                let a = self.to_derivation(arg, ctx);
                let subject = Term::app(f.subject().clone(), a.subject().clone());
                Derivation::new(ctx.clone(), subject, self.to_type(ty), RuleTag::ArrowE, vec![f, a])
            }
            Md::ForallI { eigen, ty, premise } => {
                let p = self.to_derivation(premise, ctx);
                let rule = RuleTag::ForallI { eigen: eigen.clone() };
                Derivation::new(ctx.clone(), p.subject().clone(), self.to_type(ty), rule, vec![p])
            }
            Md::ForallE { inst, ty, premise } => {
                let p = self.to_derivation(premise, ctx);
                let rule = RuleTag::ForallE {
                    variant: elim_variant(p.subject()),
                    instantiated_with: self.to_type(inst),
                };
                Derivation::new(ctx.clone(), p.subject().clone(), self.to_type(ty), rule, vec![p])
            }
        }
    }

    fn inst_sizes_ok(&self) -> bool {
        self.metas
            .iter()
            .enumerate()
            .filter(|(_, m)| m.inst)
            .all(|(i, _)| self.msize(&MTy::Meta(i)) <= self.budget.max_instantiation_size)
    }
}

struct SpineShape {
    key: String,
    head_ty: MTy,
    elims: Vec<Elim>,
    doms: Vec<MTy>,
}

fn is_reserved(n: &str) -> bool {
    matches!(n, "alpha" | "id" | "K0" | "K1" | "U" | "V")
}

/// Runs the engine. `term = None` generates terms of size at most `size`.
/// Returns whether the budget cut off part of the search space.
pub(crate) fn run(
    ctx: &Context,
    term: Option<&Term>,
    goal: &TypeExpr,
    size: usize,
    budget: &SearchBudget,
    mode: Mode,
    on: &mut dyn FnMut(Derivation) -> Flow,
) -> bool {
    let mut rigid: BTreeSet<String> = goal.free_type_vars();
    for a in ctx.values() {
        rigid.extend(a.free_type_vars());
    }
    let mut taken_terms: BTreeSet<String> = ctx.keys().cloned().collect();
    if let Some(t) = term {
        taken_terms.extend(t.free_vars());
    }
    let mut engine = Engine {
        metas: Vec::new(),
        trail: Vec::new(),
        eigens: Vec::new(),
        rigid,
        taken_terms,
        budget: budget.clone(),
        mode,
        truncated: false,
    };
    let mctx: Ctx = ctx.iter().map(|(k, a)| (k.clone(), MTy::from_type(a))).collect();
    let size = if term.is_some() { usize::MAX } else { size };
    let _ = engine.solve(&mctx, term, &MTy::from_type(goal), size, 0, &mut |e, md, _| {
        if !e.inst_sizes_ok() {
            e.truncated = true;
            return ControlFlow::Continue(());
        }
        on(e.to_derivation(&md, ctx))
    });
    engine.truncated
}
