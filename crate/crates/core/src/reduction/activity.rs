//! E-inactive occurrences, E-inactive and E-passive subterms, E-good terms.
//!
//! An occurrence is E-inactive when it is a free variable in `E`, or when it is
//! bound by an abstraction sitting in the abstraction prefix of an argument of
//! a spine whose head occurrence is already E-inactive. That definition refers
//! to itself, so the set is computed as a least fixed point.

use std::collections::{BTreeSet, HashSet};

use crate::syntax::{ConstTag, Path, Term};

pub type OccurrenceSet = BTreeSet<Path>;

#[derive(Clone, Debug)]
enum Occ {
    Free(String),
    /// Bound by the abstraction at this path.
    Binder(Path),
}

/// A maximal application spine `(h)a1...an` (n may be 0).
struct Spine {
    root: Path,
    head: Path,
    head_var: Option<Occ>,
    args: Vec<Path>,
}

struct Analysis {
    occurrences: Vec<(Path, Occ)>,
    spines: Vec<Spine>,
}

fn analyse(t: &Term) -> Analysis {
    let mut a = Analysis { occurrences: Vec::new(), spines: Vec::new() };
    walk(t, &mut Vec::new(), &mut Vec::new(), true, &mut a);
    a
}

fn occ_of(t: &Term, binders: &[Path]) -> Option<Occ> {
    match t {
        Term::Var(n) => Some(Occ::Free(n.clone())),
        Term::Bound(i) if *i < binders.len() => {
            Some(Occ::Binder(binders[binders.len() - 1 - i].clone()))
        }
        _ => None,
    }
}

fn walk(t: &Term, path: &mut Path, binders: &mut Vec<Path>, maximal: bool, a: &mut Analysis) {
    if let Some(o) = occ_of(t, binders) {
        a.occurrences.push((path.clone(), o));
    }
    if maximal && !matches!(t, Term::Lam(..)) {
        let (head, args) = t.spine();
        let mut head_path = path.clone();
        head_path.extend(std::iter::repeat_n(0, args.len()));
        let n = args.len();
        let arg_paths = (0..n)
            .map(|k| {
                let mut p = path.clone();
                p.extend(std::iter::repeat_n(0, n - 1 - k));
                p.push(1);
                p
            })
            .collect();
        a.spines.push(Spine {
            root: path.clone(),
            head: head_path,
            head_var: occ_of(head, binders),
            args: arg_paths,
        });
    }
    match t {
        Term::App(f, x) => {
            path.push(0);
            walk(f, path, binders, false, a);
            path.pop();
            path.push(1);
            walk(x, path, binders, true, a);
            path.pop();
        }
        Term::Lam(_, body) => {
            binders.push(path.clone());
            path.push(0);
            walk(body, path, binders, true, a);
            path.pop();
            binders.pop();
        }
        _ => {}
    }
}

fn lam_prefix(t: &Term, start: &Path) -> Vec<Path> {
    let mut out = Vec::new();
    let mut p = start.clone();
    let mut cur = t.at_path(start);
    while let Some(Term::Lam(_, body)) = cur {
        out.push(p.clone());
        p.push(0);
        cur = Some(body);
    }
    out
}

struct Activity {
    analysis: Analysis,
    inactive_binders: HashSet<Path>,
    e: BTreeSet<String>,
}

impl Activity {
    fn compute(t: &Term, e: &BTreeSet<String>) -> Self {
        let analysis = analyse(t);
        let mut act = Activity { analysis, inactive_binders: HashSet::new(), e: e.clone() };
        loop {
            let mut fresh = Vec::new();
            for s in &act.analysis.spines {
                if !s.head_var.as_ref().is_some_and(|o| act.is_inactive(o)) {
                    continue;
                }
                for arg in &s.args {
                    for lam in lam_prefix(t, arg) {
                        if !act.inactive_binders.contains(&lam) {
                            fresh.push(lam);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                return act;
            }
            act.inactive_binders.extend(fresh);
        }
    }

    fn is_inactive(&self, o: &Occ) -> bool {
        match o {
            Occ::Free(n) => self.e.contains(n),
            Occ::Binder(p) => self.inactive_binders.contains(p),
        }
    }

    fn inactive_spines(&self) -> impl Iterator<Item = &Spine> {
        self.analysis
            .spines
            .iter()
            .filter(|s| s.head_var.as_ref().is_some_and(|o| self.is_inactive(o)))
    }

    fn occurrences(&self) -> OccurrenceSet {
        self.analysis
            .occurrences
            .iter()
            .filter(|(_, o)| self.is_inactive(o))
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Every prefix `(x)u1...uk` of an inactive spine.
    fn inactive_subterms(&self) -> OccurrenceSet {
        let mut out = OccurrenceSet::new();
        for s in self.inactive_spines() {
            let mut p = s.root.clone();
            loop {
                out.insert(p.clone());
                if p == s.head {
                    break;
                }
                p.push(0);
            }
        }
        out
    }

    fn passive_subterms(&self, t: &Term) -> OccurrenceSet {
        let mut out = OccurrenceSet::new();
        for s in self.inactive_spines() {
            for arg in &s.args {
                let mut p = arg.clone();
                out.insert(p.clone());
                while let Some(Term::Lam(..)) = t.at_path(&p) {
                    p.push(0);
                    out.insert(p.clone());
                }
            }
        }
        out
    }
}

/// Paths of the E-inactive variable occurrences of `t`.
pub fn e_inactive_variable_occurrences(t: &Term, e: &BTreeSet<String>) -> OccurrenceSet {
    Activity::compute(t, e).occurrences()
}

pub fn e_inactive_subterms(t: &Term, e: &BTreeSet<String>) -> OccurrenceSet {
    Activity::compute(t, e).inactive_subterms()
}

pub fn e_passive_subterms(t: &Term, e: &BTreeSet<String>) -> OccurrenceSet {
    Activity::compute(t, e).passive_subterms(t)
}

/// Every `U_{B,X}` is applied to exactly one argument `w` with `(U_{B,X})w`
/// E-passive, and every `V_{B,X}` is applied to an E-inactive subterm.
pub fn is_e_good(t: &Term, e: &BTreeSet<String>) -> bool {
    let act = Activity::compute(t, e);
    let inactive = act.inactive_subterms();
    let passive = act.passive_subterms(t);
    let mut ok = true;
    visit_consts(t, &mut Vec::new(), &mut |path, c| {
        if !ok {
            return;
        }
        let is_u = matches!(c, ConstTag::U(..));
        let is_v = matches!(c, ConstTag::V(..));
        if !is_u && !is_v {
            return;
        }
        let applied = path.last() == Some(&0)
            && matches!(t.at_path(&path[..path.len() - 1]), Some(Term::App(..)));
        if !applied {
            ok = false;
            return;
        }
        let parent = &path[..path.len() - 1];
        if is_u {
            let more_args = parent.last() == Some(&0)
                && matches!(t.at_path(&parent[..parent.len() - 1]), Some(Term::App(..)));
            ok = !more_args && passive.contains(parent);
        } else {
            let mut arg = parent.to_vec();
            arg.push(1);
            ok = inactive.contains(&arg);
        }
    });
    ok
}

/// `t` is `Fv(t)`-good.
pub fn is_good(t: &Term) -> bool {
    is_e_good(t, &t.free_vars())
}

fn visit_consts(t: &Term, path: &mut Path, f: &mut dyn FnMut(&Path, &ConstTag)) {
    match t {
        Term::Const(c) => f(path, c),
        Term::App(g, a) => {
            path.push(0);
            visit_consts(g, path, f);
            path.pop();
            path.push(1);
            visit_consts(a, path, f);
            path.pop();
        }
        Term::Lam(_, b) => {
            path.push(0);
            visit_consts(b, path, f);
            path.pop();
        }
        _ => {}
    }
}
