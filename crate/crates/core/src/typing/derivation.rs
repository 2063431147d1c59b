//! Explicit System F derivation trees and their checker.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::syntax::{print_term, print_type, ConstTag, Path, Term, TypeExpr};

/// Typing context. The constant `alpha` is typed through the key `alpha` and
/// an opaque constant `@n` through the key `@n`.
pub type Context = BTreeMap<String, TypeExpr>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub context: Context,
    pub subject: Term,
    pub ty: TypeExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleTag {
    Ax,
    ArrowI,
    ArrowE,
    ForallI { eigen: String },
    ForallE { variant: u8, instantiated_with: TypeExpr },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Judgment,
    pub rule: RuleTag,
    pub premises: Vec<Derivation>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid derivation node at {path:?}: {msg}")]
pub struct DerivationError {
    pub path: Path,
    pub msg: String,
}

/// Context key under which a constant or variable head is typed.
pub fn context_key(t: &Term) -> Option<String> {
    match t {
        Term::Var(x) => Some(x.clone()),
        Term::Const(ConstTag::Alpha) => Some("alpha".into()),
        Term::Const(ConstTag::Opaque(n)) => Some(format!("@{n}")),
        _ => None,
    }
}

/// Inverse of [`context_key`].
pub fn key_term(key: &str) -> Term {
    if key == "alpha" {
        Term::alpha()
    } else if let Some(n) = key.strip_prefix('@') {
        Term::opaque(n)
    } else {
        Term::var(key)
    }
}

/// The `(∀e)` variant fixed by the shape of the subject.
pub fn elim_variant(subject: &Term) -> u8 {
    match subject {
        Term::Lam(..) => 1,
        _ => match subject.spine().0 {
            Term::Lam(..) => 3,
            _ => 2,
        },
    }
}

impl Derivation {
    pub fn new(context: Context, subject: Term, ty: TypeExpr, rule: RuleTag, premises: Vec<Derivation>) -> Self {
        Derivation { conclusion: Judgment { context, subject, ty }, rule, premises }
    }

    pub fn subject(&self) -> &Term {
        &self.conclusion.subject
    }

    pub fn ty(&self) -> &TypeExpr {
        &self.conclusion.ty
    }

    pub fn context(&self) -> &Context {
        &self.conclusion.context
    }

    pub fn at_path(&self, path: &[usize]) -> Option<&Derivation> {
        let mut cur = self;
        for &i in path {
            cur = cur.premises.get(i)?;
        }
        Some(cur)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Applies `f` to every node, parents first.
    pub fn visit(&self, f: &mut dyn FnMut(&Path, &Derivation)) {
        fn go(d: &Derivation, path: &mut Path, f: &mut dyn FnMut(&Path, &Derivation)) {
            f(path, d);
            for (i, p) in d.premises.iter().enumerate() {
                path.push(i);
                go(p, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }

    /// Applies `f` to every type in the tree (contexts, conclusions, instantiations).
    pub fn map_types(&self, f: &dyn Fn(&TypeExpr) -> TypeExpr) -> Derivation {
        let rule = match &self.rule {
            RuleTag::ForallE { variant, instantiated_with } => {
                RuleTag::ForallE { variant: *variant, instantiated_with: f(instantiated_with) }
            }
            r => r.clone(),
        };
        Derivation {
            conclusion: Judgment {
                context: self.context().iter().map(|(k, v)| (k.clone(), f(v))).collect(),
                subject: self.subject().clone(),
                ty: f(self.ty()),
            },
            rule,
            premises: self.premises.iter().map(|p| p.map_types(f)).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let context: serde_json::Map<String, Value> = self
            .context()
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(print_type(v))))
            .collect();
        let rule = match &self.rule {
            RuleTag::Ax => "ax".to_string(),
            RuleTag::ArrowI => "arrow-i".into(),
            RuleTag::ArrowE => "arrow-e".into(),
            RuleTag::ForallI { .. } => "forall-i".into(),
            RuleTag::ForallE { variant, .. } => format!("forall-e{variant}"),
        };
        let mut obj = json!({
            "rule": rule,
            "context": context,
            "subject": print_term(self.subject()),
            "type": print_type(self.ty()),
        });
        match &self.rule {
            RuleTag::ForallE { instantiated_with, .. } => {
                obj["instantiated_with"] = Value::String(print_type(instantiated_with));
            }
            RuleTag::ForallI { eigen } => obj["eigenvariable"] = Value::String(eigen.clone()),
            _ => {}
        }
        obj["premises"] = Value::Array(self.premises.iter().map(Derivation::to_json).collect());
        obj
    }
}

impl Serialize for Derivation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

fn fail<T>(path: &Path, msg: impl Into<String>) -> Result<T, DerivationError> {
    Err(DerivationError { path: path.clone(), msg: msg.into() })
}

/// Checks every node against its rule schema, including freshness for
/// `(∀i)` and properness for `(∀e)`. Reports the first bad node (preorder).
pub fn check_derivation(d: &Derivation) -> Result<(), DerivationError> {
    check_node(d, &mut Vec::new())
}

fn check_node(d: &Derivation, path: &mut Path) -> Result<(), DerivationError> {
    let Judgment { context, subject, ty } = &d.conclusion;
    let arity = match d.rule {
        RuleTag::Ax => 0,
        RuleTag::ArrowE => 2,
        _ => 1,
    };
    if d.premises.len() != arity {
        return fail(path, format!("expected {arity} premises, found {}", d.premises.len()));
    }
    if !ty.is_locally_closed() || context.values().any(|a| !a.is_locally_closed()) {
        return fail(path, "type with a dangling bound variable");
    }
    match &d.rule {
        RuleTag::Ax => {
            let Some(key) = context_key(subject) else {
                return fail(path, "axiom subject is not a variable or typed constant");
            };
            match context.get(&key) {
                Some(a) if a == ty => {}
                Some(a) => {
                    return fail(path, format!("{key} has type {} in the context", print_type(a)))
                }
                None => return fail(path, format!("{key} is not in the context")),
            }
        }
        RuleTag::ArrowI => {
            let p = &d.premises[0].conclusion;
            let (Term::Lam(_, body), TypeExpr::Arrow(a, b)) = (subject, ty) else {
                return fail(path, "arrow introduction needs an abstraction at an arrow type");
            };
            let extra: Vec<&String> = p.context.keys().filter(|k| !context.contains_key(*k)).collect();
            if extra.len() != 1 || p.context.len() != context.len() + 1 {
                return fail(path, "premise must extend the context by exactly one variable");
            }
            let x = extra[0];
            if context.iter().any(|(k, v)| p.context.get(k) != Some(v)) {
                return fail(path, "premise changes the context");
            }
            if p.context[x] != **a || subject.has_free_var(x) {
                return fail(path, "bad abstraction variable");
            }
            if p.subject != body.open(x) || p.ty != **b {
                return fail(path, "premise does not match the abstraction body");
            }
        }
        RuleTag::ArrowE => {
            let (f, a) = (&d.premises[0].conclusion, &d.premises[1].conclusion);
            let Term::App(tf, ta) = subject else {
                return fail(path, "arrow elimination needs an application");
            };
            if f.context != *context || a.context != *context {
                return fail(path, "premise changes the context");
            }
            if f.subject != **tf || a.subject != **ta {
                return fail(path, "premise subjects do not match the application");
            }
            if f.ty != TypeExpr::arrow(a.ty.clone(), ty.clone()) {
                return fail(path, "function type does not match");
            }
        }
        RuleTag::ForallI { eigen } => {
            let p = &d.premises[0].conclusion;
            let TypeExpr::Forall(_, body) = ty else {
                return fail(path, "generalization needs a quantified type");
            };
            if p.context != *context || p.subject != *subject {
                return fail(path, "premise changes the context or subject");
            }
            if p.ty.close(eigen) != **body {
                return fail(path, "premise type does not generalize to the conclusion");
            }
            if context.values().any(|a| a.has_free_var(eigen)) {
                return fail(path, format!("{eigen} is free in the context"));
            }
        }
        RuleTag::ForallE { variant, instantiated_with } => {
            let p = &d.premises[0].conclusion;
            if p.context != *context || p.subject != *subject {
                return fail(path, "premise changes the context or subject");
            }
            let TypeExpr::Forall(_, body) = &p.ty else {
                return fail(path, "premise type is not quantified");
            };
            if !body.uses_bound(0) {
                return fail(path, "instantiated quantifier is improper");
            }
            if !instantiated_with.is_locally_closed() || body.open(instantiated_with) != *ty {
                return fail(path, "conclusion is not the instance");
            }
            if *variant != elim_variant(subject) {
                return fail(path, format!("variant {variant} does not match the subject"));
            }
        }
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_node(p, path)?;
        path.pop();
    }
    Ok(())
}

pub fn is_valid(d: &Derivation) -> bool {
    check_derivation(d).is_ok()
}

/// Every `(∀e)` node with its variant.
pub fn classify_forall_elims(d: &Derivation) -> Vec<(Path, u8)> {
    let mut out = Vec::new();
    d.visit(&mut |p, n| {
        if let RuleTag::ForallE { variant, .. } = n.rule {
            out.push((p.clone(), variant));
        }
    });
    out
}

pub fn uses_forall_elim(d: &Derivation) -> bool {
    !classify_forall_elims(d).is_empty()
}
