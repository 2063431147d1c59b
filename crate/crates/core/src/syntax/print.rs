//! Canonical concrete syntax. Binder names come from the hints, renamed only
//! when the hint would capture a variable referenced in the body.

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use super::{fresh_name, ConstTag, Term, TypeExpr};

const TERM_KEYWORDS: &[&str] = &["alpha", "id", "K0", "K1", "U", "V"];
const TYPE_KEYWORDS: &[&str] = &["forall", "O", "Id", "Bool", "Ent"];

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut Vec::new(), &mut out, Prec::Top);
    out
}

pub fn print_type(a: &TypeExpr) -> String {
    let mut out = String::new();
    write_type(a, &mut Vec::new(), &mut out, false);
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_type(self))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Prec {
    Top,
    Fun,
    Arg,
}

/// Names visible from inside `body` that refer outside of it.
fn outer_names(body: &Term, env: &[String]) -> BTreeSet<String> {
    fn go(t: &Term, depth: usize, env: &[String], out: &mut BTreeSet<String>) {
        match t {
            Term::Var(n) => {
                out.insert(n.clone());
            }
            Term::Bound(i) if *i >= depth => {
                let k = i - depth;
                if k < env.len() {
                    out.insert(env[env.len() - 1 - k].clone());
                }
            }
            Term::Bound(_) | Term::Const(_) => {}
            Term::App(f, a) => {
                go(f, depth, env, out);
                go(a, depth, env, out);
            }
            Term::Lam(_, b) => go(b, depth + 1, env, out),
        }
    }
    let mut out = BTreeSet::new();
    // index 0 inside `body` is the binder being named; outer references start at 1
    go(body, 1, env, &mut out);
    out
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn write_term(t: &Term, env: &mut Vec<String>, out: &mut String, prec: Prec) {
    match t {
        Term::Var(n) => out.push_str(n),
        Term::Bound(i) => {
            if *i < env.len() {
                out.push_str(&env[env.len() - 1 - i]);
            } else {
                let _ = write!(out, "_{}", i - env.len());
            }
        }
        Term::Const(c) => write_const(c, out),
        Term::Lam(b, body) => {
            if prec != Prec::Top {
                out.push('(');
            }
            let used = outer_names(body, env);
            let hint = if is_ident(&b.0) { b.0.as_str() } else { "x" };
            let name = fresh_name(hint, |n| used.contains(n) || TERM_KEYWORDS.contains(&n));
            let _ = write!(out, "\\{name}. ");
            env.push(name);
            write_term(body, env, out, Prec::Top);
            env.pop();
            if prec != Prec::Top {
                out.push(')');
            }
        }
        Term::App(f, a) => {
            if prec == Prec::Arg {
                out.push('(');
            }
            write_term(f, env, out, Prec::Fun);
            out.push(' ');
            write_term(a, env, out, Prec::Arg);
            if prec == Prec::Arg {
                out.push(')');
            }
        }
    }
}

fn write_const(c: &ConstTag, out: &mut String) {
    match c {
        ConstTag::Alpha => out.push_str("alpha"),
        ConstTag::U(a, x) => {
            let _ = write!(out, "U[{}, {}]", print_type(a), x);
        }
        ConstTag::V(a, x) => {
            let _ = write!(out, "V[{}, {}]", print_type(a), x);
        }
        ConstTag::Opaque(n) => {
            let _ = write!(out, "@{n}");
        }
    }
}

fn type_outer_names(body: &TypeExpr, env: &[String]) -> BTreeSet<String> {
    fn go(t: &TypeExpr, depth: usize, env: &[String], out: &mut BTreeSet<String>) {
        match t {
            TypeExpr::Var(n) => {
                out.insert(n.clone());
            }
            TypeExpr::Bound(i) if *i >= depth => {
                let k = i - depth;
                if k < env.len() {
                    out.insert(env[env.len() - 1 - k].clone());
                }
            }
            TypeExpr::Bound(_) | TypeExpr::O => {}
            TypeExpr::Arrow(a, b) => {
                go(a, depth, env, out);
                go(b, depth, env, out);
            }
            TypeExpr::Forall(_, b) => go(b, depth + 1, env, out),
        }
    }
    let mut out = BTreeSet::new();
    go(body, 1, env, &mut out);
    out
}

/// `left` is set when the type sits on the left of an arrow.
fn write_type(a: &TypeExpr, env: &mut Vec<String>, out: &mut String, left: bool) {
    match a {
        TypeExpr::Var(n) => out.push_str(n),
        TypeExpr::O => out.push('O'),
        TypeExpr::Bound(i) => {
            if *i < env.len() {
                out.push_str(&env[env.len() - 1 - i]);
            } else {
                let _ = write!(out, "_{}", i - env.len());
            }
        }
        TypeExpr::Arrow(d, c) => {
            if left {
                out.push('(');
            }
            write_type(d, env, out, true);
            out.push_str(" -> ");
            write_type(c, env, out, false);
            if left {
                out.push(')');
            }
        }
        TypeExpr::Forall(b, body) => {
            if left {
                out.push('(');
            }
            let used = type_outer_names(body, env);
            let hint = if is_ident(&b.0) { b.0.as_str() } else { "X" };
            let name = fresh_name(hint, |n| used.contains(n) || TYPE_KEYWORDS.contains(&n));
            let _ = write!(out, "forall {name}. ");
            env.push(name);
            write_type(body, env, out, false);
            env.pop();
            if left {
                out.push(')');
            }
        }
    }
}
