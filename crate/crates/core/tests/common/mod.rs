#![allow(dead_code)]

use itypes::syntax::TypeExpr;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

/// Signs of every quantifier: `(negative, proper)`, by counting how often the
/// path goes left of an arrow.
fn quantifier_signs(a: &TypeExpr, lefts: usize, out: &mut Vec<(bool, bool)>) {
    match a {
        TypeExpr::Arrow(b, c) => {
            quantifier_signs(b, lefts + 1, out);
            quantifier_signs(c, lefts, out);
        }
        TypeExpr::Forall(_, b) => {
            out.push((lefts % 2 == 1, b.uses_bound(0)));
            quantifier_signs(b, lefts, out);
        }
        _ => {}
    }
}

/// `(∀⁺, ∀⁻)` membership computed from quantifier signs.
pub fn polarity_oracle(a: &TypeExpr) -> (bool, bool) {
    let mut qs = Vec::new();
    quantifier_signs(a, 0, &mut qs);
    let pos = qs.iter().all(|&(neg, proper)| !neg && proper);
    let neg = qs.iter().all(|&(neg, proper)| neg && proper);
    (pos, neg)
}

/// Number of η-long β-normal terms of the simple type `goal` in `ctx`, by
/// size, for sizes up to `bound`.
pub fn count_long_terms(ctx: &[TypeExpr], goal: &TypeExpr, bound: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bound + 1];
    let (args, target) = goal.split_arrows();
    let n = args.len();
    if n > bound {
        return counts;
    }
    let mut inner: Vec<TypeExpr> = ctx.to_vec();
    inner.extend(args.into_iter().cloned());
    let bodies = count_bodies(&inner, target, bound - n);
    for (s, c) in bodies.into_iter().enumerate() {
        counts[s + n] += c;
    }
    counts
}

fn count_bodies(ctx: &[TypeExpr], atom: &TypeExpr, bound: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bound + 1];
    for h in ctx {
        let (premises, t) = h.split_arrows();
        if t != atom {
            continue;
        }
        let base = 1 + premises.len();
        if base > bound {
            continue;
        }
        // convolution of the argument counts
        let mut acc = vec![0u64; bound + 1];
        acc[base] = 1;
        for p in premises {
            let sub = count_long_terms(ctx, p, bound - base);
            let mut next = vec![0u64; bound + 1];
            for (i, &a) in acc.iter().enumerate().filter(|(_, a)| **a > 0) {
                for (j, &b) in sub.iter().enumerate().filter(|(_, b)| **b > 0) {
                    if i + j <= bound {
                        next[i + j] += a * b;
                    }
                }
            }
            acc = next;
        }
        for (s, c) in acc.into_iter().enumerate() {
            counts[s] += c;
        }
    }
    counts
}
