use std::collections::BTreeSet;

use crate::polarity::erase_quantifiers;
use crate::syntax::TypeExpr;

/// Whether the quantifier-free erasure of `a` has a closed inhabitant in the
/// simple system.
pub fn simple_inhabited(a: &TypeExpr) -> bool {
    let a = erase_quantifiers(a);
    prove(&BTreeSet::new(), &a, &mut Vec::new())
}

fn prove(hyps: &BTreeSet<TypeExpr>, goal: &TypeExpr, stack: &mut Vec<(BTreeSet<TypeExpr>, TypeExpr)>) -> bool {
    let (args, target) = goal.split_arrows();
    let mut hyps = hyps.clone();
    hyps.extend(args.into_iter().cloned());
    let key = (hyps, target.clone());
    if stack.contains(&key) {
        return false;
    }
    stack.push(key);
    let (hyps, target) = stack.last().cloned().unwrap();
    let ok = hyps.iter().any(|h| {
        let (premises, t) = h.split_arrows();
        *t == target && premises.iter().all(|p| prove(&hyps, p, stack))
    });
    stack.pop();
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    #[test]
    fn decides() {
        for (s, expect) in [
            ("forall X. X -> X", true),
            ("forall X. X", false),
            ("forall X Y. X -> Y", false),
            ("forall X Y. ((X -> Y) -> X) -> X", false),
            ("forall X. ((X -> X) -> X) -> X", true),
            ("forall X Y. (Y -> X) -> (X -> Y) -> X -> Y", true),
        ] {
            assert_eq!(simple_inhabited(&parse_type(s).unwrap()), expect, "{s}");
        }
    }
}
