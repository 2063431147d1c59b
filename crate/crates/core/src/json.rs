use serde::Serializer;

use crate::syntax::{print_term, print_type, Term, TypeExpr};

pub(crate) fn ser_term<S: Serializer>(t: &Term, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&print_term(t))
}

#[allow(dead_code)]
pub(crate) fn ser_type<S: Serializer>(a: &TypeExpr, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&print_type(a))
}
