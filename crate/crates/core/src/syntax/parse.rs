//! Recursive-descent parser for terms and types.
//!
//! Terms: `\x. t` (or `λ`), left-associative juxtaposition, `alpha`,
//! `U[A, X]`, `V[A, X]`, `@name`, and the sugar `<t1, ..., tn>`, `#n`,
//! `##n`, `id`, `K0`, `K1`.
//! Types: `X`, `A -> B` (right-associative), `forall X. A` (or `∀`), `O`,
//! `A /\ B` (or `∧`, n-ary), `Id`, `Bool`, `Ent`.

use super::{builders, Term, TypeExpr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown sugar `{name}` at byte {pos}")]
    UnknownSugar { pos: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Lambda,
    Dot,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Comma,
    Arrow,
    Conj,
    Forall,
    Hash,
    HashHash,
    At,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '\\' | 'λ' => Tok::Lambda,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '<' => Tok::LAngle,
            '>' => Tok::RAngle,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '@' => Tok::At,
            '→' => Tok::Arrow,
            '∧' => Tok::Conj,
            '∀' => Tok::Forall,
            '-' if next == Some('>') => {
                i += 1;
                Tok::Arrow
            }
            '/' if next == Some('\\') => {
                i += 1;
                Tok::Conj
            }
            '#' if next == Some('#') => {
                i += 1;
                Tok::HashHash
            }
            '#' => Tok::Hash,
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let end = chars.get(j).map_or(src.len(), |&(p, _)| p);
                let n = src[pos..end].parse().map_err(|_| ParseError::Syntax {
                    pos,
                    msg: "number out of range".into(),
                })?;
                toks.push((pos, Tok::Num(n)));
                i = j;
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].1.is_alphanumeric() || chars[j].1 == '_' || chars[j].1 == '\'')
                {
                    j += 1;
                }
                let end = chars.get(j).map_or(src.len(), |&(p, _)| p);
                let word = &src[pos..end];
                let tok = if word == "forall" { Tok::Forall } else { Tok::Ident(word.to_string()) };
                toks.push((pos, tok));
                i = j;
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        toks.push((pos, tok));
        i += 1;
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0, end: src.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(p, _)| p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }

    // ---- terms ----

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.lambda();
        }
        let mut t = self.term_atom()?;
        loop {
            match self.peek() {
                Some(Tok::Lambda) => {
                    let body = self.lambda()?;
                    return Ok(Term::app(t, body));
                }
                Some(tok) if starts_term_atom(tok) => {
                    let a = self.term_atom()?;
                    t = Term::app(t, a);
                }
                _ => return Ok(t),
            }
        }
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::Lambda, "`\\`")?;
        let mut names = vec![self.binder_name()?];
        while let Some(Tok::Ident(_)) = self.peek() {
            names.push(self.binder_name()?);
        }
        self.expect(Tok::Dot, "`.` after binder")?;
        let body = self.term()?;
        Ok(Term::lams(names, body))
    }

    fn binder_name(&mut self) -> Result<String, ParseError> {
        let name = self.ident()?;
        if matches!(name.as_str(), "alpha" | "id" | "K0" | "K1") {
            return self.err(format!("`{name}` is reserved and cannot be bound"));
        }
        Ok(name)
    }

    fn term_atom(&mut self) -> Result<Term, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::LAngle) => {
                let mut items = vec![self.term()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    items.push(self.term()?);
                }
                self.expect(Tok::RAngle, "`>`")?;
                Ok(builders::tuple(&items))
            }
            Some(Tok::Hash) => Ok(builders::church(self.number()?)),
            Some(Tok::HashHash) => Ok(builders::ibar(self.number()?)),
            Some(Tok::At) => Ok(Term::opaque(self.ident()?)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "alpha" => Ok(Term::alpha()),
                "id" => Ok(builders::id()),
                "K0" => Ok(builders::zero()),
                "K1" => Ok(builders::one()),
                "U" | "V" if self.peek() == Some(&Tok::LBracket) => {
                    self.pos += 1;
                    let a = self.ty()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let x = self.ident()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    Ok(if name == "U" { Term::u_const(a, x) } else { Term::v_const(a, x) })
                }
                _ if name.starts_with('K') && name[1..].chars().all(|c| c.is_ascii_digit()) && name.len() > 1 => {
                    Err(ParseError::UnknownSugar { pos: at, name })
                }
                _ => Ok(Term::Var(name)),
            },
            _ => Err(ParseError::Syntax { pos: at, msg: "expected a term".into() }),
        }
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        match self.bump() {
            Some(Tok::Num(n)) => usize::try_from(n).or_else(|_| self.err("number out of range")),
            _ => {
                self.pos -= 1;
                self.err("expected a numeral after `#`")
            }
        }
    }

    // ---- types ----

    fn ty(&mut self) -> Result<TypeExpr, ParseError> {
        if self.peek() == Some(&Tok::Forall) {
            self.pos += 1;
            let mut names = vec![self.ident()?];
            while let Some(Tok::Ident(_)) = self.peek() {
                names.push(self.ident()?);
            }
            self.expect(Tok::Dot, "`.` after quantified variable")?;
            let body = self.ty()?;
            return Ok(TypeExpr::foralls(names, body));
        }
        let lhs = self.conj()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.ty()?;
            Ok(TypeExpr::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn conj(&mut self) -> Result<TypeExpr, ParseError> {
        let mut parts = vec![self.type_atom()?];
        while self.peek() == Some(&Tok::Conj) {
            self.pos += 1;
            parts.push(self.type_atom()?);
        }
        if parts.len() == 1 {
            Ok(parts.pop().unwrap())
        } else {
            Ok(builders::conj(&parts))
        }
    }

    fn type_atom(&mut self) -> Result<TypeExpr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::LParen) => {
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => Ok(match name.as_str() {
                "O" => TypeExpr::O,
                "Id" => builders::id_type(),
                "Bool" => builders::bool_type(),
                "Ent" => builders::ent_type(),
                _ => TypeExpr::Var(name),
            }),
            _ => Err(ParseError::Syntax { pos: at, msg: "expected a type".into() }),
        }
    }
}

fn starts_term_atom(tok: &Tok) -> bool {
    matches!(
        tok,
        Tok::Ident(_) | Tok::LParen | Tok::LAngle | Tok::Hash | Tok::HashHash | Tok::At
    )
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_type(text: &str) -> Result<TypeExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}
