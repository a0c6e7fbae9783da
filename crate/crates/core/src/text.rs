//! Text syntax for scalars and elements.
//!
//! ```text
//! element := ["+"|"-"] term (("+"|"-") term)*
//! term    := factor ("*" factor)*
//! factor  := int ["/" int] | symbol ["^" int] | arrow | "e"<vertex> | "(" scalar ")"
//! ```
//! Arrow factors are composed left to right; a term without arrows is a
//! multiple of the unit.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::quiver::{Path, Quiver};
use crate::scalar::{Monomial, PolyScalar, Role, Var};

/// ASCII spellings accepted for common Greek symbols.
pub const ALIASES: &[(&str, &str)] =
    &[("lam", "λ"), ("lambda", "λ"), ("mu", "μ"), ("nu", "ν"), ("hbar", "ħ")];

pub fn canonical_symbol(name: &str) -> &str {
    ALIASES.iter().find(|(a, _)| *a == name).map_or(name, |(_, u)| u)
}

/// Declared parameters and unknowns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symbols {
    vars: BTreeMap<String, Var>,
}

impl Symbols {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, name: &str, role: Role) -> Result<Var> {
        let name = canonical_symbol(name);
        if !is_ident(name) {
            return Err(Error::usage(format!("`{name}` is not a valid symbol")));
        }
        if let Some(v) = self.vars.get(name) {
            if v.role() != role {
                return Err(Error::usage(format!("symbol `{name}` declared with two roles")));
            }
            return Ok(v.clone());
        }
        let v = match role {
            Role::Param => Var::param(name),
            Role::Unknown => Var::unknown(name),
        };
        self.vars.insert(name.to_string(), v.clone());
        Ok(v)
    }

    pub fn get(&self, name: &str) -> Option<&Var> {
        self.vars.get(canonical_symbol(name))
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.vars.values()
    }

    pub fn params(&self) -> impl Iterator<Item = &Var> {
        self.vars.values().filter(|v| v.role() == Role::Param)
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_') && cs.all(is_ident_char)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => out.push((col, Tok::Plus)),
            '-' | '−' => out.push((col, Tok::Minus)),
            '*' | '·' => out.push((col, Tok::Star)),
            '/' => out.push((col, Tok::Slash)),
            '^' => out.push((col, Tok::Caret)),
            '(' => out.push((col, Tok::LParen)),
            ')' => out.push((col, Tok::RParen)),
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((col, Tok::Int(s.parse().unwrap())));
                continue;
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push((col, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            _ => return Err(Error::usage(format!("column {col}: unexpected character `{c}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
    quiver: Option<&'a Quiver>,
    symbols: &'a Symbols,
}

/// One product of factors: a scalar and an optional path.
struct Term {
    coeff: PolyScalar,
    path: Option<Path>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn err<T>(&self, msg: impl AsRef<str>) -> Result<T> {
        Err(Error::usage(format!("column {}: {}", self.col(), msg.as_ref())))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        loop {
            let mut t = self.term()?;
            if neg {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            if self.eat(&Tok::Plus) {
                neg = false;
            } else if self.eat(&Tok::Minus) {
                neg = true;
            } else {
                break;
            }
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = Term { coeff: PolyScalar::one(), path: None };
        loop {
            self.factor(&mut t)?;
            if !self.eat(&Tok::Star) {
                break;
            }
        }
        Ok(t)
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn factor(&mut self, t: &mut Term) -> Result<()> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let d = if self.eat(&Tok::Slash) { self.int()? } else { BigInt::from(1) };
                if d.is_zero() {
                    return self.err("division by zero");
                }
                t.coeff = t.coeff.scale(&BigRational::new(n, d));
                Ok(())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                let mut s = PolyScalar::zero();
                for it in inner {
                    if it.path.is_some() {
                        return self.err("paths are not allowed inside parentheses");
                    }
                    s = &s + &it.coeff;
                }
                t.coeff = &t.coeff * &s;
                Ok(())
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(v) = self.symbols.get(&name) {
                    let e = if self.eat(&Tok::Caret) {
                        let n = self.int()?;
                        u32::try_from(n).map_err(|_| Error::usage("exponent too large"))?
                    } else {
                        1
                    };
                    t.coeff = &t.coeff * &PolyScalar::term(crate::scalar::int(1), Monomial::var(v.clone(), e));
                    return Ok(());
                }
                let Some(q) = self.quiver else {
                    self.pos -= 1;
                    return self.err(format!("undeclared symbol `{name}`"));
                };
                let p = if q.has_arrow(&name) {
                    Path::Word(std::iter::once(q.arrow(&name)? as u32).collect())
                } else if let Some(v) = name.strip_prefix('e').and_then(|id| q.vertex(id).ok()) {
                    Path::Trivial(v)
                } else {
                    self.pos -= 1;
                    return self.err(format!("undeclared symbol `{name}`"));
                };
                t.path = match t.path.take() {
                    None => Some(p),
                    Some(prev) => match q.compose(&prev, &p) {
                        Some(pq) => Some(pq),
                        None => {
                            self.pos -= 1;
                            return self.err(format!("`{name}` does not compose with the path before it"));
                        }
                    },
                };
                Ok(())
            }
            _ => self.err("expected a number, symbol, arrow or `(`"),
        }
    }
}

fn run<'a>(src: &str, quiver: Option<&'a Quiver>, symbols: &'a Symbols) -> Result<Vec<Term>> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::usage("column 1: empty expression"));
    }
    let mut p = Parser { toks, pos: 0, end_col: src.chars().count() + 1, quiver, symbols };
    let terms = p.sum()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(terms)
}

pub fn parse_scalar(src: &str, symbols: &Symbols) -> Result<PolyScalar> {
    let mut s = PolyScalar::zero();
    for t in run(src, None, symbols)? {
        s = &s + &t.coeff;
    }
    Ok(s)
}

pub fn parse_element(quiver: &Arc<Quiver>, src: &str, symbols: &Symbols) -> Result<Element> {
    let mut e = Element::zero(quiver);
    for t in run(src, Some(quiver), symbols)? {
        match t.path {
            Some(p) => e.add_term(p, t.coeff),
            None => e = &e + &Element::unit(quiver).scale(&t.coeff),
        }
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Arc<Quiver>, Symbols) {
        let q = Quiver::new(&["1", "2"], &[("x", "1", "2"), ("y", "2", "1")]).unwrap();
        let mut s = Symbols::new();
        s.declare("t", Role::Param).unwrap();
        s.declare("lam", Role::Unknown).unwrap();
        s.declare("mu", Role::Unknown).unwrap();
        (Arc::new(q), s)
    }

    #[test]
    fn element_round_trip() {
        let (q, s) = setup();
        for src in ["x*y - 3/2*t^2*λ*e1", "(λ - μ)*x + y*x*y", "0", "-e2"] {
            let e = parse_element(&q, src, &s).unwrap();
            let again = parse_element(&q, &e.to_string(), &s).unwrap();
            assert_eq!(e, again, "{src}");
        }
    }

    #[test]
    fn aliases_and_combining() {
        let (q, s) = setup();
        let e = parse_element(&q, "lam*x + mu*x - λ*x", &s).unwrap();
        assert_eq!(e.to_string(), "μ*x");
    }

    #[test]
    fn errors_carry_columns() {
        let (q, s) = setup();
        let err = parse_element(&q, "x*x", &s).unwrap_err().to_string();
        assert!(err.contains("column 3"), "{err}");
        let err = parse_element(&q, "2*z", &s).unwrap_err().to_string();
        assert!(err.contains("column 3") && err.contains("`z`"), "{err}");
    }
}
