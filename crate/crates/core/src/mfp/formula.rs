use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::semantics::{Frame, Relation};
use crate::syntax::IndexTerm;

/// First-order formula over binary relation symbols and equality. The
/// guarded universals `∀x∀y(R(x,y) → A)` and `∀x∀y(x = y → A)` are ordinary
/// nested quantifiers around an implication; `mfp_member` recognizes them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FOFormula {
    Rel(String, String, String),
    Eq(String, String),
    And(Box<FOFormula>, Box<FOFormula>),
    Or(Box<FOFormula>, Box<FOFormula>),
    Forall(String, Box<FOFormula>),
    Exists(String, Box<FOFormula>),
    Not(Box<FOFormula>),
    Implies(Box<FOFormula>, Box<FOFormula>),
}

impl FOFormula {
    pub fn rel(symbol: &str, x: &str, y: &str) -> Self {
        FOFormula::Rel(symbol.into(), x.into(), y.into())
    }

    pub fn eq(x: &str, y: &str) -> Self {
        FOFormula::Eq(x.into(), y.into())
    }

    pub fn and(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, body: FOFormula) -> Self {
        FOFormula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: &str, body: FOFormula) -> Self {
        FOFormula::Exists(v.into(), Box::new(body))
    }

    pub fn not(body: FOFormula) -> Self {
        FOFormula::Not(Box::new(body))
    }

    pub fn implies(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::Implies(Box::new(a), Box::new(b))
    }

    /// `∀x∀y(R(x,y) → body)`.
    pub fn guarded(symbol: &str, x: &str, y: &str, body: FOFormula) -> Self {
        Self::forall(x, Self::forall(y, Self::implies(Self::rel(symbol, x, y), body)))
    }

    /// `∀x∀y(x = y → body)`.
    pub fn guarded_eq(x: &str, y: &str, body: FOFormula) -> Self {
        Self::forall(x, Self::forall(y, Self::implies(Self::eq(x, y), body)))
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut note = |v: &str, bound: &Vec<&str>| {
            if !bound.contains(&v) {
                out.insert(v.to_string());
            }
        };
        match self {
            FOFormula::Rel(_, x, y) | FOFormula::Eq(x, y) => {
                note(x, bound);
                note(y, bound);
            }
            FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FOFormula::Not(a) => a.collect_free(bound, out),
            FOFormula::Forall(v, a) | FOFormula::Exists(v, a) => {
                bound.push(v);
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn bound_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let FOFormula::Forall(v, _) | FOFormula::Exists(v, _) = f {
                out.insert(v.clone());
            }
        });
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let FOFormula::Rel(s, _, _) = f {
                out.insert(s.clone());
            }
        });
        out
    }

    pub fn walk(&self, visit: &mut impl FnMut(&FOFormula)) {
        visit(self);
        match self {
            FOFormula::Rel(..) | FOFormula::Eq(..) => {}
            FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Implies(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            FOFormula::Not(a) | FOFormula::Forall(_, a) | FOFormula::Exists(_, a) => a.walk(visit),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            FOFormula::Rel(..) | FOFormula::Eq(..) => 0,
            FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
            FOFormula::Not(a) | FOFormula::Forall(_, a) | FOFormula::Exists(_, a) => 1 + a.depth(),
        }
    }

    /// If this is `∀x∀y(G → A)` with `G` one of `R(x,y)` or `x = y`, the body `A`.
    pub fn guarded_body(&self) -> Option<&FOFormula> {
        let FOFormula::Forall(x, inner) = self else { return None };
        let FOFormula::Forall(y, inner) = inner.as_ref() else { return None };
        let FOFormula::Implies(guard, body) = inner.as_ref() else { return None };
        match guard.as_ref() {
            FOFormula::Rel(_, gx, gy) | FOFormula::Eq(gx, gy) if gx == x && gy == y => Some(body),
            _ => None,
        }
    }
}

/// Membership in the MFP grammar: atoms, `∧`, `∨`, `∀`, `∃` and the two
/// guarded universals. Purely syntactic.
pub fn mfp_member(psi: &FOFormula) -> bool {
    if let Some(body) = psi.guarded_body() {
        if mfp_member(body) {
            return true;
        }
    }
    match psi {
        FOFormula::Rel(..) | FOFormula::Eq(..) => true,
        FOFormula::And(a, b) | FOFormula::Or(a, b) => mfp_member(a) && mfp_member(b),
        FOFormula::Forall(_, a) | FOFormula::Exists(_, a) => mfp_member(a),
        FOFormula::Not(_) | FOFormula::Implies(..) => false,
    }
}

/// Index interpreting a relation symbol: the atom of the same name if the
/// frame has one, otherwise the atom named by the lowercased symbol.
pub fn resolve_symbol(frame: &Frame, symbol: &str) -> Result<IndexTerm> {
    let alphabet = frame.alphabet();
    [symbol.to_string(), symbol.to_lowercase()]
        .into_iter()
        .map(IndexTerm::atom)
        .find(|t| alphabet.contains(t))
        .ok_or_else(|| Error::UnknownRelationSymbol(symbol.to_string()))
}

pub type Assignment = BTreeMap<String, usize>;

/// Tarskian satisfaction over the worlds and relations of `frame`.
pub fn fo_eval(frame: &Frame, psi: &FOFormula, assignment: &Assignment) -> Result<bool> {
    let mut rels = BTreeMap::new();
    for s in psi.symbols() {
        let t = resolve_symbol(frame, &s)?;
        rels.insert(s, frame.relation_of(&t)?.into_owned());
    }
    for (v, &w) in assignment {
        if w >= frame.world_count() {
            return Err(Error::Malformed(format!("variable {v} assigned to missing world {w}")));
        }
    }
    let mut env: Vec<(&str, usize)> = assignment.iter().map(|(v, w)| (v.as_str(), *w)).collect();
    eval(psi, frame.world_count(), &rels, &mut env)
}

pub fn fo_sentence_holds(frame: &Frame, psi: &FOFormula) -> Result<bool> {
    fo_eval(frame, psi, &Assignment::new())
}

fn lookup(env: &[(&str, usize)], v: &str) -> Result<usize> {
    env.iter()
        .rev()
        .find(|(name, _)| *name == v)
        .map(|(_, w)| *w)
        .ok_or_else(|| Error::UnboundVariable(v.to_string()))
}

fn eval<'a>(
    psi: &'a FOFormula,
    n: usize,
    rels: &BTreeMap<String, Relation>,
    env: &mut Vec<(&'a str, usize)>,
) -> Result<bool> {
    Ok(match psi {
        FOFormula::Rel(s, x, y) => rels[s].contains(lookup(env, x)?, lookup(env, y)?),
        FOFormula::Eq(x, y) => lookup(env, x)? == lookup(env, y)?,
        FOFormula::And(a, b) => eval(a, n, rels, env)? && eval(b, n, rels, env)?,
        FOFormula::Or(a, b) => eval(a, n, rels, env)? || eval(b, n, rels, env)?,
        FOFormula::Implies(a, b) => !eval(a, n, rels, env)? || eval(b, n, rels, env)?,
        FOFormula::Not(a) => !eval(a, n, rels, env)?,
        FOFormula::Forall(v, a) | FOFormula::Exists(v, a) => {
            let universal = matches!(psi, FOFormula::Forall(..));
            for w in 0..n {
                env.push((v, w));
                let value = eval(a, n, rels, env);
                env.pop();
                if value? != universal {
                    return Ok(!universal);
                }
            }
            universal
        }
    })
}

impl fmt::Display for FOFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_fo(self, f, false)
    }
}

fn write_fo(psi: &FOFormula, f: &mut fmt::Formatter<'_>, operand: bool) -> fmt::Result {
    match psi {
        FOFormula::Rel(s, x, y) => write!(f, "{s}({x},{y})"),
        FOFormula::Eq(x, y) => write!(f, "{x}={y}"),
        FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Implies(a, b) => {
            let op = match psi {
                FOFormula::And(..) => "&",
                FOFormula::Or(..) => "|",
                _ => "->",
            };
            write!(f, "(")?;
            write_fo(a, f, true)?;
            write!(f, " {op} ")?;
            write_fo(b, f, true)?;
            write!(f, ")")
        }
        FOFormula::Not(a) => {
            write!(f, "~")?;
            write_fo(a, f, true)
        }
        FOFormula::Forall(v, a) | FOFormula::Exists(v, a) => {
            let q = if matches!(psi, FOFormula::Forall(..)) { "forall" } else { "exists" };
            if operand {
                write!(f, "(")?;
            }
            write!(f, "{q} {v}. ")?;
            write_fo(a, f, false)?;
            if operand {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    LParen,
    RParen,
    Comma,
    Dot,
    Equals,
    And,
    Or,
    Arrow,
    Not,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let tok = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut name = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((
                    i,
                    match name.as_str() {
                        "forall" => Tok::Forall,
                        "exists" => Tok::Exists,
                        _ => Tok::Ident(name),
                    },
                ));
                continue;
            }
            '-' => {
                chars.next();
                match chars.next() {
                    Some((_, '>')) => {
                        out.push((i, Tok::Arrow));
                        continue;
                    }
                    _ => return Err(Error::syntax(i, "expected `->`")),
                }
            }
            '∀' => Tok::Forall,
            '∃' => Tok::Exists,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '=' => Tok::Equals,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '→' => Tok::Arrow,
            '~' | '!' | '¬' => Tok::Not,
            other => return Err(Error::syntax(i, format!("unexpected character `{other}`"))),
        };
        chars.next();
        out.push((i, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(i, _)| *i)
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::syntax(self.offset(), format!("expected {tok:?}")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(Error::syntax(self.offset(), "expected a name")),
        }
    }

    fn implication(&mut self) -> Result<FOFormula> {
        let left = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            return Ok(FOFormula::implies(left, self.implication()?));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<FOFormula> {
        let mut left = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            left = FOFormula::or(left, self.conjunction()?);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<FOFormula> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            left = FOFormula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<FOFormula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(FOFormula::not(self.unary()?))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let universal = self.peek() == Some(&Tok::Forall);
                self.pos += 1;
                let mut vars = vec![self.ident()?];
                while let Some(Tok::Ident(_)) = self.peek() {
                    vars.push(self.ident()?);
                }
                self.expect(Tok::Dot)?;
                let mut body = self.implication()?;
                for v in vars.iter().rev() {
                    body = if universal {
                        FOFormula::forall(v, body)
                    } else {
                        FOFormula::exists(v, body)
                    };
                }
                Ok(body)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident()?;
                match self.peek() {
                    Some(Tok::LParen) => {
                        self.pos += 1;
                        let x = self.ident()?;
                        self.expect(Tok::Comma)?;
                        let y = self.ident()?;
                        self.expect(Tok::RParen)?;
                        Ok(FOFormula::Rel(name, x, y))
                    }
                    Some(Tok::Equals) => {
                        self.pos += 1;
                        Ok(FOFormula::Eq(name, self.ident()?))
                    }
                    _ => Err(Error::syntax(self.offset(), "expected `(` or `=` after a name")),
                }
            }
            _ => Err(Error::syntax(self.offset(), "expected a formula")),
        }
    }
}

pub fn parse_fo(text: &str) -> Result<FOFormula> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let out = parser.implication()?;
    if parser.pos != parser.toks.len() {
        return Err(Error::syntax(parser.offset(), "trailing input"));
    }
    Ok(out)
}

impl std::str::FromStr for FOFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_fo(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fo(s: &str) -> FOFormula {
        parse_fo(s).unwrap()
    }

    fn frame(n: usize, pairs: &[(usize, usize)]) -> Frame {
        Frame::unimodal(n, "r", pairs.iter().copied()).unwrap()
    }

    #[test]
    fn parses_guarded_form() {
        let sym = fo("forall x y. R(x,y) -> R(y,x)");
        assert_eq!(sym, FOFormula::guarded("R", "x", "y", FOFormula::rel("R", "y", "x")));
        assert!(sym.is_sentence());
        assert_eq!(fo(&sym.to_string()), sym);
    }

    #[test]
    fn membership() {
        assert!(mfp_member(&fo("forall x. R(x,x)")));
        assert!(mfp_member(&fo("forall x y. R(x,y) -> exists z. R(x,z) & R(z,y)")));
        assert!(mfp_member(&fo("forall x y. x=y -> R(x,y)")));
        assert!(!mfp_member(&fo("forall x y. R(x,y) -> ~R(y,x)")));
        assert!(!mfp_member(&fo("forall x y. ~R(x,y) -> R(y,x)")));
        assert!(!mfp_member(&fo("forall x y z. R(x,y) & R(y,z) -> R(x,z)")));
        // guard variables must be the quantified pair in order
        assert!(!mfp_member(&fo("forall x y. R(y,x) -> R(x,y)")));
    }

    #[test]
    fn evaluation() {
        let refl = fo("forall x. R(x,x)");
        assert!(fo_sentence_holds(&frame(2, &[(0, 0), (1, 1)]), &refl).unwrap());
        let sym = fo("forall x y. R(x,y) -> R(y,x)");
        assert!(!fo_sentence_holds(&frame(2, &[(0, 1)]), &sym).unwrap());
        let dense = fo("forall x y. R(x,y) -> exists z. R(x,z) & R(z,y)");
        assert!(fo_sentence_holds(&frame(2, &[(0, 0), (0, 1)]), &dense).unwrap());
        assert!(!fo_sentence_holds(&frame(2, &[(0, 1)]), &dense).unwrap());
    }

    #[test]
    fn evaluation_errors() {
        let f = frame(2, &[]);
        assert_eq!(
            fo_eval(&f, &fo("R(x,y)"), &Assignment::new()),
            Err(Error::UnboundVariable("x".into()))
        );
        assert_eq!(
            fo_sentence_holds(&f, &fo("forall x. S(x,x)")),
            Err(Error::UnknownRelationSymbol("S".into()))
        );
        let a: Assignment = [("x".to_string(), 1), ("y".to_string(), 0)].into_iter().collect();
        assert!(!fo_eval(&f, &fo("x=y | R(x,y)"), &a).unwrap());
    }

    #[test]
    fn free_variables() {
        let f = fo("exists y. R(x,y) & y=z");
        assert_eq!(f.free_variables(), ["x", "z"].iter().map(|s| s.to_string()).collect());
        assert_eq!(f.bound_variables().len(), 1);
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "R(x)", "forall . R(x,x)", "x = ", "R(x,y) &", "R(x,y))"] {
            assert!(parse_fo(bad).is_err(), "{bad}");
        }
    }
}
