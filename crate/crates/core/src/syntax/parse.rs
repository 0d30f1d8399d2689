//! Recursive-descent parser for the formula and index-term grammar.
//!
//! ```text
//! formula := disj ('->' formula)?
//! disj    := conj ('|' conj)*
//! conj    := unary ('&' unary)*
//! unary   := '~' unary | '[' index ']' unary | '<' index '>' unary | '#' unary | atom
//! atom    := 'bot' | 'top' | ident | '(' formula ')'
//! index   := seq ('|' seq)*
//! seq     := post (';' post)*
//! post    := prim '+'*
//! prim    := ident | '(' index ')'
//! ```

use std::collections::BTreeSet;

use super::formula::{Formula, IndexTerm};
use crate::error::{Error, Result};

/// The index alphabet a formula is parsed against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    atoms: Option<BTreeSet<String>>,
}

impl Signature {
    pub fn new<I, S>(atoms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Signature {
            atoms: Some(atoms.into_iter().map(Into::into).collect()),
        }
    }

    pub fn unimodal(atom: impl Into<String>) -> Self {
        Signature::new([atom.into()])
    }

    /// Accepts every index symbol; `#` abbreviates `[r+]`.
    pub fn open() -> Self {
        Signature { atoms: None }
    }

    pub fn contains(&self, atom: &str) -> bool {
        self.atoms.as_ref().is_none_or(|a| a.contains(atom))
    }

    pub fn atoms(&self) -> Option<&BTreeSet<String>> {
        self.atoms.as_ref()
    }

    fn plus_sugar_atom(&self) -> Option<String> {
        match &self.atoms {
            None => Some("r".to_string()),
            Some(atoms) if atoms.len() == 1 => atoms.iter().next().cloned(),
            Some(_) => None,
        }
    }
}

impl Default for Signature {
    fn default() -> Self {
        Signature::open()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    LParen,
    RParen,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Semi,
    Plus,
    Hash,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::LBracket => "`[`".into(),
        Tok::RBracket => "`]`".into(),
        Tok::LAngle => "`<`".into(),
        Tok::RAngle => "`>`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Tilde => "`~`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Pipe => "`|`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Hash => "`#`".into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '<' => Tok::LAngle,
            '>' => Tok::RAngle,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '~' => Tok::Tilde,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '#' => Tok::Hash,
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    out.push((start, Tok::Arrow));
                    continue;
                }
                return Err(Error::syntax(start, "expected `->`"));
            }
            'a'..='z' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                out.push((start, Tok::Ident(text[i..j].to_string())));
                i = j;
                continue;
            }
            other => {
                return Err(Error::syntax(start, format!("unexpected character `{other}`")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    signature: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", describe(tok))))
        }
    }

    fn unexpected(&self, context: &str) -> Error {
        match self.peek() {
            Some(t) => Error::syntax(self.offset(), format!("{context}, found {}", describe(t))),
            None => Error::syntax(self.offset(), format!("{context}, found end of input")),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let right = self.formula()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Pipe) {
            let right = self.conjunction()?;
            acc = Formula::or(acc, right);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Amp) {
            let right = self.unary()?;
            acc = Formula::and(acc, right);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                let index = self.index()?;
                self.expect(&Tok::RBracket)?;
                Ok(Formula::boxed(index, self.unary()?))
            }
            Some(Tok::LAngle) => {
                self.pos += 1;
                let index = self.index()?;
                self.expect(&Tok::RAngle)?;
                Ok(Formula::diamond(index, self.unary()?))
            }
            Some(Tok::Hash) => {
                let at = self.offset();
                self.pos += 1;
                let atom = self.signature.plus_sugar_atom().ok_or_else(|| {
                    Error::syntax(at, "`#` is only available over a unimodal signature")
                })?;
                Ok(Formula::boxed(IndexTerm::plus(IndexTerm::Atom(atom)), self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(match name.as_str() {
                    "bot" => Formula::Bot,
                    "top" => Formula::top(),
                    _ => Formula::Var(name),
                })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected("expected a formula")),
        }
    }

    fn index(&mut self) -> Result<IndexTerm> {
        let mut acc = self.index_seq()?;
        while self.eat(&Tok::Pipe) {
            let right = self.index_seq()?;
            acc = IndexTerm::union(acc, right);
        }
        Ok(acc)
    }

    fn index_seq(&mut self) -> Result<IndexTerm> {
        let mut acc = self.index_post()?;
        while self.eat(&Tok::Semi) {
            let right = self.index_post()?;
            acc = IndexTerm::comp(acc, right);
        }
        Ok(acc)
    }

    fn index_post(&mut self) -> Result<IndexTerm> {
        let mut acc = self.index_prim()?;
        while self.eat(&Tok::Plus) {
            acc = IndexTerm::plus(acc);
        }
        Ok(acc)
    }

    fn index_prim(&mut self) -> Result<IndexTerm> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                if name == "bot" || name == "top" {
                    return Err(self.unexpected("expected an index symbol"));
                }
                if !self.signature.contains(&name) {
                    return Err(Error::UnknownIndex(name));
                }
                self.pos += 1;
                Ok(IndexTerm::Atom(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.index()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected("expected an index term")),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.unexpected("expected end of input"))
        }
    }
}

pub fn parse_formula(text: &str, signature: &Signature) -> Result<Formula> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.len(),
        signature,
    };
    let f = parser.formula()?;
    parser.finish()?;
    Ok(f)
}

pub fn parse_index(text: &str, signature: &Signature) -> Result<IndexTerm> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.len(),
        signature,
    };
    let t = parser.index()?;
    parser.finish()?;
    Ok(t)
}
