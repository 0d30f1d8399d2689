use std::collections::BTreeSet;
use std::fmt;

/// A modal index: an atomic program symbol or a composite built with
/// composition, union and transitive closure.
///
/// Terms are purely structural; `r|r` and `r` are distinct terms even though
/// they always denote the same relation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexTerm {
    Atom(String),
    Comp(Box<IndexTerm>, Box<IndexTerm>),
    Union(Box<IndexTerm>, Box<IndexTerm>),
    Plus(Box<IndexTerm>),
}

impl IndexTerm {
    pub fn atom(name: impl Into<String>) -> Self {
        IndexTerm::Atom(name.into())
    }

    pub fn comp(left: IndexTerm, right: IndexTerm) -> Self {
        IndexTerm::Comp(Box::new(left), Box::new(right))
    }

    pub fn union(left: IndexTerm, right: IndexTerm) -> Self {
        IndexTerm::Union(Box::new(left), Box::new(right))
    }

    pub fn plus(inner: IndexTerm) -> Self {
        IndexTerm::Plus(Box::new(inner))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, IndexTerm::Atom(_))
    }

    /// Atomic symbols occurring in the term.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            IndexTerm::Atom(a) => {
                out.insert(a.clone());
            }
            IndexTerm::Comp(l, r) | IndexTerm::Union(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
            IndexTerm::Plus(inner) => inner.collect_atoms(out),
        }
    }

    /// Number of nested program constructors, i.e. the ♯-level at which the
    /// term first appears when its atoms form the base alphabet.
    pub fn level(&self) -> usize {
        match self {
            IndexTerm::Atom(_) => 0,
            IndexTerm::Comp(l, r) | IndexTerm::Union(l, r) => 1 + l.level().max(r.level()),
            IndexTerm::Plus(inner) => 1 + inner.level(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            IndexTerm::Union(..) => 1,
            IndexTerm::Comp(..) => 2,
            IndexTerm::Plus(..) => 3,
            IndexTerm::Atom(..) => 4,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let own = self.precedence();
        if own < min {
            write!(f, "(")?;
        }
        match self {
            IndexTerm::Atom(a) => write!(f, "{a}")?,
            IndexTerm::Union(l, r) => {
                l.fmt_at(f, 1)?;
                write!(f, "|")?;
                r.fmt_at(f, 2)?;
            }
            IndexTerm::Comp(l, r) => {
                l.fmt_at(f, 2)?;
                write!(f, ";")?;
                r.fmt_at(f, 3)?;
            }
            IndexTerm::Plus(inner) => {
                inner.fmt_at(f, 3)?;
                write!(f, "+")?;
            }
        }
        if own < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for IndexTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// Core modal formula AST. Negation, conjunction, disjunction, `top` and
/// diamonds are abbreviations and never appear as nodes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Bot,
    Var(String),
    Implies(Box<Formula>, Box<Formula>),
    Box(IndexTerm, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Formula::Implies(Box::new(left), Box::new(right))
    }

    pub fn boxed(index: IndexTerm, body: Formula) -> Self {
        Formula::Box(index, Box::new(body))
    }

    /// `¬A := A → ⊥`
    pub fn not(body: Formula) -> Self {
        Formula::implies(body, Formula::Bot)
    }

    /// `⊤ := ⊥ → ⊥`
    pub fn top() -> Self {
        Formula::implies(Formula::Bot, Formula::Bot)
    }

    /// `A ∧ B := ¬(A → ¬B)`
    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::not(Formula::implies(left, Formula::not(right)))
    }

    /// `A ∨ B := ¬A → B`
    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::implies(Formula::not(left), right)
    }

    /// `A ↔ B := (A → B) ∧ (B → A)`
    pub fn iff(left: Formula, right: Formula) -> Self {
        Formula::and(
            Formula::implies(left.clone(), right.clone()),
            Formula::implies(right, left),
        )
    }

    /// `⟨e⟩A := ¬[e]¬A`
    pub fn diamond(index: IndexTerm, body: Formula) -> Self {
        Formula::not(Formula::boxed(index, Formula::not(body)))
    }

    /// Conjunction of a list; `⊤` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        let mut iter = parts.into_iter();
        match iter.next() {
            None => Formula::top(),
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    /// Disjunction of a list; `⊥` when empty.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        let mut iter = parts.into_iter();
        match iter.next() {
            None => Formula::Bot,
            Some(first) => iter.fold(first, Formula::or),
        }
    }

    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Implies(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Var(v) = f {
                out.insert(v.clone());
            }
        });
        out
    }

    /// Index terms of all box occurrences.
    pub fn indices(&self) -> BTreeSet<IndexTerm> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Box(t, _) = f {
                out.insert(t.clone());
            }
        });
        out
    }

    /// Pre-order traversal over all subformula occurrences.
    pub fn walk(&self, visit: &mut impl FnMut(&Formula)) {
        visit(self);
        match self {
            Formula::Bot | Formula::Var(_) => {}
            Formula::Implies(l, r) => {
                l.walk(visit);
                r.walk(visit);
            }
            Formula::Box(_, body) => body.walk(visit),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Bot | Formula::Var(_) => 0,
            Formula::Implies(l, r) => l.modal_depth().max(r.modal_depth()),
            Formula::Box(_, body) => 1 + body.modal_depth(),
        }
    }
}

// Printing re-sugars the abbreviation patterns so that parsing the output
// yields the same core AST.

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

enum Sugar<'a> {
    Top,
    And(&'a Formula, &'a Formula),
    Diamond(&'a IndexTerm, &'a Formula),
    Not(&'a Formula),
    Or(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
    Box(&'a IndexTerm, &'a Formula),
    Atom(&'a Formula),
}

fn negated(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Implies(l, r) if **r == Formula::Bot => Some(l),
        _ => None,
    }
}

fn sugar(f: &Formula) -> Sugar<'_> {
    match f {
        Formula::Bot | Formula::Var(_) => Sugar::Atom(f),
        Formula::Box(t, body) => Sugar::Box(t, body),
        Formula::Implies(l, r) => {
            if **l == Formula::Bot && **r == Formula::Bot {
                return Sugar::Top;
            }
            if let Some(inner) = negated(f) {
                if let Formula::Implies(a, nb) = inner {
                    if let Some(b) = negated(nb) {
                        return Sugar::And(a, b);
                    }
                }
                if let Formula::Box(t, nb) = inner {
                    if let Some(b) = negated(nb) {
                        return Sugar::Diamond(t, b);
                    }
                }
                return Sugar::Not(inner);
            }
            if let Some(a) = negated(l) {
                return Sugar::Or(a, r);
            }
            Sugar::Implies(l, r)
        }
    }
}

fn precedence(f: &Formula) -> u8 {
    match sugar(f) {
        Sugar::Implies(..) => PREC_IMP,
        Sugar::Or(..) => PREC_OR,
        Sugar::And(..) => PREC_AND,
        _ => PREC_UNARY,
    }
}

fn fmt_formula(f: &Formula, out: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
    let own = precedence(f);
    if own < min {
        write!(out, "(")?;
    }
    match sugar(f) {
        Sugar::Top => write!(out, "top")?,
        Sugar::Atom(Formula::Bot) => write!(out, "bot")?,
        Sugar::Atom(Formula::Var(v)) => write!(out, "{v}")?,
        Sugar::Atom(_) => unreachable!(),
        Sugar::Not(a) => {
            write!(out, "~")?;
            fmt_formula(a, out, PREC_UNARY)?;
        }
        Sugar::Box(t, a) => {
            write!(out, "[{t}]")?;
            fmt_formula(a, out, PREC_UNARY)?;
        }
        Sugar::Diamond(t, a) => {
            write!(out, "<{t}>")?;
            fmt_formula(a, out, PREC_UNARY)?;
        }
        Sugar::And(a, b) => {
            fmt_formula(a, out, PREC_AND)?;
            write!(out, " & ")?;
            fmt_formula(b, out, PREC_AND + 1)?;
        }
        Sugar::Or(a, b) => {
            fmt_formula(a, out, PREC_OR)?;
            write!(out, " | ")?;
            fmt_formula(b, out, PREC_OR + 1)?;
        }
        Sugar::Implies(a, b) => {
            fmt_formula(a, out, PREC_IMP + 1)?;
            write!(out, " -> ")?;
            fmt_formula(b, out, PREC_IMP)?;
        }
    }
    if own < min {
        write!(out, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, f, 0)
    }
}
