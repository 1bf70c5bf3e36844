//! Abstract syntax, parser and printer for the input language.
//!
//! The language talks about sets built from set variables (uppercase-initial
//! identifiers), individual variables (lowercase-initial identifiers, always
//! wrapped as singletons `{x}`), the empty set `0`, the operators `+` (union),
//! `&` (intersection), `\` (difference), and the choice symbol `c(T)`.
//! Atoms are `=` and `<=` (inclusion); `x in T`, `!=` and `!<=` are sugar.
//! Connectives are `not`, `and`, `or`, `->`, `<->` in decreasing binding
//! strength; `->` and `<->` associate to the right, `and`/`or` to the left.
//!
//! `in`, `not`, `and`, `or` and the choice symbol `c` are reserved words.
//! Identifiers starting with `_` are reserved for internally generated
//! variables and rejected by the parser.

mod lexer;
mod parser;

pub use lexer::{LexError, Token, TokenKind};
pub use parser::{parse_formula, parse_term, ParseError, ParseErrorKind};

use std::fmt;

/// A set-valued term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// The empty set, written `0`.
    Empty,
    /// A set variable.
    Var(String),
    /// `{x}` for an individual variable `x`.
    Singleton(String),
    Union(Box<Term>, Box<Term>),
    Inter(Box<Term>, Box<Term>),
    Diff(Box<Term>, Box<Term>),
    /// `c(T)`: the choice applied to a term.
    Choice(Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn singleton(name: impl Into<String>) -> Term {
        Term::Singleton(name.into())
    }

    pub fn union(a: Term, b: Term) -> Term {
        Term::Union(Box::new(a), Box::new(b))
    }

    pub fn inter(a: Term, b: Term) -> Term {
        Term::Inter(Box::new(a), Box::new(b))
    }

    pub fn diff(a: Term, b: Term) -> Term {
        Term::Diff(Box::new(a), Box::new(b))
    }

    pub fn choice(a: Term) -> Term {
        Term::Choice(Box::new(a))
    }

    /// True if no `c(..)` occurs anywhere in the term.
    pub fn is_choice_free(&self) -> bool {
        match self {
            Term::Empty | Term::Var(_) | Term::Singleton(_) => true,
            Term::Union(a, b) | Term::Inter(a, b) | Term::Diff(a, b) => {
                a.is_choice_free() && b.is_choice_free()
            }
            Term::Choice(_) => false,
        }
    }

    /// Visits all subterms, children before parents, left to right.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        match self {
            Term::Empty | Term::Var(_) | Term::Singleton(_) => {}
            Term::Union(a, b) | Term::Inter(a, b) | Term::Diff(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Term::Choice(a) => a.walk(f),
        }
        f(self);
    }
}

/// Relation symbol of an atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomRel {
    /// `=`
    Eq,
    /// `<=`
    Sub,
}

/// An atomic formula `lhs = rhs` or `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub rel: AtomRel,
    pub lhs: Term,
    pub rhs: Term,
}

impl Atom {
    pub fn eq(lhs: Term, rhs: Term) -> Atom {
        Atom { rel: AtomRel::Eq, lhs, rhs }
    }

    pub fn sub(lhs: Term, rhs: Term) -> Atom {
        Atom { rel: AtomRel::Sub, lhs, rhs }
    }

    /// Equality atom with operands ordered so the side that prints
    /// lexicographically smaller comes first. Keeps syntactically-symmetric
    /// equalities identical wherever the normalizer emits them.
    pub fn eq_normalized(lhs: Term, rhs: Term) -> Atom {
        if render_term(&rhs) < render_term(&lhs) {
            Atom::eq(rhs, lhs)
        } else {
            Atom::eq(lhs, rhs)
        }
    }
}

/// A formula of the language.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    // Constructor in the same family as `and`/`or`, not an operator impl.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Conjunction of a nonempty list, left-associated.
    pub fn conjoin(mut parts: Vec<Formula>) -> Formula {
        let mut acc = parts.remove(0);
        for p in parts {
            acc = Formula::and(acc, p);
        }
        acc
    }

    /// Top-level conjuncts, flattening nested `and`s left to right.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            if let Formula::And(a, b) = f {
                go(a, out);
                go(b, out);
            } else {
                out.push(f);
            }
        }
        go(self, &mut out);
        out
    }

    /// Visits every atom, left to right.
    pub fn walk_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Not(x) => x.walk_atoms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.walk_atoms(f);
                b.walk_atoms(f);
            }
        }
    }

    /// Rewrites every atom with `f`, preserving boolean structure.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Atom) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::Not(x) => Formula::not(x.map_atoms(f)),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Imp(a, b) => Formula::imp(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
        }
    }
}

// Binding levels for printing. Higher binds tighter.
const TERM_SUM: u8 = 0;
const TERM_PROD: u8 = 1;
const TERM_ATOM: u8 = 2;

fn fmt_term(t: &Term, level: u8, out: &mut String) {
    let my = match t {
        Term::Union(..) => TERM_SUM,
        Term::Inter(..) | Term::Diff(..) => TERM_PROD,
        _ => TERM_ATOM,
    };
    let parens = my < level;
    if parens {
        out.push('(');
    }
    match t {
        Term::Empty => out.push('0'),
        Term::Var(v) => out.push_str(v),
        Term::Singleton(x) => {
            out.push('{');
            out.push_str(x);
            out.push('}');
        }
        Term::Union(a, b) => {
            fmt_term(a, TERM_SUM, out);
            out.push_str(" + ");
            fmt_term(b, TERM_PROD, out);
        }
        Term::Inter(a, b) => {
            fmt_term(a, TERM_PROD, out);
            out.push_str(" & ");
            fmt_term(b, TERM_ATOM, out);
        }
        Term::Diff(a, b) => {
            fmt_term(a, TERM_PROD, out);
            out.push_str(" \\ ");
            fmt_term(b, TERM_ATOM, out);
        }
        Term::Choice(a) => {
            out.push_str("c(");
            fmt_term(a, TERM_SUM, out);
            out.push(')');
        }
    }
    if parens {
        out.push(')');
    }
}

fn fmt_atom(a: &Atom, negated: bool, out: &mut String) {
    fmt_term(&a.lhs, TERM_SUM, out);
    out.push_str(match (a.rel, negated) {
        (AtomRel::Eq, false) => " = ",
        (AtomRel::Eq, true) => " != ",
        (AtomRel::Sub, false) => " <= ",
        (AtomRel::Sub, true) => " !<= ",
    });
    fmt_term(&a.rhs, TERM_SUM, out);
}

const F_IFF: u8 = 0;
const F_IMP: u8 = 1;
const F_OR: u8 = 2;
const F_AND: u8 = 3;
const F_NOT: u8 = 4;
const F_ATOM: u8 = 5;

fn fmt_formula(f: &Formula, level: u8, out: &mut String) {
    let my = match f {
        Formula::Atom(_) => F_ATOM,
        // A negated atom prints as `!=` / `!<=`, which sits at atom level.
        Formula::Not(inner) => {
            if matches!(**inner, Formula::Atom(_)) {
                F_ATOM
            } else {
                F_NOT
            }
        }
        Formula::And(..) => F_AND,
        Formula::Or(..) => F_OR,
        Formula::Imp(..) => F_IMP,
        Formula::Iff(..) => F_IFF,
    };
    let parens = my < level;
    if parens {
        out.push('(');
    }
    match f {
        Formula::Atom(a) => fmt_atom(a, false, out),
        Formula::Not(inner) => {
            if let Formula::Atom(a) = &**inner {
                fmt_atom(a, true, out);
            } else {
                out.push_str("not ");
                fmt_formula(inner, F_NOT, out);
            }
        }
        Formula::And(a, b) => {
            fmt_formula(a, F_AND, out);
            out.push_str(" and ");
            fmt_formula(b, F_NOT, out);
        }
        Formula::Or(a, b) => {
            fmt_formula(a, F_OR, out);
            out.push_str(" or ");
            fmt_formula(b, F_AND, out);
        }
        Formula::Imp(a, b) => {
            fmt_formula(a, F_OR, out);
            out.push_str(" -> ");
            fmt_formula(b, F_IMP, out);
        }
        Formula::Iff(a, b) => {
            fmt_formula(a, F_IMP, out);
            out.push_str(" <-> ");
            fmt_formula(b, F_IFF, out);
        }
    }
    if parens {
        out.push(')');
    }
}

/// Renders a term in the concrete syntax with minimal parentheses.
pub fn render_term(t: &Term) -> String {
    let mut s = String::new();
    fmt_term(t, TERM_SUM, &mut s);
    s
}

/// Renders a formula in the canonical concrete syntax.
///
/// Negated atoms print as `!=` / `!<=`; all other sugar is expanded, so
/// `x in X` prints as `{x} <= X`. `parse_formula(render_formula(f)) == f`
/// for every formula whose variable names are legal in the concrete syntax.
pub fn render_formula(f: &Formula) -> String {
    let mut s = String::new();
    fmt_formula(f, F_IFF, &mut s);
    s
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_x() -> Term {
        Term::singleton("x")
    }

    #[test]
    fn render_minimal_parens() {
        let t = Term::union(Term::inter(Term::var("X"), Term::var("Y")), Term::var("Z"));
        assert_eq!(render_term(&t), "X & Y + Z");
        let t = Term::inter(Term::var("X"), Term::union(Term::var("Y"), Term::var("Z")));
        assert_eq!(render_term(&t), "X & (Y + Z)");
        let t = Term::diff(Term::diff(Term::var("X"), Term::var("Y")), Term::var("Z"));
        assert_eq!(render_term(&t), "X \\ Y \\ Z");
        let t = Term::diff(Term::var("X"), Term::diff(Term::var("Y"), Term::var("Z")));
        assert_eq!(render_term(&t), "X \\ (Y \\ Z)");
    }

    #[test]
    fn render_negated_atoms_as_sugar() {
        let f = Formula::not(Formula::atom(Atom::eq(t_x(), Term::singleton("y"))));
        assert_eq!(render_formula(&f), "{x} != {y}");
        let f = Formula::not(Formula::not(Formula::atom(Atom::sub(t_x(), Term::var("X")))));
        assert_eq!(render_formula(&f), "not {x} !<= X");
    }

    #[test]
    fn eq_normalized_orders_operands() {
        let a = Atom::eq_normalized(Term::var("Y"), Term::var("X"));
        assert_eq!(a, Atom::eq(Term::var("X"), Term::var("Y")));
        let b = Atom::eq_normalized(Term::var("X"), Term::var("Y"));
        assert_eq!(a, b);
    }

    #[test]
    fn conjuncts_flatten() {
        let f = Formula::and(
            Formula::and(
                Formula::atom(Atom::eq(Term::var("X"), Term::Empty)),
                Formula::atom(Atom::eq(Term::var("Y"), Term::Empty)),
            ),
            Formula::atom(Atom::eq(Term::var("Z"), Term::Empty)),
        );
        assert_eq!(f.conjuncts().len(), 3);
    }
}
