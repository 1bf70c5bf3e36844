//! Recursive-descent parser producing the unique AST for an input string.

use super::lexer::{tokenize, Token, TokenKind};
use super::{Atom, AtomRel, Formula, Term};

/// Classification of a parse failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Tokenization failed.
    Lexical,
    /// Token stream does not match the grammar.
    Syntax,
    /// Grammatically placed but ill-sorted construct, e.g. `{X}` with a set
    /// variable inside singleton braces.
    Sort,
}

/// A parse failure with its 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (u32, u32),
}

type PResult<T> = Result<T, ParseError>;

fn is_set_var(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

impl Parser {
    fn peek(&self) -> Option<&TokenKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn pos_of_next(&self) -> (u32, u32) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, kind: ParseErrorKind, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.pos_of_next();
        ParseError { kind, line, col, msg: msg.into() }
    }

    fn expect(&mut self, want: TokenKind) -> PResult<()> {
        match self.peek() {
            Some(k) if *k == want => {
                self.bump();
                Ok(())
            }
            Some(k) => Err(self.err(ParseErrorKind::Syntax, format!("expected {want}, found {k}"))),
            None => Err(self.err(ParseErrorKind::Syntax, format!("expected {want}, found end of input"))),
        }
    }

    // term := prod ('+' prod)*
    fn term(&mut self) -> PResult<Term> {
        let mut acc = self.prod()?;
        while self.peek() == Some(&TokenKind::Plus) {
            self.bump();
            let rhs = self.prod()?;
            acc = Term::union(acc, rhs);
        }
        Ok(acc)
    }

    // prod := factor (('&' | '\') factor)*
    fn prod(&mut self) -> PResult<Term> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(TokenKind::Amp) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = Term::inter(acc, rhs);
                }
                Some(TokenKind::Backslash) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = Term::diff(acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    // factor := '0' | '{' ind '}' | 'c' '(' term ')' | SetVar | '(' term ')'
    fn factor(&mut self) -> PResult<Term> {
        match self.peek() {
            Some(TokenKind::Zero) => {
                self.bump();
                Ok(Term::Empty)
            }
            Some(TokenKind::LBrace) => {
                self.bump();
                let name = match self.peek() {
                    Some(TokenKind::Ident(n)) if !is_set_var(n) => n.clone(),
                    Some(TokenKind::Ident(n)) => {
                        return Err(self.err(
                            ParseErrorKind::Sort,
                            format!("singleton braces take an individual variable, found set variable '{n}'"),
                        ));
                    }
                    _ => {
                        return Err(self.err(
                            ParseErrorKind::Syntax,
                            "expected an individual variable inside '{'",
                        ));
                    }
                };
                self.bump();
                self.expect(TokenKind::RBrace)?;
                Ok(Term::Singleton(name))
            }
            Some(TokenKind::KwChoice) => {
                self.bump();
                self.expect(TokenKind::LParen)?;
                let t = self.term()?;
                self.expect(TokenKind::RParen)?;
                Ok(Term::choice(t))
            }
            Some(TokenKind::Ident(n)) if is_set_var(n) => {
                let n = n.clone();
                self.bump();
                Ok(Term::Var(n))
            }
            Some(TokenKind::Ident(n)) => Err(self.err(
                ParseErrorKind::Sort,
                format!("individual variable '{n}' must appear as '{{{n}}}' inside a term"),
            )),
            Some(TokenKind::LParen) => {
                self.bump();
                let t = self.term()?;
                self.expect(TokenKind::RParen)?;
                Ok(t)
            }
            Some(k) => Err(self.err(ParseErrorKind::Syntax, format!("expected a term, found {k}"))),
            None => Err(self.err(ParseErrorKind::Syntax, "expected a term, found end of input")),
        }
    }

    // One side of an atom: either a bare individual variable (implicitly a
    // singleton) or a term. Returns the term and whether it was bare.
    fn atom_side(&mut self) -> PResult<(Term, bool)> {
        if let Some(TokenKind::Ident(n)) = self.peek() {
            if !is_set_var(n) {
                let n = n.clone();
                self.bump();
                return Ok((Term::Singleton(n), true));
            }
        }
        Ok((self.term()?, false))
    }

    // atom := side ('=' | '<=' | '!=' | '!<=' | 'in') side
    fn atom(&mut self) -> PResult<Formula> {
        let (lhs, lhs_bare) = self.atom_side()?;
        let (rel, negated, is_in) = match self.peek() {
            Some(TokenKind::Eq) => (AtomRel::Eq, false, false),
            Some(TokenKind::Le) => (AtomRel::Sub, false, false),
            Some(TokenKind::Ne) => (AtomRel::Eq, true, false),
            Some(TokenKind::Nle) => (AtomRel::Sub, true, false),
            Some(TokenKind::KwIn) => (AtomRel::Sub, false, true),
            Some(k) => {
                return Err(self.err(
                    ParseErrorKind::Syntax,
                    format!("expected a relation ('=', '<=', '!=', '!<=', 'in'), found {k}"),
                ));
            }
            None => {
                return Err(self.err(
                    ParseErrorKind::Syntax,
                    "expected a relation ('=', '<=', '!=', '!<=', 'in'), found end of input",
                ));
            }
        };
        if is_in && !lhs_bare {
            return Err(self.err(
                ParseErrorKind::Sort,
                "left side of 'in' must be an individual variable",
            ));
        }
        self.bump();
        let (rhs, _) = self.atom_side()?;
        let atom = Formula::Atom(Atom { rel, lhs, rhs });
        Ok(if negated { Formula::not(atom) } else { atom })
    }

    // primary := 'not' primary | '(' formula ')' | atom
    //
    // A '(' may open either a parenthesized formula or a parenthesized term
    // at the start of an atom; we try the formula reading first and fall back.
    fn primary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Some(TokenKind::KwNot) => {
                self.bump();
                Ok(Formula::not(self.primary()?))
            }
            Some(TokenKind::LParen) => {
                let save = self.pos;
                self.bump();
                match self.formula() {
                    Ok(f) if self.peek() == Some(&TokenKind::RParen) => {
                        self.bump();
                        Ok(f)
                    }
                    _ => {
                        self.pos = save;
                        self.atom()
                    }
                }
            }
            _ => self.atom(),
        }
    }

    // conj := primary ('and' primary)*
    fn conj(&mut self) -> PResult<Formula> {
        let mut acc = self.primary()?;
        while self.peek() == Some(&TokenKind::KwAnd) {
            self.bump();
            let rhs = self.primary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    // disj := conj ('or' conj)*
    fn disj(&mut self) -> PResult<Formula> {
        let mut acc = self.conj()?;
        while self.peek() == Some(&TokenKind::KwOr) {
            self.bump();
            let rhs = self.conj()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    // imp := disj ('->' imp)?   (right-associative)
    fn imp(&mut self) -> PResult<Formula> {
        let lhs = self.disj()?;
        if self.peek() == Some(&TokenKind::Arrow) {
            self.bump();
            let rhs = self.imp()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    // formula := imp ('<->' formula)?   (right-associative)
    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.imp()?;
        if self.peek() == Some(&TokenKind::Iff) {
            self.bump();
            let rhs = self.formula()?;
            Ok(Formula::iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }
}

fn new_parser(src: &str) -> PResult<Parser> {
    let toks = tokenize(src).map_err(|e| ParseError {
        kind: ParseErrorKind::Lexical,
        line: e.line,
        col: e.col,
        msg: e.msg,
    })?;
    let end = toks.last().map_or((1, 1), |t| (t.line, t.col + 1));
    Ok(Parser { toks, pos: 0, end })
}

/// Parses a formula. Whitespace-insensitive; `#` comments run to end of line.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = new_parser(src)?;
    let f = p.formula()?;
    if let Some(k) = p.peek() {
        return Err(p.err(ParseErrorKind::Syntax, format!("unexpected {k} after formula")));
    }
    Ok(f)
}

/// Parses a single term, e.g. for tooling. Same lexical rules as formulas.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = new_parser(src)?;
    let t = p.term()?;
    if let Some(k) = p.peek() {
        return Err(p.err(ParseErrorKind::Syntax, format!("unexpected {k} after term")));
    }
    Ok(t)
}
